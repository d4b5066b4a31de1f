//! Command-line interface: argument parsing and the subcommands.

use std::io::Write;

use arcspace_core::characters::{character_from_gamma, CharacterSeries};
use arcspace_core::cubedata::lift_along;
use arcspace_core::lattice::{default_normality_bound, is_normal, ZetaFunction};
use arcspace_core::relations::pushforward;
use arcspace_core::toricring::{toric_ideal_generators, ToricContext};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog;
use crate::io::{
    load_catalog, load_polytope, CharacterFile, CubeDataFile, PolytopeFile, RelationEntry, Subject,
};
use crate::verify::{self, VerifyOptions, MAX_DEGREE, MAX_LEVEL};

/// Exit code for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verification finds a mismatch.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit code for usage and parse errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "arcspace",
    version,
    about = "Reduced arc rings of projective toric varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Latex,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog key, e.g. `segment:2`, `square`, `simplex:2,2`, `hirzebruch:1,2`.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Polytope JSON file.
    #[arg(long)]
    pub polytope: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, lattice points, normality and the exponent table.
    Info {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Closed-form graded character of the level-L components.
    Character {
        #[command(flatten)]
        source: Source,
        #[arg(long = "L", default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 6)]
        trunc: u32,
        /// Print the character times (q)_L per weight.
        #[arg(long)]
        factor: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compare rank oracles with the closed formulas.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long = "L", default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 4)]
        dmax: u32,
        #[arg(long, default_value_t = 8)]
        trunc: u32,
        /// Seed for the sampled dual-space checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace an exponent: `i,j,value` (repeatable).
        #[arg(long = "gamma-override", value_parser = parse_override)]
        gamma_override: Vec<(usize, usize, u32)>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Toric binomials or arc-level relation series.
    Relations {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with = "arc", required_unless_present = "arc")]
        finite: bool,
        #[arg(long)]
        arc: bool,
        /// Degree cap for binomial generators.
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Lift catalog data along a profile and print the new data as JSON.
    Construct {
        #[arg(long)]
        catalog: String,
        /// Profile values, one per lattice point in the polytope's order.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        zeta: Vec<i64>,
        /// Coordinate the profile depends on.
        #[arg(long, default_value_t = 0)]
        coord: usize,
    },
}

fn parse_override(s: &str) -> Result<(usize, usize, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [i, j, v] = parts.as_slice() else {
        return Err(format!("expected i,j,value, got `{s}`"));
    };
    let n = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    Ok((n(i)? as usize, n(j)? as usize, n(v)?))
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn load(source: &Source) -> Result<Subject, Failure> {
    match (&source.catalog, &source.polytope) {
        (Some(name), _) => load_catalog(name).map_err(usage),
        (None, Some(path)) => load_polytope(path).map_err(usage),
        (None, None) => Err(usage("one of --catalog or --polytope is required")),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn gamma_table(gamma: &[Vec<u32>]) -> String {
    let mut s = String::new();
    for row in gamma {
        let cells: Vec<String> = row.iter().map(|g| format!("{g:>3}")).collect();
        s.push_str(&cells.join(""));
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct InfoJson<'a> {
    name: &'a str,
    dim: usize,
    points: Vec<Vec<i64>>,
    normal: bool,
    order: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<&'a Vec<Vec<u32>>>,
}

fn cmd_info(subject: &Subject, format: Format) -> Result<String, Failure> {
    let p = &subject.polytope;
    let normal = is_normal(p, default_normality_bound(p));
    if format == Format::Json {
        return Ok(json(&InfoJson {
            name: &subject.name,
            dim: p.dim(),
            points: p.points().iter().map(|q| q.coords().to_vec()).collect(),
            normal,
            order: p.order().tag(),
            gamma: subject.gamma.as_ref(),
        }));
    }
    let mut s = format!("name: {}\ndim: {}\n", subject.name, p.dim());
    let pts: Vec<String> = p.points().iter().map(|q| q.to_string()).collect();
    s.push_str(&format!("points ({}): {}\n", pts.len(), pts.join(" ")));
    s.push_str(&format!("normal: {}\n", if normal { "yes" } else { "no" }));
    s.push_str(&format!("order: {}\n", p.order().tag()));
    match &subject.gamma {
        Some(g) => {
            s.push_str("gamma:\n");
            s.push_str(&gamma_table(g));
        }
        None => s.push_str("gamma: unknown\n"),
    }
    Ok(s)
}

fn character_of(subject: &Subject, level: u32, trunc: u32) -> Result<CharacterSeries, Failure> {
    let gamma = subject.gamma.as_ref().ok_or_else(|| {
        usage(format!(
            "no exponent data for `{}`: use a catalog entry or add \"gamma\" to the file",
            subject.name
        ))
    })?;
    Ok(character_from_gamma(
        subject.polytope.points(),
        gamma,
        level,
        trunc,
    ))
}

fn cmd_character(
    subject: &Subject,
    level: u32,
    trunc: u32,
    factor: bool,
    format: Format,
) -> Result<String, Failure> {
    if level > MAX_LEVEL || trunc > MAX_DEGREE {
        return Err(usage(format!(
            "caps are L <= {MAX_LEVEL} and trunc <= {MAX_DEGREE}"
        )));
    }
    let chi = character_of(subject, level, trunc)?;
    let mut s = String::new();
    match format {
        Format::Json => s = json(&CharacterFile::from_series(&chi)),
        Format::Latex => {
            for w in chi.weights() {
                s.push_str(&format!("{w:?}: {}\n", chi.latex_factorization(&w)));
            }
        }
        Format::Table => {
            s.push_str("a\td\tcoeff\n");
            for ((a, d), c) in chi.terms() {
                s.push_str(&format!("{a:?}\t{d}\t{c}\n"));
            }
            if factor {
                s.push_str(&format!("times (q)_{level}:\n"));
                for w in chi.weights() {
                    s.push_str(&format!("{w:?}: {}\n", chi.numerator(&w)));
                }
            }
        }
    }
    Ok(s)
}

fn cmd_verify(
    subject: &Subject,
    opts: &VerifyOptions,
    format: Format,
) -> Result<(String, bool), Failure> {
    let report = verify::run(subject, opts).map_err(usage)?;
    if format == Format::Json {
        return Ok((json(&report), report.pass));
    }
    let mut s = format!("subject: {}\n", report.subject);
    for suite in &report.suites {
        if let Some(why) = &suite.skipped {
            s.push_str(&format!("{:<11} SKIPPED ({why})\n", suite.name));
            continue;
        }
        let verdict = if suite.pass() { "PASS" } else { "FAIL" };
        s.push_str(&format!(
            "{:<11} {verdict} ({} checks)\n",
            suite.name,
            suite.rows.len()
        ));
        if suite.name == "oracle" {
            for r in &suite.rows {
                s.push_str(&format!(
                    "  {:<28} oracle {:>4}  formula {:>4}\n",
                    r.key, r.oracle, r.formula
                ));
            }
        }
        if let Some(r) = suite.first_mismatch() {
            s.push_str(&format!(
                "  first mismatch: {} oracle {} formula {}\n",
                r.key, r.oracle, r.formula
            ));
        }
    }
    s.push_str(if report.pass { "PASS\n" } else { "FAIL\n" });
    Ok((s, report.pass))
}

#[derive(Serialize)]
struct BinomialJson {
    plus: Vec<u32>,
    minus: Vec<u32>,
    text: String,
}

fn cmd_relations(
    subject: &Subject,
    arc: bool,
    degree: u32,
    format: Format,
) -> Result<String, Failure> {
    let ctx = ToricContext::new(subject.polytope.clone()).map_err(usage)?;
    if !arc {
        let gens = toric_ideal_generators(&ctx, degree).map_err(usage)?;
        let rows: Vec<BinomialJson> = gens
            .iter()
            .map(|b| BinomialJson {
                plus: b.plus.clone(),
                minus: b.minus.clone(),
                text: b.to_poly().to_string(),
            })
            .collect();
        if format == Format::Json {
            return Ok(json(&rows));
        }
        return Ok(rows.iter().map(|r| format!("{}\n", r.text)).collect());
    }
    let data = subject
        .data
        .as_ref()
        .ok_or_else(|| usage(format!("`{}` has no cube generating data", subject.name)))?;
    let m = data.len();
    let mut entries = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..data.gamma(i, j) {
                let rs = pushforward(data, i, j, k).map_err(usage)?;
                entries.push(RelationEntry::new([i, j], &rs));
            }
        }
    }
    if format == Format::Json {
        return Ok(json(&entries));
    }
    Ok(entries
        .iter()
        .map(|e| format!("({},{}) k={}: {}\n", e.pair[0], e.pair[1], e.k, e.text))
        .collect())
}

fn cmd_construct(name: &str, zeta: &[i64], coord: usize) -> Result<String, Failure> {
    let entry = catalog::entry(name).map_err(usage)?;
    let z = ZetaFunction::new(&entry.polytope, zeta.to_vec()).map_err(usage)?;
    if coord >= entry.polytope.dim() {
        return Err(usage(format!("coordinate {coord} is out of range")));
    }
    let (lifted, data) = lift_along(&entry.data, &entry.polytope, &z, coord).map_err(usage)?;
    #[derive(Serialize)]
    struct Out {
        polytope: PolytopeFile,
        data: CubeDataFile,
    }
    Ok(json(&Out {
        polytope: PolytopeFile::from_polytope(&lifted, Some(data.gamma_matrix())),
        data: CubeDataFile::from_data(&data),
    }))
}

fn dispatch(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Info { source, format } => Ok((cmd_info(&load(&source)?, format)?, EXIT_OK)),
        Command::Character {
            source,
            level,
            trunc,
            factor,
            format,
        } => Ok((
            cmd_character(&load(&source)?, level, trunc, factor, format)?,
            EXIT_OK,
        )),
        Command::Verify {
            source,
            level,
            dmax,
            trunc,
            seed,
            gamma_override,
            format,
        } => {
            let opts = VerifyOptions {
                level,
                dmax,
                trunc,
                seed,
                gamma_override,
                ..VerifyOptions::default()
            };
            let (s, pass) = cmd_verify(&load(&source)?, &opts, format)?;
            Ok((s, if pass { EXIT_OK } else { EXIT_MISMATCH }))
        }
        Command::Relations {
            source,
            arc,
            degree,
            format,
            ..
        } => Ok((
            cmd_relations(&load(&source)?, arc, degree, format)?,
            EXIT_OK,
        )),
        Command::Construct {
            catalog,
            zeta,
            coord,
        } => Ok((cmd_construct(&catalog, &zeta, coord)?, EXIT_OK)),
    }
}

/// Runs a parsed command, writing its output, and returns the exit code.
pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match dispatch(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Parses `args` and runs; parse failures exit with [`EXIT_USAGE`].
pub fn run_args<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            code
        }
    }
}
