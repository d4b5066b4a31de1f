//! Oracle-versus-formula verification runs over the components of a polytope.

use arcspace_core::arcjets::{filtration_dims, reduced_component_dim, ComponentKey};
use arcspace_core::characters::{character_from_gamma, freeness_check, principal_ideal_slice_dims};
use arcspace_core::relations::{pushforward, verify_identically_zero};
use arcspace_core::symfun::dual_subquotient_slice;
use arcspace_core::toricring::{cells, ToricContext};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::io::Subject;

/// Largest level accepted from the command line.
pub const MAX_LEVEL: u32 = 3;
/// Largest q-degree accepted from the command line.
pub const MAX_DEGREE: u32 = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u32,
        cap: u32,
    },
    #[error("no exponent data for `{0}`: use a catalog entry or add \"gamma\" to the file")]
    MissingGamma(String),
    #[error("override ({0}, {1}) is outside the {2} points")]
    BadOverride(usize, usize, usize),
    #[error("toric context: {0}")]
    Context(String),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub level: u32,
    pub dmax: u32,
    pub trunc: u32,
    pub nilpotency_order: u32,
    pub gamma_override: Vec<(usize, usize, u32)>,
    pub seed: u64,
    pub dual_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            level: 2,
            dmax: 4,
            trunc: 8,
            nilpotency_order: 6,
            gamma_override: Vec::new(),
            seed: 0,
            dual_samples: 12,
        }
    }
}

impl VerifyOptions {
    pub fn check_caps(&self) -> Result<(), VerifyError> {
        if self.level > MAX_LEVEL {
            return Err(VerifyError::CapExceeded {
                what: "L",
                value: self.level,
                cap: MAX_LEVEL,
            });
        }
        for (what, value) in [("dmax", self.dmax), ("trunc", self.trunc)] {
            if value > MAX_DEGREE {
                return Err(VerifyError::CapExceeded {
                    what,
                    value,
                    cap: MAX_DEGREE,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub key: String,
    pub oracle: i64,
    pub formula: i64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl Row {
    fn new(key: String, oracle: i64, formula: i64) -> Self {
        Self {
            key,
            oracle,
            formula,
            matches: oracle == formula,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub rows: Vec<Row>,
}

impl SuiteReport {
    fn skipped(name: &'static str, why: &str) -> Self {
        Self {
            name,
            skipped: Some(why.to_string()),
            rows: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn first_mismatch(&self) -> Option<&Row> {
        self.rows.iter().find(|r| !r.matches)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub subject: String,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Cell key, exponent vector, subquotient dim and the vectors before it.
type StepRecord = (String, Vec<u32>, usize, Vec<Vec<u32>>);

fn key(a: &[i64], l: u32, d: u32) -> String {
    format!("a={a:?} L={l} d={d}")
}

fn cell_list(ctx: &ToricContext, max_level: u32) -> Vec<(u32, Vec<i64>)> {
    (1..=max_level)
        .flat_map(|l| cells(ctx, l).into_keys().map(move |a| (l, a)))
        .collect()
}

/// Runs every suite the subject supports and collects rows sorted by key
/// order of the job list.
pub fn run(subject: &Subject, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    opts.check_caps()?;
    let m = subject.polytope.len();
    let mut gamma = subject
        .gamma
        .clone()
        .ok_or_else(|| VerifyError::MissingGamma(subject.name.clone()))?;
    for (i, j, v) in &opts.gamma_override {
        if *i >= m || *j >= m || i == j {
            return Err(VerifyError::BadOverride(*i, *j, m));
        }
        gamma[*i][*j] = *v;
        gamma[*j][*i] = *v;
    }
    let ctx = ToricContext::new(subject.polytope.clone())
        .map_err(|e| VerifyError::Context(e.to_string()))?;
    let jobs = cell_list(&ctx, opts.level);
    let points = subject.polytope.points();

    let oracle_rows: Vec<Row> = jobs
        .par_iter()
        .flat_map_iter(|(l, a)| {
            let chi = character_from_gamma(points, &gamma, *l, opts.dmax);
            let ctx = &ctx;
            (0..=opts.dmax).map(move |d| {
                let dim = reduced_component_dim(ctx, &ComponentKey::new(a.clone(), *l, d));
                Row::new(key(a, *l, d), dim as i64, chi.get(a, d) as i64)
            })
        })
        .collect();
    let mut suites = vec![SuiteReport {
        name: "oracle",
        skipped: None,
        rows: oracle_rows,
    }];

    let freeness_rows: Vec<Row> = jobs
        .par_iter()
        .map(|(l, a)| {
            let chi = character_from_gamma(points, &gamma, *l, opts.trunc);
            let free = freeness_check(&chi, a);
            Row::new(
                format!("a={a:?} L={l} trunc={}", opts.trunc),
                1,
                i64::from(free),
            )
        })
        .collect();
    suites.push(SuiteReport {
        name: "freeness",
        skipped: None,
        rows: freeness_rows,
    });

    let Some(data) = &subject.data else {
        for name in ["filtration", "nilpotency", "dual"] {
            suites.push(SuiteReport::skipped(name, "no cube generating data"));
        }
        let pass = suites.iter().all(SuiteReport::pass);
        return Ok(VerifyReport {
            subject: subject.name.clone(),
            pass,
            suites,
        });
    };

    let order = data.order();
    let cells_by_degree: Vec<(u32, Vec<i64>, u32)> = jobs
        .iter()
        .flat_map(|(l, a)| (0..=opts.dmax).map(move |d| (*l, a.clone(), d)))
        .collect();
    let steps: Vec<Vec<StepRecord>> = cells_by_degree
        .par_iter()
        .map(|(l, a, d)| {
            let steps = filtration_dims(&ctx, a, *l, *d, |x, y| {
                order
                    .compare(x, y)
                    .expect("order arity matches the polytope")
            });
            let mut before = Vec::new();
            let mut out = Vec::with_capacity(steps.len());
            for s in steps {
                out.push((key(a, *l, *d), s.r.clone(), s.subquotient, before.clone()));
                before.push(s.r);
            }
            out
        })
        .collect();
    let filtration_rows = steps
        .iter()
        .zip(&cells_by_degree)
        .flat_map(|(cell, (_, _, d))| {
            let gamma = &gamma;
            cell.iter().map(move |(k, r, sub, _)| {
                Row::new(
                    format!("{k} r={r:?}"),
                    *sub as i64,
                    principal_ideal_slice_dims(r, gamma, *d) as i64,
                )
            })
        })
        .collect();
    suites.push(SuiteReport {
        name: "filtration",
        skipped: None,
        rows: filtration_rows,
    });

    let pairs: Vec<(usize, usize, u32)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .flat_map(|(i, j)| (0..data.gamma(i, j)).map(move |k| (i, j, k)))
        .collect();
    let nil_rows = pairs
        .par_iter()
        .map(|(i, j, k)| {
            let zero = pushforward(data, *i, *j, *k)
                .and_then(|rs| verify_identically_zero(&ctx, &rs, opts.nilpotency_order))
                .unwrap_or(false);
            Row::new(
                format!("pair=({i},{j}) k={k} N={}", opts.nilpotency_order),
                1,
                i64::from(zero),
            )
        })
        .collect();
    suites.push(SuiteReport {
        name: "nilpotency",
        skipped: None,
        rows: nil_rows,
    });

    let mut sample: Vec<(usize, usize)> = steps
        .iter()
        .zip(&cells_by_degree)
        .enumerate()
        .filter(|(_, (_, (l, _, d)))| *l <= 2 && *d <= 4)
        .flat_map(|(c, (cell, _))| (0..cell.len()).map(move |s| (c, s)))
        .collect();
    let mut rng = StdRng::seed_from_u64(opts.seed);
    sample.shuffle(&mut rng);
    sample.truncate(opts.dual_samples);
    sample.sort_unstable();
    let dual_rows = sample
        .par_iter()
        .map(|(c, s)| {
            let (k, r, sub, before) = &steps[*c][*s];
            let d = cells_by_degree[*c].2;
            let dim = dual_subquotient_slice(&ctx, r, before, d).map_or(-1, |x| x.dim() as i64);
            Row::new(format!("{k} r={r:?}"), *sub as i64, dim)
        })
        .collect();
    suites.push(SuiteReport {
        name: "dual",
        skipped: None,
        rows: dual_rows,
    });

    let pass = suites.iter().all(SuiteReport::pass);
    Ok(VerifyReport {
        subject: subject.name.clone(),
        pass,
        suites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::load_catalog;

    #[test]
    fn segment_passes_and_override_fails() {
        let s = load_catalog("segment:2").unwrap();
        let opts = VerifyOptions {
            dmax: 3,
            ..VerifyOptions::default()
        };
        let report = run(&s, &opts).unwrap();
        assert!(report.pass);
        assert!(report.suites.iter().all(|x| !x.rows.is_empty()));
        let bad = VerifyOptions {
            gamma_override: vec![(0, 2, 0)],
            ..opts
        };
        let report = run(&s, &bad).unwrap();
        assert!(!report.pass);
        let first = report.suites[0].first_mismatch().unwrap();
        assert_eq!(first.key, "a=[2] L=2 d=0");
        assert_eq!((first.oracle, first.formula), (1, 2));
    }

    #[test]
    fn caps_are_enforced() {
        let s = load_catalog("segment:1").unwrap();
        let opts = VerifyOptions {
            level: 4,
            ..VerifyOptions::default()
        };
        assert!(matches!(
            run(&s, &opts),
            Err(VerifyError::CapExceeded { what: "L", .. })
        ));
        let opts = VerifyOptions {
            gamma_override: vec![(0, 5, 1)],
            ..VerifyOptions::default()
        };
        assert_eq!(
            run(&s, &opts).err(),
            Some(VerifyError::BadOverride(0, 5, 2))
        );
    }

    #[test]
    fn rows_are_deterministic() {
        let s = load_catalog("square").unwrap();
        let opts = VerifyOptions {
            dmax: 2,
            seed: 7,
            ..VerifyOptions::default()
        };
        let a = run(&s, &opts).unwrap();
        let b = run(&s, &opts).unwrap();
        for (x, y) in a.suites.iter().zip(&b.suites) {
            assert_eq!(x.rows, y.rows);
        }
        assert!(a.pass);
    }
}
