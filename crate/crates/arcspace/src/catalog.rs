//! Named polytope families with their cube generating data.

use arcspace_core::cubedata::{
    box_data, planar_data, segment_data, simplex_data, validate, CubeError, CubeGenData,
};
use arcspace_core::lattice::{LatticeError, LatticePoint, LatticePolytope, PointOrder};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters for `{family}`: {reason}")]
    BadParameters { family: String, reason: String },
    #[error("catalog data for `{name}` fails validation: {violation}")]
    Invalid { name: String, violation: String },
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A polytope together with data satisfying the cube conditions.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub polytope: LatticePolytope,
    pub data: CubeGenData,
}

/// Keys exercised by `verify` and the acceptance suite.
pub const DEFAULT_NAMES: &[&str] = &[
    "segment:1",
    "segment:2",
    "segment:3",
    "square",
    "triangle:2",
    "hirzebruch:0,2",
    "hirzebruch:1,2",
    "polygon:0,1,1",
    "cube",
    "box:2,1",
    "box:2,1,1",
    "simplex:2,1",
    "simplex:2,2",
    "simplex:3,1",
];

fn bad(family: &str, reason: impl Into<String>) -> CatalogError {
    CatalogError::BadParameters {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn parse_ints(family: &str, args: &str) -> Result<Vec<i64>, CatalogError> {
    if args.is_empty() {
        return Ok(Vec::new());
    }
    args.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| bad(family, format!("`{t}` is not an integer")))
        })
        .collect()
}

/// The reflected polygon `{(i, j) : max - z_i <= j <= max}` of a profile
/// `z_0, ..., z_eta`.
pub fn polygon_from_profile(zetas: &[i64]) -> Result<LatticePolytope, CatalogError> {
    if zetas.len() < 2 || zetas.iter().any(|z| *z < 0) {
        return Err(bad("polygon", "need at least two nonnegative values"));
    }
    for w in zetas.windows(3) {
        if w[0] - w[1] > w[1] - w[2] {
            return Err(bad("polygon", "differences must increase"));
        }
    }
    let top = *zetas.iter().max().unwrap_or(&0);
    let mut pts = Vec::new();
    for (i, z) in zetas.iter().enumerate() {
        pts.push(LatticePoint::new(vec![i as i64, top - z]));
        pts.push(LatticePoint::new(vec![i as i64, top]));
    }
    Ok(LatticePolytope::from_vertices(pts, PointOrder::Paper2d)?)
}

fn planar_entry(zetas: &[i64]) -> Result<(LatticePolytope, CubeGenData), CatalogError> {
    let p = polygon_from_profile(zetas)?;
    let data = planar_data(&p)?;
    Ok((p, data))
}

/// Builds the entry for a key such as `segment:2`, `box:2,1,1`,
/// `simplex:2,2`, `hirzebruch:1,2`, `triangle:2` or `polygon:0,1,1`.
pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let (family, args) = name.split_once(':').unwrap_or((name, ""));
    let ints = parse_ints(family, args)?;
    let (polytope, data) = match family {
        "segment" => match ints.as_slice() {
            [z] if *z >= 1 => segment_data(*z),
            _ => return Err(bad(family, "expected one positive length")),
        },
        "square" => planar_entry(&[1, 1])?,
        "cube" => box_data(&[1, 1, 1])?,
        "box" => {
            if ints.is_empty() || ints.iter().any(|d| *d < 1) {
                return Err(bad(family, "expected positive side lengths"));
            }
            box_data(&ints)?
        }
        "simplex" => match ints.as_slice() {
            [1, d] if *d >= 1 => segment_data(*d),
            [n, d] if *n >= 1 && *d >= 1 => simplex_data(*n as usize, *d)?,
            _ => {
                return Err(bad(
                    family,
                    "expected dimension and dilation, both positive",
                ))
            }
        },
        "hirzebruch" => match ints.as_slice() {
            [b, eta] if *eta >= 1 && (0..=1).contains(b) && b <= eta => {
                let zetas: Vec<i64> = (0..=*eta)
                    .map(|i| if *b == 1 && i == 0 { 0 } else { 1 })
                    .collect();
                planar_entry(&zetas)?
            }
            [b, _] if *b > 1 => {
                return Err(bad(family, "the profile a/b is integral only for b <= 1"))
            }
            _ => return Err(bad(family, "expected b,eta with 0 <= b <= eta")),
        },
        "triangle" => match ints.as_slice() {
            [eta] if *eta >= 1 => planar_entry(&(0..=*eta).collect::<Vec<_>>())?,
            _ => return Err(bad(family, "expected one positive size")),
        },
        "polygon" => planar_entry(&ints)?,
        _ => return Err(CatalogError::UnknownFamily(family.to_string())),
    };
    if let Some(v) = validate(&data, &polytope).into_iter().next() {
        return Err(CatalogError::Invalid {
            name: name.to_string(),
            violation: v.to_string(),
        });
    }
    Ok(CatalogEntry {
        name: name.to_string(),
        polytope,
        data,
    })
}
