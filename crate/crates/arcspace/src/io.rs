//! JSON formats for polytopes, characters, cube data and relation series.

use std::collections::BTreeMap;

use arcspace_core::characters::CharacterSeries;
use arcspace_core::cubedata::CubeGenData;
use arcspace_core::lattice::{LatticeError, LatticePoint, LatticePolytope, PointOrder};
use arcspace_core::relations::RelationSeries;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogEntry, CatalogError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown point order `{0}`")]
    Order(String),
    #[error("declared dimension {declared} but vertices have dimension {found}")]
    Dimension { declared: usize, found: usize },
    #[error("gamma must be a symmetric {0}x{0} matrix with zero diagonal")]
    GammaShape(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// `{"dim": n, "vertices": [[..]], "order": "...", "gamma": [[..]]?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<u32>>>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &LatticePolytope, gamma: Option<Vec<Vec<u32>>>) -> Self {
        Self {
            dim: p.dim(),
            vertices: p.vertices().iter().map(|v| v.coords().to_vec()).collect(),
            order: p.order().tag().to_string(),
            gamma,
        }
    }

    pub fn to_polytope(&self) -> Result<LatticePolytope, IoError> {
        let order =
            PointOrder::from_tag(&self.order).ok_or_else(|| IoError::Order(self.order.clone()))?;
        for v in &self.vertices {
            if v.len() != self.dim {
                return Err(IoError::Dimension {
                    declared: self.dim,
                    found: v.len(),
                });
            }
        }
        let vs = self
            .vertices
            .iter()
            .map(|v| LatticePoint::new(v.clone()))
            .collect();
        Ok(LatticePolytope::from_vertices(vs, order)?)
    }
}

/// A polytope with whatever exponent data is known for it.
#[derive(Debug, Clone)]
pub struct Subject {
    pub name: String,
    pub polytope: LatticePolytope,
    pub gamma: Option<Vec<Vec<u32>>>,
    pub data: Option<CubeGenData>,
}

impl From<CatalogEntry> for Subject {
    fn from(e: CatalogEntry) -> Self {
        Self {
            name: e.name,
            gamma: Some(e.data.gamma_matrix()),
            polytope: e.polytope,
            data: Some(e.data),
        }
    }
}

fn check_gamma(gamma: &[Vec<u32>], m: usize) -> Result<(), IoError> {
    let ok = gamma.len() == m
        && gamma.iter().all(|row| row.len() == m)
        && (0..m).all(|i| gamma[i][i] == 0 && (0..m).all(|j| gamma[i][j] == gamma[j][i]));
    if ok {
        Ok(())
    } else {
        Err(IoError::GammaShape(m))
    }
}

pub fn parse_polytope(text: &str, name: &str) -> Result<Subject, IoError> {
    let file: PolytopeFile = serde_json::from_str(text)?;
    let polytope = file.to_polytope()?;
    if let Some(g) = &file.gamma {
        check_gamma(g, polytope.len())?;
    }
    Ok(Subject {
        name: name.to_string(),
        polytope,
        gamma: file.gamma,
        data: None,
    })
}

pub fn load_polytope(path: &str) -> Result<Subject, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_string(),
        source,
    })?;
    parse_polytope(&text, path)
}

pub fn load_catalog(name: &str) -> Result<Subject, IoError> {
    Ok(catalog::entry(name)?.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRow {
    pub a: Vec<i64>,
    pub d: u32,
    pub coeff: u64,
}

/// `{"L": int, "rows": [{"a": [..], "d": int, "coeff": int}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFile {
    #[serde(rename = "L")]
    pub level: u32,
    pub rows: Vec<CharacterRow>,
}

impl CharacterFile {
    pub fn from_series(chi: &CharacterSeries) -> Self {
        Self {
            level: chi.level(),
            rows: chi
                .terms()
                .iter()
                .map(|((a, d), c)| CharacterRow {
                    a: a.clone(),
                    d: *d,
                    coeff: *c,
                })
                .collect(),
        }
    }
}

/// `{"points": .., "gamma": .., "steps": {"i,j": [..]}, "order": ".."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDataFile {
    pub points: Vec<Vec<i64>>,
    pub gamma: Vec<Vec<u32>>,
    pub steps: BTreeMap<String, Vec<Vec<i64>>>,
    pub order: String,
}

impl CubeDataFile {
    pub fn from_data(data: &CubeGenData) -> Self {
        Self {
            points: data.points().iter().map(|p| p.coords().to_vec()).collect(),
            gamma: data.gamma_matrix(),
            steps: data
                .all_steps()
                .iter()
                .filter(|((i, j), _)| i < j)
                .map(|((i, j), s)| (format!("{i},{j}"), s.clone()))
                .collect(),
            order: data.order().tag(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTerm {
    pub derived: Vec<i64>,
    pub plain: Vec<i64>,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub pair: [usize; 2],
    pub k: u32,
    pub text: String,
    pub terms: Vec<RelationTerm>,
}

impl RelationEntry {
    pub fn new(pair: [usize; 2], rs: &RelationSeries) -> Self {
        Self {
            pair,
            k: rs.level(),
            text: rs.to_string(),
            terms: rs
                .terms()
                .iter()
                .map(|((a, b), c)| RelationTerm {
                    derived: a.coords().to_vec(),
                    plain: b.coords().to_vec(),
                    coeff: *c,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use arcspace_core::characters::component_character;
    use proptest::prelude::*;

    const DEFAULTS: usize = catalog::DEFAULT_NAMES.len();

    #[test]
    fn polytope_round_trip() {
        let s = load_catalog("simplex:2,2").unwrap();
        let file = PolytopeFile::from_polytope(&s.polytope, s.gamma.clone());
        let text = serde_json::to_string(&file).unwrap();
        let back = parse_polytope(&text, "x").unwrap();
        assert_eq!(back.polytope.points(), s.polytope.points());
        assert_eq!(back.gamma, s.gamma);
        assert_eq!(
            PolytopeFile::from_polytope(&back.polytope, back.gamma),
            file
        );
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_polytope("{", "x"), Err(IoError::Json(_))));
        let wrong_order = r#"{"dim":1,"vertices":[[0],[2]],"order":"nope"}"#;
        assert!(matches!(
            parse_polytope(wrong_order, "x"),
            Err(IoError::Order(_))
        ));
        let bad_gamma =
            r#"{"dim":1,"vertices":[[0],[1]],"order":"graded-lex","gamma":[[0,1],[0,0]]}"#;
        assert!(matches!(
            parse_polytope(bad_gamma, "x"),
            Err(IoError::GammaShape(2))
        ));
        let bad_dim = r#"{"dim":2,"vertices":[[0],[1]],"order":"graded-lex"}"#;
        assert!(matches!(
            parse_polytope(bad_dim, "x"),
            Err(IoError::Dimension { .. })
        ));
    }

    #[test]
    fn character_and_cube_round_trip() {
        let e = catalog::entry("segment:2").unwrap();
        let chi = CharacterFile::from_series(&component_character(&e.data, 2, 3));
        let text = serde_json::to_string(&chi).unwrap();
        assert!(text.starts_with(r#"{"L":2,"rows":[{"a":[0],"d":0,"coeff":1}"#));
        assert_eq!(serde_json::from_str::<CharacterFile>(&text).unwrap(), chi);
        let cube = CubeDataFile::from_data(&e.data);
        let text = serde_json::to_string(&cube).unwrap();
        assert_eq!(serde_json::from_str::<CubeDataFile>(&text).unwrap(), cube);
        assert_eq!(cube.steps["0,2"], vec![vec![1], vec![1]]);
    }

    proptest! {
        #[test]
        fn character_file_round_trips(rows in proptest::collection::vec(
            (proptest::collection::vec(-5i64..6, 2), 0u32..9, 0u64..1000), 0..8)) {
            let file = CharacterFile {
                level: 2,
                rows: rows.into_iter().map(|(a, d, coeff)| CharacterRow { a, d, coeff }).collect(),
            };
            let text = serde_json::to_string(&file).unwrap();
            prop_assert_eq!(serde_json::from_str::<CharacterFile>(&text).unwrap(), file);
        }

        #[test]
        fn catalog_polytopes_round_trip(k in 0usize..DEFAULTS, with_gamma in any::<bool>()) {
            let s = load_catalog(catalog::DEFAULT_NAMES[k]).unwrap();
            let gamma = if with_gamma { s.gamma.clone() } else { None };
            let file = PolytopeFile::from_polytope(&s.polytope, gamma);
            let back = parse_polytope(&serde_json::to_string(&file).unwrap(), "x").unwrap();
            prop_assert_eq!(back.polytope.points(), s.polytope.points());
            prop_assert_eq!(PolytopeFile::from_polytope(&back.polytope, back.gamma), file);
        }
    }
}
