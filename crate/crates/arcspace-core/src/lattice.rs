//! Lattice polytopes, their integer points, normality, and the lift of a
//! polytope along an integer profile function.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a polytope needs at least one vertex")]
    NoVertices,
    #[error("vertex {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertices span a {found}-dimensional affine space inside R^{dim}; only full-dimensional polytopes are supported")]
    NotFullDimensional { dim: usize, found: usize },
    #[error("profile has {found} values for {expected} lattice points")]
    ProfileLength { expected: usize, found: usize },
    #[error("profile value {value} at point {index} is negative")]
    NegativeProfile { index: usize, value: i64 },
    #[error("profile is not concave on the polytope: {0}")]
    ProfileNotConcave(&'static str),
}

/// An integer point of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &[i64]) -> LatticePoint {
        LatticePoint(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &[i64]) -> LatticePoint {
        LatticePoint(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }

    /// The point with one more coordinate appended.
    pub fn extend(&self, last: i64) -> LatticePoint {
        let mut c = self.0.clone();
        c.push(last);
        LatticePoint(c)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Total orders used to index the points of a polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointOrder {
    /// Coordinate sum first, then lexicographic.
    GradedLex,
    /// Second coordinate first, then first coordinate (planar polygons).
    Paper2d,
    /// Decided by the largest coordinate index where the points differ.
    Zeta,
}

impl PointOrder {
    pub fn compare(&self, a: &LatticePoint, b: &LatticePoint) -> Ordering {
        match self {
            PointOrder::GradedLex => {
                let sa: i64 = a.0.iter().sum();
                let sb: i64 = b.0.iter().sum();
                sa.cmp(&sb).then_with(|| a.0.cmp(&b.0))
            }
            PointOrder::Paper2d | PointOrder::Zeta => a.0.iter().rev().cmp(b.0.iter().rev()),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PointOrder::GradedLex => "graded-lex",
            PointOrder::Paper2d => "paper-2d",
            PointOrder::Zeta => "zeta",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "graded-lex" => Some(PointOrder::GradedLex),
            "paper-2d" => Some(PointOrder::Paper2d),
            "zeta" => Some(PointOrder::Zeta),
            _ => None,
        }
    }
}

/// Facet description `normal . x <= rhs` of a full-dimensional hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    dim: usize,
    facets: Vec<(Vec<i64>, i64)>,
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss fraction-free elimination.
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn affine_rank(points: &[LatticePoint]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    linalg::rank(points.iter().skip(1).map(|p| {
        linalg::sparse_row(
            p.0.iter()
                .zip(&first.0)
                .enumerate()
                .map(|(i, (a, b))| (i, BigInt::from(a - b))),
        )
    }))
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Hull {
    /// Facets of the convex hull of full-dimensional integer points.
    pub fn new(points: &[LatticePoint]) -> Result<Self, LatticeError> {
        let first = points.first().ok_or(LatticeError::NoVertices)?;
        let dim = first.dim();
        for (index, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(LatticeError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        let found = affine_rank(points);
        if found != dim {
            return Err(LatticeError::NotFullDimensional { dim, found });
        }
        let distinct: Vec<LatticePoint> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut facets: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
        combinations(distinct.len(), dim, |idx| {
            let base = &distinct[idx[0]];
            let diffs: Vec<Vec<i128>> = idx[1..]
                .iter()
                .map(|&i| {
                    distinct[i]
                        .0
                        .iter()
                        .zip(&base.0)
                        .map(|(a, b)| i128::from(a - b))
                        .collect()
                })
                .collect();
            // Generalised cross product: cofactors of the (dim-1) x dim matrix.
            let normal: Vec<i128> = (0..dim)
                .map(|col| {
                    let minor: Vec<Vec<i128>> = diffs
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|(j, _)| *j != col)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let s = if col % 2 == 0 { 1 } else { -1 };
                    s * det(minor)
                })
                .collect();
            if normal.iter().all(|c| *c == 0) {
                return;
            }
            let dot = |p: &LatticePoint| -> i128 {
                normal
                    .iter()
                    .zip(&p.0)
                    .map(|(c, x)| c * i128::from(*x))
                    .sum()
            };
            let rhs = dot(base);
            let (mut le, mut ge) = (true, true);
            for p in &distinct {
                let v = dot(p);
                le &= v <= rhs;
                ge &= v >= rhs;
            }
            let orient: i128 = if le {
                1
            } else if ge {
                -1
            } else {
                return;
            };
            let mut g = 0i128;
            for c in &normal {
                g = g.gcd(c);
            }
            let normal: Vec<i64> = normal.iter().map(|c| (orient * c / g) as i64).collect();
            facets.insert((normal, (orient * rhs / g) as i64));
        });
        Ok(Self {
            dim,
            facets: facets.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[(Vec<i64>, i64)] {
        &self.facets
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.facets
            .iter()
            .all(|(n, b)| n.iter().zip(&p.0).map(|(c, x)| c * x).sum::<i64>() <= *b)
    }

    /// Whether `p` is a vertex: the facets through it have full-rank normals.
    pub fn is_vertex(&self, p: &LatticePoint) -> bool {
        let tight: Vec<linalg::SparseRow> = self
            .facets
            .iter()
            .filter(|(n, b)| n.iter().zip(&p.0).map(|(c, x)| c * x).sum::<i64>() == *b)
            .map(|(n, _)| {
                linalg::sparse_row(n.iter().enumerate().map(|(i, c)| (i, BigInt::from(*c))))
            })
            .collect();
        linalg::rank(tight) == self.dim
    }

    /// All integer points of the hull, unsorted.
    pub fn integer_points(&self, generators: &[LatticePoint]) -> Vec<LatticePoint> {
        let lo: Vec<i64> = (0..self.dim)
            .map(|i| generators.iter().map(|p| p.0[i]).min().unwrap_or(0))
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|i| generators.iter().map(|p| p.0[i]).max().unwrap_or(0))
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = LatticePoint(cur.clone());
            if self.contains(&p) {
                out.push(p);
            }
            let mut i = 0;
            loop {
                if i == self.dim {
                    return out;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }
}

/// Every integer point of the convex hull of `vertices`, sorted by `order`.
pub fn lattice_points(
    vertices: &[LatticePoint],
    order: PointOrder,
) -> Result<Vec<LatticePoint>, LatticeError> {
    if vertices.first().map(|v| v.dim()) == Some(1) {
        for (index, v) in vertices.iter().enumerate() {
            if v.dim() != 1 {
                return Err(LatticeError::DimensionMismatch {
                    index,
                    expected: 1,
                    found: v.dim(),
                });
            }
        }
        let lo = vertices.iter().map(|v| v.0[0]).min().unwrap_or(0);
        let hi = vertices.iter().map(|v| v.0[0]).max().unwrap_or(0);
        return Ok((lo..=hi).map(|x| LatticePoint(vec![x])).collect());
    }
    let hull = Hull::new(vertices)?;
    let mut pts = hull.integer_points(vertices);
    pts.sort_by(|a, b| order.compare(a, b));
    Ok(pts)
}

/// A lattice polytope with an indexed list of all its integer points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    points: Vec<LatticePoint>,
    order: PointOrder,
    index: BTreeMap<LatticePoint, usize>,
}

impl LatticePolytope {
    /// Enumerates the integer points of the hull of `vertices` and keeps the
    /// true vertices among the input.
    pub fn from_vertices(
        vertices: Vec<LatticePoint>,
        order: PointOrder,
    ) -> Result<Self, LatticeError> {
        let points = lattice_points(&vertices, order)?;
        let dim = vertices[0].dim();
        let mut vs: Vec<LatticePoint> = if dim == 1 {
            let lo = points.first().cloned();
            let hi = points.last().cloned();
            lo.into_iter().chain(hi).collect()
        } else {
            let hull = Hull::new(&vertices)?;
            vertices
                .iter()
                .filter(|v| hull.is_vertex(v))
                .cloned()
                .collect()
        };
        vs.sort_by(|a, b| order.compare(a, b));
        vs.dedup();
        Ok(Self::assemble(dim, vs, points, order))
    }

    /// Builds a polytope whose point list is already known and ordered.
    pub(crate) fn assemble(
        dim: usize,
        vertices: Vec<LatticePoint>,
        points: Vec<LatticePoint>,
        order: PointOrder,
    ) -> Self {
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self {
            dim,
            vertices,
            points,
            order,
            index,
        }
    }

    /// The segment `[0, length]`.
    pub fn segment(length: i64) -> Self {
        Self::from_vertices(
            vec![LatticePoint(vec![0]), LatticePoint(vec![length])],
            PointOrder::Zeta,
        )
        .expect("segments are valid polytopes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn order(&self) -> PointOrder {
        self.order
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index.contains_key(p)
    }
}

/// Whether every integer point of `kP` is a sum of `k` integer points of `P`
/// for all `k <= k_max`.
pub fn is_normal(p: &LatticePolytope, k_max: usize) -> bool {
    let mut sums: BTreeSet<LatticePoint> = p.points().iter().cloned().collect();
    for k in 2..=k_max {
        let mut next = BTreeSet::new();
        for s in &sums {
            for q in p.points() {
                next.insert(s.add(&q.0));
            }
        }
        sums = next;
        let scaled: Vec<LatticePoint> = p.vertices().iter().map(|v| v.scale(k as i64)).collect();
        let Ok(kp) = lattice_points(&scaled, p.order()) else {
            return false;
        };
        if kp.iter().any(|x| !sums.contains(x)) {
            return false;
        }
    }
    true
}

/// The default normality bound `dim - 1`.
pub fn default_normality_bound(p: &LatticePolytope) -> usize {
    p.dim().saturating_sub(1)
}

/// Integer profile values on the points of a polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFunction {
    values: Vec<i64>,
    zeta_max: i64,
}

impl ZetaFunction {
    pub fn new(p: &LatticePolytope, values: Vec<i64>) -> Result<Self, LatticeError> {
        if values.len() != p.len() {
            return Err(LatticeError::ProfileLength {
                expected: p.len(),
                found: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0) {
            return Err(LatticeError::NegativeProfile { index, value });
        }
        let zeta_max = values.iter().copied().max().unwrap_or(0);
        Ok(Self { values, zeta_max })
    }

    pub fn from_fn(
        p: &LatticePolytope,
        f: impl Fn(&LatticePoint) -> i64,
    ) -> Result<Self, LatticeError> {
        Self::new(p, p.points().iter().map(f).collect())
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn zeta_max(&self) -> i64 {
        self.zeta_max
    }

    /// Lowest admissible last coordinate above point `i` in the lift.
    pub fn floor(&self, i: usize) -> i64 {
        self.zeta_max - self.values[i]
    }
}

/// The lift `P^zeta`: the hull of `P x {zeta_max}` and every
/// `alpha^i x {zeta_max - zeta_i}`. Points are ordered by last coordinate,
/// then by base index.
pub fn lift_zeta(
    p: &LatticePolytope,
    zeta: &ZetaFunction,
) -> Result<LatticePolytope, LatticeError> {
    if zeta.values().len() != p.len() {
        return Err(LatticeError::ProfileLength {
            expected: p.len(),
            found: zeta.values().len(),
        });
    }
    // Midpoint concavity on pairs whose midpoint is a lattice point.
    for (i, a) in p.points().iter().enumerate() {
        for (j, b) in p.points().iter().enumerate().skip(i + 1) {
            let sum = a.add(&b.0);
            if sum.0.iter().all(|c| c.is_even()) {
                let mid = LatticePoint(sum.0.iter().map(|c| c / 2).collect());
                if let Some(k) = p.index_of(&mid) {
                    if 2 * zeta.value(k) < zeta.value(i) + zeta.value(j) {
                        return Err(LatticeError::ProfileNotConcave("midpoint inequality fails"));
                    }
                }
            }
        }
    }
    let top = zeta.zeta_max();
    let mut points = Vec::new();
    for a in 0..=top {
        for (i, q) in p.points().iter().enumerate() {
            if zeta.floor(i) <= a {
                points.push(q.extend(a));
            }
        }
    }
    let generators: Vec<LatticePoint> = p
        .points()
        .iter()
        .enumerate()
        .flat_map(|(i, q)| [q.extend(top), q.extend(zeta.floor(i))])
        .collect();
    let vertices = match Hull::new(&generators) {
        Ok(hull) => {
            let hull_pts: BTreeSet<LatticePoint> =
                hull.integer_points(&generators).into_iter().collect();
            let described: BTreeSet<LatticePoint> = points.iter().cloned().collect();
            if hull_pts != described {
                return Err(LatticeError::ProfileNotConcave(
                    "hull of the lift has integer points outside the profile region",
                ));
            }
            let mut vs: Vec<LatticePoint> = generators
                .iter()
                .filter(|v| hull.is_vertex(v))
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            vs.sort_by(|a, b| PointOrder::Zeta.compare(a, b));
            vs
        }
        Err(LatticeError::NotFullDimensional { .. }) => {
            p.vertices().iter().map(|v| v.extend(top)).collect()
        }
        Err(e) => return Err(e),
    };
    Ok(LatticePolytope::assemble(
        p.dim() + 1,
        vertices,
        points,
        PointOrder::Zeta,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn unimodular_triangle_points() {
        let v = vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1])];
        let pts = lattice_points(&v, PointOrder::GradedLex).unwrap();
        assert_eq!(pts, vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1])]);
    }

    #[test]
    fn segment_points() {
        let pts = lattice_points(&[pt(&[0]), pt(&[3])], PointOrder::Zeta).unwrap();
        assert_eq!(pts, vec![pt(&[0]), pt(&[1]), pt(&[2]), pt(&[3])]);
    }

    #[test]
    fn four_point_triangle() {
        let v = vec![pt(&[0, 0]), pt(&[1, 2]), pt(&[2, 1])];
        let pts: BTreeSet<_> = lattice_points(&v, PointOrder::GradedLex)
            .unwrap()
            .into_iter()
            .collect();
        let expect: BTreeSet<_> = [pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 1]), pt(&[1, 2])]
            .into_iter()
            .collect();
        assert_eq!(pts, expect);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = lattice_points(&[pt(&[0, 0]), pt(&[1])], PointOrder::GradedLex).unwrap_err();
        assert!(matches!(
            err,
            LatticeError::DimensionMismatch { index: 1, .. }
        ));
    }

    #[test]
    fn normality_examples() {
        let cube = LatticePolytope::from_vertices(
            (0..8)
                .map(|m| pt(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]))
                .collect(),
            PointOrder::Zeta,
        )
        .unwrap();
        assert_eq!(cube.len(), 8);
        assert!(is_normal(&cube, 2));
        for z in 1..5 {
            assert!(is_normal(&LatticePolytope::segment(z), 3));
        }
        let reeve = LatticePolytope::from_vertices(
            vec![
                pt(&[0, 0, 0]),
                pt(&[1, 0, 0]),
                pt(&[0, 1, 0]),
                pt(&[1, 1, 2]),
            ],
            PointOrder::GradedLex,
        )
        .unwrap();
        assert_eq!(reeve.len(), 4);
        assert!(!is_normal(&reeve, default_normality_bound(&reeve)));
    }

    #[test]
    fn lift_of_unit_segment() {
        let p = LatticePolytope::segment(1);
        let z = ZetaFunction::new(&p, vec![0, 1]).unwrap();
        let q = lift_zeta(&p, &z).unwrap();
        assert_eq!(q.points(), &[pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]);
        let vs: BTreeSet<_> = q.vertices().iter().cloned().collect();
        let expect: BTreeSet<_> = [pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 0])]
            .into_iter()
            .collect();
        assert_eq!(vs, expect);
    }

    #[test]
    fn constant_lift_is_a_prism() {
        let p = LatticePolytope::segment(2);
        let z = ZetaFunction::new(&p, vec![3, 3, 3]).unwrap();
        let q = lift_zeta(&p, &z).unwrap();
        assert_eq!(q.len(), 12);
        assert_eq!(q.vertices().len(), 4);
    }

    #[test]
    fn lift_of_segment_by_identity() {
        let p = LatticePolytope::segment(2);
        let z = ZetaFunction::new(&p, vec![0, 1, 2]).unwrap();
        let q = lift_zeta(&p, &z).unwrap();
        assert_eq!(q.len(), 6);
        let vs: BTreeSet<_> = q.vertices().iter().cloned().collect();
        let expect: BTreeSet<_> = [pt(&[0, 2]), pt(&[2, 2]), pt(&[2, 0])]
            .into_iter()
            .collect();
        assert_eq!(vs, expect);
    }

    #[test]
    fn non_concave_profile_is_rejected() {
        let p = LatticePolytope::segment(2);
        let z = ZetaFunction::new(&p, vec![1, 0, 1]).unwrap();
        assert!(matches!(
            lift_zeta(&p, &z),
            Err(LatticeError::ProfileNotConcave(_))
        ));
    }

    #[test]
    fn zero_profile_lift_is_flat() {
        let p = LatticePolytope::segment(2);
        let z = ZetaFunction::new(&p, vec![0, 0, 0]).unwrap();
        let q = lift_zeta(&p, &z).unwrap();
        assert_eq!(q.len(), 3);
    }
}
