//! Monomial orders on exponent vectors, exponent formulas for point pairs,
//! planar lattice paths, cube generating data and its lift along a profile.
//!
//! Cube generating data assigns to every ordered pair of points `(p, q)` a list
//! of `gamma + 1` step vectors summing to `q - p` such that every partial sum
//! stays in the polytope, the reversed pair uses the negated steps, and
//! `X_p X_q` is strictly the largest monomial among all `X_{p+S} X_{q-S}`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::lattice::{lift_zeta, LatticeError, LatticePoint, LatticePolytope, ZetaFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("need 0 <= alpha < beta <= {zeta}, got ({alpha}, {beta})")]
    SegmentRange { alpha: i64, beta: i64, zeta: i64 },
    #[error("point {0} is not in the polytope")]
    NotInPolytope(String),
    #[error("endpoints coincide")]
    EqualEndpoints,
    #[error("polygon is not the region between a convex floor and a common top edge")]
    NotPlanarLift,
    #[error("exponent vectors have lengths {0} and {1}, order expects {2}")]
    Length(usize, usize, usize),
    #[error("steps of pair ({0}, {1}) have mixed signs in coordinate {2}")]
    MixedSign(usize, usize, usize),
    #[error("lift integers are missing")]
    MissingLifts,
    #[error("lift integers of pair ({0}, {1}) violate the profile inequality")]
    LiftCondition(usize, usize),
    #[error("cube generating data does not match the polytope points")]
    PointMismatch,
    #[error("cube generating data has {0} violations")]
    Invalid(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Total orders on `N^m` used to filter arc rings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Total degree, then lexicographic in point index.
    GradedLex,
    /// The weight-restricted lexicographic order on a segment; the same rule
    /// as `GradedLex` over the segment's points.
    Segment,
    /// Planar polygons: total degree, then column sums lexicographically,
    /// then lexicographic in point index.
    Planar { columns: Vec<usize>, width: usize },
    /// Order on a lift: compare projections to the base with the base order,
    /// then lexicographic in lifted point index.
    Zeta {
        base: Box<MonomialOrder>,
        projection: Vec<usize>,
        base_len: usize,
    },
}

fn project(r: &[u32], map: &[usize], len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for (k, v) in r.iter().enumerate() {
        out[map[k]] += v;
    }
    out
}

impl MonomialOrder {
    /// Number of points the order is defined on, if fixed.
    pub fn arity(&self) -> Option<usize> {
        match self {
            MonomialOrder::GradedLex | MonomialOrder::Segment => None,
            MonomialOrder::Planar { columns, .. } => Some(columns.len()),
            MonomialOrder::Zeta { projection, .. } => Some(projection.len()),
        }
    }

    pub fn compare(&self, a: &[u32], b: &[u32]) -> Result<Ordering, CubeError> {
        let arity = self.arity().unwrap_or(a.len());
        if a.len() != b.len() || a.len() != arity {
            return Err(CubeError::Length(a.len(), b.len(), arity));
        }
        Ok(self.cmp_unchecked(a, b))
    }

    fn cmp_unchecked(&self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| match self {
            MonomialOrder::GradedLex | MonomialOrder::Segment => a.cmp(b),
            MonomialOrder::Planar { columns, width } => project(a, columns, *width)
                .cmp(&project(b, columns, *width))
                .then_with(|| a.cmp(b)),
            MonomialOrder::Zeta {
                base,
                projection,
                base_len,
            } => base
                .cmp_unchecked(
                    &project(a, projection, *base_len),
                    &project(b, projection, *base_len),
                )
                .then_with(|| a.cmp(b)),
        })
    }

    /// Kind chain such as `zeta>zeta>segment`.
    pub fn tag(&self) -> String {
        match self {
            MonomialOrder::GradedLex => String::from("graded-lex"),
            MonomialOrder::Segment => String::from("segment"),
            MonomialOrder::Planar { .. } => String::from("planar"),
            MonomialOrder::Zeta { base, .. } => format!("zeta>{}", base.tag()),
        }
    }
}

/// `beta - alpha - 1` for `0 <= alpha < beta <= zeta`.
pub fn gamma_segment(alpha: i64, beta: i64, zeta: i64) -> Result<u32, CubeError> {
    if !(0 <= alpha && alpha < beta && beta <= zeta) {
        return Err(CubeError::SegmentRange { alpha, beta, zeta });
    }
    Ok((beta - alpha - 1) as u32)
}

/// A polygon `{(x, y) : x0 <= x <= x0 + w, floor[x - x0] <= y <= top}` with a
/// convex floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarProfile {
    pub x0: i64,
    pub floor: Vec<i64>,
    pub top: i64,
}

impl PlanarProfile {
    pub fn from_polytope(p: &LatticePolytope) -> Result<Self, CubeError> {
        if p.dim() != 2 {
            return Err(CubeError::NotPlanarLift);
        }
        let mut cols: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for q in p.points() {
            cols.entry(q.coords()[0]).or_default().push(q.coords()[1]);
        }
        let x0 = *cols.keys().next().ok_or(CubeError::NotPlanarLift)?;
        let top = p.points().iter().map(|q| q.coords()[1]).max().unwrap_or(0);
        let mut floor = Vec::new();
        for (k, (x, ys)) in cols.iter().enumerate() {
            let lo = *ys.iter().min().unwrap_or(&top);
            let hi = *ys.iter().max().unwrap_or(&top);
            if *x != x0 + k as i64 || hi != top || ys.len() as i64 != hi - lo + 1 {
                return Err(CubeError::NotPlanarLift);
            }
            floor.push(lo);
        }
        for w in floor.windows(3) {
            if w[0] + w[2] < 2 * w[1] {
                return Err(CubeError::NotPlanarLift);
            }
        }
        Ok(Self { x0, floor, top })
    }

    fn h(&self, x: i64) -> i64 {
        self.floor[(x - self.x0) as usize]
    }

    fn contains(&self, p: &[i64]) -> bool {
        let w = self.floor.len() as i64;
        p[0] >= self.x0 && p[0] < self.x0 + w && self.h(p[0]) <= p[1] && p[1] <= self.top
    }
}

fn planar_oriented(a: &[i64], b: &[i64]) -> bool {
    (a[0], a[1]) <= (b[0], b[1])
}

/// Step vectors of the planar lattice path from `alpha` to `beta`.
///
/// Endpoints are oriented by `(x, y)`; for the reverse orientation the
/// negated steps of the oriented pair are returned.
pub fn path_2d(
    profile: &PlanarProfile,
    alpha: &[i64],
    beta: &[i64],
) -> Result<Vec<Vec<i64>>, CubeError> {
    for p in [alpha, beta] {
        if p.len() != 2 || !profile.contains(p) {
            return Err(CubeError::NotInPolytope(format!("{:?}", p)));
        }
    }
    if alpha == beta {
        return Err(CubeError::EqualEndpoints);
    }
    if !planar_oriented(alpha, beta) {
        let steps = path_2d(profile, beta, alpha)?;
        return Ok(steps
            .into_iter()
            .map(|s| s.into_iter().map(|c| -c).collect())
            .collect());
    }
    let (a1, a2, b1, b2) = (alpha[0], alpha[1], beta[0], beta[1]);
    let h = |x: i64| profile.h(x);
    let mut steps: Vec<Vec<i64>> = Vec::new();
    if a2 <= b2 {
        let u = (a1..=b1).filter(|x| h(*x) <= a2).max().unwrap_or(a1);
        steps.extend((a1..u).map(|_| vec![1, 0]));
        let mut y = a2;
        if u < b1 {
            steps.push(vec![1, h(u + 1) - a2]);
            steps.extend((u + 2..=b1).map(|x| vec![1, h(x) - h(x - 1)]));
            y = h(b1);
        }
        steps.extend((y..b2).map(|_| vec![0, 1]));
    } else if h(a1) <= b2 {
        steps.extend((0..a2 - b2 - 1).map(|_| vec![0, -1]));
        steps.push(vec![1, -1]);
        steps.extend((0..b1 - a1 - 1).map(|_| vec![1, 0]));
    } else {
        let u = (a1..=b1).find(|x| h(*x) <= b2).unwrap_or(b1);
        steps.extend((h(a1)..a2).map(|_| vec![0, -1]));
        steps.extend((a1 + 1..u).map(|x| vec![1, h(x) - h(x - 1)]));
        steps.push(vec![1, b2 - h(u - 1)]);
        steps.extend((u..b1).map(|_| vec![1, 0]));
    }
    Ok(steps)
}

/// Number of vertical-type steps: path length minus the horizontal distance.
pub fn kappa_2d(profile: &PlanarProfile, alpha: &[i64], beta: &[i64]) -> Result<u32, CubeError> {
    let steps = path_2d(profile, alpha, beta)?;
    Ok((steps.len() as i64 - (alpha[0] - beta[0]).abs()) as u32)
}

/// `sum |beta_i - alpha_i| - S` on the box `prod [0, d_i]`, where `S` counts
/// the differing coordinates `i` whose nearest lower differing coordinate has
/// the opposite sign of difference, or does not exist.
pub fn gamma_parallelepiped(dims: &[i64], alpha: &[i64], beta: &[i64]) -> Result<u32, CubeError> {
    for p in [alpha, beta] {
        if p.len() != dims.len() || p.iter().zip(dims).any(|(x, d)| *x < 0 || x > d) {
            return Err(CubeError::NotInPolytope(format!("{:?}", p)));
        }
    }
    let diffs: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
    let total: i64 = diffs.iter().map(|d| d.abs()).sum();
    let mut s = 0i64;
    let mut last: Option<i64> = None;
    for d in diffs.iter().filter(|d| **d != 0) {
        match last {
            Some(prev) if prev * d > 0 => {}
            _ => s += 1,
        }
        last = Some(*d);
    }
    Ok((total - s).max(0) as u32)
}

fn colex(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// `gamma` on `P_{n,d} = {d >= x_n >= ... >= x_1 >= 0}`, summing the level
/// increments of the iterated lift. Each level orients the pair by the
/// colexicographic order of the coordinates seen so far.
pub fn gamma_simplex(n: usize, d: i64, alpha: &[i64], beta: &[i64]) -> Result<u32, CubeError> {
    for p in [alpha, beta] {
        let chain = p.len() == n
            && p.first().is_none_or(|x| *x >= 0)
            && p.last().is_none_or(|x| *x <= d)
            && p.windows(2).all(|w| w[0] <= w[1]);
        if !chain {
            return Err(CubeError::NotInPolytope(format!("{:?}", p)));
        }
    }
    if n == 0 {
        return Ok(0);
    }
    let mut total = if alpha[0] != beta[0] {
        (alpha[0] - beta[0]).abs() - 1
    } else {
        0
    };
    for i in 1..n {
        let (mut a, mut b) = (&alpha[..=i], &beta[..=i]);
        if a == b {
            continue;
        }
        if colex(a, b) == Ordering::Greater {
            core::mem::swap(&mut a, &mut b);
        }
        let (pa, pb) = (&a[..i], &b[..i]);
        total += if pa == pb {
            b[i] - a[i] - 1
        } else if b[i - 1] > a[i] {
            b[i] - b[i - 1]
        } else if colex(pa, pb) != Ordering::Greater {
            b[i] - a[i]
        } else {
            b[i] - a[i] - 1
        };
    }
    Ok(total as u32)
}

/// Per-pair exponents, step vectors and optional lift integers, together with
/// the monomial order they are meant for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeGenData {
    points: Vec<LatticePoint>,
    steps: BTreeMap<(usize, usize), Vec<Vec<i64>>>,
    lifts: Option<BTreeMap<(usize, usize), Vec<i64>>>,
    order: MonomialOrder,
}

fn negated(steps: &[Vec<i64>]) -> Vec<Vec<i64>> {
    steps
        .iter()
        .map(|s| s.iter().map(|c| -c).collect())
        .collect()
}

impl CubeGenData {
    /// Data from the steps of every pair `i < j`; reversed pairs get the
    /// negated steps.
    pub fn from_pairs(
        points: Vec<LatticePoint>,
        upper: BTreeMap<(usize, usize), Vec<Vec<i64>>>,
        order: MonomialOrder,
    ) -> Self {
        let mut steps = BTreeMap::new();
        for ((i, j), s) in upper {
            steps.insert((j, i), negated(&s));
            steps.insert((i, j), s);
        }
        Self {
            points,
            steps,
            lifts: None,
            order,
        }
    }

    /// Data from explicit steps for every ordered pair, as read from a file.
    pub fn from_all_steps(
        points: Vec<LatticePoint>,
        steps: BTreeMap<(usize, usize), Vec<Vec<i64>>>,
        order: MonomialOrder,
    ) -> Self {
        Self {
            points,
            steps,
            lifts: None,
            order,
        }
    }

    pub fn with_lifts(mut self, lifts: BTreeMap<(usize, usize), Vec<i64>>) -> Self {
        self.lifts = Some(lifts);
        self
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

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn steps(&self, i: usize, j: usize) -> Option<&[Vec<i64>]> {
        self.steps.get(&(i, j)).map(|s| s.as_slice())
    }

    pub fn all_steps(&self) -> &BTreeMap<(usize, usize), Vec<Vec<i64>>> {
        &self.steps
    }

    pub fn lifts(&self) -> Option<&BTreeMap<(usize, usize), Vec<i64>>> {
        self.lifts.as_ref()
    }

    /// `gamma(i, j)`: the step count of the pair minus one, read from the
    /// pair `(min, max)`; zero on the diagonal.
    pub fn gamma(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 0;
        }
        self.steps
            .get(&(i.min(j), i.max(j)))
            .map_or(0, |s| s.len().saturating_sub(1) as u32)
    }

    /// The symmetric matrix of exponents.
    pub fn gamma_matrix(&self) -> Vec<Vec<u32>> {
        let m = self.len();
        (0..m)
            .map(|i| (0..m).map(|j| self.gamma(i, j)).collect())
            .collect()
    }
}

/// A failed cube generating data condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingPair { i: usize, j: usize },
    SumMismatch { i: usize, j: usize },
    LeavesPolytope { i: usize, j: usize, subset: u64 },
    NotAntisymmetric { i: usize, j: usize },
    DegenerateSubset { i: usize, j: usize, subset: u64 },
    OrderCondition { i: usize, j: usize, subset: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingPair { i, j } => write!(f, "pair ({i},{j}): steps missing"),
            Violation::SumMismatch { i, j } => {
                write!(f, "pair ({i},{j}): steps do not sum to the difference")
            }
            Violation::LeavesPolytope { i, j, subset } => {
                write!(
                    f,
                    "pair ({i},{j}): partial sum leaves P (subset {subset:#b})"
                )
            }
            Violation::NotAntisymmetric { i, j } => {
                write!(f, "pair ({i},{j}): reversed steps are not negated")
            }
            Violation::DegenerateSubset { i, j, subset } => write!(
                f,
                "pair ({i},{j}): proper subset {subset:#b} reproduces an endpoint"
            ),
            Violation::OrderCondition { i, j, subset } => write!(
                f,
                "pair ({i},{j}): X_i X_j is not the largest term (subset {subset:#b})"
            ),
        }
    }
}

fn subset_sum(steps: &[Vec<i64>], mask: u64, dim: usize) -> Vec<i64> {
    let mut s = vec![0i64; dim];
    for (l, e) in steps.iter().enumerate() {
        if mask >> l & 1 == 1 {
            for (c, x) in e.iter().enumerate() {
                s[c] += x;
            }
        }
    }
    s
}

fn pair_vector(m: usize, i: usize, j: usize) -> Vec<u32> {
    let mut r = vec![0u32; m];
    r[i] += 1;
    r[j] += 1;
    r
}

/// Every violated condition; empty iff `data` is cube generating data on `p`.
pub fn validate(data: &CubeGenData, p: &LatticePolytope) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = data.len();
    let dim = p.dim();
    for i in 0..m {
        for j in (i + 1)..m {
            let (Some(fwd), Some(bwd)) = (data.steps(i, j), data.steps(j, i)) else {
                out.push(Violation::MissingPair { i, j });
                continue;
            };
            if bwd != negated(fwd).as_slice() {
                out.push(Violation::NotAntisymmetric { i, j });
            }
            let a = data.points[i].coords();
            let b = data.points[j].coords();
            let full = (1u64 << fwd.len()) - 1;
            let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
            if fwd.iter().any(|e| e.len() != dim) || subset_sum(fwd, full, dim) != diff {
                out.push(Violation::SumMismatch { i, j });
                continue;
            }
            let here = pair_vector(m, i, j);
            for mask in 1..full {
                let s = subset_sum(fwd, mask, dim);
                let lo = LatticePoint::new(a.iter().zip(&s).map(|(x, y)| x + y).collect());
                let hi = LatticePoint::new(b.iter().zip(&s).map(|(x, y)| x - y).collect());
                let (Some(li), Some(hj)) = (p.index_of(&lo), p.index_of(&hi)) else {
                    out.push(Violation::LeavesPolytope { i, j, subset: mask });
                    continue;
                };
                if (li == i && hj == j) || (li == j && hj == i) {
                    out.push(Violation::DegenerateSubset { i, j, subset: mask });
                    continue;
                }
                let other = pair_vector(m, li, hj);
                if data.order.compare(&here, &other) != Ok(Ordering::Greater) {
                    out.push(Violation::OrderCondition { i, j, subset: mask });
                }
            }
        }
    }
    out
}

/// Data on the segment `[0, zeta]`: unit steps.
pub fn segment_data(zeta: i64) -> (LatticePolytope, CubeGenData) {
    let p = LatticePolytope::segment(zeta);
    let m = p.len();
    let mut upper = BTreeMap::new();
    for i in 0..m {
        for j in (i + 1)..m {
            upper.insert((i, j), vec![vec![1i64]; j - i]);
        }
    }
    let data = CubeGenData::from_pairs(p.points().to_vec(), upper, MonomialOrder::Segment);
    (p, data)
}

/// Data on a polygon between a convex floor and a common top, from planar
/// lattice paths.
pub fn planar_data(p: &LatticePolytope) -> Result<CubeGenData, CubeError> {
    let profile = PlanarProfile::from_polytope(p)?;
    let pts = p.points();
    let mut upper = BTreeMap::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            upper.insert((i, j), path_2d(&profile, pts[i].coords(), pts[j].coords())?);
        }
    }
    let columns: Vec<usize> = pts
        .iter()
        .map(|q| (q.coords()[0] - profile.x0) as usize)
        .collect();
    let width = profile.floor.len();
    Ok(CubeGenData::from_pairs(
        pts.to_vec(),
        upper,
        MonomialOrder::Planar { columns, width },
    ))
}

/// Lift integers for a profile that depends on coordinate `coord` only.
///
/// For a pair with `zeta_i >= zeta_j` the steps are walked in order of
/// increasing `|e[coord]|` (ties by index); the integers are zero until the
/// profile first drops below `zeta_i` and then follow its consecutive
/// differences. Reversed pairs get the negated integers.
pub fn f_from_convex(
    data: &CubeGenData,
    zeta: &ZetaFunction,
    coord: usize,
) -> Result<BTreeMap<(usize, usize), Vec<i64>>, CubeError> {
    let index: BTreeMap<&LatticePoint, usize> = data
        .points
        .iter()
        .enumerate()
        .map(|(k, q)| (q, k))
        .collect();
    let zeta_at = |q: &LatticePoint| -> Result<i64, CubeError> {
        index
            .get(q)
            .map(|k| zeta.value(*k))
            .ok_or_else(|| CubeError::NotInPolytope(format!("{}", q)))
    };
    let m = data.len();
    let mut out = BTreeMap::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let (src, dst) = if zeta.value(i) >= zeta.value(j) {
                (i, j)
            } else {
                (j, i)
            };
            let steps = data.steps(src, dst).ok_or(CubeError::MissingLifts)?;
            let has_pos = steps.iter().any(|e| e[coord] > 0);
            let has_neg = steps.iter().any(|e| e[coord] < 0);
            if has_pos && has_neg {
                return Err(CubeError::MixedSign(src, dst, coord));
            }
            let mut walk: Vec<usize> = (0..steps.len()).collect();
            walk.sort_by_key(|l| steps[*l][coord].abs());
            let start = &data.points[src];
            let z0 = zeta.value(src);
            let mut f = vec![0i64; steps.len()];
            let mut pos = start.clone();
            let mut prev = z0;
            let mut dropped = false;
            for l in walk {
                pos = pos.add(&steps[l]);
                let z = zeta_at(&pos)?;
                if !dropped && z < z0 {
                    dropped = true;
                }
                if dropped {
                    f[l] = z - prev;
                }
                prev = if dropped { z } else { z0 };
            }
            for mask in 1u64..(1 << steps.len()) {
                let s = subset_sum(steps, mask, start.dim());
                let fs: i64 = (0..steps.len())
                    .filter(|l| mask >> l & 1 == 1)
                    .map(|l| f[l])
                    .sum();
                if z0 + fs > zeta_at(&start.add(&s))? {
                    return Err(CubeError::LiftCondition(src, dst));
                }
            }
            out.insert((dst, src), f.iter().map(|x| -x).collect());
            out.insert((src, dst), f);
        }
    }
    Ok(out)
}

/// Cube generating data on the lift `P^zeta` built from data on `P` with
/// lift integers. Returns the lifted polytope and its data.
pub fn build_zeta_data(
    data: &CubeGenData,
    p: &LatticePolytope,
    zeta: &ZetaFunction,
) -> Result<(LatticePolytope, CubeGenData), CubeError> {
    if data.points() != p.points() {
        return Err(CubeError::PointMismatch);
    }
    let lifts = data.lifts().ok_or(CubeError::MissingLifts)?;
    let lifted = lift_zeta(p, zeta)?;
    let base: Vec<(usize, i64)> = lifted
        .points()
        .iter()
        .map(|q| {
            let c = q.coords();
            let below = LatticePoint::new(c[..c.len() - 1].to_vec());
            (
                p.index_of(&below).expect("lift projects into the base"),
                c[c.len() - 1],
            )
        })
        .collect();
    let dim = p.dim();
    let lift_step = |e: &[i64], v: i64| -> Vec<i64> {
        let mut s = e.to_vec();
        s.push(v);
        s
    };
    let vertical = |n: i64| -> Vec<Vec<i64>> {
        (0..n)
            .map(|_| {
                let mut s = vec![0i64; dim];
                s.push(1);
                s
            })
            .collect()
    };
    let mut upper = BTreeMap::new();
    for u in 0..lifted.len() {
        for v in (u + 1)..lifted.len() {
            let (i, a) = base[u];
            let (j, b) = base[v];
            let hj = zeta.floor(j);
            let mut steps: Vec<Vec<i64>> = Vec::new();
            if i == j {
                steps.extend(vertical(b - a));
            } else {
                let e = data.steps(i, j).ok_or(CubeError::MissingLifts)?;
                if hj > a {
                    let g: Vec<i64> = lifts
                        .get(&(i, j))
                        .ok_or(CubeError::MissingLifts)?
                        .iter()
                        .map(|x| -x)
                        .collect();
                    let slack = a - zeta.floor(i);
                    let mut acc = 0i64;
                    let mut reached = false;
                    for (l, el) in e.iter().enumerate() {
                        acc += g[l];
                        let up = if reached {
                            g[l]
                        } else if acc >= slack {
                            reached = true;
                            acc - slack
                        } else {
                            0
                        };
                        steps.push(lift_step(el, up));
                    }
                    steps.extend(vertical(b - hj));
                } else if i < j {
                    steps.extend(e.iter().map(|el| lift_step(el, 0)));
                    steps.extend(vertical(b - a));
                } else {
                    let last = e.len() - 1;
                    steps.extend(
                        e.iter()
                            .enumerate()
                            .map(|(l, el)| lift_step(el, i64::from(l == last))),
                    );
                    steps.extend(vertical(b - a - 1));
                }
            }
            upper.insert((u, v), steps);
        }
    }
    let order = MonomialOrder::Zeta {
        base: Box::new(data.order().clone()),
        projection: base.iter().map(|(i, _)| *i).collect(),
        base_len: p.len(),
    };
    Ok((
        lifted.clone(),
        CubeGenData::from_pairs(lifted.points().to_vec(), upper, order),
    ))
}

/// Lifts `data` along a profile depending on coordinate `coord` only,
/// computing the lift integers first.
pub fn lift_along(
    data: &CubeGenData,
    p: &LatticePolytope,
    zeta: &ZetaFunction,
    coord: usize,
) -> Result<(LatticePolytope, CubeGenData), CubeError> {
    let lifts = f_from_convex(data, zeta, coord)?;
    build_zeta_data(&data.clone().with_lifts(lifts), p, zeta)
}

/// The box `prod [0, d_i]` with data built by lifting constant profiles.
pub fn box_data(dims: &[i64]) -> Result<(LatticePolytope, CubeGenData), CubeError> {
    let (mut p, mut data) = segment_data(dims[0]);
    for d in &dims[1..] {
        let zeta = ZetaFunction::from_fn(&p, |_| *d)?;
        (p, data) = lift_along(&data, &p, &zeta, 0)?;
    }
    Ok((p, data))
}

/// The simplex `P_{n,d}` with data built by lifting `d - x_last`.
pub fn simplex_data(n: usize, d: i64) -> Result<(LatticePolytope, CubeGenData), CubeError> {
    let (mut p, mut data) = segment_data(d);
    for _ in 1..n {
        let last = p.dim() - 1;
        let zeta = ZetaFunction::from_fn(&p, |q| d - q.coords()[last])?;
        (p, data) = lift_along(&data, &p, &zeta, last)?;
    }
    Ok((p, data))
}
