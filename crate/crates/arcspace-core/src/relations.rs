//! Nilpotent relation series: alternating sums of products of a derived arc
//! with a plain arc over the vertices of a unit cube, and their images along
//! cube generating data.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_integer::binomial;
use thiserror::Error;

use crate::arcjets::{JetExpander, JetPoly, JetProduct};
use crate::cubedata::{CubeGenData, MonomialOrder};
use crate::exactpoly::{rat, Family, Monomial, Poly, VarId};
use crate::lattice::{LatticePoint, LatticePolytope};
use crate::toricring::ToricContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("cube dimension must be at least 2, got {0}")]
    CubeDimension(u32),
    #[error("derivative level {level} must be below {bound}")]
    Level { level: u32, bound: u32 },
    #[error("pair ({0}, {1}) has gamma 0; no relation exists")]
    NoRelation(usize, usize),
    #[error("pair ({0}, {1}) has no step vectors")]
    MissingPair(usize, usize),
    #[error("point {0} is not in the polytope")]
    NotInPolytope(LatticePoint),
    #[error("term {0} is not strictly below the leading term")]
    NotInitial(String),
}

/// `sum c * d^k X_left(s) * X_right(s)` with a distinguished leading pair.
///
/// Terms are keyed by `(left, right)`; when `k = 0` the key is the sorted pair,
/// so equal products merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSeries {
    head: (LatticePoint, LatticePoint),
    level: u32,
    terms: BTreeMap<(LatticePoint, LatticePoint), i64>,
}

impl RelationSeries {
    fn build<I>(head: (LatticePoint, LatticePoint), level: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticePoint, LatticePoint, i64)>,
    {
        let mut out = BTreeMap::new();
        for (l, r, c) in terms {
            let key = if level == 0 && r < l { (r, l) } else { (l, r) };
            *out.entry(key).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        Self {
            head,
            level,
            terms: out,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The pair `(alpha, beta)` whose product `d^k X_alpha X_beta` leads.
    pub fn head(&self) -> &(LatticePoint, LatticePoint) {
        &self.head
    }

    pub fn terms(&self) -> &BTreeMap<(LatticePoint, LatticePoint), i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn indices(&self, p: &LatticePolytope) -> Result<Vec<(usize, usize, i64)>, RelationError> {
        self.terms
            .iter()
            .map(|((l, r), c)| {
                let li = p
                    .index_of(l)
                    .ok_or_else(|| RelationError::NotInPolytope(l.clone()))?;
                let ri = p
                    .index_of(r)
                    .ok_or_else(|| RelationError::NotInPolytope(r.clone()))?;
                Ok((li, ri, *c))
            })
            .collect()
    }
}

impl fmt::Display for RelationSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let derived = |p: &LatticePoint| match self.level {
            0 => format!("Y{}", p),
            1 => format!("dY{}", p),
            k => format!("d^{}Y{}", k, p),
        };
        for (n, ((l, r), c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            match (n, sign) {
                (0, "+") => {}
                (0, _) => write!(f, "-")?,
                _ => write!(f, " {} ", sign)?,
            }
            if mag != 1 {
                write!(f, "{}*", mag)?;
            }
            write!(f, "{}*Y{}", derived(l), r)?;
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn subset_sum(steps: &[Vec<i64>], picks: impl Iterator<Item = usize>, dim: usize) -> Vec<i64> {
    let mut s = vec![0i64; dim];
    for l in picks {
        for (c, x) in steps[l].iter().enumerate() {
            s[c] += x;
        }
    }
    s
}

/// The alternating sum over subsets `S` of steps `2..=len` of
/// `(-1)^|S| d^k X_{alpha + S} X_{beta - S}`.
fn alternating(
    alpha: &LatticePoint,
    beta: &LatticePoint,
    steps: &[Vec<i64>],
    level: u32,
    sign: i64,
) -> RelationSeries {
    let dim = alpha.dim();
    let tail = steps.len() - 1;
    let terms = (0u64..(1 << tail)).map(|mask| {
        let picks = (0..tail).filter(|b| mask >> b & 1 == 1).map(|b| b + 1);
        let s = subset_sum(steps, picks, dim);
        let odd = mask.count_ones() % 2 == 1;
        let c = if odd { -sign } else { sign };
        (alpha.add(&s), beta.sub(&s), c)
    });
    RelationSeries::build((alpha.clone(), beta.clone()), level, terms)
}

/// `W_{l,k} = sum_{I in [2,l]} (-1)^|I| Y_{I+1}(s) d^k Y_{[2,l] - I}(s)` on the
/// vertices of `{0,1}^l`, a vertex written as its indicator vector.
pub fn cube_series(l: u32, k: u32) -> Result<RelationSeries, RelationError> {
    if l < 2 {
        return Err(RelationError::CubeDimension(l));
    }
    if k + 2 > l {
        return Err(RelationError::Level {
            level: k,
            bound: l - 1,
        });
    }
    let n = l as usize;
    let steps: Vec<Vec<i64>> = (0..n)
        .map(|c| (0..n).map(|d| i64::from(c == d)).collect())
        .collect();
    let zero = LatticePoint::new(vec![0; n]);
    let ones = LatticePoint::new(vec![1; n]);
    // The term I = [2,l] is the leading one and carries (-1)^(l-1).
    let sign = if l.is_multiple_of(2) { -1 } else { 1 };
    Ok(alternating(&zero, &ones, &steps, k, sign))
}

/// The image of `W_{gamma+1,k}` along the cube embedding of the pair `(i, j)`,
/// normalized so that `d^k X_i X_j` has coefficient one.
pub fn pushforward(
    data: &CubeGenData,
    i: usize,
    j: usize,
    k: u32,
) -> Result<RelationSeries, RelationError> {
    let gamma = data.gamma(i, j);
    if gamma == 0 {
        return Err(RelationError::NoRelation(i, j));
    }
    if k >= gamma {
        return Err(RelationError::Level {
            level: k,
            bound: gamma,
        });
    }
    let steps = data.steps(i, j).ok_or(RelationError::MissingPair(i, j))?;
    let pts = data.points();
    Ok(alternating(&pts[i], &pts[j], steps, k, 1))
}

/// `sum_i (-1)^i C(beta - alpha - 1, i) d^k Y_{alpha+i} Y_{beta-i}` on a
/// segment.
pub fn veronese_series(alpha: i64, beta: i64, k: u32) -> Result<RelationSeries, RelationError> {
    let gamma = beta - alpha - 1;
    if gamma <= 0 {
        return Err(RelationError::NoRelation(alpha as usize, beta as usize));
    }
    if i64::from(k) >= gamma {
        return Err(RelationError::Level {
            level: k,
            bound: gamma as u32,
        });
    }
    let pt = |x: i64| LatticePoint::new(vec![x]);
    let terms = (0..=gamma).map(|i| {
        let c = binomial(gamma, i);
        (pt(alpha + i), pt(beta - i), if i % 2 == 0 { c } else { -c })
    });
    Ok(RelationSeries::build((pt(alpha), pt(beta)), k, terms))
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).map(|t| i64::from(n - t)).product()
}

/// The `s^c` coefficient as a polynomial in X-jet variables indexed by the
/// points of `p`.
pub fn coefficient(
    rs: &RelationSeries,
    p: &LatticePolytope,
    c: u32,
) -> Result<Poly, RelationError> {
    let k = rs.level;
    let mut out = Poly::zero();
    for (li, ri, coef) in rs.indices(p)? {
        for a in 0..=c {
            let m = Monomial::from_factors([
                (VarId::new(Family::X(li as u32), a + k), 1),
                (VarId::new(Family::X(ri as u32), c - a), 1),
            ]);
            out.add_term(m, rat(coef * falling(a + k, k)));
        }
    }
    Ok(out)
}

/// Whether every `s`-coefficient up to order `n` vanishes after expansion
/// into `z, w` jets.
pub fn verify_identically_zero(
    ctx: &ToricContext,
    rs: &RelationSeries,
    n: u32,
) -> Result<bool, RelationError> {
    let k = rs.level;
    let terms = rs.indices(ctx.polytope())?;
    let m = ctx.m();
    let expander = JetExpander::new(ctx, n + k);
    for c in 0..=n {
        let mut acc = JetPoly::new();
        for (li, ri, coef) in &terms {
            for a in 0..=c {
                let mut r = vec![0u32; m];
                let mut jets = vec![Vec::new(); m];
                r[*li] += 1;
                jets[*li].push(a + k);
                r[*ri] += 1;
                jets[*ri].push(c - a);
                let w = i128::from(*coef) * i128::from(falling(a + k, k));
                for (mono, x) in expander.expand(&JetProduct { r, jets }) {
                    *acc.entry(mono).or_insert(0) += w * x;
                }
            }
        }
        if acc.values().any(|x| *x != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The leading pair of `rs`, after checking that every other term's pair is
/// strictly smaller in `order`.
pub fn initial_part(
    rs: &RelationSeries,
    order: &MonomialOrder,
    p: &LatticePolytope,
) -> Result<(LatticePoint, LatticePoint), RelationError> {
    let m = p.len();
    let vector = |a: &LatticePoint, b: &LatticePoint| -> Result<Vec<u32>, RelationError> {
        let mut r = vec![0u32; m];
        for q in [a, b] {
            r[p.index_of(q)
                .ok_or_else(|| RelationError::NotInPolytope(q.clone()))?] += 1;
        }
        Ok(r)
    };
    let (ha, hb) = &rs.head;
    let lead = vector(ha, hb)?;
    for (l, r) in rs.terms.keys() {
        let v = vector(l, r)?;
        if v == lead {
            continue;
        }
        if order.compare(&lead, &v) != Ok(Ordering::Greater) {
            return Err(RelationError::NotInitial(format!("Y{}*Y{}", l, r)));
        }
    }
    Ok(rs.head.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubedata::{box_data, planar_data, segment_data};
    use crate::exactpoly::apply_dk;
    use crate::lattice::PointOrder;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    fn seg_ctx(len: i64) -> (ToricContext, CubeGenData) {
        let (p, data) = segment_data(len);
        (ToricContext::new(p).unwrap(), data)
    }

    #[test]
    fn cube_series_shapes() {
        let w = cube_series(2, 0).unwrap();
        let mut want = BTreeMap::new();
        want.insert((pt(&[0, 1]), pt(&[1, 0])), 1);
        want.insert((pt(&[0, 0]), pt(&[1, 1])), -1);
        assert_eq!(w.terms(), &want);
        assert_eq!(cube_series(3, 0).unwrap().len(), 4);
        for l in 2..=5 {
            for k in 1..=(l - 2) {
                assert_eq!(cube_series(l, k).unwrap().len(), 1 << (l - 1));
            }
        }
        assert!(cube_series(1, 0).is_err());
        assert!(cube_series(3, 2).is_err());
    }

    #[test]
    fn segment_pushforwards() {
        let (_, d3) = seg_ctx(3);
        let r = pushforward(&d3, 0, 3, 0).unwrap();
        let mut want = BTreeMap::new();
        want.insert((pt(&[0]), pt(&[3])), 1);
        want.insert((pt(&[1]), pt(&[2])), -1);
        assert_eq!(r.terms(), &want);
        assert_eq!(format!("{}", r), "Y(0)*Y(3) - Y(1)*Y(2)");

        let r = pushforward(&d3, 0, 3, 1).unwrap();
        assert_eq!(format!("{}", r), "dY(0)*Y(3) - 2*dY(1)*Y(2) + dY(2)*Y(1)");

        let (_, d2) = seg_ctx(2);
        let r = pushforward(&d2, 0, 2, 0).unwrap();
        assert_eq!(format!("{}", r), "Y(0)*Y(2) - Y(1)*Y(1)");
        assert_eq!(
            pushforward(&d2, 0, 1, 0),
            Err(RelationError::NoRelation(0, 1))
        );
        assert!(pushforward(&d2, 0, 2, 1).is_err());
    }

    #[test]
    fn veronese_form_agrees_with_pushforward() {
        for len in 2..=5i64 {
            let (_, data) = seg_ctx(len);
            for a in 0..=len {
                for b in (a + 2)..=len {
                    for k in 0..(b - a - 1) as u32 {
                        let push = pushforward(&data, a as usize, b as usize, k).unwrap();
                        assert_eq!(push, veronese_series(a, b, k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn relations_vanish() {
        let (c2, d2) = seg_ctx(2);
        assert_eq!(
            verify_identically_zero(&c2, &pushforward(&d2, 0, 2, 0).unwrap(), 6),
            Ok(true)
        );
        let (c3, d3) = seg_ctx(3);
        assert_eq!(
            verify_identically_zero(&c3, &pushforward(&d3, 0, 3, 1).unwrap(), 6),
            Ok(true)
        );
        let (cube, _) = box_data(&[1, 1, 1]).unwrap();
        let cube = ToricContext::new(cube).unwrap();
        assert_eq!(
            verify_identically_zero(&cube, &cube_series(3, 1).unwrap(), 6),
            Ok(true)
        );
        assert_eq!(
            verify_identically_zero(&cube, &cube_series(3, 0).unwrap(), 6),
            Ok(true)
        );
    }

    #[test]
    fn a_non_relation_is_detected() {
        let (c3, _) = seg_ctx(3);
        let bogus = veronese_series(0, 3, 2);
        assert!(bogus.is_err());
        // Derivative level gamma is outside the admissible range and fails.
        let too_deep = RelationSeries::build(
            (pt(&[0]), pt(&[2])),
            1,
            [(pt(&[0]), pt(&[2]), 1), (pt(&[1]), pt(&[1]), -1)],
        );
        assert_eq!(verify_identically_zero(&c3, &too_deep, 3), Ok(false));
    }

    #[test]
    fn derivations_preserve_vanishing() {
        let (c3, d3) = seg_ctx(3);
        let rs = pushforward(&d3, 0, 3, 1).unwrap();
        let ex = JetExpander::new(&c3, 8);
        for c in 0..=4 {
            let coef = coefficient(&rs, c3.polytope(), c).unwrap();
            assert!(ex.expand_x_poly(&coef).unwrap().is_zero());
            for k in [-1i64, 0, 1, 2] {
                let moved = apply_dk(&coef, k).unwrap();
                assert!(ex.expand_x_poly(&moved).unwrap().is_zero(), "c={c} k={k}");
            }
        }
    }

    #[test]
    fn coefficient_term_counts() {
        let (c2, d2) = seg_ctx(2);
        let rs = pushforward(&d2, 0, 2, 0).unwrap();
        // Y0 Y2 contributes c + 1 jet monomials, Y1 Y1 contributes c / 2 + 1.
        for c in 0..6 {
            let coef = coefficient(&rs, c2.polytope(), c).unwrap();
            assert_eq!(coef.len(), (c as usize + 1) + (c as usize / 2 + 1));
        }
    }

    #[test]
    fn initial_parts() {
        let (c3, d3) = seg_ctx(3);
        let rs = pushforward(&d3, 0, 3, 1).unwrap();
        assert_eq!(
            initial_part(&rs, &MonomialOrder::Segment, c3.polytope()),
            Ok((pt(&[0]), pt(&[3])))
        );
        let single = RelationSeries::build((pt(&[1]), pt(&[2])), 0, [(pt(&[1]), pt(&[2]), 1)]);
        assert_eq!(
            initial_part(&single, &MonomialOrder::Segment, c3.polytope()),
            Ok((pt(&[1]), pt(&[2])))
        );
        let sq = LatticePolytope::from_vertices(
            vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])],
            PointOrder::Paper2d,
        )
        .unwrap();
        let data = planar_data(&sq).unwrap();
        let i = sq.index_of(&pt(&[0, 0])).unwrap();
        let j = sq.index_of(&pt(&[1, 1])).unwrap();
        let det = pushforward(&data, i, j, 0).unwrap();
        assert_eq!(
            initial_part(&det, data.order(), &sq),
            Ok((pt(&[0, 0]), pt(&[1, 1])))
        );
        let reversed = RelationSeries::build(
            (pt(&[1, 0]), pt(&[0, 1])),
            0,
            det.terms()
                .iter()
                .map(|((l, r), c)| (l.clone(), r.clone(), *c)),
        );
        assert!(initial_part(&reversed, data.order(), &sq).is_err());
    }
}
