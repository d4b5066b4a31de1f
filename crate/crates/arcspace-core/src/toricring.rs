//! The toric ring of a lattice polytope: generators `Y_a = z^a w`, the
//! monomial map on exponent vectors, graded index sets and binomial
//! generators of the toric ideal at bounded degree.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactpoly::{rat, Family, Monomial, Poly, VarId};
use crate::lattice::{lattice_points, LatticePoint, LatticePolytope};
use crate::linalg::{sparse_row, Echelon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("point {0} has a negative coordinate; generators z^a w need a in N^n")]
    NegativeCoordinate(usize),
    #[error("exponent vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("degree cap must be at least 2, got {0}")]
    DegreeCap(u32),
}

/// A polytope viewed as the generator set of its toric ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricContext {
    polytope: LatticePolytope,
}

impl ToricContext {
    pub fn new(polytope: LatticePolytope) -> Result<Self, ToricError> {
        if let Some(i) = polytope
            .points()
            .iter()
            .position(|p| p.coords().iter().any(|c| *c < 0))
        {
            return Err(ToricError::NegativeCoordinate(i));
        }
        Ok(Self { polytope })
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    /// Number of generators (integer points).
    pub fn m(&self) -> usize {
        self.polytope.len()
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.polytope.dim()
    }

    pub fn point(&self, i: usize) -> &LatticePoint {
        &self.polytope.points()[i]
    }

    /// The weight `sum_i r_i a^i` of an exponent vector.
    pub fn weight(&self, r: &[u32]) -> Vec<i64> {
        let mut a = vec![0i64; self.n()];
        for (i, &ri) in r.iter().enumerate() {
            for (c, x) in self.point(i).coords().iter().enumerate() {
                a[c] += i64::from(ri) * x;
            }
        }
        a
    }
}

/// A monomial `z^z w^w`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZwMonomial {
    pub z: Vec<i64>,
    pub w: i64,
}

impl ZwMonomial {
    pub fn mul(&self, other: &ZwMonomial) -> ZwMonomial {
        ZwMonomial {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            w: self.w + other.w,
        }
    }
}

/// `X^r -> z^{sum r_i a^i} w^{sum r_i}`.
pub fn monomial_map(ctx: &ToricContext, r: &[u32]) -> Result<ZwMonomial, ToricError> {
    if r.len() != ctx.m() {
        return Err(ToricError::Length {
            expected: ctx.m(),
            found: r.len(),
        });
    }
    Ok(ZwMonomial {
        z: ctx.weight(r),
        w: r.iter().map(|x| i64::from(*x)).sum(),
    })
}

/// All `r in N^m` with `sum r = total`, in increasing lexicographic order.
pub fn compositions(m: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == m {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(m, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, total, &mut Vec::with_capacity(m), &mut out);
    out
}

/// The set `R(a, L)` of exponent vectors of weight `a` and degree `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RIndexSet {
    pub a_bar: Vec<i64>,
    pub l: u32,
    pub members: Vec<Vec<u32>>,
}

/// Exhaustive enumeration of `R(a, L)`, in increasing lexicographic order.
pub fn enumerate_r(ctx: &ToricContext, a_bar: &[i64], l: u32) -> RIndexSet {
    let members = compositions(ctx.m(), l)
        .into_iter()
        .filter(|r| ctx.weight(r) == a_bar)
        .collect();
    RIndexSet {
        a_bar: a_bar.to_vec(),
        l,
        members,
    }
}

/// Every nonempty `R(a, L)` for a fixed `L`, keyed by weight.
pub fn cells(ctx: &ToricContext, l: u32) -> BTreeMap<Vec<i64>, Vec<Vec<u32>>> {
    let mut out: BTreeMap<Vec<i64>, Vec<Vec<u32>>> = BTreeMap::new();
    for r in compositions(ctx.m(), l) {
        out.entry(ctx.weight(&r)).or_default().push(r);
    }
    out
}

/// A binomial `X^plus - X^minus`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Binomial {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

/// `X^r` in jet-zero variables.
pub fn x_monomial(r: &[u32]) -> Monomial {
    Monomial::from_factors(
        r.iter()
            .enumerate()
            .map(|(i, e)| (VarId::base(Family::X(i as u32)), *e)),
    )
}

impl Binomial {
    pub fn degree(&self) -> u32 {
        self.plus.iter().sum()
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::term(x_monomial(&self.plus), rat(1));
        p.add_term(x_monomial(&self.minus), rat(-1));
        p
    }

    fn shifted(&self, u: &[u32]) -> Binomial {
        let add = |v: &[u32]| v.iter().zip(u).map(|(a, b)| a + b).collect();
        Binomial {
            plus: add(&self.plus),
            minus: add(&self.minus),
        }
    }
}

fn binomial_row(b: &Binomial, column: &BTreeMap<Vec<u32>, usize>) -> Vec<(usize, BigInt)> {
    sparse_row([
        (column[&b.plus], BigInt::from(1)),
        (column[&b.minus], BigInt::from(-1)),
    ])
}

/// Span of the multiples of `gens` inside the cell `(a, L)`.
fn ideal_part(
    ctx: &ToricContext,
    gens: &[Binomial],
    a_bar: &[i64],
    l: u32,
    column: &BTreeMap<Vec<u32>, usize>,
) -> Echelon {
    let mut e = Echelon::new();
    for g in gens {
        let dg = g.degree();
        if dg > l {
            continue;
        }
        let ag = ctx.weight(&g.plus);
        let rest: Vec<i64> = a_bar.iter().zip(&ag).map(|(a, b)| a - b).collect();
        for u in compositions(ctx.m(), l - dg) {
            if ctx.weight(&u) == rest {
                e.insert(binomial_row(&g.shifted(&u), column));
            }
        }
    }
    e
}

/// Binomial generators of the toric ideal up to X-degree `degree_cap`,
/// minimalized degree by degree: a candidate is kept only if it is not in the
/// span of multiples of generators already kept.
pub fn toric_ideal_generators(
    ctx: &ToricContext,
    degree_cap: u32,
) -> Result<Vec<Binomial>, ToricError> {
    if degree_cap < 2 {
        return Err(ToricError::DegreeCap(degree_cap));
    }
    let mut gens: Vec<Binomial> = Vec::new();
    for l in 2..=degree_cap {
        let mut found = Vec::new();
        for (a_bar, mut members) in cells(ctx, l) {
            if members.len() < 2 {
                continue;
            }
            members.sort_by(|a, b| b.cmp(a));
            let column: BTreeMap<Vec<u32>, usize> = members
                .iter()
                .enumerate()
                .map(|(i, r)| (r.clone(), i))
                .collect();
            let mut e = ideal_part(ctx, &gens, &a_bar, l, &column);
            for other in &members[1..] {
                let b = Binomial {
                    plus: members[0].clone(),
                    minus: other.clone(),
                };
                if e.insert(binomial_row(&b, &column)) {
                    found.push(b);
                }
            }
        }
        gens.extend(found);
    }
    Ok(gens)
}

/// Checks that `k[X]/<gens>` has the Hilbert function of the toric ring in
/// every degree up to `degree_cap`: one dimension per integer point of `kP`.
pub fn hilbert_check(ctx: &ToricContext, gens: &[Binomial], degree_cap: u32) -> bool {
    for l in 1..=degree_cap {
        let cs = cells(ctx, l);
        let scaled: Vec<LatticePoint> = ctx
            .polytope()
            .vertices()
            .iter()
            .map(|v| v.scale(i64::from(l)))
            .collect();
        match lattice_points(&scaled, ctx.polytope().order()) {
            Ok(pts) if pts.len() == cs.len() => {}
            _ => return false,
        }
        for (a_bar, members) in &cs {
            let column: BTreeMap<Vec<u32>, usize> = members
                .iter()
                .enumerate()
                .map(|(i, r)| (r.clone(), i))
                .collect();
            let e = ideal_part(ctx, gens, a_bar, l, &column);
            if members.len() - e.rank() != 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PointOrder;

    fn ctx_of(vs: &[&[i64]], order: PointOrder) -> ToricContext {
        let p = LatticePolytope::from_vertices(
            vs.iter().map(|v| LatticePoint::new(v.to_vec())).collect(),
            order,
        )
        .unwrap();
        ToricContext::new(p).unwrap()
    }

    fn square() -> ToricContext {
        ctx_of(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], PointOrder::Zeta)
    }

    #[test]
    fn monomial_map_examples() {
        let tri = ctx_of(&[&[0, 0], &[1, 0], &[1, 1]], PointOrder::GradedLex);
        assert_eq!(
            monomial_map(&tri, &[0, 0, 1]).unwrap(),
            ZwMonomial {
                z: vec![1, 1],
                w: 1
            }
        );
        assert_eq!(
            monomial_map(&tri, &[1, 0, 0]).unwrap(),
            ZwMonomial {
                z: vec![0, 0],
                w: 1
            }
        );
        let seg = ToricContext::new(LatticePolytope::segment(2)).unwrap();
        assert_eq!(
            monomial_map(&seg, &[1, 0, 1]).unwrap(),
            ZwMonomial { z: vec![2], w: 2 }
        );
        assert!(monomial_map(&seg, &[1, 0]).is_err());
    }

    #[test]
    fn r_sets() {
        let seg = ToricContext::new(LatticePolytope::segment(2)).unwrap();
        assert_eq!(
            enumerate_r(&seg, &[2], 2).members,
            vec![vec![0, 2, 0], vec![1, 0, 1]]
        );
        assert_eq!(enumerate_r(&seg, &[0], 0).members, vec![vec![0, 0, 0]]);
        let four = ctx_of(&[&[0, 0], &[1, 2], &[2, 1]], PointOrder::GradedLex);
        let idx: Vec<usize> = [[0, 0], [1, 1], [2, 1], [1, 2]]
            .iter()
            .map(|c| {
                four.polytope()
                    .index_of(&LatticePoint::new(c.to_vec()))
                    .unwrap()
            })
            .collect();
        let mut r = vec![0u32; 4];
        for i in idx {
            r[i] = 1;
        }
        assert!(enumerate_r(&four, &[4, 4], 4).members.contains(&r));
    }

    #[test]
    fn generators_of_small_rings() {
        let seg = ToricContext::new(LatticePolytope::segment(2)).unwrap();
        let g = toric_ideal_generators(&seg, 4).unwrap();
        assert_eq!(
            g,
            vec![Binomial {
                plus: vec![1, 0, 1],
                minus: vec![0, 2, 0]
            }]
        );
        let sq = square();
        let g = toric_ideal_generators(&sq, 4).unwrap();
        assert_eq!(
            g,
            vec![Binomial {
                plus: vec![1, 0, 0, 1],
                minus: vec![0, 1, 1, 0]
            }]
        );
        let tri = ctx_of(&[&[0, 0], &[1, 0], &[1, 1]], PointOrder::GradedLex);
        assert!(toric_ideal_generators(&tri, 4).unwrap().is_empty());
        assert!(toric_ideal_generators(&tri, 1).is_err());
    }

    #[test]
    fn twisted_cubic_has_three_quadrics() {
        let seg = ToricContext::new(LatticePolytope::segment(3)).unwrap();
        let g = toric_ideal_generators(&seg, 4).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|b| b.degree() == 2));
        assert!(hilbert_check(&seg, &g, 4));
        assert!(!hilbert_check(&seg, &g[..2], 3));
    }

    #[test]
    fn generators_vanish_under_the_monomial_map() {
        let seg = ToricContext::new(LatticePolytope::segment(4)).unwrap();
        for b in toric_ideal_generators(&seg, 3).unwrap() {
            assert_eq!(
                monomial_map(&seg, &b.plus).unwrap(),
                monomial_map(&seg, &b.minus).unwrap()
            );
        }
    }
}
