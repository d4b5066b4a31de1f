//! Sparse multivariate polynomials over exact rationals in jet-indexed
//! variables, truncated series in `s`, and the two derivation actions on arc
//! rings.
//!
//! A variable is a family (which generator it belongs to) plus a jet order
//! `j`, written `X^{(j)}`. Base variables of a finite ring are the jet-zero
//! variables. Monomials are kept as sorted `(variable, exponent)` lists so that
//! iteration and printing are deterministic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficients.
pub type Rational = BigRational;

/// Builds an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("series truncated at order {have}, coefficient {need} requested")]
    Truncation { need: usize, have: usize },
    #[error("no series assigned to variable {0}")]
    MissingAssignment(String),
    #[error("d_k is defined for k >= -1, got {0}")]
    DerivationIndex(i64),
}

/// The generator family of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Torus coordinate `z_i`.
    Z(u32),
    /// The homogenising coordinate `w`.
    W,
    /// Toric generator attached to a lattice point, by point index.
    X(u32),
    /// Target variable `t` of a group and an inner index.
    T(u32, u32),
    /// Source variable `s` of a group.
    S(u32),
    /// Auxiliary variable `u_i`.
    U(u32),
}

/// A variable `family^{(jet)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub family: Family,
    pub jet: u32,
}

impl VarId {
    pub const fn new(family: Family, jet: u32) -> Self {
        Self { family, jet }
    }

    /// The jet-zero variable, used as the base variable of a finite ring.
    pub const fn base(family: Family) -> Self {
        Self { family, jet: 0 }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Z(i) => write!(f, "z{}", i),
            Family::W => write!(f, "w"),
            Family::X(p) => write!(f, "X{}", p),
            Family::T(g, i) => write!(f, "t{}_{}", g, i),
            Family::S(g) => write!(f, "s{}", g),
            Family::U(i) => write!(f, "u{}", i),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{{({})}}", self.family, self.jet)
    }
}

/// A monomial: sorted variables with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Self(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors<I: IntoIterator<Item = (VarId, u32)>>(factors: I) -> Self {
        let mut acc: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *acc.entry(v).or_insert(0) += e;
            }
        }
        Self(acc.into_iter().collect())
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Sum of jet orders with multiplicity (the `grad` grading).
    pub fn q_degree(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.jet * e).sum()
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    /// Replaces one factor `v` by `w` (exponent of `v` must be positive).
    fn swap_one(&self, v: &VarId, w: VarId) -> Monomial {
        let mut factors: Vec<(VarId, u32)> = self.0.clone();
        if let Ok(i) = factors.binary_search_by(|(x, _)| x.cmp(v)) {
            factors[i].1 -= 1;
        }
        factors.push((w, 1));
        Monomial::from_factors(factors)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "({})^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients. No zero coefficient is ever
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// The common `grad` degree of all terms, if homogeneous.
    pub fn q_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::q_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Ring homomorphism fixing constants: each variable is sent to the
    /// polynomial returned by `image` (or kept when `None`).
    pub fn substitute<F: FnMut(&VarId) -> Option<Poly>>(&self, mut image: F) -> Poly {
        let mut cache: BTreeMap<VarId, Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in m.factors() {
                let img = cache
                    .entry(*v)
                    .or_insert_with(|| image(v).unwrap_or_else(|| Poly::var(*v)))
                    .clone();
                acc = &acc * &img.pow(*e);
            }
            out = &out + &acc;
        }
        out
    }

    /// Applies the derivation determined on generators by
    /// `v -> coefficient * image_var` (`None` meaning `v -> 0`).
    pub fn derive<F: Fn(&VarId) -> Option<(Rational, VarId)>>(&self, on_var: F) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (v, e) in m.factors() {
                if let Some((k, w)) = on_var(v) {
                    let coeff = c * &k * rat(i64::from(*e));
                    out.add_term(m.swap_one(v, w), coeff);
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&rat(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A power series in `s` truncated after `s^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Poly>,
}

impl Series {
    /// `sum_j c_j s^j` for the given coefficients.
    pub fn new(coeffs: Vec<Poly>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series keeps at least the constant term"
        );
        Self { coeffs }
    }

    /// The generic arc `X(s) = sum_{j <= order} X^{(j)} s^j` of a family.
    pub fn arc(family: Family, order: usize) -> Self {
        Self::new(
            (0..=order)
                .map(|j| Poly::var(VarId::new(family, j as u32)))
                .collect(),
        )
    }

    pub fn constant(p: Poly, order: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); order + 1];
        coeffs[0] = p;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> Option<&Poly> {
        self.coeffs.get(d)
    }

    pub fn truncate(&self, order: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Poly::zero());
        Series { coeffs }
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Poly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Series { coeffs }
    }

    /// `d^k/ds^k` of the series; the order drops by `k`.
    pub fn derivative(&self, k: usize) -> Series {
        if k > self.order() {
            return Series::constant(Poly::zero(), 0);
        }
        let coeffs = (k..=self.order())
            .map(|j| {
                let falling: i64 = (0..k).map(|t| (j - t) as i64).product();
                self.coeffs[j].scale(&rat(falling))
            })
            .collect();
        Series { coeffs }
    }
}

/// Coefficient of `s^d` in `f` evaluated at the assigned series.
///
/// Every variable of `f` must have an assignment truncated at order `>= d`.
pub fn series_coefficient(
    f: &Poly,
    assignments: &BTreeMap<VarId, Series>,
    d: usize,
) -> Result<Poly, PolyError> {
    for s in assignments.values() {
        if s.order() < d {
            return Err(PolyError::Truncation {
                need: d,
                have: s.order(),
            });
        }
    }
    let mut out = Poly::zero();
    for (m, c) in f.terms() {
        let mut acc = Series::constant(Poly::constant(c.clone()), d);
        for (v, e) in m.factors() {
            let s = assignments
                .get(v)
                .ok_or_else(|| PolyError::MissingAssignment(format!("{}", v)))?;
            let s = s.truncate(d);
            for _ in 0..*e {
                acc = acc.mul(&s);
            }
        }
        out = &out + &acc.coeffs[d];
    }
    Ok(out)
}

/// Assigns the generic arc of its family to every jet-zero variable of `f`.
pub fn generic_arcs(f: &Poly, order: usize) -> BTreeMap<VarId, Series> {
    let mut out = BTreeMap::new();
    for (m, _) in f.terms() {
        for (v, _) in m.factors() {
            out.entry(*v)
                .or_insert_with(|| Series::arc(v.family, order));
        }
    }
    out
}

/// The `s^d` coefficient of `f` at generic arcs: the jet relation `f^{(d)}`.
pub fn arc_coefficient(f: &Poly, d: usize) -> Poly {
    series_coefficient(f, &generic_arcs(f, d), d).expect("generic arcs cover f")
}

/// The derivation `d_k` with `d_k(r^{(i)}) = (i - k) r^{(i - k)}`, `k >= -1`.
pub fn apply_dk(p: &Poly, k: i64) -> Result<Poly, PolyError> {
    if k < -1 {
        return Err(PolyError::DerivationIndex(k));
    }
    Ok(p.derive(|v| {
        let target = i64::from(v.jet) - k;
        (target >= 0).then(|| (rat(target), VarId::new(v.family, target as u32)))
    }))
}

/// The current-algebra derivation `h^{(k)}(Y^{(j)}) = weight(Y) Y^{(j - k)}`.
pub fn apply_h_current<F: Fn(&Family) -> i64>(p: &Poly, k: u32, weight: F) -> Poly {
    p.derive(|v| (v.jet >= k).then(|| (rat(weight(&v.family)), VarId::new(v.family, v.jet - k))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(p: u32, j: u32) -> Poly {
        Poly::var(VarId::new(Family::X(p), j))
    }

    fn base(p: u32) -> Poly {
        x(p, 0)
    }

    #[test]
    fn veronese_relation_order_zero() {
        let f = &(&base(1) * &base(3)) - &base(2).pow(2);
        assert_eq!(arc_coefficient(&f, 0), f);
    }

    #[test]
    fn product_rule_order_one() {
        let f = &base(0) * &base(1);
        let expect = &(&x(0, 0) * &x(1, 1)) + &(&x(0, 1) * &x(1, 0));
        assert_eq!(arc_coefficient(&f, 1), expect);
    }

    #[test]
    fn determinant_relation_order_k() {
        let f = &(&base(0) * &base(3)) - &(&base(1) * &base(2));
        for k in 0..4u32 {
            let mut expect = Poly::zero();
            for i in 0..=k {
                expect = &expect + &(&x(0, i) * &x(3, k - i));
                expect = &expect - &(&x(1, i) * &x(2, k - i));
            }
            assert_eq!(arc_coefficient(&f, k as usize), expect);
        }
    }

    #[test]
    fn truncation_is_reported() {
        let f = base(0);
        let mut a = BTreeMap::new();
        a.insert(VarId::base(Family::X(0)), Series::arc(Family::X(0), 1));
        assert_eq!(
            series_coefficient(&f, &a, 2),
            Err(PolyError::Truncation { need: 2, have: 1 })
        );
    }

    #[test]
    fn dk_examples() {
        for i in 0..5 {
            assert_eq!(
                apply_dk(&x(0, i), -1).unwrap(),
                x(0, i + 1).scale(&rat(i64::from(i) + 1))
            );
        }
        assert!(apply_dk(&x(0, 1), 2).unwrap().is_zero());
        let p = &x(0, 1) * &x(1, 2);
        assert_eq!(apply_dk(&p, 0).unwrap(), p.scale(&rat(3)));
        assert_eq!(apply_dk(&p, -2), Err(PolyError::DerivationIndex(-2)));
    }

    #[test]
    fn h_current_examples() {
        let p = &(&x(0, 2) * &x(0, 0)) + &x(1, 3);
        let euler = apply_h_current(&p, 0, |_| 1);
        assert_eq!(euler, &(&x(0, 2) * &x(0, 0)).scale(&rat(2)) + &x(1, 3));
        assert!(apply_h_current(&x(0, 0), 1, |_| 1).is_zero());
        let y = &x(0, 2) * &x(0, 0);
        assert_eq!(apply_h_current(&y, 1, |_| 1), &x(0, 1) * &x(0, 0));
    }

    #[test]
    fn display_uses_jet_superscripts() {
        let p = &x(1, 0) * &x(3, 2);
        assert_eq!(format!("{}", p), "X1^{(0)}*X3^{(2)}");
        let q = &x(2, 0).pow(2).scale(&rat(-1)) + &Poly::int(3);
        assert_eq!(format!("{}", q), "3 - (X2^{(0)})^2");
    }

    #[test]
    fn series_derivative_matches_falling_factorials() {
        let s = Series::arc(Family::X(0), 4).derivative(2);
        assert_eq!(s.order(), 2);
        assert_eq!(s.coeff(1).unwrap(), &x(0, 3).scale(&rat(6)));
    }
}
