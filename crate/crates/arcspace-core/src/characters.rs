//! Truncated q-series, closed-form graded characters of reduced arc ring
//! components, and character-level freeness checks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cubedata::{segment_data, simplex_data, CubeError, CubeGenData};
use crate::lattice::LatticePoint;
use crate::toricring::compositions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("parts sum to {parts}, expected {total}")]
    PartsMismatch { total: u32, parts: u32 },
    #[error("quotient is not a polynomial with nonnegative integer coefficients")]
    NotPolynomial,
    #[error("series with constant term zero is not invertible")]
    NotInvertible,
    #[error("dimension and level lists differ in length or contain zero")]
    BadShape,
    #[error(transparent)]
    Cube(#[from] CubeError),
}

/// A power series in `q` known exactly up to and including `q^trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn zero(trunc: u32) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); trunc as usize + 1],
        }
    }

    pub fn one(trunc: u32) -> Self {
        Self::monomial(0, trunc)
    }

    /// `q^e`, zero when `e > trunc`.
    pub fn monomial(e: u32, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        if e <= trunc {
            s.coeffs[e as usize] = BigRational::one();
        }
        s
    }

    pub fn from_ints(coeffs: &[i64], trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        for (k, c) in coeffs.iter().enumerate().take(trunc as usize + 1) {
            s.coeffs[k] = BigRational::from_integer(BigInt::from(*c));
        }
        s
    }

    pub fn trunc(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: u32) -> BigRational {
        self.coeffs
            .get(d as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficients as nonnegative integers, if they all are.
    pub fn nonnegative_integers(&self) -> Option<Vec<u64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() && !c.is_negative() {
                    c.to_integer().to_u64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let t = self.trunc().min(other.trunc());
        QSeries {
            coeffs: (0..=t as usize)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let t = self.trunc().min(other.trunc()) as usize;
        let mut out = vec![BigRational::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(t + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(t + 1 - i) {
                out[i + j] += a * b;
            }
        }
        QSeries { coeffs: out }
    }

    pub fn inverse(&self) -> Result<QSeries, CharacterError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(CharacterError::NotInvertible);
        }
        let t = self.coeffs.len();
        let mut out = vec![BigRational::zero(); t];
        out[0] = c0.recip();
        for k in 1..t {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -acc * &out[0];
        }
        Ok(QSeries { coeffs: out })
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries, CharacterError> {
        Ok(self.mul(&other.inverse()?))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || k == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}

/// `(1 - q)(1 - q^2)...(1 - q^L)`.
pub fn q_pochhammer(l: u32, trunc: u32) -> QSeries {
    (1..=l).fold(QSeries::one(trunc), |acc, k| {
        let mut factor = QSeries::one(trunc);
        if k <= trunc {
            factor.coeffs[k as usize] = BigRational::from_integer(BigInt::from(-1));
        }
        acc.mul(&factor)
    })
}

/// `[n]_q! / prod [n_i]_q!`, a polynomial with nonnegative coefficients.
pub fn q_multinomial(n: u32, parts: &[u32], trunc: u32) -> Result<QSeries, CharacterError> {
    let total: u32 = parts.iter().sum();
    if total != n {
        return Err(CharacterError::PartsMismatch {
            total: n,
            parts: total,
        });
    }
    // The quotient has degree at most n(n-1)/2; compute it exactly first.
    let full = n * n.saturating_sub(1) / 2;
    let num = q_pochhammer(n, full);
    let den = parts.iter().fold(QSeries::one(full), |acc, k| {
        acc.mul(&q_pochhammer(*k, full))
    });
    let quotient = num.div(&den)?;
    if quotient.nonnegative_integers().is_none() {
        return Err(CharacterError::NotPolynomial);
    }
    let mut out = QSeries::zero(trunc);
    for k in 0..=trunc.min(full) as usize {
        out.coeffs[k] = quotient.coeffs[k].clone();
    }
    Ok(out)
}

fn quadratic_exponent(r: &[u32], gamma: &[Vec<u32>]) -> u64 {
    let mut e = 0u64;
    for a in 0..r.len() {
        for b in (a + 1)..r.len() {
            e += u64::from(r[a]) * u64::from(r[b]) * u64::from(gamma[a][b]);
        }
    }
    e
}

/// `q^{sum_{a<b} r_a r_b gamma(a,b)} / prod (q)_{r_a}` up to `q^trunc`.
pub fn principal_ideal_series(r: &[u32], gamma: &[Vec<u32>], trunc: u32) -> QSeries {
    let e = quadratic_exponent(r, gamma);
    if e > u64::from(trunc) {
        return QSeries::zero(trunc);
    }
    let mut s = QSeries::monomial(e as u32, trunc);
    for ra in r {
        if *ra > 0 {
            s = s.mul(
                &q_pochhammer(*ra, trunc)
                    .inverse()
                    .expect("constant term one"),
            );
        }
    }
    s
}

/// The `q^d` coefficient of [`principal_ideal_series`].
pub fn principal_ideal_slice_dims(r: &[u32], gamma: &[Vec<u32>], d: u32) -> u64 {
    principal_ideal_series(r, gamma, d)
        .nonnegative_integers()
        .expect("product of geometric series")[d as usize]
}

/// A graded character: coefficients keyed by torus weight and q-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSeries {
    level: u32,
    trunc: u32,
    terms: BTreeMap<(Vec<i64>, u32), u64>,
}

impl CharacterSeries {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<i64>, u32), u64> {
        &self.terms
    }

    pub fn get(&self, weight: &[i64], d: u32) -> u64 {
        self.terms.get(&(weight.to_vec(), d)).copied().unwrap_or(0)
    }

    pub fn weights(&self) -> Vec<Vec<i64>> {
        let mut w: Vec<Vec<i64>> = self.terms.keys().map(|(a, _)| a.clone()).collect();
        w.dedup();
        w
    }

    /// The q-series of one weight.
    pub fn slice(&self, weight: &[i64]) -> QSeries {
        let mut s = QSeries::zero(self.trunc);
        for d in 0..=self.trunc {
            s.coeffs[d as usize] = BigRational::from_integer(BigInt::from(self.get(weight, d)));
        }
        s
    }

    /// Coefficients summed over all weights, per q-degree.
    pub fn totals(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.trunc as usize + 1];
        for ((_, d), c) in &self.terms {
            out[*d as usize] += c;
        }
        out
    }

    /// `slice(weight) * (q)_L`.
    pub fn numerator(&self, weight: &[i64]) -> QSeries {
        self.slice(weight)
            .mul(&q_pochhammer(self.level, self.trunc))
    }

    /// LaTeX of `numerator / (q)_L` for one weight, truncated.
    pub fn latex_factorization(&self, weight: &[i64]) -> String {
        let num = self.numerator(weight);
        let mut body = String::new();
        for (k, c) in num.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if !body.is_empty() || c.is_negative() {
                body.push_str(sign);
            }
            let abs = c.abs();
            let coeff = if abs.is_one() && k > 0 {
                String::new()
            } else {
                format!("{abs}")
            };
            let var = match k {
                0 => String::new(),
                1 => String::from("q"),
                _ => format!("q^{{{k}}}"),
            };
            body.push_str(&coeff);
            body.push_str(&var);
        }
        if body.is_empty() {
            body.push('0');
        }
        format!(
            "\\frac{{{body} + O(q^{{{}}})}}{{(q)_{{{}}}}}",
            self.trunc + 1,
            self.level
        )
    }

    fn add_series(&mut self, weight: Vec<i64>, s: &QSeries) {
        let ints = s.nonnegative_integers().expect("character coefficients");
        for (d, c) in ints.into_iter().enumerate() {
            if c > 0 {
                *self.terms.entry((weight.clone(), d as u32)).or_insert(0) += c;
            }
        }
    }
}

fn weight_of(points: &[LatticePoint], r: &[u32]) -> Vec<i64> {
    let n = points.first().map_or(0, |p| p.dim());
    let mut w = vec![0i64; n];
    for (p, ri) in points.iter().zip(r) {
        for (x, c) in w.iter_mut().zip(p.coords()) {
            *x += c * i64::from(*ri);
        }
    }
    w
}

/// `sum_r v^{weight(r)} q^{sum r_a r_b gamma(a,b)} / prod (q)_{r_a}` over
/// all `r` with `|r| = L`.
pub fn component_character(data: &CubeGenData, level: u32, trunc: u32) -> CharacterSeries {
    character_from_gamma(data.points(), &data.gamma_matrix(), level, trunc)
}

/// [`component_character`] with an explicit symmetric exponent matrix.
pub fn character_from_gamma(
    points: &[LatticePoint],
    gamma: &[Vec<u32>],
    level: u32,
    trunc: u32,
) -> CharacterSeries {
    let mut out = CharacterSeries {
        level,
        trunc,
        terms: BTreeMap::new(),
    };
    for r in compositions(points.len(), level) {
        let s = principal_ideal_series(&r, gamma, trunc);
        out.add_series(weight_of(points, &r), &s);
    }
    out
}

/// Whether `chi[weight] * (q)_L` has nonnegative coefficients up to `trunc`.
pub fn freeness_check(chi: &CharacterSeries, weight: &[i64]) -> bool {
    chi.numerator(weight)
        .coeffs()
        .iter()
        .all(|c| !c.is_negative())
}

/// Character of the full simplex `P_{dim,d}` at level `l`.
fn simplex_character(
    dim: usize,
    d: i64,
    level: u32,
    trunc: u32,
) -> Result<CharacterSeries, CharacterError> {
    if dim == 0 {
        let mut out = CharacterSeries {
            level,
            trunc,
            terms: BTreeMap::new(),
        };
        let s = q_pochhammer(level, trunc).inverse()?;
        out.add_series(Vec::new(), &s);
        return Ok(out);
    }
    let data = if dim == 1 {
        segment_data(d).1
    } else {
        simplex_data(dim, d)?.1
    };
    Ok(component_character(&data, level, trunc))
}

/// The level-`ell` character of a Segre product of Veronese embeddings of
/// `P^{n_i - 1}` of degrees `d_i`: the product of the factors' characters
/// times `(q)_ell^{m-1}`, over concatenated weights.
pub fn veronese_segre_character(
    dims: &[usize],
    levels: &[i64],
    ell: u32,
    trunc: u32,
) -> Result<CharacterSeries, CharacterError> {
    if dims.len() != levels.len() || dims.contains(&0) || levels.iter().any(|d| *d <= 0) {
        return Err(CharacterError::BadShape);
    }
    let poch = q_pochhammer(ell, trunc);
    // Weight-keyed series, starting from 1/(q)_ell.
    let mut acc: BTreeMap<Vec<i64>, QSeries> = BTreeMap::new();
    acc.insert(Vec::new(), poch.inverse()?);
    for (n, d) in dims.iter().zip(levels) {
        let factor = simplex_character(n - 1, *d, ell, trunc)?;
        let mut next: BTreeMap<Vec<i64>, QSeries> = BTreeMap::new();
        for w in factor.weights() {
            let local = factor.numerator(&w);
            for (pre, s) in &acc {
                let mut key = pre.clone();
                key.extend_from_slice(&w);
                let term = s.mul(&local);
                let e = next.entry(key).or_insert_with(|| QSeries::zero(trunc));
                *e = e.add(&term);
            }
        }
        acc = next;
    }
    let mut out = CharacterSeries {
        level: ell,
        trunc,
        terms: BTreeMap::new(),
    };
    for (w, s) in acc {
        if s.nonnegative_integers().is_none() {
            return Err(CharacterError::NotPolynomial);
        }
        out.add_series(w, &s);
    }
    Ok(out)
}
