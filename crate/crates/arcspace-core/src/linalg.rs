//! Exact incremental row echelon forms over the integers.
//!
//! Rows are sparse, sorted by column and kept primitive (content one, positive
//! leading entry). Rational input is scaled to integers first; rank and span
//! questions are unaffected by the scaling.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A sparse integer row: strictly increasing columns, nonzero entries.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Builds a sparse row from arbitrary `(column, value)` pairs, merging repeated
/// columns and dropping zeros.
pub fn sparse_row<I: IntoIterator<Item = (usize, BigInt)>>(entries: I) -> SparseRow {
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (c, v) in entries {
        *acc.entry(c).or_insert_with(BigInt::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Clears denominators of a rational row by multiplying with their lcm.
pub fn integer_row<I: IntoIterator<Item = (usize, BigRational)>>(entries: I) -> SparseRow {
    let entries: Vec<(usize, BigRational)> = entries.into_iter().collect();
    let mut lcm = BigInt::one();
    for (_, v) in &entries {
        lcm = lcm.lcm(v.denom());
    }
    sparse_row(
        entries
            .into_iter()
            .map(|(c, v)| (c, v.numer() * (&lcm / v.denom()))),
    )
}

fn make_primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let negate = row.first().map(|(_, v)| v.is_negative()).unwrap_or(false);
    if negate {
        g = -g;
    }
    if !g.is_zero() && g != BigInt::one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a * x - b * y` on sparse rows.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// An incrementally built echelon basis of a row space.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Eliminates leading entries against existing pivots until the leading
    /// column is free or the row vanishes.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        make_primitive(&mut row);
        while let Some((lead, a)) = row.first().cloned() {
            let Some(p) = self.pivots.get(&lead) else {
                break;
            };
            let b = &p[0].1;
            let g = a.gcd(b);
            row = combine(&(b / &g), &row, &(&a / &g), p);
            make_primitive(&mut row);
        }
        row
    }

    /// Adds a row; returns whether the rank increased.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            Some((lead, _)) => {
                let lead = *lead;
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }

    /// Whether the row lies in the current span.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// The echelon rows, ordered by leading column.
    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.pivots.values()
    }
}

/// Rank of a list of rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// A basis of the left kernel `{ c : sum_i c_i rows[i] = 0 }`, each vector
/// indexed by row position.
pub fn left_kernel(rows: &[SparseRow]) -> Vec<SparseRow> {
    let width = rows
        .iter()
        .filter_map(|r| r.last().map(|(c, _)| c + 1))
        .max()
        .unwrap_or(0);
    let mut e = Echelon::new();
    for (i, r) in rows.iter().enumerate() {
        let mut aug = r.clone();
        aug.push((width + i, BigInt::one()));
        e.insert(aug);
    }
    e.rows()
        .filter(|r| r[0].0 >= width)
        .map(|r| r.iter().map(|(c, v)| (c - width, v.clone())).collect())
        .collect()
}
