//! Partially symmetric polynomials and variable-to-variable assignment maps
//! between them: the duals of toric and lifting inclusions, the supersymmetric
//! specialization, and exact slices of images of kernel intersections.
//!
//! A polynomial lives over a [`SymContext`]: named groups of variables, each
//! group permuted by its own symmetric group. Slices of symmetric rings are
//! handled in the orbit-sum basis; an image coordinate is read off at the
//! representative monomial whose exponents decrease weakly within each group.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arcjets::bounded_partitions;
use crate::lattice::LatticePoint;
use crate::linalg::{left_kernel, sparse_row, Echelon, SparseRow};
use crate::toricring::{compositions, ToricContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("group label {0} appears twice")]
    DuplicateLabel(String),
    #[error("exponent vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("maps do not share a source context")]
    SourceMismatch,
    #[error("degree slice has {size} basis elements, above the cap {cap}")]
    SliceTooLarge { size: usize, cap: usize },
    #[error("coordinate {0} of a point is negative")]
    NegativeCoordinate(usize),
    #[error("supersymmetric rings need both groups nonempty")]
    EmptyGroup,
}

/// Named variable groups; variables are numbered consecutively group by group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymContext {
    groups: Vec<(String, usize)>,
    offsets: Vec<usize>,
}

impl SymContext {
    pub fn new(groups: Vec<(String, usize)>) -> Result<Self, SymError> {
        let mut seen = BTreeSet::new();
        for (label, _) in &groups {
            if !seen.insert(label.clone()) {
                return Err(SymError::DuplicateLabel(label.clone()));
            }
        }
        let mut offsets = Vec::with_capacity(groups.len() + 1);
        let mut acc = 0;
        for (_, size) in &groups {
            offsets.push(acc);
            acc += size;
        }
        offsets.push(acc);
        Ok(Self { groups, offsets })
    }

    pub fn groups(&self) -> &[(String, usize)] {
        &self.groups
    }

    pub fn n_vars(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn size(&self, g: usize) -> usize {
        self.groups[g].1
    }

    pub fn group_of_label(&self, label: &str) -> Option<usize> {
        self.groups.iter().position(|(l, _)| l == label)
    }

    /// Flat index of the `k`-th variable (from zero) of group `g`.
    pub fn var(&self, g: usize, k: usize) -> usize {
        self.offsets[g] + k
    }

    /// `label^(k+1)` for a flat index.
    pub fn var_name(&self, v: usize) -> String {
        let g = self.offsets.partition_point(|o| *o <= v) - 1;
        format!("{}^({})", self.groups[g].0, v - self.offsets[g] + 1)
    }

    fn ranges(&self) -> impl Iterator<Item = core::ops::Range<usize>> + '_ {
        self.offsets.windows(2).map(|w| w[0]..w[1])
    }

    /// Whether exponents decrease weakly inside every group.
    pub fn is_representative(&self, mono: &[u32]) -> bool {
        self.ranges()
            .all(|r| mono[r].windows(2).all(|w| w[0] >= w[1]))
    }
}

/// A polynomial with integer coefficients keyed by flat exponent vectors.
pub type SymPoly = BTreeMap<Vec<u32>, BigInt>;

fn add_into(acc: &mut SymPoly, mono: Vec<u32>, c: BigInt) {
    let e = acc.entry(mono).or_insert_with(BigInt::zero);
    *e += c;
}

fn clean(mut p: SymPoly) -> SymPoly {
    p.retain(|_, c| !c.is_zero());
    p
}

pub fn poly_add(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = a.clone();
    for (m, c) in b {
        add_into(&mut out, m.clone(), c.clone());
    }
    clean(out)
}

pub fn poly_scale(a: &SymPoly, c: &BigInt) -> SymPoly {
    clean(a.iter().map(|(m, x)| (m.clone(), x * c)).collect())
}

pub fn poly_mul(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = SymPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            add_into(&mut out, m, ca * cb);
        }
    }
    clean(out)
}

pub fn poly_one(ctx: &SymContext) -> SymPoly {
    let mut p = SymPoly::new();
    p.insert(vec![0; ctx.n_vars()], BigInt::one());
    p
}

pub fn poly_var(ctx: &SymContext, v: usize) -> SymPoly {
    let mut m = vec![0; ctx.n_vars()];
    m[v] = 1;
    let mut p = SymPoly::new();
    p.insert(m, BigInt::one());
    p
}

pub fn poly_pow(a: &SymPoly, ctx: &SymContext, e: u32) -> SymPoly {
    (0..e).fold(poly_one(ctx), |acc, _| poly_mul(&acc, a))
}

/// `sum_k x_k^power` over the variables of group `g`.
pub fn power_sum(ctx: &SymContext, g: usize, power: u32) -> SymPoly {
    let mut p = SymPoly::new();
    for k in 0..ctx.size(g) {
        let mut m = vec![0; ctx.n_vars()];
        m[ctx.var(g, k)] = power;
        add_into(&mut p, m, BigInt::one());
    }
    clean(p)
}

/// Invariance under adjacent transpositions inside every group.
pub fn is_symmetric(ctx: &SymContext, p: &SymPoly) -> bool {
    ctx.ranges().all(|r| {
        (r.start..r.end.saturating_sub(1)).all(|v| {
            p.iter().all(|(m, c)| {
                let mut sw = m.clone();
                sw.swap(v, v + 1);
                p.get(&sw) == Some(c)
            })
        })
    })
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn distinct_permutations(part: &[u32]) -> Vec<Vec<u32>> {
    let mut v = part.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// Orbit-sum basis of the degree-`d` slice: one weakly decreasing exponent
/// vector per group, concatenated.
pub fn monomial_basis(ctx: &SymContext, d: u32) -> Vec<Vec<u32>> {
    let sizes: Vec<usize> = ctx.groups.iter().map(|(_, s)| *s).collect();
    let mut out = Vec::new();
    for split in compositions(sizes.len(), d) {
        let choices: Vec<Vec<Vec<u32>>> = sizes
            .iter()
            .zip(&split)
            .map(|(s, dg)| bounded_partitions(*dg, *s))
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut pick = vec![0usize; choices.len()];
        'outer: loop {
            out.push(
                choices
                    .iter()
                    .zip(&pick)
                    .flat_map(|(c, k)| c[*k].iter().copied())
                    .collect(),
            );
            for k in 0..pick.len() {
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    continue 'outer;
                }
                pick[k] = 0;
            }
            break;
        }
        if sizes.is_empty() {
            break;
        }
    }
    out
}

/// The orbit sum of a representative monomial.
pub fn orbit_sum(ctx: &SymContext, rep: &[u32]) -> SymPoly {
    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
    for r in ctx.ranges() {
        let perms = distinct_permutations(&rep[r]);
        acc = acc
            .iter()
            .flat_map(|pre| {
                perms.iter().map(move |p| {
                    let mut m = pre.clone();
                    m.extend_from_slice(p);
                    m
                })
            })
            .collect();
    }
    acc.into_iter().map(|m| (m, BigInt::one())).collect()
}

/// A substitution sending every source variable to a target variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentMap {
    source: SymContext,
    target: SymContext,
    assign: Vec<usize>,
}

impl AssignmentMap {
    pub fn new(
        source: SymContext,
        target: SymContext,
        assign: Vec<usize>,
    ) -> Result<Self, SymError> {
        if assign.len() != source.n_vars() {
            return Err(SymError::Length {
                expected: source.n_vars(),
                found: assign.len(),
            });
        }
        Ok(Self {
            source,
            target,
            assign,
        })
    }

    pub fn source(&self) -> &SymContext {
        &self.source
    }

    pub fn target(&self) -> &SymContext {
        &self.target
    }

    /// Flat target index of each flat source variable.
    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    /// Target variable with the source variables sent to it, in order.
    pub fn fibers(&self) -> Vec<(String, Vec<String>)> {
        let mut by_target: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (v, t) in self.assign.iter().enumerate() {
            by_target
                .entry(*t)
                .or_default()
                .push(self.source.var_name(v));
        }
        by_target
            .into_iter()
            .map(|(t, vs)| (self.target.var_name(t), vs))
            .collect()
    }

    fn map_monomial(&self, m: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.target.n_vars()];
        for (v, e) in m.iter().enumerate() {
            out[self.assign[v]] += e;
        }
        out
    }

    pub fn apply(&self, p: &SymPoly) -> SymPoly {
        let mut out = SymPoly::new();
        for (m, c) in p {
            add_into(&mut out, self.map_monomial(m), c.clone());
        }
        clean(out)
    }

    /// Image of an orbit sum at the target's representative monomials.
    fn image_coordinates(&self, rep: &[u32]) -> BTreeMap<Vec<u32>, BigInt> {
        let mut out = BTreeMap::new();
        for (m, c) in orbit_sum(&self.source, rep) {
            let t = self.map_monomial(&m);
            if self.target.is_representative(&t) {
                add_into(&mut out, t, c);
            }
        }
        clean(out)
    }
}

/// The dual of the inclusion of `A_r`: for coordinate `c` the variables of
/// group `s_c` are cut into consecutive blocks, `r_j` blocks of `a^j_c`
/// variables each going to `t_j^(1..r_j)`; the `w` variables go one to one.
pub fn phi_vee_points(points: &[LatticePoint], r: &[u32]) -> Result<AssignmentMap, SymError> {
    if r.len() != points.len() {
        return Err(SymError::Length {
            expected: points.len(),
            found: r.len(),
        });
    }
    let n = points.first().map_or(0, |p| p.dim());
    let mut weight = vec![0i64; n];
    for (p, ri) in points.iter().zip(r) {
        for (c, x) in p.coords().iter().enumerate() {
            if *x < 0 {
                return Err(SymError::NegativeCoordinate(c));
            }
            weight[c] += x * i64::from(*ri);
        }
    }
    let l: u32 = r.iter().sum();
    let mut src_groups: Vec<(String, usize)> = (0..n)
        .map(|c| (format!("s{}", c + 1), weight[c] as usize))
        .collect();
    src_groups.push((String::from("w"), l as usize));
    let source = SymContext::new(src_groups)?;
    let target = SymContext::new(
        r.iter()
            .enumerate()
            .map(|(i, ri)| (format!("t{}", i + 1), *ri as usize))
            .collect(),
    )?;
    let mut assign = vec![0usize; source.n_vars()];
    let mut next = vec![0usize; n + 1];
    for (j, (p, rj)) in points.iter().zip(r).enumerate() {
        for copy in 0..*rj as usize {
            let t = target.var(j, copy);
            for (c, x) in p.coords().iter().enumerate() {
                for _ in 0..*x {
                    assign[source.var(c, next[c])] = t;
                    next[c] += 1;
                }
            }
            assign[source.var(n, next[n])] = t;
            next[n] += 1;
        }
    }
    AssignmentMap::new(source, target, assign)
}

pub fn phi_vee(ctx: &ToricContext, r: &[u32]) -> Result<AssignmentMap, SymError> {
    phi_vee_points(ctx.polytope().points(), r)
}

/// The lifting map for `r = (r[i][j])`, `0 <= j <= zeta_i`: `u_i` variables go
/// one to one onto `t_{i,0}, t_{i,1}, ...` in order, and `j` consecutive `s`
/// variables go to each `t_{i,j}^(l)`.
pub fn psi_map(r: &[Vec<u32>]) -> Result<AssignmentMap, SymError> {
    let a: Vec<usize> = r
        .iter()
        .map(|row| row.iter().sum::<u32>() as usize)
        .collect();
    let s_total: usize = r
        .iter()
        .flat_map(|row| row.iter().enumerate().map(|(j, x)| j * *x as usize))
        .sum();
    let mut src_groups: Vec<(String, usize)> = a
        .iter()
        .enumerate()
        .map(|(i, ai)| (format!("u{}", i + 1), *ai))
        .collect();
    src_groups.push((String::from("s"), s_total));
    let source = SymContext::new(src_groups)?;
    let mut tgt_groups = Vec::new();
    let mut tgt_index = BTreeMap::new();
    for (i, row) in r.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            tgt_index.insert((i, j), tgt_groups.len());
            tgt_groups.push((format!("t{},{}", i + 1, j), *x as usize));
        }
    }
    let target = SymContext::new(tgt_groups)?;
    let m = r.len();
    let mut assign = vec![0usize; source.n_vars()];
    let mut s_next = 0usize;
    for (i, row) in r.iter().enumerate() {
        let mut u_next = 0usize;
        for (j, x) in row.iter().enumerate() {
            let g = tgt_index[&(i, j)];
            for l in 0..*x as usize {
                let t = target.var(g, l);
                assign[source.var(i, u_next)] = t;
                u_next += 1;
                for _ in 0..j {
                    assign[source.var(m, s_next)] = t;
                    s_next += 1;
                }
            }
        }
    }
    AssignmentMap::new(source, target, assign)
}

/// Image of a kernel intersection at one degree, as an echelon basis over
/// representative target monomials.
#[derive(Debug, Clone)]
pub struct SliceImage {
    target: SymContext,
    columns: BTreeMap<Vec<u32>, usize>,
    echelon: Echelon,
}

impl SliceImage {
    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// Whether a target polynomial, symmetric per group, lies in the slice.
    pub fn contains(&self, p: &SymPoly) -> bool {
        let mut extra = self.columns.len();
        let mut entries = Vec::new();
        for (m, c) in p {
            if !self.target.is_representative(m) {
                continue;
            }
            let col = match self.columns.get(m) {
                Some(k) => *k,
                None => {
                    extra += 1;
                    extra - 1
                }
            };
            entries.push((col, c.clone()));
        }
        self.echelon.contains(sparse_row(entries))
    }
}

pub const DEFAULT_BASIS_CAP: usize = 50_000;

fn coordinate_row(
    coords: BTreeMap<Vec<u32>, BigInt>,
    columns: &mut BTreeMap<Vec<u32>, usize>,
    offset: usize,
) -> Vec<(usize, BigInt)> {
    coords
        .into_iter()
        .map(|(m, c)| {
            let len = columns.len();
            (offset + *columns.entry(m).or_insert(len), c)
        })
        .collect()
}

/// `target(intersection of ker(smaller)))` on the degree-`degree` slice.
pub fn kernel_intersection_image(
    smaller: &[AssignmentMap],
    target: &AssignmentMap,
    degree: u32,
) -> Result<SliceImage, SymError> {
    kernel_intersection_image_capped(smaller, target, degree, DEFAULT_BASIS_CAP)
}

pub fn kernel_intersection_image_capped(
    smaller: &[AssignmentMap],
    target: &AssignmentMap,
    degree: u32,
    cap: usize,
) -> Result<SliceImage, SymError> {
    if smaller.iter().any(|m| m.source != target.source) {
        return Err(SymError::SourceMismatch);
    }
    let basis = monomial_basis(&target.source, degree);
    if basis.len() > cap {
        return Err(SymError::SliceTooLarge {
            size: basis.len(),
            cap,
        });
    }
    // Stack the smaller maps side by side: a block of columns per map.
    let mut rows: Vec<SparseRow> = vec![Vec::new(); basis.len()];
    let mut offset = 0usize;
    for map in smaller {
        let mut cols = BTreeMap::new();
        for (b, rep) in basis.iter().enumerate() {
            let entries = coordinate_row(map.image_coordinates(rep), &mut cols, offset);
            rows[b].extend(entries);
        }
        offset += cols.len();
    }
    let rows: Vec<SparseRow> = rows.into_iter().map(sparse_row).collect();
    let kernel: Vec<SparseRow> = if smaller.is_empty() {
        (0..basis.len()).map(|b| vec![(b, BigInt::one())]).collect()
    } else {
        left_kernel(&rows)
    };
    let images: Vec<BTreeMap<Vec<u32>, BigInt>> = basis
        .iter()
        .map(|rep| target.image_coordinates(rep))
        .collect();
    let mut columns = BTreeMap::new();
    let mut echelon = Echelon::new();
    for vec in kernel {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (b, c) in &vec {
            for (m, x) in &images[*b] {
                add_into(&mut acc, m.clone(), c * x);
            }
        }
        let row = coordinate_row(clean(acc), &mut columns, 0);
        echelon.insert(sparse_row(row));
    }
    Ok(SliceImage {
        target: target.target.clone(),
        columns,
        echelon,
    })
}

/// `phi_vee_r(intersection of ker phi_vee_r' over r' before r)` at one degree,
/// with `before` listing the exponent vectors that precede `r`.
pub fn dual_subquotient_slice(
    ctx: &ToricContext,
    r: &[u32],
    before: &[Vec<u32>],
    degree: u32,
) -> Result<SliceImage, SymError> {
    let target = phi_vee(ctx, r)?;
    let smaller = before
        .iter()
        .map(|rp| phi_vee(ctx, rp))
        .collect::<Result<Vec<_>, _>>()?;
    kernel_intersection_image(&smaller, &target, degree)
}

/// Context `(p: b, q: c)`.
pub fn supersym_context(b: usize, c: usize) -> SymContext {
    SymContext::new(vec![(String::from("p"), b), (String::from("q"), c)]).expect("distinct labels")
}

/// `p_k(p; q) = sum p^k - sum q^k`.
pub fn supersym_power(b: usize, c: usize, k: u32) -> SymPoly {
    let ctx = supersym_context(b, c);
    let q = poly_scale(&power_sum(&ctx, 1, k), &BigInt::from(-1));
    poly_add(&power_sum(&ctx, 0, k), &q)
}

fn elementary(ctx: &SymContext, g: usize, k: u32) -> SymPoly {
    let n = ctx.size(g);
    let mut out = SymPoly::new();
    let mut rep = vec![0u32; n];
    if k as usize > n {
        return out;
    }
    for x in rep.iter_mut().take(k as usize) {
        *x = 1;
    }
    let mut full = vec![0u32; ctx.n_vars()];
    for perm in distinct_permutations(&rep) {
        full[ctx.var(g, 0)..ctx.var(g, 0) + n].copy_from_slice(&perm);
        out.insert(full.clone(), BigInt::one());
    }
    out
}

fn complete(ctx: &SymContext, g: usize, k: u32) -> SymPoly {
    let n = ctx.size(g);
    let mut out = SymPoly::new();
    for part in bounded_partitions(k, n) {
        for perm in distinct_permutations(&part) {
            let mut full = vec![0u32; ctx.n_vars()];
            full[ctx.var(g, 0)..ctx.var(g, 0) + n].copy_from_slice(&perm);
            out.insert(full, BigInt::one());
        }
    }
    if n == 0 && k == 0 {
        out.insert(vec![0; ctx.n_vars()], BigInt::one());
    }
    out
}

/// `h_k(p; q)`: the `T^k` coefficient of `prod (1 - T p) / prod (1 - T q)`.
pub fn supersym_h(b: usize, c: usize, k: u32) -> SymPoly {
    let ctx = supersym_context(b, c);
    let mut out = SymPoly::new();
    for a in 0..=k {
        let sign = if a % 2 == 0 {
            BigInt::one()
        } else {
            BigInt::from(-1)
        };
        let term = poly_mul(&elementary(&ctx, 0, a), &complete(&ctx, 1, k - a));
        out = poly_add(&out, &poly_scale(&term, &sign));
    }
    out
}

/// `f -> f(p_b = q_c = Z)`, into the context `(p: b-1, q: c-1, Z: 1)`.
pub fn supersym_specialization(b: usize, c: usize) -> Result<AssignmentMap, SymError> {
    if b == 0 || c == 0 {
        return Err(SymError::EmptyGroup);
    }
    let source = supersym_context(b, c);
    let target = SymContext::new(vec![
        (String::from("p"), b - 1),
        (String::from("q"), c - 1),
        (String::from("Z"), 1),
    ])?;
    let z = target.var(2, 0);
    let mut assign: Vec<usize> = (0..b - 1).map(|k| target.var(0, k)).collect();
    assign.push(z);
    assign.extend((0..c - 1).map(|k| target.var(1, k)));
    assign.push(z);
    AssignmentMap::new(source, target, assign)
}

/// Whether a `(p: b, q: c)` polynomial is supersymmetric.
pub fn is_supersymmetric(b: usize, c: usize, f: &SymPoly) -> Result<bool, SymError> {
    let ctx = supersym_context(b, c);
    if !is_symmetric(&ctx, f) {
        return Ok(false);
    }
    let spec = supersym_specialization(b, c)?;
    let z = spec.target.var(2, 0);
    Ok(spec.apply(f).keys().all(|m| m[z] == 0))
}

/// Degree-`d` slice of the supersymmetric ring as rows over the orbit basis
/// of `(p: b, q: c)`.
fn omega_slice(b: usize, c: usize, d: u32) -> Result<(Vec<Vec<u32>>, Vec<SparseRow>), SymError> {
    let ctx = supersym_context(b, c);
    let basis = monomial_basis(&ctx, d);
    if b == 0 || c == 0 {
        let rows = (0..basis.len()).map(|k| vec![(k, BigInt::one())]).collect();
        return Ok((basis, rows));
    }
    let spec = supersym_specialization(b, c)?;
    let z = spec.target.var(2, 0);
    let mut cols = BTreeMap::new();
    let rows: Vec<SparseRow> = basis
        .iter()
        .map(|rep| {
            let mut img = spec.image_coordinates(rep);
            img.retain(|m, _| m[z] > 0);
            sparse_row(coordinate_row(img, &mut cols, 0))
        })
        .collect();
    Ok((basis, left_kernel(&rows)))
}

/// `dim Omega_{b,c}` in degree `d`.
pub fn omega_dim(b: usize, c: usize, d: u32) -> Result<usize, SymError> {
    Ok(omega_slice(b, c, d)?.1.len())
}

/// `dim` of the image of `Omega_{b,c}` under the specialization, in degree `d`.
pub fn specialization_image_dim(b: usize, c: usize, d: u32) -> Result<usize, SymError> {
    let (basis, kernel) = omega_slice(b, c, d)?;
    let spec = supersym_specialization(b, c)?;
    let z = spec.target.var(2, 0);
    let images: Vec<BTreeMap<Vec<u32>, BigInt>> = basis
        .iter()
        .map(|rep| spec.image_coordinates(rep))
        .collect();
    let mut cols = BTreeMap::new();
    let mut e = Echelon::new();
    for v in kernel {
        let mut acc = BTreeMap::new();
        for (k, c) in &v {
            for (m, x) in &images[*k] {
                add_into(&mut acc, m.clone(), c * x);
            }
        }
        // Supersymmetric images do not involve Z; drop it from the key.
        let acc: BTreeMap<Vec<u32>, BigInt> = clean(acc)
            .into_iter()
            .map(|(mut m, c)| {
                debug_assert_eq!(m[z], 0);
                m.truncate(z);
                (m, c)
            })
            .collect();
        e.insert(sparse_row(coordinate_row(acc, &mut cols, 0)));
    }
    Ok(e.rank())
}

/// Total orders on the pairs `(i, j)` that respect `j` inside each `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    /// `(i, j)` lexicographically.
    ByPoint,
    /// `(j, i)` lexicographically.
    ByLevel,
}

impl PairOrder {
    pub fn compare(&self, a: (usize, usize), b: (usize, usize)) -> Ordering {
        match self {
            PairOrder::ByPoint => a.cmp(&b),
            PairOrder::ByLevel => (a.1, a.0).cmp(&(b.1, b.0)),
        }
    }

    fn pairs(&self, zetas: &[usize]) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = zetas
            .iter()
            .enumerate()
            .flat_map(|(i, z)| (0..=*z).map(move |j| (i, j)))
            .collect();
        out.sort_by(|a, b| self.compare(*a, *b));
        out
    }

    /// Lexicographic comparison of vectors `r[i][j]` along the pair order.
    pub fn compare_vectors(&self, a: &[Vec<u32>], b: &[Vec<u32>]) -> Ordering {
        let zetas: Vec<usize> = a.iter().map(|row| row.len() - 1).collect();
        for (i, j) in self.pairs(&zetas) {
            match a[i][j].cmp(&b[i][j]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// `#{ l : (i, j) < (i', l), l < j' }`.
    pub fn kappa(&self, p: (usize, usize), q: (usize, usize)) -> u32 {
        (0..q.1)
            .filter(|l| self.compare(p, (q.0, *l)) == Ordering::Less)
            .count() as u32
    }
}

/// Every `r'` with the same row sums and the same `sum j r'[i][j]` as `r`.
pub fn lifting_family(r: &[Vec<u32>]) -> Vec<Vec<Vec<u32>>> {
    let target_s: u32 = r
        .iter()
        .flat_map(|row| row.iter().enumerate().map(|(j, x)| j as u32 * x))
        .sum();
    let rows: Vec<Vec<Vec<u32>>> = r
        .iter()
        .map(|row| compositions(row.len(), row.iter().sum()))
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; rows.len()];
    'outer: loop {
        let cand: Vec<Vec<u32>> = rows.iter().zip(&pick).map(|(c, k)| c[*k].clone()).collect();
        let s: u32 = cand
            .iter()
            .flat_map(|row| row.iter().enumerate().map(|(j, x)| j as u32 * x))
            .sum();
        if s == target_s {
            out.push(cand);
        }
        for k in 0..pick.len() {
            pick[k] += 1;
            if pick[k] < rows[k].len() {
                continue 'outer;
            }
            pick[k] = 0;
        }
        break;
    }
    out
}

/// `prod (t_{i,j}^(l) - t_{i',j'}^(l'))^kappa` over pairs `(i,j) < (i',j')`,
/// in the target context of `psi_map(r)`.
pub fn split_generator(r: &[Vec<u32>], order: PairOrder) -> Result<SymPoly, SymError> {
    let map = psi_map(r)?;
    let ctx = map.target();
    let zetas: Vec<usize> = r.iter().map(|row| row.len() - 1).collect();
    let pairs = order.pairs(&zetas);
    let group = |p: (usize, usize)| -> usize {
        ctx.group_of_label(&format!("t{},{}", p.0 + 1, p.1))
            .expect("psi target has every pair")
    };
    let mut out = poly_one(ctx);
    for (x, p) in pairs.iter().enumerate() {
        for q in &pairs[x + 1..] {
            let k = order.kappa(*p, *q);
            if k == 0 {
                continue;
            }
            let (gp, gq) = (group(*p), group(*q));
            for l in 0..ctx.size(gp) {
                for lp in 0..ctx.size(gq) {
                    let diff = poly_add(
                        &poly_var(ctx, ctx.var(gp, l)),
                        &poly_scale(&poly_var(ctx, ctx.var(gq, lp)), &BigInt::from(-1)),
                    );
                    out = poly_mul(&out, &poly_pow(&diff, ctx, k));
                }
            }
        }
    }
    Ok(out)
}

/// Checks that the split generator times every orbit sum of the target ring
/// lies in `psi_r(intersection of ker psi_r' over r' < r)` in each degree up
/// to `max_degree`.
pub fn split_check(r: &[Vec<u32>], order: PairOrder, max_degree: u32) -> Result<bool, SymError> {
    let target = psi_map(r)?;
    let smaller = lifting_family(r)
        .into_iter()
        .filter(|rp| order.compare_vectors(rp, r) == Ordering::Less)
        .map(|rp| psi_map(&rp))
        .collect::<Result<Vec<_>, _>>()?;
    let g = split_generator(r, order)?;
    let g_deg = g.keys().next().map_or(0, |m| m.iter().sum::<u32>());
    let tctx = target.target().clone();
    for d in g_deg..=max_degree {
        let slice = kernel_intersection_image(&smaller, &target, d)?;
        for rep in monomial_basis(&tctx, d - g_deg) {
            let elt = poly_mul(&g, &orbit_sum(&tctx, &rep));
            if !slice.contains(&elt) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
