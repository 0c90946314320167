//! Dense exact linear algebra over a prime field.
//!
//! Everything here is deterministic: elimination always takes the first
//! nonzero entry (scanning columns left to right, rows top to bottom) as
//! pivot, so kernel bases and cohomology representatives depend only on the
//! input matrices.

use std::fmt;

use crate::error::{input, invariant, Result};

/// `Z/p` for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return input(format!("characteristic {p} must be below 2^31"));
        }
        if !is_prime(p) {
            return input(format!("characteristic must be prime, got {p}"));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(self) -> u64 {
        self.p
    }

    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        // a^(p-2)
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// `(-1)^k`.
    pub fn sign(self, k: usize) -> u64 {
        if k.is_multiple_of(2) {
            1 % self.p
        } else {
            self.neg(1)
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: 2 }
    }
}

/// A dense row-major matrix over a [`PrimeField`].
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix[{}x{} mod {}]", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for k in 0..size {
            m.set(k, k, 1);
        }
        m
    }

    /// Build from signed integer rows; all rows must have length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row");
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, field.from_i64(x));
            }
        }
        m
    }

    /// Build from column vectors of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x % self.field.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.field, other.field, "field mismatch in product");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let idx = r * out.cols + c;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..m.cols {
            if top == m.rows {
                break;
            }
            let Some(r) = (top..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if r != top {
                for k in 0..m.cols {
                    m.data.swap(r * m.cols + k, top * m.cols + k);
                }
            }
            let inv = f.inv(m.get(top, c));
            for k in c..m.cols {
                let x = m.get(top, k);
                m.set(top, k, f.mul(x, inv));
            }
            for r2 in 0..m.rows {
                if r2 == top {
                    continue;
                }
                let factor = m.get(r2, c);
                if factor == 0 {
                    continue;
                }
                for k in c..m.cols {
                    let x = f.sub(m.get(r2, k), f.mul(factor, m.get(top, k)));
                    m.set(r2, k, x);
                }
            }
            pivots.push(c);
            top += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space: one vector per free column, with a 1 in
    /// that column and zeros in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// An incrementally grown linearly independent set, able to express any
/// vector in its span as a combination of the accepted vectors.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    field: PrimeField,
    len: usize,
    // echelon rows with their pivot; pivot entry is 1
    echelon: Vec<(usize, Vec<u64>)>,
    // echelon[k] = sum_t combos[k][t] * accepted[t]
    combos: Vec<Vec<u64>>,
    accepted: usize,
}

impl SpanBasis {
    pub fn new(field: PrimeField, len: usize) -> Self {
        SpanBasis {
            field,
            len,
            echelon: Vec::new(),
            combos: Vec::new(),
            accepted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.accepted
    }

    fn reduce_full(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let f = self.field;
        let mut r = v.to_vec();
        let mut coeffs = vec![0; self.accepted];
        for ((piv, row), combo) in self.echelon.iter().zip(&self.combos) {
            let factor = r[*piv];
            if factor == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(factor, y));
            }
            for (c, &t) in coeffs.iter_mut().zip(combo) {
                *c = f.add(*c, f.mul(factor, t));
            }
        }
        (r, coeffs)
    }

    /// Coordinates of `v` over the accepted vectors, or `None` if `v` is not
    /// in their span.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (r, coeffs) = self.reduce_full(v);
        r.iter().all(|&x| x == 0).then_some(coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce_full(v).0.iter().all(|&x| x == 0)
    }

    /// Accept `v` if it is independent of the current set.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let f = self.field;
        let (r, coeffs) = self.reduce_full(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[piv]);
        let row: Vec<u64> = r.iter().map(|&x| f.mul(x, inv)).collect();
        // r = v - sum coeffs_t accepted_t
        let mut combo: Vec<u64> = coeffs.iter().map(|&c| f.mul(f.neg(c), inv)).collect();
        combo.push(inv);
        for c in &mut self.combos {
            c.push(0);
        }
        self.echelon.push((piv, row));
        self.combos.push(combo);
        self.accepted += 1;
        true
    }
}

/// A cochain complex of finite-dimensional spaces,
/// `C^0 -> C^1 -> ... -> C^N`, with `d^i : C^i -> C^{i+1}`.
#[derive(Debug, Clone)]
pub struct FiniteComplex {
    field: PrimeField,
    dims: Vec<usize>,
    diffs: Vec<ExactMatrix>,
}

/// A chosen basis of `H^i`: cocycle representatives whose classes form a
/// basis, together with a solver for expressing cocycles in it.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    boundary_rank: usize,
    representatives: Vec<Vec<u64>>,
    span: SpanBasis,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vec<u64>] {
        &self.representatives
    }

    /// Class of a cocycle in the representative basis.
    pub fn class_of(&self, cocycle: &[u64]) -> Option<Vec<u64>> {
        self.span
            .coordinates(cocycle)
            .map(|c| c[self.boundary_rank..].to_vec())
    }
}

impl FiniteComplex {
    /// Validate shapes and `d^{i+1} d^i = 0`.
    pub fn new(field: PrimeField, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return invariant("complex with no terms");
        }
        if diffs.len() + 1 != dims.len() {
            return invariant(format!(
                "{} terms need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            ));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols() != dims[i] || d.rows() != dims[i + 1] || d.field() != field {
                return invariant(format!("differential d^{i} has the wrong shape or field"));
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            if !diffs[i + 1].mul(&diffs[i]).is_zero() {
                return invariant(format!("d^{} d^{} != 0", i + 1, i));
            }
        }
        Ok(FiniteComplex { field, dims, diffs })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn differential(&self, i: usize) -> Option<&ExactMatrix> {
        self.diffs.get(i)
    }

    fn rank_of(&self, i: isize) -> usize {
        if i < 0 {
            0
        } else {
            self.diffs.get(i as usize).map_or(0, ExactMatrix::rank)
        }
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..self.diffs.len()).map(|i| self.diffs[i].rank()).collect();
        (0..self.dims.len())
            .map(|i| {
                let out = ranks.get(i).copied().unwrap_or(0);
                let inc = if i == 0 { 0 } else { ranks[i - 1] };
                self.dims[i] - out - inc
            })
            .collect()
    }

    pub fn cohomology_dim(&self, i: usize) -> usize {
        self.dims[i] - self.rank_of(i as isize) - self.rank_of(i as isize - 1)
    }

    pub fn cohomology_basis(&self, i: usize) -> CohomologyBasis {
        let dim = self.dims[i];
        let cocycles = match self.diffs.get(i) {
            Some(d) => d.kernel_basis(),
            None => (0..dim)
                .map(|k| (0..dim).map(|c| u64::from(c == k)).collect())
                .collect(),
        };
        let mut span = SpanBasis::new(self.field, dim);
        if i > 0 {
            let incoming = &self.diffs[i - 1];
            for c in 0..incoming.cols() {
                span.insert(&incoming.column(c));
            }
        }
        let boundary_rank = span.rank();
        let representatives = cocycles
            .into_iter()
            .filter(|z| span.insert(z))
            .collect();
        CohomologyBasis {
            boundary_rank,
            representatives,
            span,
        }
    }

    /// The complex `Hom(C, k)` with terms in reversed order.
    pub fn dual(&self) -> FiniteComplex {
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let diffs: Vec<ExactMatrix> = self.diffs.iter().rev().map(ExactMatrix::transpose).collect();
        FiniteComplex {
            field: self.field,
            dims,
            diffs,
        }
    }
}

/// Check that `chain` (one matrix `C^t -> D^t` per term) commutes with the
/// differentials.
pub fn check_chain_map(c: &FiniteComplex, d: &FiniteComplex, chain: &[ExactMatrix]) -> Result<()> {
    if c.len() != d.len() || chain.len() != c.len() {
        return invariant("chain map length does not match the complexes");
    }
    for (t, f) in chain.iter().enumerate() {
        if f.cols() != c.dims[t] || f.rows() != d.dims[t] {
            return invariant(format!("chain map component {t} has the wrong shape"));
        }
    }
    for t in 0..c.diffs.len() {
        let left = d.diffs[t].mul(&chain[t]);
        let right = chain[t + 1].mul(&c.diffs[t]);
        if left != right {
            return invariant(format!("chain map does not commute with d^{t}"));
        }
    }
    Ok(())
}

/// Matrix of `H^i(C) -> H^i(D)` in the deterministic cohomology bases.
pub fn induced_map_on_cohomology(
    c: &FiniteComplex,
    d: &FiniteComplex,
    chain: &[ExactMatrix],
    i: usize,
) -> Result<ExactMatrix> {
    check_chain_map(c, d, chain)?;
    let source = c.cohomology_basis(i);
    let target = d.cohomology_basis(i);
    induced_map_with_bases(&source, &target, &chain[i], c.field)
}

/// Same as [`induced_map_on_cohomology`] for precomputed bases; the chain
/// map is assumed to commute.
pub fn induced_map_with_bases(
    source: &CohomologyBasis,
    target: &CohomologyBasis,
    component: &ExactMatrix,
    field: PrimeField,
) -> Result<ExactMatrix> {
    let mut columns = Vec::with_capacity(source.dim());
    for rep in source.representatives() {
        let image = component.mul_vec(rep);
        match target.class_of(&image) {
            Some(class) => columns.push(class),
            None => return invariant("image of a cocycle is not a cocycle"),
        }
    }
    Ok(ExactMatrix::from_columns(field, target.dim(), &columns))
}
