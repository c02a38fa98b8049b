//! Dense matrices over a prime field `F_p`.
//!
//! Every matrix carries its modulus. Entries are kept reduced to `[0, p)` and
//! stored row-major. Dimensions in this crate are tiny, so there is no sparse
//! path and no blocking; Gaussian elimination is done directly on `u32`
//! residues with `u64` intermediates.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Trial-division primality test. Exact for every `u32`.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "zero has no inverse");
    // Fermat: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Reduces a signed integer into `[0, p)`.
pub fn reduce(value: i64, p: u32) -> u32 {
    value.rem_euclid(p as i64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) [", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    /// Builds a matrix from row-major residues. Entries must already lie in `[0, p)`.
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if rows * cols != data.len() {
            return Err(Error::Shape {
                expected: (rows, cols),
                found: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= p) {
            return Err(Error::Unreduced { value: bad, p });
        }
        Ok(Self { p, rows, cols, data })
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| reduce(v, p)));
        }
        Ok(Self {
            p,
            rows: rows.len(),
            cols: ncols,
            data,
        })
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { p, rows, cols, data }
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self::from_raw(p, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(p, rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, &v) in col.iter().enumerate() {
                m.data[r * cols + c] = v % p;
            }
        }
        m
    }

    pub fn column_vector(p: u32, v: &[u32]) -> Self {
        Self::from_columns(p, v.len(), &[v.to_vec()])
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product. Panics on a shape or modulus mismatch.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o = ((*o as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, self.p), self.p))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, add_mod)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, sub_mod)
    }

    fn zip_with(&self, rhs: &Self, f: fn(u32, u32, u32) -> u32) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f(a, b, self.p))
            .collect();
        Self::from_raw(self.p, self.rows, self.cols, data)
    }

    pub fn scale(&self, k: u32) -> Self {
        let k = k % self.p;
        let data = self.data.iter().map(|&a| mul_mod(a, k, self.p)).collect();
        Self::from_raw(self.p, self.rows, self.cols, data)
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!(self.rows, rhs.rows, "row count mismatch");
        let cols = self.cols + rhs.cols;
        let mut out = Self::zeros(self.p, self.rows, cols);
        for r in 0..self.rows {
            out.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(rhs.row(r));
        }
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!(self.cols, rhs.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Self::from_raw(self.p, self.rows + rhs.rows, self.cols, data)
    }

    pub fn block_diag(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let mut out = Self::zeros(self.p, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        out
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn submatrix(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> Self {
        let nr = rows.len();
        let nc = cols.len();
        let mut out = Self::zeros(self.p, nr, nc);
        for (i, r) in rows.enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.data[i * nc + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Self::from_raw(self.p, idx.len(), self.cols, data)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(self.p, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = mul_mod(a, rhs.get(k, l), self.p);
                    }
                }
            }
        }
        out
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == rows {
                break;
            }
            let Some(pr) = (lead..rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if pr != lead {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, lead * cols + k);
                }
            }
            let inv = inv_mod(self.get(lead, c), p);
            for k in c..cols {
                let v = self.get(lead, k);
                self.data[lead * cols + k] = mul_mod(v, inv, p);
            }
            for r in 0..rows {
                if r == lead {
                    continue;
                }
                let f = self.get(r, c);
                if f == 0 {
                    continue;
                }
                for k in c..cols {
                    let v = sub_mod(self.get(r, k), mul_mod(f, self.get(lead, k), p), p);
                    self.data[r * cols + k] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the null space `{x : self · x = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(self.p, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            basis.data[fc * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = neg_mod(r.get(i, fc), self.p);
                basis.data[pc * free.len() + j] = v;
            }
        }
        basis
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "solve",
                expected: self.rows,
                found: b.len(),
            });
        }
        let aug = self.hstack(&Self::column_vector(self.p, b));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Solves `self · X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "row count mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.p, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[pc * rhs.cols + j] = r.get(i, self.cols + j);
            }
        }
        Some(x)
    }

    /// The original columns at the pivot positions: a basis of the column space.
    pub fn column_space_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(self.p, 0, 0));
        }
        let (r, pivots) = self.hstack(&Self::identity(self.p, n)).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// For a matrix with independent columns, some `L` with `L · self = I`.
    pub fn left_inverse(&self) -> Option<Self> {
        let k = self.cols;
        let (_, pivot_rows) = self.transpose().rref();
        if pivot_rows.len() < k {
            return None;
        }
        let square = self.select_rows(&pivot_rows);
        let inv = square.inverse()?;
        let mut out = Self::zeros(self.p, k, self.rows);
        for (j, &r) in pivot_rows.iter().enumerate() {
            for i in 0..k {
                out.data[i * self.rows + r] = inv.get(i, j);
            }
        }
        Some(out)
    }

    /// True when every column of `other` lies in the column space of `self`.
    pub fn spans(&self, other: &Self) -> bool {
        self.rank() == self.hstack(other).rank()
    }
}

/// A quotient `F_p^dim / span(sub)` realized by a projection and a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// `(dim - r) × dim`, kernel equal to the span of `sub`.
    pub projection: FpMatrix,
    /// `dim × (dim - r)`, with `projection · section = I`.
    pub section: FpMatrix,
}

/// Realizes the quotient of `F_p^dim` by the column span of `sub`.
///
/// The subspace basis is extended greedily by standard basis vectors; the
/// projection is the tail block of the inverse change-of-basis matrix.
pub fn quotient_space(p: u32, dim: usize, sub: &FpMatrix) -> Quotient {
    assert_eq!(sub.rows(), dim, "subspace vectors must live in dimension {dim}");
    let basis = sub.column_space_basis();
    let r = basis.cols();
    let mut chosen = basis.clone();
    let mut extension = Vec::new();
    for i in 0..dim {
        if chosen.cols() == dim {
            break;
        }
        let mut e = vec![0u32; dim];
        e[i] = 1;
        let candidate = chosen.hstack(&FpMatrix::column_vector(p, &e));
        if candidate.rank() > chosen.cols() {
            chosen = candidate;
            extension.push(i);
        }
    }
    let change = chosen;
    let inv = change.inverse().expect("extended basis is invertible");
    let projection = inv.submatrix(r..dim, 0..dim);
    let mut section = FpMatrix::zeros(p, dim, extension.len());
    for (j, &i) in extension.iter().enumerate() {
        section.set(i, j, 1);
    }
    Quotient { projection, section }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> FpMatrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        FpMatrix::from_rows(p, &rows).unwrap()
    }

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(65521));
        assert!(!is_prime(65535));
        assert!(matches!(FpMatrix::new(4, 1, 1, vec![1]), Err(Error::NotPrime(4))));
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(FpMatrix::new(2, 2, 2, vec![1, 0, 0]).is_err());
        assert!(FpMatrix::new(2, 1, 1, vec![2]).is_err());
        assert_eq!(m(3, &[&[-1, 4]]).entries(), &[2, 1]);
    }

    #[test]
    fn rref_identity_zero_and_rank_one() {
        let id = FpMatrix::identity(2, 2);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1]));
        let z = FpMatrix::zeros(2, 3, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let ones = m(2, &[&[1, 1], &[1, 1]]);
        assert_eq!(ones.rref(), (m(2, &[&[1, 1], &[0, 0]]), vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FpMatrix::identity(2, 3).kernel_basis().cols(), 0);
        assert_eq!(FpMatrix::zeros(2, 2, 3).kernel_basis().cols(), 3);
        let k = m(2, &[&[1, 1]]).kernel_basis();
        assert_eq!(k, m(2, &[&[1], &[1]]));
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(5, 3);
        assert_eq!(id.solve(&[1, 2, 3]).unwrap(), Some(vec![1, 2, 3]));
        assert_eq!(FpMatrix::zeros(2, 2, 2).solve(&[1, 0]).unwrap(), None);
        let x = m(2, &[&[1, 1]]).solve(&[1]).unwrap().unwrap();
        assert!(x == [1, 0] || x == [0, 1]);
        assert!(id.solve(&[1]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_space(2, 2, &FpMatrix::identity(2, 2));
        assert_eq!((q.projection.rows(), q.projection.cols()), (0, 2));
        let q = quotient_space(2, 3, &FpMatrix::zeros(2, 3, 0));
        assert_eq!(q.projection, FpMatrix::identity(2, 3));
        let sub = m(2, &[&[1], &[1]]);
        let q = quotient_space(2, 2, &sub);
        assert_eq!((q.projection.rows(), q.projection.cols()), (1, 2));
        assert!(q.projection.mul(&sub).is_zero());
        assert_eq!(q.projection.kernel_basis(), sub);
        assert_eq!(q.projection.mul(&q.section), FpMatrix::identity(2, 1));
    }

    #[test]
    fn inverse_and_left_inverse() {
        let a = m(5, &[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), FpMatrix::identity(5, 2));
        assert!(m(2, &[&[1, 1], &[1, 1]]).inverse().is_none());
        let tall = m(3, &[&[0, 1], &[1, 0], &[1, 1]]);
        let l = tall.left_inverse().unwrap();
        assert_eq!(l.mul(&tall), FpMatrix::identity(3, 2));
    }

    #[test]
    fn kron_shape() {
        let a = m(2, &[&[1, 0], &[1, 1]]);
        let b = FpMatrix::identity(2, 2);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k.get(2, 0), 1);
        assert_eq!(k.get(2, 1), 0);
        assert_eq!(k.get(3, 1), 1);
    }
}
