//! Dense linear algebra over prime fields `F_p`.
//!
//! Matrices store residues as `u32` in row-major order. Everything here is
//! exact; row reduction always produces the unique reduced row-echelon form,
//! which doubles as the canonical representative of a row space.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{HallError, Result};

/// Trial-division primality test; moduli at desk scale are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(HallError::NotPrime(p))
    }
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

pub(crate) fn inv_mod(a: u32, p: u32) -> Option<u32> {
    if a % p == 0 {
        return None;
    }
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
    Some(acc as u32)
}

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqScalar {
    value: u32,
    modulus: u32,
}

impl FqScalar {
    pub fn new(value: i64, modulus: u32) -> Self {
        let m = modulus as i64;
        FqScalar {
            value: value.rem_euclid(m) as u32,
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        inv_mod(self.value, self.modulus).map(|value| FqScalar {
            value,
            modulus: self.modulus,
        })
    }
}

impl Add for FqScalar {
    type Output = FqScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FqScalar {
            value: add_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Sub for FqScalar {
    type Output = FqScalar;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FqScalar {
            value: sub_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Mul for FqScalar {
    type Output = FqScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FqScalar {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Neg for FqScalar {
    type Output = FqScalar;
    fn neg(self) -> Self {
        FqScalar {
            value: sub_mod(0, self.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense `rows x cols` matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    data: Vec<u32>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqMatrix<{}>{}x{}[", self.modulus, self.rows, self.cols)?;
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

/// Output of [`rref_rank_kernel`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rref: FqMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
    /// Rows span the right kernel `{v : m v = 0}`.
    pub kernel: FqMatrix,
}

/// A solution of `a x = b`: one particular solution plus the homogeneous part.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub kernel: FqMatrix,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u32) -> Self {
        FqMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    /// Builds a matrix from row-major residues; values are reduced mod `modulus`.
    pub fn from_vec(rows: usize, cols: usize, modulus: u32, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(HallError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(FqMatrix {
            rows,
            cols,
            modulus,
            data: data.into_iter().map(|v| v % modulus).collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<i64>], modulus: u32) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(HallError::DimensionMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&v| FqScalar::new(v, modulus).value()));
        }
        Ok(FqMatrix {
            rows: rows.len(),
            cols,
            modulus,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    pub fn scalar(&self, r: usize, c: usize) -> FqScalar {
        FqScalar {
            value: self.get(r, c),
            modulus: self.modulus,
        }
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product; panics on shape mismatch (internal callers validate shapes).
    pub fn mul(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus as u64;
        let mut out = Self::zeros(self.rows, rhs.cols, self.modulus);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let idx = r * rhs.cols + c;
                    out.data[idx] = ((out.data[idx] as u64 + a * rhs.get(k, c) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.modulus as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64 % p)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.modulus;
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus: p,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| add_mod(a, b, p))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.modulus;
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus: p,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| sub_mod(a, b, p))
                .collect(),
        }
    }

    pub fn scale(&self, s: u32) -> FqMatrix {
        let p = self.modulus;
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus: p,
            data: self.data.iter().map(|&a| mul_mod(a, s, p)).collect(),
        }
    }

    pub fn neg(&self) -> FqMatrix {
        self.scale(self.modulus - 1)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FqMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FqMatrix {
        let mut out = Self::zeros(rows, cols, self.modulus);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    pub fn vstack(&self, below: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        FqMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            modulus: self.modulus,
            data,
        }
    }

    pub fn from_row_vectors(vectors: &[Vec<u32>], cols: usize, modulus: u32) -> FqMatrix {
        let mut data = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            assert_eq!(v.len(), cols);
            data.extend_from_slice(v);
        }
        FqMatrix {
            rows: vectors.len(),
            cols,
            modulus,
            data,
        }
    }

    pub fn block_diag(a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols, a.modulus);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        out
    }

    pub fn rank(&self) -> usize {
        rref_rank_kernel(self).rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, self.modulus);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n, self.modulus));
        let red = rref_rank_kernel(&aug);
        if red.pivots.len() < n || (n > 0 && red.pivots[n - 1] != n - 1) {
            return None;
        }
        Some(red.rref.block(0, n, n, n))
    }

    /// Rows of the reduced form that are nonzero, i.e. a canonical row-space basis.
    pub fn row_space(&self) -> FqMatrix {
        let red = rref_rank_kernel(self);
        red.rref.block(0, 0, red.rank, self.cols)
    }
}

/// Reduced row-echelon form, rank and right-kernel basis in one pass.
///
/// The kernel basis is read off the free columns: the basis vector for free
/// column `j` has a 1 at `j`, zeros at the other free columns, so the
/// coordinates of any kernel vector are its free-column entries.
pub fn rref_rank_kernel(m: &FqMatrix) -> RowReduction {
    let p = m.modulus;
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(sel) = (pr..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if sel != pr {
            for k in 0..cols {
                a.swap(sel * cols + k, pr * cols + k);
            }
        }
        let inv = inv_mod(a[pr * cols + c], p).expect("nonzero pivot");
        for k in c..cols {
            a[pr * cols + k] = mul_mod(a[pr * cols + k], inv, p);
        }
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let factor = a[r * cols + c];
            if factor == 0 {
                continue;
            }
            for k in c..cols {
                let sub = mul_mod(factor, a[pr * cols + k], p);
                a[r * cols + k] = sub_mod(a[r * cols + k], sub, p);
            }
        }
        pivots.push(c);
        pr += 1;
    }
    let rank = pivots.len();
    let rref = FqMatrix {
        rows,
        cols,
        modulus: p,
        data: a,
    };
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut kernel = FqMatrix::zeros(free.len(), cols, p);
    for (k, &fc) in free.iter().enumerate() {
        kernel.data[k * cols + fc] = 1 % p;
        for (r, &pc) in pivots.iter().enumerate() {
            kernel.data[k * cols + pc] = sub_mod(0, rref.get(r, fc), p);
        }
    }
    RowReduction {
        rref,
        pivots,
        rank,
        kernel,
    }
}

/// Columns of `m` that carry no pivot; the coordinate positions of its kernel.
pub fn free_columns(red: &RowReduction) -> Vec<usize> {
    let mut is_pivot = vec![false; red.rref.cols];
    for &c in &red.pivots {
        is_pivot[c] = true;
    }
    (0..red.rref.cols).filter(|&c| !is_pivot[c]).collect()
}

/// Solves `a x = b`. `Ok(None)` means the system is inconsistent.
pub fn solve(a: &FqMatrix, b: &[u32]) -> Result<Option<Solution>> {
    if a.rows != b.len() {
        return Err(HallError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows,
            b.len()
        )));
    }
    let p = a.modulus;
    let mut aug = FqMatrix::zeros(a.rows, a.cols + 1, p);
    aug.set_block(0, 0, a);
    for (r, &v) in b.iter().enumerate() {
        aug.set(r, a.cols, v);
    }
    let red = rref_rank_kernel(&aug);
    if red.pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![0u32; a.cols];
    for (r, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.rref.get(r, a.cols);
    }
    let kernel = rref_rank_kernel(a).kernel;
    Ok(Some(Solution {
        particular: x,
        kernel,
    }))
}

/// A subspace of `F_p^n`, stored by its canonical RREF basis (rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqSubspace {
    ambient_dim: usize,
    basis: FqMatrix,
}

impl FqSubspace {
    /// The row space of `generators`, canonicalised.
    pub fn span(generators: &FqMatrix) -> Self {
        FqSubspace {
            ambient_dim: generators.cols,
            basis: generators.row_space(),
        }
    }

    pub fn zero(ambient_dim: usize, p: u32) -> Self {
        FqSubspace {
            ambient_dim,
            basis: FqMatrix::zeros(0, ambient_dim, p),
        }
    }

    pub fn full(ambient_dim: usize, p: u32) -> Self {
        FqSubspace {
            ambient_dim,
            basis: FqMatrix::identity(ambient_dim, p),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let row = FqMatrix::from_row_vectors(&[v.to_vec()], self.ambient_dim, self.basis.modulus);
        self.basis.vstack(&row).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &FqSubspace) -> bool {
        self.basis.vstack(&other.basis).rank() == self.dim()
    }
}

/// Gaussian binomial coefficient by the product formula.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Every `k`-dimensional subspace of `F_p^n`, each in canonical RREF, in a
/// deterministic order (pivot sets lexicographic, then free entries).
pub fn enumerate_subspaces(n: usize, k: usize, p: u32) -> Result<Vec<FqSubspace>> {
    if k > n {
        return Err(HallError::DimensionMismatch(format!(
            "subspace dimension {k} exceeds ambient dimension {n}"
        )));
    }
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free slots: (row r, column c) with c > pivots[r] and c not a pivot
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let piv = pivots.clone();
                ((pivots[r] + 1)..n)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let count = (p as u64).checked_pow(slots.len() as u32).unwrap_or(u64::MAX);
        for idx in 0..count {
            let mut m = FqMatrix::zeros(k, n, p);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            let mut rest = idx;
            for &(r, c) in slots.iter().rev() {
                m.set(r, c, (rest % p as u64) as u32);
                rest /= p as u64;
            }
            out.push(FqSubspace {
                ambient_dim: n,
                basis: m,
            });
        }
    }
    Ok(out)
}

/// All subspaces of `F_p^n`, by increasing dimension.
pub fn enumerate_all_subspaces(n: usize, p: u32) -> Vec<FqSubspace> {
    (0..=n)
        .flat_map(|k| enumerate_subspaces(n, k, p).expect("k <= n"))
        .collect()
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Decodes `index` into `len` base-`p` digits, most significant first.
pub(crate) fn digits(mut index: u64, len: usize, p: u32) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % p as u64) as u32;
        index /= p as u64;
    }
    out
}

pub(crate) fn undigits(d: &[u32], p: u32) -> u64 {
    d.iter().fold(0u64, |acc, &v| acc * p as u64 + v as u64)
}

/// `p^exp`, or `None` on overflow.
pub fn checked_power(p: u32, exp: usize) -> Option<u64> {
    (p as u64).checked_pow(u32::try_from(exp).ok()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]], p: u32) -> FqMatrix {
        FqMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), p).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let red = rref_rank_kernel(&FqMatrix::identity(2, 2));
        assert_eq!(red.rank, 2);
        assert_eq!(red.kernel.rows(), 0);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let red = rref_rank_kernel(&FqMatrix::zeros(2, 2, 3));
        assert_eq!(red.rank, 0);
        assert_eq!(red.kernel.rows(), 2);
        assert_eq!(red.kernel, FqMatrix::identity(2, 3));
    }

    #[test]
    fn all_ones_over_f2() {
        let red = rref_rank_kernel(&m(&[&[1, 1], &[1, 1]], 2));
        assert_eq!(red.rank, 1);
        assert_eq!(red.kernel, m(&[&[1, 1]], 2));
    }

    #[test]
    fn solve_examples() {
        let id = FqMatrix::identity(3, 5);
        let s = solve(&id, &[1, 4, 2]).unwrap().unwrap();
        assert_eq!(s.particular, vec![1, 4, 2]);

        assert!(solve(&FqMatrix::zeros(2, 2, 3), &[0, 1]).unwrap().is_none());

        let a = m(&[&[1, 1], &[0, 1]], 2);
        let s = solve(&a, &[0, 1]).unwrap().unwrap();
        assert_eq!(s.particular, vec![1, 1]);
        assert_eq!(s.kernel.rows(), 0);

        assert!(matches!(
            solve(&a, &[1]),
            Err(HallError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[1, 2], &[3, 4]], 5);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), FqMatrix::identity(2, 5));
        assert!(m(&[&[1, 2], &[2, 4]], 5).inverse().is_none());
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(enumerate_subspaces(3, 0, 2).unwrap().len(), 1);
        assert_eq!(enumerate_subspaces(3, 3, 2).unwrap().len(), 1);
        assert_eq!(enumerate_subspaces(2, 1, 2).unwrap().len(), 3);
        assert!(enumerate_subspaces(1, 2, 2).is_err());
    }

    #[test]
    fn gaussian_binomial_small() {
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 1, 3), 13);
        assert_eq!(gaussian_binomial(4, 0, 3), 1);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(101));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(91));
    }

    #[test]
    fn scalar_arithmetic() {
        let a = FqScalar::new(-1, 7);
        assert_eq!(a.value(), 6);
        assert_eq!((a * a).value(), 1);
        assert_eq!(a.inv().unwrap().value(), 6);
        assert!(FqScalar::new(7, 7).inv().is_none());
        assert_eq!((-FqScalar::new(3, 7)).value(), 4);
    }
}
