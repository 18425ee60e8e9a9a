//! Exact integer matrices, Smith normal form and cokernel arithmetic.
//!
//! Everything here works over arbitrary-precision integers; nothing ever
//! overflows and nothing is approximated. Storage is dense and row-major,
//! which is fine for the matrix sizes this crate deals with.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. All rows must have equal length;
    /// `cols` fixes the width when there are no rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinAlgError::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience for literal matrices in tests and fixtures; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(cols, &owned).expect("ragged matrix literal")
    }

    pub fn column(v: &[BigInt]) -> Self {
        IntMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != rhs.rows {
            return Err(LinAlgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, rhs: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<IntMatrix, LinAlgError> {
        if self.shape() != rhs.shape() {
            return Err(LinAlgError::Dimension(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if !self.is_square() || !self.is_unimodular() {
            return None;
        }
        let snf = smith_normal_form(self);
        // u·a·v = 1
        Some(&snf.v * &snf.u)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(blocks: &[IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Sum of the diagonal.
pub fn trace(a: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok((0..a.rows).map(|i| a[(i, i)].clone()).sum())
}

/// Kronecker product scaled by `sign`: entry `(i*rb + j, k*cb + l)` is
/// `sign * a(i,k) * b(j,l)`.
pub fn kron(a: &IntMatrix, b: &IntMatrix, sign: i32) -> IntMatrix {
    assert!(sign == 1 || sign == -1, "kron sign must be +1 or -1");
    let (rb, cb) = b.shape();
    let s = BigInt::from(sign);
    IntMatrix::from_fn(a.rows * rb, a.cols * cb, |r, c| {
        let (i, j) = (r / rb, r % rb);
        let (k, l) = (c / cb, c % cb);
        let x = &a[(i, k)];
        if x.is_zero() {
            return BigInt::zero();
        }
        x * &b[(j, l)] * &s
    })
}

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `s`, of length `min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Position of the nonzero entry of least absolute value in the trailing
/// submatrix starting at `(k, k)`; ties go to the first in row-major order.
fn smallest_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| x < *b) {
                best = Some(((i, j), x));
            }
        }
    }
    best.map(|(p, _)| p)
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&s, k) else {
                return finish(u, s, v);
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = s[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..m {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = -s[(i, k)].div_floor(&pivot);
                s.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                clean &= s[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = -s[(k, j)].div_floor(&pivot);
                s.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                clean &= s[(k, j)].is_zero();
            }
            if !clean {
                // a nonzero remainder is now strictly smaller than the pivot
                continue;
            }
            // divisibility: fold an offending row into row k and retry
            let offending = (k + 1..m).find(|&i| (k + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(u, s, v)
}

fn finish(mut u: IntMatrix, mut s: IntMatrix, v: IntMatrix) -> SnfResult {
    for k in 0..s.rows().min(s.cols()) {
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }
    SnfResult { u, s, v }
}

/// Element of `Z^m / col(A)` in Smith coordinates.
///
/// `moduli[i]` is the i-th invariant factor, or zero for a free coordinate.
/// Residues for nonzero moduli lie in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CokernelElement {
    pub moduli: Vec<BigInt>,
    pub residues: Vec<BigInt>,
}

impl CokernelElement {
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(Zero::is_zero)
    }
}

/// A precomputed cokernel `Z^rows / col(A)`.
#[derive(Debug, Clone)]
pub struct Cokernel {
    snf: SnfResult,
    moduli: Vec<BigInt>,
}

impl Cokernel {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let factors = snf.invariant_factors();
        let moduli = (0..a.rows())
            .map(|i| factors.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        Cokernel { snf, moduli }
    }

    pub fn ambient_dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn snf(&self) -> &SnfResult {
        &self.snf
    }

    pub fn class(&self, v: &[BigInt]) -> Result<CokernelElement, LinAlgError> {
        if v.len() != self.moduli.len() {
            return Err(LinAlgError::Dimension(format!(
                "vector of length {} in a cokernel of Z^{}",
                v.len(),
                self.moduli.len()
            )));
        }
        let w = self.snf.u.mul_vec(v)?;
        let residues = w
            .into_iter()
            .zip(&self.moduli)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect();
        Ok(CokernelElement {
            moduli: self.moduli.clone(),
            residues,
        })
    }
}

/// Class of `v` in `coker(a)`.
pub fn cokernel_class(a: &IntMatrix, v: &[BigInt]) -> Result<CokernelElement, LinAlgError> {
    Cokernel::new(a).class(v)
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(&(&r.u * a) * &r.v, r.s);
        assert!(r.u.is_unimodular() && r.v.is_unimodular());
        let d = r.invariant_factors();
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    assert!(r.s[(i, j)].is_zero());
                }
            }
        }
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        r
    }

    #[test]
    fn snf_of_identity() {
        let r = check_snf(&IntMatrix::identity(4));
        assert_eq!(r.u, IntMatrix::identity(4));
        assert_eq!(r.s, IntMatrix::identity(4));
        assert_eq!(r.v, IntMatrix::identity(4));
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(check_snf(&IntMatrix::from_i64(&[&[2]])).s, IntMatrix::from_i64(&[&[2]]));
        assert_eq!(check_snf(&IntMatrix::from_i64(&[&[-3]])).s, IntMatrix::from_i64(&[&[3]]));
        let r = check_snf(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(r.invariant_factors(), to_big(&[2, 6, 12]));
        let r = check_snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(r.invariant_factors(), to_big(&[1, 6]));
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(3, 0));
        check_snf(&IntMatrix::zeros(2, 2));
    }

    #[test]
    fn cokernel_basics() {
        let a = IntMatrix::from_i64(&[&[2]]);
        let c = cokernel_class(&a, &to_big(&[1])).unwrap();
        assert_eq!(c.residues, to_big(&[1]));
        assert!(cokernel_class(&a, &to_big(&[4])).unwrap().is_zero());
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4], &[5, 6]]);
        let col = a.col_vec(1);
        assert!(cokernel_class(&a, &col).unwrap().is_zero());
        assert!(cokernel_class(&a, &to_big(&[1, 1])).is_err());
    }

    #[test]
    fn trace_and_kron() {
        assert_eq!(trace(&IntMatrix::identity(5)).unwrap(), BigInt::from(5));
        assert_eq!(trace(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::zero());
        assert!(trace(&IntMatrix::zeros(2, 3)).is_err());
        assert_eq!(kron(&IntMatrix::identity(2), &IntMatrix::identity(3), 1), IntMatrix::identity(6));
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = IntMatrix::from_i64(&[&[0, 5], &[6, 7]]);
        assert_eq!(kron(&a, &b, -1), -&kron(&a, &b, 1));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).determinant().unwrap(), BigInt::one());
        assert_eq!(
            IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).determinant().unwrap(),
            BigInt::from(-2)
        );
        assert!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).is_unimodular());
        assert!(!IntMatrix::from_i64(&[&[2]]).is_unimodular());
    }
}
