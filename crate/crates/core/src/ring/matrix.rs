//! Dense matrices over a [`Scalar`] ring: product, Kronecker product,
//! trace, transpose, and adjugate-based inversion.
//!
//! Inversion is fraction-free: the adjugate and determinant are computed
//! by minor expansion, and the matrix is invertible over the ring iff the
//! determinant is a unit. Pivot-based elimination is deliberately avoided
//! since the scalars are not a field. Matrices here stay small (crossing
//! blocks are `d^2 x d^2` with `d <= 2`), so the cost is irrelevant.

use super::Scalar;
use crate::error::RingError;
use std::fmt;

/// Row-major dense matrix with at least one entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, RingError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(RingError::ShapeMismatch(rows, cols, data.len(), 1));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let mut data = vec![proto.zero_like(); n * n];
        for i in 0..n {
            data[i * n + i] = proto.one_like();
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn zero(rows: usize, cols: usize, proto: &T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![proto.zero_like(); rows * cols],
        }
    }

    /// 1x1 matrix holding a single scalar.
    pub fn scalar(value: T) -> Self {
        Matrix {
            rows: 1,
            cols: 1,
            data: vec![value],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    fn proto(&self) -> &T {
        &self.data[0]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.at(r, c);
                    if r == c {
                        *e == e.one_like()
                    } else {
                        e.is_zero_s()
                    }
                })
            })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(RingError::ShapeMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add_s(b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(RingError::ShapeMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub_s(b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, k: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_s(k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        if self.cols != rhs.rows {
            return Err(RingError::ShapeMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let zero = self.proto().zero_like();
        let mut data = vec![zero; self.rows * rhs.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero_s() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero_s() {
                        continue;
                    }
                    let idx = r * rhs.cols + c;
                    data[idx] = data[idx].add_s(&a.mul_s(b));
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Kronecker product: `(r1 x c1) ⊗ (r2 x c2)` is `(r1 r2 x c1 c2)`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for r1 in 0..self.rows {
            for r2 in 0..rhs.rows {
                for c1 in 0..self.cols {
                    let a = self.at(r1, c1);
                    for c2 in 0..rhs.cols {
                        data.push(a.mul_s(rhs.at(r2, c2)));
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.at(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn trace(&self) -> Result<T, RingError> {
        if !self.is_square() {
            return Err(RingError::NotSquare(self.rows, self.cols));
        }
        let mut acc = self.proto().zero_like();
        for i in 0..self.rows {
            acc = acc.add_s(self.at(i, i));
        }
        Ok(acc)
    }

    pub fn det(&self) -> Result<T, RingError> {
        if !self.is_square() {
            return Err(RingError::NotSquare(self.rows, self.cols));
        }
        Ok(self.minor_det(&(0..self.cols).collect::<Vec<_>>(), 0))
    }

    // determinant of the square submatrix on rows `row..` and columns `cols`
    fn minor_det(&self, cols: &[usize], row: usize) -> T {
        if cols.is_empty() {
            return self.proto().one_like();
        }
        let mut acc = self.proto().zero_like();
        for (i, &c) in cols.iter().enumerate() {
            let a = self.at(row, c);
            if a.is_zero_s() {
                continue;
            }
            let rest: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &x)| x)
                .collect();
            let sub = self.minor_det(&rest, row + 1);
            let term = a.mul_s(&sub);
            acc = if i % 2 == 0 {
                acc.add_s(&term)
            } else {
                acc.sub_s(&term)
            };
        }
        acc
    }

    /// Inverse over the ring via adjugate/determinant. Succeeds iff the
    /// determinant is a unit; the product with the input is verified to be
    /// the identity before returning.
    pub fn inverse(&self) -> Result<Self, RingError> {
        if !self.is_square() {
            return Err(RingError::NotSquare(self.rows, self.cols));
        }
        let det = self.det()?;
        let det_inv = det
            .invert_s()
            .ok_or_else(|| RingError::NotInvertibleOverRing(det.render()))?;
        let n = self.rows;
        if n == 1 {
            return Ok(Matrix::scalar(det_inv));
        }
        let mut data = vec![self.proto().zero_like(); n * n];
        for r in 0..n {
            for c in 0..n {
                // cofactor C_{c,r} for the adjugate (note the transpose)
                let cols: Vec<usize> = (0..n).filter(|&x| x != r).collect();
                let sub = self.delete_row(c).minor_det(&cols, 0);
                let signed = if (r + c) % 2 == 0 { sub } else { sub.neg_s() };
                data[r * n + c] = signed.mul_s(&det_inv);
            }
        }
        let inv = Matrix {
            rows: n,
            cols: n,
            data,
        };
        debug_assert!(self.mul(&inv).unwrap().is_identity());
        Ok(inv)
    }

    fn delete_row(&self, r: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * self.cols);
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols,
            data,
        }
    }

    /// Canonical string form, used for multiset ordering.
    pub fn render(&self) -> String {
        if self.rows == 1 && self.cols == 1 {
            return self.data[0].render();
        }
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = (0..self.cols).map(|c| self.at(r, c).render()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
