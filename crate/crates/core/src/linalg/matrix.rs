use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix standing in for a bounded operator on `C^d`.
///
/// Operators on the model Hilbert space are square, but auxiliary maps such as
/// the colligation operator `V: C^d -> C^k` are rectangular, so the shape is
/// not forced here; operations that need a square argument check it.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    data: DMatrix<Complex64>,
}

impl Matrix {
    /// Wraps a nalgebra matrix, rejecting non-finite entries and empty shapes.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::InvalidInput("matrix must have at least one row and column".into()));
        }
        let m = Self { data };
        m.ensure_finite()?;
        Ok(m)
    }

    /// Wraps without validation. Used for results of arithmetic on valid inputs.
    pub(crate) fn from_raw(data: DMatrix<Complex64>) -> Self {
        Self { data }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Self::from_fn(nrows, ncols, |i, j| rows[i][j])
    }

    /// Real-valued square matrix from row-major nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_raw(DMatrix::identity(dim, dim))
    }

    pub fn scalar(value: Complex64, dim: usize) -> Self {
        Self::from_raw(DMatrix::from_diagonal_element(dim, dim, value))
    }

    pub fn from_diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_raw(DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::new(0.0, 0.0) }))
    }

    pub fn from_real_diag(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diag(&v)
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Side length of a square matrix (row count otherwise).
    pub fn dim(&self) -> usize {
        self.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Matrix {
        Self::from_raw(self.data.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        Self::from_raw(&self.data * c)
    }

    pub fn scale_real(&self, c: f64) -> Matrix {
        Self::from_raw(&self.data * Complex64::new(c, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.data.diagonal().iter().copied().collect()
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput("matrix has non-finite entries".into()))
        }
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("expected a square matrix, got {}x{}", self.rows(), self.cols())))
        }
    }

    pub(crate) fn ensure_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows() == other.rows() && self.cols() == other.cols() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )))
        }
    }

    /// Hermitian part `(M + M*) / 2`, used to remove roundoff asymmetry.
    pub fn hermitian_part(&self) -> Matrix {
        Self::from_raw((&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Frobenius distance to the nearest Hermitian matrix, i.e. `||M - M*|| / 2`.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.data - self.data.adjoint()).norm() * 0.5
    }

    /// Frobenius norm of the commutator `M M* - M* M`.
    pub fn normality_defect(&self) -> f64 {
        let a = self.data.adjoint();
        (&self.data * &a - &a * &self.data).norm()
    }

    /// Frobenius norm of `M* M - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.cols();
        (self.data.adjoint() * &self.data - DMatrix::<Complex64>::identity(n, n)).norm()
    }

    /// Largest entrywise distance, convenient for tests.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Matrix {
        let mut base = self.data.clone();
        let mut acc = DMatrix::<Complex64>::identity(self.rows(), self.cols());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Self::from_raw(acc)
    }

    /// `U M U*` for a conjugating matrix `U`.
    pub fn conjugate_by(&self, u: &Matrix) -> Matrix {
        Self::from_raw(&u.data * &self.data * u.data.adjoint())
    }

    /// Inverse via LU; fails when the matrix is numerically singular.
    pub fn inverse(&self) -> Result<Matrix> {
        self.ensure_square()?;
        let inv = self
            .data
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("matrix is singular".into()))?;
        let out = Self::from_raw(inv);
        out.ensure_finite().map_err(|_| Error::Numeric("inverse overflowed".into()))?;
        Ok(out)
    }

    /// Solves `self * X = rhs`.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        self.ensure_square()?;
        let lu = self.data.clone().lu();
        lu.solve(&rhs.data)
            .map(Self::from_raw)
            .ok_or_else(|| Error::Numeric("linear system is singular".into()))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "\n  [")?;
            for j in 0..self.cols() {
                let z = self.data[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl From<&Matrix> for DMatrix<Complex64> {
    fn from(m: &Matrix) -> Self {
        m.data.clone()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                Matrix::from_raw(&self.data $op &rhs.data)
            }
        }
        impl $trait<Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                Matrix::from_raw(self.data $op rhs.data)
            }
        }
        impl $trait<&Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                Matrix::from_raw(self.data $op &rhs.data)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&Matrix> for Matrix {
    fn add_assign(&mut self, rhs: &Matrix) {
        self.data += &rhs.data;
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::from_raw(-&self.data)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            let row: Vec<[f64; 2]> = (0..self.cols())
                .map(|j| {
                    let z = self.data[(i, j)];
                    [z.re, z.im]
                })
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RowsVisitor;

        impl<'de> Visitor<'de> for RowsVisitor {
            type Value = Matrix;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a row-major array of rows of [re, im] pairs")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Matrix, A::Error> {
                let mut rows: Vec<Vec<Complex64>> = Vec::new();
                while let Some(row) = seq.next_element::<Vec<[f64; 2]>>()? {
                    rows.push(row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect());
                }
                Matrix::from_rows(&rows).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(RowsVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Matrix::from_fn(2, 2, |_, _| c(f64::NAN, 0.0)).is_err());
        assert!(Matrix::from_fn(1, 1, |_, _| c(0.0, f64::INFINITY)).is_err());
        assert!(Matrix::new(DMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(2.0, 0.0)]];
        assert!(Matrix::from_rows(&rows).is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let p = m.pow(5);
        assert_eq!(p.get(0, 1), c(5.0, 0.0));
        assert_eq!(m.pow(0), Matrix::identity(2));
    }

    #[test]
    fn json_layout_is_rows_of_pairs() {
        let m = Matrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, -1.0)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[1.0,2.0],[0.0,-1.0]]]");
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
