use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::random_unitary_rng;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix};
use crate::series::{check_disk, coeffs_via_cauchy_integral, HoloSeries};

/// Certification grid: `CERT_POINTS` points on `|z| = CERT_RADIUS`.
pub const CERT_POINTS: usize = 720;
pub const CERT_RADIUS: f64 = 0.97;

/// Extraction radius and node count for expanding transfer functions.
pub const SCHUR_RHO: f64 = 0.9;
pub const SCHUR_NODES: usize = 512;

pub(crate) fn cert_points() -> impl Iterator<Item = Complex64> {
    (0..CERT_POINTS).map(|m| Complex64::from_polar(CERT_RADIUS, 2.0 * PI * m as f64 / CERT_POINTS as f64))
}

/// Unitary colligation `[[A, B], [C, D]]` on `C^d + C^k`, evaluated at `shrink * z`.
///
/// The transfer function `z -> A + s z B (I - s z D)^{-1} C` has norm at most
/// one on the disk and coefficients bounded by `s^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurRealization {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub shrink: f64,
}

impl SchurRealization {
    /// Splits a `(d+k) x (d+k)` unitary into blocks.
    pub fn from_unitary(w: &Matrix, dim: usize, shrink: f64) -> Result<Self> {
        let n = w.rows();
        if !w.is_square() || dim == 0 || dim >= n {
            return Err(Error::InvalidInput("colligation needs a square unitary larger than dim".into()));
        }
        if !(shrink > 0.0 && shrink < 1.0) {
            return Err(Error::InvalidInput(format!("shrink factor {shrink} not in (0, 1)")));
        }
        let k = n - dim;
        let blk = |r0: usize, c0: usize, rows: usize, cols: usize| {
            Matrix::from_fn(rows, cols, |i, j| w.get(r0 + i, c0 + j)).expect("entries copied from a valid matrix")
        };
        Ok(Self { a: blk(0, 0, dim, dim), b: blk(0, dim, dim, k), c: blk(dim, 0, k, dim), d: blk(dim, dim, k, k), shrink })
    }

    pub fn random<R: rand::Rng + ?Sized>(dim: usize, aux: usize, shrink: f64, rng: &mut R) -> Result<Self> {
        Self::from_unitary(&random_unitary_rng(dim + aux, rng), dim, shrink)
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn aux_dim(&self) -> usize {
        self.d.rows()
    }

    /// The assembled block matrix.
    pub fn unitary(&self) -> Matrix {
        let (dm, k) = (self.dim(), self.aux_dim());
        Matrix::from_fn(dm + k, dm + k, |i, j| match (i < dm, j < dm) {
            (true, true) => self.a.get(i, j),
            (true, false) => self.b.get(i, j - dm),
            (false, true) => self.c.get(i - dm, j),
            (false, false) => self.d.get(i - dm, j - dm),
        })
        .expect("blocks are finite")
    }

    pub fn transfer(&self, z: Complex64) -> Result<Matrix> {
        check_disk(z)?;
        let w = z * self.shrink;
        let resolvent_rhs = (&Matrix::identity(self.aux_dim()) - &self.d.scale(w)).solve(&self.c)?;
        Ok(&self.a + &(&self.b * &resolvent_rhs).scale(w))
    }

    /// Taylor coefficients through `order` by circle extraction.
    pub fn coefficients(&self, order: usize) -> Result<HoloSeries> {
        coeffs_via_cauchy_integral(|z| self.transfer(z), order, SCHUR_RHO, SCHUR_NODES.max(4 * (order + 1)))
    }

    /// Largest `||F(z)||` on the certification grid.
    pub fn grid_sup(&self) -> Result<f64> {
        cert_points().map(|z| operator_norm(&self.transfer(z)?)).try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::seeded_rng;

    #[test]
    fn scalar_realization_is_schur() {
        let mut rng = seeded_rng(11);
        let s = SchurRealization::random(1, 1, 0.8, &mut rng).unwrap();
        assert!(s.unitary().unitarity_defect() < 1e-12);
        assert!(s.grid_sup().unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn coefficients_match_block_formula() {
        let mut rng = seeded_rng(5);
        let s = SchurRealization::random(3, 2, 0.7, &mut rng).unwrap();
        let f = s.coefficients(30).unwrap();
        assert!(f.coeffs()[0].max_abs_diff(&s.a) < 1e-13);
        // A_n = s^n B D^{n-1} C
        let mut dp = Matrix::identity(2);
        for n in 1..=30 {
            let expected = (&(&s.b * &dp) * &s.c).scale_real(s.shrink.powi(n as i32));
            assert!(f.coeffs()[n].max_abs_diff(&expected) < 1e-12, "n = {n}");
            dp = &dp * &s.d;
        }
    }
}
