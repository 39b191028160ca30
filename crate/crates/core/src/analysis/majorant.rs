use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{abs_value, operator_norm, CompensatedMatrixSum, CompensatedSum, Matrix};
use crate::series::HarmonicSeries;

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} is not in [0, 1)")));
    }
    Ok(())
}

fn first_dim(coeffs: &[Matrix]) -> Result<(usize, usize)> {
    let a = coeffs.first().ok_or_else(|| Error::InvalidInput("empty coefficient sequence".into()))?;
    Ok((a.rows(), a.cols()))
}

/// `sum_{n >= k0} M_n r^n` in ascending index order with compensation.
pub fn weighted_sum(mats: &[Matrix], r: f64, k0: usize) -> Result<Matrix> {
    let (rows, cols) = first_dim(mats)?;
    let mut acc = CompensatedMatrixSum::new(rows, cols);
    for (n, m) in mats.iter().enumerate().skip(k0) {
        acc.add_scaled(m, r.powi(n as i32));
    }
    Ok(acc.value())
}

/// `sum_{n >= k0} x_n r^n` in ascending index order with compensation.
pub fn weighted_scalar_sum(xs: &[f64], r: f64, k0: usize) -> f64 {
    xs.iter().enumerate().skip(k0).map(|(n, &x)| x * r.powi(n as i32)).collect::<CompensatedSum>().value()
}

/// `|A_n|` for every coefficient.
pub fn abs_coeffs(coeffs: &[Matrix]) -> Result<Vec<Matrix>> {
    coeffs.iter().map(abs_value).collect()
}

/// `||A_n||` for every coefficient.
pub fn norm_coeffs(coeffs: &[Matrix]) -> Result<Vec<f64>> {
    coeffs.iter().map(operator_norm).collect()
}

/// Operator majorant `sum_{n >= k0} |A_n| r^n`.
pub fn operator_majorant(coeffs: &[Matrix], r: f64, k0: usize) -> Result<Matrix> {
    check_radius(r)?;
    weighted_sum(&abs_coeffs(coeffs)?, r, k0)
}

/// Norm majorant `sum_{n >= k0} ||A_n|| r^n`.
pub fn norm_majorant(coeffs: &[Matrix], r: f64, k0: usize) -> Result<f64> {
    check_radius(r)?;
    first_dim(coeffs)?;
    Ok(weighted_scalar_sum(&norm_coeffs(coeffs)?, r, k0))
}

/// Rotated coefficients `P_n = e^{i mu} A_n + e^{-i mu} B_n`, `n = 1..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotatedSeries {
    pub mu: f64,
    coeffs: Vec<Matrix>,
}

impl RotatedSeries {
    /// `P_1..P_N`.
    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// `P_n` for `n >= 1`.
    pub fn p(&self, n: usize) -> &Matrix {
        &self.coeffs[n - 1]
    }

    /// Sequence with a zero in slot 0, so index `n` holds `P_n`.
    pub fn padded(&self, dim: usize) -> Vec<Matrix> {
        std::iter::once(Matrix::zeros(dim, dim)).chain(self.coeffs.iter().cloned()).collect()
    }
}

pub fn rotated_coeffs(h: &HarmonicSeries, mu: f64) -> RotatedSeries {
    let e = Complex64::from_polar(1.0, mu);
    let coeffs = (1..=h.order()).map(|n| h.a(n).scale(e) + h.b(n).scale(e.conj())).collect();
    RotatedSeries { mu, coeffs }
}

/// `Re(e^{i mu} A_0)`.
pub fn rotated_real_part(h: &HarmonicSeries, mu: f64) -> Matrix {
    h.a(0).scale(Complex64::from_polar(1.0, mu)).hermitian_part()
}
