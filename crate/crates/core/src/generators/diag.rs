use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Matrix;
use crate::series::{check_disk, DiskFunction, HoloSeries, ScalarSeries};

/// Scalar building blocks with closed forms and exact coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScalarChannel {
    /// `scale * z / (1 - beta z)`, a convex map for `0 <= beta <= 1`.
    Convex { scale: f64, beta: f64 },
    /// `z / (1 - zeta z)^2` with `|zeta| = 1`, a rotated Koebe function.
    Starlike { zeta: Complex64 },
    /// `exp(c (1 + beta z)/(1 - beta z))`, values outside the closed unit disk.
    Exterior { c: f64, beta: f64 },
}

impl ScalarChannel {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            ScalarChannel::Convex { scale, beta } => z * scale / (one - z * beta),
            ScalarChannel::Starlike { zeta } => {
                let q = one - zeta * z;
                z / (q * q)
            }
            ScalarChannel::Exterior { c, beta } => ((one + z * beta) / (one - z * beta) * c).exp(),
        }
    }

    pub fn coefficients(&self, order: usize) -> ScalarSeries {
        let zero = Complex64::new(0.0, 0.0);
        let s = match *self {
            ScalarChannel::Convex { scale, beta } => {
                ScalarSeries::from_fn(order, |n| if n == 0 { zero } else { Complex64::new(scale * beta.powi(n as i32 - 1), 0.0) })
            }
            ScalarChannel::Starlike { zeta } => {
                ScalarSeries::from_fn(order, |n| if n == 0 { zero } else { zeta.powi(n as i32 - 1) * n as f64 })
            }
            ScalarChannel::Exterior { c, beta } => {
                let p = ScalarSeries::from_fn(order, |n| {
                    Complex64::new(if n == 0 { c } else { 2.0 * c * beta.powi(n as i32) }, 0.0)
                })
                .expect("finite exponent data");
                return p.exp();
            }
        };
        s.expect("finite channel coefficients")
    }
}

/// `f(z) = L W diag(h_i(z)) W^*` with `W` unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagModel {
    pub left: Matrix,
    pub frame: Matrix,
    pub channels: Vec<ScalarChannel>,
}

impl DiagModel {
    pub fn channel_values(&self, z: Complex64) -> Vec<Complex64> {
        self.channels.iter().map(|c| c.eval(z)).collect()
    }

    fn assemble(&self, values: &[Complex64]) -> Matrix {
        &self.left * &Matrix::from_diag(values).conjugate_by(&self.frame)
    }

    pub fn series(&self, order: usize) -> Result<HoloSeries> {
        let per: Vec<ScalarSeries> = self.channels.iter().map(|c| c.coefficients(order)).collect();
        let coeffs = (0..=order)
            .map(|n| {
                let vals: Vec<Complex64> = per.iter().map(|s| s.coeff(n)).collect();
                self.assemble(&vals)
            })
            .collect();
        HoloSeries::new(coeffs)
    }
}

impl DiskFunction for DiagModel {
    fn dim(&self) -> usize {
        self.channels.len()
    }

    fn eval(&self, z: Complex64) -> Result<Matrix> {
        check_disk(z)?;
        Ok(self.assemble(&self.channel_values(z)))
    }
}
