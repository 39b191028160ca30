use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical slack used by comparisons throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Loewner slack per unit norm.
    pub psd_tol: f64,
    /// Scalar and structural comparisons (Hermitian, normal, unitary checks).
    pub eq_tol: f64,
    /// Quadrature and residual targets.
    pub quad_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self { psd_tol: 1e-9, eq_tol: 1e-9, quad_tol: 1e-10 }
    }
}

impl ToleranceProfile {
    pub fn new(psd_tol: f64, eq_tol: f64, quad_tol: f64) -> Result<Self> {
        let t = Self { psd_tol, eq_tol, quad_tol };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("psd_tol", self.psd_tol), ("eq_tol", self.eq_tol), ("quad_tol", self.quad_tol)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be a finite nonnegative number, got {v}")));
            }
        }
        Ok(())
    }

    /// Same profile with a different Loewner slack.
    pub fn with_psd_tol(mut self, psd_tol: f64) -> Self {
        self.psd_tol = psd_tol;
        self
    }
}
