use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::majorant::check_radius;
use crate::error::Result;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(x, 0.0))
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

/// Chordal distance on the Riemann sphere (normalized so that `lambda(0, inf) = 1`).
pub fn spherical_distance(z1: impl Into<ExtendedComplex>, z2: impl Into<ExtendedComplex>) -> f64 {
    use ExtendedComplex::*;
    match (z1.into(), z2.into()) {
        (Finite(a), Finite(b)) => (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt()),
        (Finite(a), Infinity) | (Infinity, Finite(a)) => 1.0 / (1.0 + a.norm_sqr()).sqrt(),
        (Infinity, Infinity) => 0.0,
    }
}

/// `psi(x) = x + (2r / sqrt(1 - r^2)) sqrt(1 - x^2)` on `[0, 1]`.
pub fn psi(r: f64, x: f64) -> f64 {
    x + 2.0 * r / (1.0 - r * r).sqrt() * (1.0 - x * x).max(0.0).sqrt()
}

/// Maximizer and maximum of [`psi`] on `[0, 1]`.
pub fn psi_peak(r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let a = (1.0 - r * r).sqrt();
    let b = (1.0 + 3.0 * r * r).sqrt();
    Ok((a / b, b / a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_examples() {
        assert_eq!(spherical_distance(0.0, 0.0), 0.0);
        assert!((spherical_distance(1.0, ExtendedComplex::Infinity) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((spherical_distance(2.0, 1.0) - 0.1f64.sqrt()).abs() < 1e-15);
        assert_eq!(spherical_distance(ExtendedComplex::Infinity, ExtendedComplex::Infinity), 0.0);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_peak(0.0).unwrap(), (1.0, 1.0));
        let (x0, peak) = psi_peak(0.5).unwrap();
        assert!((x0 - (3.0f64 / 7.0).sqrt()).abs() < 1e-15);
        assert!((peak - (7.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let grid_max = (0..=100_000).map(|i| psi(0.5, i as f64 / 100_000.0)).fold(0.0, f64::max);
        assert!((grid_max - peak).abs() < 1e-9 && grid_max <= peak + 1e-15);
        for r in [0.1, 0.3, 0.77, 0.95] {
            let (x0, peak) = psi_peak(r).unwrap();
            assert!((psi(r, x0) - peak).abs() < 1e-12);
        }
        assert!(psi_peak(1.0).is_err());
    }
}
