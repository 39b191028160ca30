use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite multiset of complex numbers, typically the spectrum of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSet {
    eigenvalues: Vec<Complex64>,
}

impl SpectrumSet {
    pub fn new(eigenvalues: Vec<Complex64>) -> Result<Self> {
        if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("spectrum contains non-finite values".into()));
        }
        Ok(Self { eigenvalues })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `dist(p, S) = min_s |p - s|`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        self.eigenvalues.iter().map(|s| (p - s).norm()).fold(f64::INFINITY, f64::min)
    }

    /// `sup_{x in self} dist(x, other)`.
    pub fn directed_distance(&self, other: &SpectrumSet) -> f64 {
        self.eigenvalues.iter().map(|&x| other.distance_to(x)).fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Complex64 {
        let n = self.eigenvalues.len().max(1) as f64;
        self.eigenvalues.iter().sum::<Complex64>() / n
    }
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(s1: &SpectrumSet, s2: &SpectrumSet) -> Result<f64> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::InvalidInput("Hausdorff distance needs nonempty sets".into()));
    }
    Ok(s1.directed_distance(s2).max(s2.directed_distance(s1)))
}
