use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ScalarSeries;
use crate::error::{Error, Result};
use crate::linalg::ToleranceProfile;

/// Number of certification points on the circle `|z| = WITNESS_RADIUS`.
pub const WITNESS_POINTS: usize = 720;
pub const WITNESS_RADIUS: f64 = 0.999;

/// A self-map `phi` of the disk with `phi(0) = 0`, certified on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWitness", into = "RawWitness")]
pub struct SubordinationWitness {
    phi: ScalarSeries,
    certified_bound: f64,
}

#[derive(Serialize, Deserialize)]
struct RawWitness {
    phi: ScalarSeries,
    certified_bound: f64,
}

impl TryFrom<RawWitness> for SubordinationWitness {
    type Error = Error;
    fn try_from(raw: RawWitness) -> Result<Self> {
        let w = SubordinationWitness::certify(raw.phi, &ToleranceProfile::default())?;
        Ok(w)
    }
}

impl From<SubordinationWitness> for RawWitness {
    fn from(w: SubordinationWitness) -> Self {
        Self { phi: w.phi, certified_bound: w.certified_bound }
    }
}

impl SubordinationWitness {
    /// Checks `phi(0) = 0` exactly and `max |phi| <= 1 + eq_tol` on the grid.
    pub fn certify(phi: ScalarSeries, tol: &ToleranceProfile) -> Result<Self> {
        if phi.coeff(0) != Complex64::new(0.0, 0.0) {
            return Err(Error::Contract(format!("witness must fix the origin, phi(0) = {}", phi.coeff(0))));
        }
        let bound = (0..WITNESS_POINTS)
            .map(|m| {
                let theta = 2.0 * PI * m as f64 / WITNESS_POINTS as f64;
                phi.eval(Complex64::from_polar(WITNESS_RADIUS, theta)).norm()
            })
            .fold(0.0, f64::max);
        if bound > 1.0 + tol.eq_tol {
            return Err(Error::Contract(format!("witness leaves the disk: sup |phi| = {bound}")));
        }
        Ok(Self { phi, certified_bound: bound })
    }

    /// `phi(z) = z`.
    pub fn identity(order: usize) -> Self {
        Self::certify(ScalarSeries::identity(order), &ToleranceProfile::default())
            .expect("identity is a self-map")
    }

    /// `phi(z) = s z` with `|s| <= 1`.
    pub fn scaled(s: Complex64, order: usize) -> Result<Self> {
        let phi = ScalarSeries::identity(order).scale(s);
        Self::certify(phi, &ToleranceProfile::default())
    }

    pub fn phi(&self) -> &ScalarSeries {
        &self.phi
    }

    pub fn certified_bound(&self) -> f64 {
        self.certified_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_witnesses() {
        let shifted = ScalarSeries::from_real(&[0.1, 0.5]).unwrap();
        assert!(SubordinationWitness::certify(shifted, &ToleranceProfile::default()).is_err());
        let big = ScalarSeries::from_real(&[0.0, 1.5]).unwrap();
        assert!(SubordinationWitness::certify(big, &ToleranceProfile::default()).is_err());
    }

    #[test]
    fn accepts_z_squared_and_identity() {
        let z2 = ScalarSeries::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let w = SubordinationWitness::certify(z2, &ToleranceProfile::default()).unwrap();
        assert!((w.certified_bound() - WITNESS_RADIUS * WITNESS_RADIUS).abs() < 1e-12);
        assert!(SubordinationWitness::identity(4).certified_bound() <= 1.0);
    }
}
