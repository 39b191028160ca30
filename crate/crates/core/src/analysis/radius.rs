use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalc::{log_eig_normal, BranchCut};
use crate::linalg::{condition_number, lambda_min_hermitian, operator_norm, Matrix, ToleranceProfile};

/// Radius `(2L - 1)/(2L + 1)` together with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm2Radius {
    pub radius: f64,
    /// `L = log||A_0|| / ||log A_0||`.
    pub l: f64,
    pub log_norm: f64,
    pub norm_log: f64,
}

/// Exterior-class radius for a positive `A_0` with spectrum in `[1, inf)` and `||A_0|| > 1`.
pub fn thm2_radius(a0: &Matrix, tol: &ToleranceProfile) -> Result<Thm2Radius> {
    a0.ensure_square()?;
    let norm = operator_norm(a0)?;
    if a0.hermitian_defect() > tol.eq_tol * norm.max(1.0) {
        return Err(Error::Contract("A_0 is not Hermitian".into()));
    }
    let lmin = lambda_min_hermitian(a0)?;
    if lmin < 1.0 - tol.eq_tol {
        return Err(Error::Contract(format!("A_0 has eigenvalue {lmin} below 1")));
    }
    if norm <= 1.0 + tol.eq_tol {
        return Err(Error::Contract("||A_0|| = 1, the radius is degenerate".into()));
    }
    let log_a0 = log_eig_normal(&a0.hermitian_part(), &BranchCut::principal(), tol)?;
    let norm_log = operator_norm(&log_a0)?;
    let log_norm = norm.ln();
    let l = log_norm / norm_log;
    Ok(Thm2Radius { radius: (2.0 * l - 1.0) / (2.0 * l + 1.0), l, log_norm, norm_log })
}

/// Convex-class radius `1/(1 + 2 ||A_1|| ||A_1^{-1}||)`.
pub fn thm3_radius(a1: &Matrix) -> Result<f64> {
    a1.ensure_square()?;
    let kappa = condition_number(a1)?;
    if !(kappa < crate::series::SINGULAR_COND) {
        return Err(Error::Contract(format!("A_1 is singular (condition number {kappa:.3e})")));
    }
    Ok(1.0 / (1.0 + 2.0 * kappa))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectOutcome {
    pub radius: f64,
    /// The predicate already held at `r_hi`; nothing was bracketed.
    pub unbracketed: bool,
    /// Spot-check points on the wrong side of the returned radius.
    pub monotonicity_violations: usize,
}

/// Largest `r` in `[r_lo, r_hi]` (to within `tol`) with `predicate(r)` true.
pub fn bohr_radius_bisect(
    mut predicate: impl FnMut(f64) -> bool,
    r_lo: f64,
    r_hi: f64,
    tol: f64,
) -> Result<BisectOutcome> {
    if !(r_lo < r_hi) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("bad bracket [{r_lo}, {r_hi}] or tolerance {tol}")));
    }
    if !predicate(r_lo) {
        return Err(Error::Contract(format!("predicate fails at the lower end {r_lo}")));
    }
    if predicate(r_hi) {
        return Ok(BisectOutcome { radius: r_hi, unbracketed: true, monotonicity_violations: 0 });
    }
    let (mut lo, mut hi) = (r_lo, r_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if predicate(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut violations = 0;
    for i in 1..=8 {
        let r = r_lo + (r_hi - r_lo) * i as f64 / 9.0;
        if (r < lo && !predicate(r)) || (r > hi && predicate(r)) {
            violations += 1;
        }
    }
    if violations > 0 {
        log::warn!("predicate is not monotone on [{r_lo}, {r_hi}]: {violations} of 8 spot checks disagree");
    }
    Ok(BisectOutcome { radius: lo, unbracketed: false, monotonicity_violations: violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm2_examples() {
        let tol = ToleranceProfile::default();
        let t = thm2_radius(&Matrix::scalar(num_complex::Complex64::new(2.0, 0.0), 3), &tol).unwrap();
        assert!((t.radius - 1.0 / 3.0).abs() < 1e-15);
        let t = thm2_radius(&Matrix::from_real_diag(&[2.0, 4.0]), &tol).unwrap();
        assert!((t.l - 1.0).abs() < 1e-15 && (t.radius - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(thm2_radius(&Matrix::from_real_diag(&[0.5, 2.0]), &tol), Err(Error::Contract(_))));
        assert!(matches!(thm2_radius(&Matrix::identity(2), &tol), Err(Error::Contract(_))));
    }

    #[test]
    fn thm3_examples() {
        assert!((thm3_radius(&Matrix::identity(2)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((thm3_radius(&Matrix::from_real_diag(&[1.0, 2.0])).unwrap() - 0.2).abs() < 1e-15);
        let u = Matrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap().scale_real(3.5);
        assert!((thm3_radius(&u).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(matches!(thm3_radius(&Matrix::from_real_diag(&[1.0, 0.0])), Err(Error::Contract(_))));
    }

    fn mobius_sum(a: f64, r: f64) -> f64 {
        a + (1.0 - a * a) * r / (1.0 - a * r)
    }

    #[test]
    fn bisection_examples() {
        for (a, expected) in [(0.5, 0.5), (0.9, 1.0 / 2.8)] {
            let out = bohr_radius_bisect(|r| mobius_sum(a, r) <= 1.0, 0.0, 0.99, 1e-9).unwrap();
            assert!((out.radius - expected).abs() < 1e-8);
            assert!(!out.unbracketed);
            assert_eq!(out.monotonicity_violations, 0);
        }
        let out = bohr_radius_bisect(|_| true, 0.0, 0.9, 1e-9).unwrap();
        assert!(out.unbracketed && out.radius == 0.9);
        assert!(matches!(bohr_radius_bisect(|_| false, 0.0, 0.9, 1e-9), Err(Error::Contract(_))));
    }
}
