use serde::{Deserialize, Serialize};

use super::{lambda_min_hermitian, operator_norm, Matrix, ToleranceProfile};
use crate::error::{Error, Result};

/// Outcome of an `A <= B` test in the Loewner order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerComparison {
    pub holds: bool,
    /// `lambda_min(B - A)`, reported whether or not the relation holds.
    pub margin: f64,
    /// `max(1, ||A|| + ||B||)`, the scale the slack is measured against.
    pub scale: f64,
}

/// Tests `A <= B`, i.e. `B - A` positive semidefinite, with relative slack `psd_tol`.
pub fn loewner_leq(a: &Matrix, b: &Matrix, tol: &ToleranceProfile) -> Result<LoewnerComparison> {
    a.ensure_square()?;
    a.ensure_same_shape(b)?;
    let na = operator_norm(a)?;
    let nb = operator_norm(b)?;
    let herm_bound = tol.eq_tol * (na + nb);
    for (name, m) in [("A", a), ("B", b)] {
        let defect = m.hermitian_defect();
        if defect > herm_bound {
            return Err(Error::Contract(format!(
                "{name} is not Hermitian: defect {defect:.3e} exceeds {herm_bound:.3e}"
            )));
        }
    }
    let margin = lambda_min_hermitian(&(b - a))?;
    let scale = (na + nb).max(1.0);
    Ok(LoewnerComparison { holds: margin >= -tol.psd_tol * scale, margin, scale })
}

/// `M >= 0` in the Loewner order, with the same slack convention as [`loewner_leq`].
pub fn is_psd(m: &Matrix, tol: &ToleranceProfile) -> Result<LoewnerComparison> {
    loewner_leq(&Matrix::zeros(m.rows(), m.cols()), m, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn diagonal_examples() {
        let tol = ToleranceProfile::default();
        let r = loewner_leq(&Matrix::from_real_diag(&[1.0, 1.0]), &Matrix::from_real_diag(&[2.0, 3.0]), &tol).unwrap();
        assert!(r.holds);
        assert!((r.margin - 1.0).abs() < 1e-14);

        let b = Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        let r = loewner_leq(&Matrix::identity(2), &b, &tol).unwrap();
        assert!(!r.holds);
        assert!((r.margin + 2.0).abs() < 1e-13);
    }

    #[test]
    fn reflexive() {
        let tol = ToleranceProfile::default();
        let a = Matrix::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0)],
            vec![Complex64::new(1.0, -1.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        let r = loewner_leq(&a, &a, &tol).unwrap();
        assert!(r.holds);
        assert_eq!(r.margin, 0.0);
    }

    #[test]
    fn non_hermitian_is_a_contract_error() {
        let tol = ToleranceProfile::default();
        let a = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(loewner_leq(&a, &Matrix::identity(2), &tol), Err(Error::Contract(_))));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let tol = ToleranceProfile::default();
        assert!(loewner_leq(&Matrix::identity(2), &Matrix::identity(3), &tol).is_err());
    }
}
