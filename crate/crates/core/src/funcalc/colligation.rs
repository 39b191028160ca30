use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix_exp;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix, ToleranceProfile};

/// Unitary `U` on an auxiliary space `C^k` together with `V: C^d -> C^k`.
///
/// Realizes `log f(z) = (1/2) V*(I + zU)(I - zU)^{-1} V`, whose Taylor
/// coefficients are `(1/2) V*V` at the origin and `V* U^n V` for `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColligationSpec {
    u: Matrix,
    v: Matrix,
}

impl ColligationSpec {
    pub fn new(u: Matrix, v: Matrix, tol: &ToleranceProfile) -> Result<Self> {
        u.ensure_square()?;
        u.ensure_finite()?;
        v.ensure_finite()?;
        if v.rows() != u.rows() {
            return Err(Error::InvalidInput(format!(
                "V must map into the auxiliary space: V is {}x{}, U is {}x{}",
                v.rows(),
                v.cols(),
                u.rows(),
                u.cols()
            )));
        }
        let defect = u.unitarity_defect();
        if defect > tol.eq_tol {
            return Err(Error::Contract(format!("U is not unitary: ||U*U - I|| = {defect:.3e}")));
        }
        Ok(Self { u, v })
    }

    /// Auxiliary dimension `k`.
    pub fn aux_dim(&self) -> usize {
        self.u.rows()
    }

    /// Model dimension `d`.
    pub fn dim(&self) -> usize {
        self.v.cols()
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// `||V||^2`.
    pub fn v_norm_sq(&self) -> Result<f64> {
        Ok(operator_norm(&self.v)?.powi(2))
    }

    /// `log A_0 = (1/2) V*V`.
    pub fn log_a0(&self) -> Matrix {
        (self.v.adjoint() * &self.v).scale_real(0.5).hermitian_part()
    }

    /// `A_0 = exp((1/2) V*V)`.
    pub fn a0(&self) -> Result<Matrix> {
        matrix_exp(&self.log_a0())
    }
}

fn check_disk(z: Complex64) -> Result<()> {
    if z.norm() >= 1.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("|z| = {} is not inside the unit disk", z.norm())));
    }
    Ok(())
}

/// `(1/2) V*(I + zU)(I - zU)^{-1} V`, i.e. `log f(z)` for the realized `f`.
pub fn herglotz_transfer(c: &ColligationSpec, z: Complex64) -> Result<Matrix> {
    check_disk(z)?;
    let k = c.aux_dim();
    let id = Matrix::identity(k);
    let zu = c.u.scale(z);
    let solved = (&id - &zu).solve(&c.v)?;
    let num = (&id + &zu) * solved;
    Ok((c.v.adjoint() * num).scale_real(0.5))
}

/// `f(z) = exp((1/2) V*(I + zU)(I - zU)^{-1} V)`.
pub fn exterior_realization_eval(c: &ColligationSpec, z: Complex64) -> Result<Matrix> {
    matrix_exp(&herglotz_transfer(c, z)?)
}

/// Taylor coefficient `C_n = V* U^n V` of `log f` for `n >= 1`.
pub fn colligation_log_coeff(c: &ColligationSpec, n: u32) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::Contract(
            "the zeroth coefficient is log A_0 = (1/2) V*V; use ColligationSpec::log_a0".into(),
        ));
    }
    Ok(c.v.adjoint() * c.u.pow(n) * &c.v)
}
