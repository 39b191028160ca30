use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Matrix, SpectrumSet, ToleranceProfile};
use crate::error::{Error, Result};

const SVD_EPS: f64 = f64::EPSILON;
const MAX_SWEEPS_PER_DIM: usize = 2000;

fn max_iter(n: usize) -> usize {
    MAX_SWEEPS_PER_DIM * n.max(1)
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    m.ensure_finite()?;
    let svd = SVD::try_new(m.inner().clone(), false, false, SVD_EPS, max_iter(m.rows().max(m.cols())))
        .ok_or_else(|| Error::Numeric(format!("SVD did not converge for a {}x{} matrix", m.rows(), m.cols())))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm(m: &Matrix) -> Result<f64> {
    if m.rows() == 1 && m.cols() == 1 {
        m.ensure_finite()?;
        return Ok(m.get(0, 0).norm());
    }
    Ok(singular_values(m)?[0])
}

/// Smallest singular value of a square matrix.
pub fn smallest_singular_value(m: &Matrix) -> Result<f64> {
    m.ensure_square()?;
    Ok(*singular_values(m)?.last().expect("non-empty"))
}

/// `||M|| * ||M^{-1}||`; infinite for singular matrices.
pub fn condition_number(m: &Matrix) -> Result<f64> {
    m.ensure_square()?;
    let s = singular_values(m)?;
    let smin = *s.last().expect("non-empty");
    Ok(if smin == 0.0 { f64::INFINITY } else { s[0] / smin })
}

/// Eigendecomposition `H = Q diag(values) Q*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: Matrix,
}

impl HermitianEigen {
    /// Decomposes the Hermitian part of `h`; the caller is responsible for
    /// `h` actually being Hermitian.
    pub fn new(h: &Matrix) -> Result<Self> {
        h.ensure_square()?;
        h.ensure_finite()?;
        let n = h.rows();
        let sym = h.hermitian_part();
        let eig = SymmetricEigen::try_new(sym.into_inner(), SVD_EPS, max_iter(n)).ok_or_else(|| {
            Error::Numeric(format!(
                "Hermitian eigendecomposition did not converge (dim {n}, frobenius {:.3e})",
                h.frobenius()
            ))
        })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(Self { values, vectors: Matrix::from_raw(vectors) })
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    /// `Q diag(f(lambda)) Q*`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> Matrix {
        let d: Vec<Complex64> = self.values.iter().map(|&x| f(x)).collect();
        Matrix::from_diag(&d).conjugate_by(&self.vectors)
    }
}

/// Smallest eigenvalue of the Hermitian part of `h`.
pub fn lambda_min_hermitian(h: &Matrix) -> Result<f64> {
    if h.rows() == 1 && h.cols() == 1 {
        return Ok(h.get(0, 0).re);
    }
    Ok(HermitianEigen::new(h)?.min())
}

/// Largest eigenvalue of the Hermitian part of `h`.
pub fn lambda_max_hermitian(h: &Matrix) -> Result<f64> {
    if h.rows() == 1 && h.cols() == 1 {
        return Ok(h.get(0, 0).re);
    }
    Ok(HermitianEigen::new(h)?.max())
}

/// Positive square root of a PSD matrix; negative roundoff eigenvalues are clamped to zero.
pub fn psd_sqrt(p: &Matrix) -> Result<Matrix> {
    let eig = HermitianEigen::new(p)?;
    Ok(eig.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0)))
}

/// Operator absolute value `|M| = (M* M)^{1/2}`.
pub fn abs_value(m: &Matrix) -> Result<Matrix> {
    m.ensure_finite()?;
    if m.rows() == 1 && m.cols() == 1 {
        return Ok(Matrix::from_real_diag(&[m.get(0, 0).norm()]));
    }
    let gram = m.adjoint() * m;
    psd_sqrt(&gram).map_err(|e| match e {
        Error::Numeric(msg) => Error::Numeric(format!(
            "{msg}; |M| requested for matrix with condition number {:.3e}",
            condition_number(m).unwrap_or(f64::NAN)
        )),
        other => other,
    })
}

/// `(Re M, Im M) = ((M + M*)/2, (M - M*)/(2i))`.
pub fn re_im_parts(m: &Matrix) -> Result<(Matrix, Matrix)> {
    m.ensure_finite()?;
    m.ensure_square()?;
    let adj = m.adjoint();
    let re = (m + &adj).scale_real(0.5);
    let im = (m - &adj).scale(Complex64::new(0.0, -0.5));
    Ok((re, im))
}

/// Complex Schur form `M = Q T Q*` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub unitary: Matrix,
    pub triangular: Matrix,
}

impl SchurForm {
    pub fn new(m: &Matrix) -> Result<Self> {
        m.ensure_square()?;
        m.ensure_finite()?;
        let n = m.rows();
        let schur = Schur::try_new(m.inner().clone(), SVD_EPS, max_iter(n)).ok_or_else(|| {
            Error::Numeric(format!("Schur iteration did not converge (dim {n}, frobenius {:.3e})", m.frobenius()))
        })?;
        let (q, t) = schur.unpack();
        // Strictly lower part is zero up to roundoff; drop it.
        let t = DMatrix::from_fn(n, n, |i, j| if i > j { Complex64::new(0.0, 0.0) } else { t[(i, j)] });
        Ok(Self { unitary: Matrix::from_raw(q), triangular: Matrix::from_raw(t) })
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.triangular.diagonal()
    }

    /// Largest eigen-residual `||M q_i - t_ii q_i||` over the Schur vectors.
    ///
    /// For a normal matrix the Schur vectors are eigenvectors, so this is the
    /// eigenpair residual; for non-normal input it measures departure from normality.
    pub fn eigen_residual(&self, m: &Matrix) -> f64 {
        let q = self.unitary.inner();
        let mq = m.inner() * q;
        let lambdas = self.eigenvalues();
        (0..m.rows())
            .map(|j| (mq.column(j) - q.column(j) * lambdas[j]).norm())
            .fold(0.0, f64::max)
    }
}

/// Eigenvalues with multiplicity.
pub fn spectrum(m: &Matrix) -> Result<SpectrumSet> {
    spectrum_with(m, &ToleranceProfile::default())
}

/// Like [`spectrum`], with explicit tolerances for the residual check on normal input.
pub fn spectrum_with(m: &Matrix, tol: &ToleranceProfile) -> Result<SpectrumSet> {
    let schur = SchurForm::new(m)?;
    let norm = operator_norm(m)?;
    if m.normality_defect() <= tol.eq_tol * norm.max(1.0).powi(2) {
        let residual = schur.eigen_residual(m);
        if residual > tol.quad_tol * norm.max(1.0) {
            return Err(Error::Numeric(format!(
                "eigenpair residual {residual:.3e} exceeds {:.3e}",
                tol.quad_tol * norm.max(1.0)
            )));
        }
    }
    SpectrumSet::new(schur.eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norm_of_identity_and_rank_one() {
        for d in 1..5 {
            assert_abs_diff_eq!(operator_norm(&Matrix::identity(d)).unwrap(), 1.0, epsilon = 1e-14);
        }
        let m = Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(operator_norm(&m).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn norm_of_jordan_block_is_golden_ratio() {
        // M*M = [[1,1],[1,2]]: characteristic polynomial t^2 - 3t + 1,
        // largest root (3 + sqrt 5)/2 whose square root is (1 + sqrt 5)/2.
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert_abs_diff_eq!(operator_norm(&m).unwrap(), 1.618_033_988_749_895, epsilon = 1e-12);
    }

    #[test]
    fn norm_rejects_non_finite() {
        let m = Matrix::from_raw(DMatrix::from_element(2, 2, c(f64::NAN, 0.0)));
        assert!(matches!(operator_norm(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn abs_value_examples() {
        let m = Matrix::from_diag(&[c(-3.0, 0.0), c(0.0, 4.0)]);
        let a = abs_value(&m).unwrap();
        assert!(a.max_abs_diff(&Matrix::from_real_diag(&[3.0, 4.0])) < 1e-12);

        let m = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(abs_value(&m).unwrap().max_abs_diff(&Matrix::from_real_diag(&[0.0, 1.0])) < 1e-12);

        let h = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!(abs_value(&h).unwrap().max_abs_diff(&Matrix::identity(2)) < 1e-12);
    }

    #[test]
    fn re_im_examples() {
        let m = Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let (re, im) = re_im_parts(&m).unwrap();
        assert!(re.max_abs_diff(&Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()) < 1e-15);
        let expected_im = Matrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        assert!(im.max_abs_diff(&expected_im) < 1e-15);
        let back = &re + &im.scale(c(0.0, 1.0));
        assert!(back.max_abs_diff(&m) < 1e-15);

        let h = Matrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, -1.0)], vec![c(2.0, 1.0), c(-3.0, 0.0)]]).unwrap();
        let (re, im) = re_im_parts(&h).unwrap();
        assert!(re.max_abs_diff(&h) < 1e-15);
        assert!(im.frobenius() < 1e-15);

        let s = h.scale(c(0.0, 1.0));
        let (re, im) = re_im_parts(&s).unwrap();
        assert!(re.frobenius() < 1e-15);
        assert!(im.max_abs_diff(&s.scale(c(0.0, -1.0))) < 1e-15);
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&Matrix::from_real_diag(&[2.0, 5.0])).unwrap();
        let mut re: Vec<f64> = s.values().iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(re[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(re[1], 5.0, epsilon = 1e-14);

        let j = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let s = spectrum(&j).unwrap();
        assert_eq!(s.len(), 2);
        for z in s.values() {
            assert!((z - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_eigen_is_sorted_and_reconstructs() {
        let h = Matrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]]).unwrap();
        let e = HermitianEigen::new(&h).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-13);
        let back = e.map(|x| c(x, 0.0));
        assert!(back.max_abs_diff(&h) < 1e-13);
    }
}
