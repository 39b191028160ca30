use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix_exp;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix, SchurForm, SpectrumSet, ToleranceProfile};

/// Starting node count for the adaptive contour quadrature.
pub const DEFAULT_NODES: usize = 512;
/// Node count at which adaptive refinement gives up.
pub const MAX_NODES: usize = 1 << 16;
/// Resolvent norms above this at a quadrature node are treated as singular.
const RESOLVENT_CAP: f64 = 1e12;

/// Excluded ray `{t e^{i angle} : t >= 0}` of a logarithm branch.
///
/// The branch has arguments in `(angle - 2 pi, angle)`; the principal branch is `angle = pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCut {
    angle: f64,
}

impl Default for BranchCut {
    fn default() -> Self {
        Self::principal()
    }
}

impl BranchCut {
    pub fn new(angle: f64) -> Result<Self> {
        if !(angle > -PI && angle <= PI) {
            return Err(Error::InvalidInput(format!("branch angle {angle} not in (-pi, pi]")));
        }
        Ok(Self { angle })
    }

    pub fn principal() -> Self {
        Self { angle: PI }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Euclidean distance from `p` to the cut ray (which contains 0).
    pub fn distance(&self, p: Complex64) -> f64 {
        let rotated = p * Complex64::from_polar(1.0, -self.angle);
        if rotated.re <= 0.0 {
            p.norm()
        } else {
            rotated.im.abs()
        }
    }

    /// Scalar logarithm on this branch; `tol` is the minimal allowed distance to the cut.
    pub fn log(&self, w: Complex64, tol: f64) -> Result<Complex64> {
        if self.distance(w) <= tol {
            return Err(Error::Branch(format!("{w} lies on the cut ray at angle {}", self.angle)));
        }
        let mut shifted = w.arg() - self.angle;
        if shifted > 0.0 {
            shifted -= 2.0 * PI;
        } else if shifted <= -2.0 * PI {
            shifted += 2.0 * PI;
        }
        Ok(Complex64::new(w.norm().ln(), self.angle + shifted))
    }
}

/// Circular integration contour with trapezoidal nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("radius must be positive, got {radius}")));
        }
        if nodes < 16 {
            return Err(Error::Geometry(format!("at least 16 nodes required, got {nodes}")));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::Geometry("center must be finite".into()));
        }
        Ok(Self { center, radius, nodes })
    }

    /// Deterministic circle around `spectrum` that avoids `cut`.
    ///
    /// First candidate: centroid with radius 1.25 times the spectral spread.
    /// If that disk reaches the cut, fall back to the bounding-box center with
    /// the geometric mean of the enclosing radius and the distance to the cut.
    pub fn enclosing(spectrum: &SpectrumSet, cut: &BranchCut, nodes: usize) -> Result<Self> {
        if spectrum.is_empty() {
            return Err(Error::InvalidInput("empty spectrum".into()));
        }
        let centroid = spectrum.centroid();
        let spread = spectrum.values().iter().map(|z| (z - centroid).norm()).fold(0.0, f64::max);
        let first = if spread > 0.0 { 1.25 * spread } else { 0.5 * cut.distance(centroid) };
        if first > 0.0 {
            let c = Self::new(centroid, first, nodes)?;
            if c.validate(spectrum, cut).is_ok() {
                return Ok(c);
            }
        }

        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in spectrum.values() {
            lo_re = lo_re.min(z.re);
            hi_re = hi_re.max(z.re);
            lo_im = lo_im.min(z.im);
            hi_im = hi_im.max(z.im);
        }
        let center = Complex64::new(0.5 * (lo_re + hi_re), 0.5 * (lo_im + hi_im));
        let inner = spectrum.values().iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        let outer = cut.distance(center);
        if inner >= outer {
            return Err(Error::Geometry(format!(
                "no single circle encloses the spectrum (spread {inner:.3e}) while avoiding the cut (distance {outer:.3e})"
            )));
        }
        let radius = if inner > 0.0 { (inner * outer).sqrt() } else { 0.5 * outer };
        let c = Self::new(center, radius, nodes)?;
        c.validate(spectrum, cut)?;
        Ok(c)
    }

    /// Checks that the open disk contains `spectrum` and the closed disk misses the cut ray.
    pub fn validate(&self, spectrum: &SpectrumSet, cut: &BranchCut) -> Result<()> {
        for z in spectrum.values() {
            let d = (z - self.center).norm();
            if d >= self.radius {
                return Err(Error::Geometry(format!(
                    "eigenvalue {z} is not enclosed (distance {d:.6e} >= radius {:.6e})",
                    self.radius
                )));
            }
        }
        let gap = cut.distance(self.center);
        if gap <= self.radius {
            return Err(Error::Geometry(format!(
                "contour disk (radius {:.6e}) reaches the cut ray or the origin (distance {gap:.6e})",
                self.radius
            )));
        }
        Ok(())
    }

    fn with_nodes(&self, nodes: usize) -> Self {
        Self { nodes, ..*self }
    }
}

/// Logarithm of a normal matrix through its eigendecomposition.
pub fn log_eig_normal(m: &Matrix, cut: &BranchCut, tol: &ToleranceProfile) -> Result<Matrix> {
    m.ensure_square()?;
    let norm = operator_norm(m)?;
    let scale = norm.max(1.0);
    let defect = m.normality_defect();
    if defect > tol.eq_tol * scale * scale {
        return Err(Error::Contract(format!("matrix is not normal: ||MM* - M*M|| = {defect:.3e}")));
    }
    let schur = SchurForm::new(m)?;
    let logs = schur
        .eigenvalues()
        .into_iter()
        .map(|w| cut.log(w, tol.eq_tol * scale))
        .collect::<Result<Vec<_>>>()?;
    let out = Matrix::from_diag(&logs).conjugate_by(&schur.unitary);
    let back = matrix_exp(&out)?;
    let residual = (&back - m).frobenius();
    if residual > tol.quad_tol.max(tol.eq_tol) * scale * (m.rows() as f64).sqrt() {
        return Err(Error::Numeric(format!("exp(log M) misses M by {residual:.3e}")));
    }
    Ok(out)
}

/// Logarithm by trapezoidal quadrature of `(1/2 pi i) \oint log(xi) (xi I - M)^{-1} d xi`
/// on a single circle.
pub fn log_riesz_dunford(m: &Matrix, contour: &ContourSpec, cut: &BranchCut) -> Result<Matrix> {
    m.ensure_square()?;
    m.ensure_finite()?;
    let spec = SchurForm::new(m)?;
    contour.validate(&SpectrumSet::new(spec.eigenvalues())?, cut)?;
    quadrature(m, contour, cut)
}

fn quadrature(m: &Matrix, contour: &ContourSpec, cut: &BranchCut) -> Result<Matrix> {
    let n = m.rows();
    let id = Matrix::identity(n);
    let mut acc = Matrix::zeros(n, n);
    let nodes = contour.nodes;
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let e = Complex64::from_polar(1.0, theta);
        let xi = contour.center + e * contour.radius;
        let shifted = &id.scale(xi) - m;
        let resolvent = shifted.solve(&id).map_err(|_| {
            Error::Numeric(format!("resolvent is singular at node {xi}; move or enlarge the contour"))
        })?;
        if !resolvent.is_finite() || resolvent.frobenius() > RESOLVENT_CAP {
            return Err(Error::Numeric(format!(
                "resolvent norm {:.3e} at node {xi} is too large; move or enlarge the contour",
                resolvent.frobenius()
            )));
        }
        let weight = cut.log(xi, 0.0)? * e * contour.radius;
        acc += &resolvent.scale(weight);
    }
    Ok(acc.scale_real(1.0 / nodes as f64))
}

/// Contour logarithm with automatic placement and node doubling until two
/// successive results agree within `tol.quad_tol`.
pub fn log_riesz_dunford_adaptive(m: &Matrix, cut: &BranchCut, tol: &ToleranceProfile) -> Result<Matrix> {
    m.ensure_square()?;
    let spectrum = SpectrumSet::new(SchurForm::new(m)?.eigenvalues())?;
    let contour = ContourSpec::enclosing(&spectrum, cut, DEFAULT_NODES)?;
    let mut prev = log_riesz_dunford(m, &contour, cut)?;
    let mut nodes = DEFAULT_NODES;
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = quadrature(m, &contour.with_nodes(nodes), cut)?;
        if (&next - &prev).frobenius() < tol.quad_tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numeric(format!("contour quadrature did not settle within {MAX_NODES} nodes")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_logs() {
        let p = BranchCut::principal();
        assert!((p.log(c(-1.0, 1e-300), 0.0).unwrap() - c(0.0, PI)).norm() < 1e-12);
        assert!((p.log(c(0.0, 2.0), 0.0).unwrap() - c(2f64.ln(), PI / 2.0)).norm() < 1e-15);
        assert!(matches!(p.log(c(-2.0, 0.0), 1e-12), Err(Error::Branch(_))));
        assert!(matches!(p.log(c(0.0, 0.0), 0.0), Err(Error::Branch(_))));
        // cut along the positive imaginary axis: arguments in (-3pi/2, pi/2)
        let up = BranchCut::new(PI / 2.0).unwrap();
        assert!((up.log(c(-1.0, 0.0), 0.0).unwrap() - c(0.0, -PI)).norm() < 1e-15);
        assert!(BranchCut::new(-PI).is_err());
    }

    #[test]
    fn log_eig_normal_examples() {
        let tol = ToleranceProfile::default();
        let cut = BranchCut::principal();
        assert!(log_eig_normal(&Matrix::identity(3), &cut, &tol).unwrap().frobenius() < 1e-15);

        let e = std::f64::consts::E;
        let l = log_eig_normal(&Matrix::from_real_diag(&[e, e * e]), &cut, &tol).unwrap();
        assert!(l.max_abs_diff(&Matrix::from_real_diag(&[1.0, 2.0])) < 1e-14);

        let m = Matrix::from_diag(&[c(0.0, 2.0), c(0.0, -2.0)]);
        let l = log_eig_normal(&m, &cut, &tol).unwrap();
        let expected = Matrix::from_diag(&[c(2f64.ln(), PI / 2.0), c(2f64.ln(), -PI / 2.0)]);
        assert!(l.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn log_eig_normal_errors() {
        let tol = ToleranceProfile::default();
        let cut = BranchCut::principal();
        let on_cut = Matrix::from_real_diag(&[1.0, -3.0]);
        assert!(matches!(log_eig_normal(&on_cut, &cut, &tol), Err(Error::Branch(_))));
        let jordan = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(log_eig_normal(&jordan, &cut, &tol), Err(Error::Contract(_))));
    }

    #[test]
    fn contour_log_of_diagonal() {
        let cut = BranchCut::principal();
        let contour = ContourSpec::new(c(2.5, 0.0), 1.0, 256).unwrap();
        let l = log_riesz_dunford(&Matrix::from_real_diag(&[2.0, 3.0]), &contour, &cut).unwrap();
        assert!(l.max_abs_diff(&Matrix::from_real_diag(&[2f64.ln(), 3f64.ln()])) < 1e-10);

        let contour = ContourSpec::new(c(1.0, 0.0), 0.5, 256).unwrap();
        let l = log_riesz_dunford(&Matrix::identity(2), &contour, &cut).unwrap();
        assert!(l.frobenius() < 1e-12);
    }

    #[test]
    fn contour_geometry_errors() {
        let cut = BranchCut::principal();
        let m = Matrix::from_real_diag(&[2.0, 3.0]);
        // does not enclose 3
        let small = ContourSpec::new(c(2.0, 0.0), 0.5, 64).unwrap();
        assert!(matches!(log_riesz_dunford(&m, &small, &cut), Err(Error::Geometry(_))));
        // encloses the origin
        let big = ContourSpec::new(c(2.5, 0.0), 3.0, 64).unwrap();
        assert!(matches!(log_riesz_dunford(&m, &big, &cut), Err(Error::Geometry(_))));
        assert!(ContourSpec::new(c(0.0, 0.0), 1.0, 8).is_err());
        assert!(ContourSpec::new(c(0.0, 0.0), -1.0, 64).is_err());
    }

    #[test]
    fn auto_placement_handles_wide_real_spectrum() {
        let cut = BranchCut::principal();
        let s = SpectrumSet::from_real(&[1.0, 1.2, 9.7, 10.0]).unwrap();
        let contour = ContourSpec::enclosing(&s, &cut, 512).unwrap();
        contour.validate(&s, &cut).unwrap();
        let tight = SpectrumSet::from_real(&[4.0, 4.0]).unwrap();
        ContourSpec::enclosing(&tight, &cut, 512).unwrap().validate(&tight, &cut).unwrap();
        let surrounding = SpectrumSet::new(vec![c(1.0, 0.0), c(-1.0, 1.0), c(-1.0, -1.0)]).unwrap();
        assert!(ContourSpec::enclosing(&surrounding, &cut, 512).is_err());
    }

    #[test]
    fn adaptive_matches_eigen_route() {
        let tol = ToleranceProfile::default();
        let cut = BranchCut::principal();
        let m = Matrix::from_real_diag(&[1.0, 4.0, 10.0]);
        let a = log_riesz_dunford_adaptive(&m, &cut, &tol).unwrap();
        let b = log_eig_normal(&m, &cut, &tol).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-9);
    }
}
