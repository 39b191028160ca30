use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ScalarSeries;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Anything that can be evaluated at points of the open unit disk.
pub trait DiskFunction {
    fn dim(&self) -> usize;
    fn eval(&self, z: Complex64) -> Result<Matrix>;
}

pub(crate) fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("|z| = {} is not inside the unit disk", z.norm())));
    }
    Ok(())
}

fn check_coeffs(coeffs: &[Matrix]) -> Result<usize> {
    let first = coeffs
        .first()
        .ok_or_else(|| Error::InvalidInput("series needs at least one coefficient".into()))?;
    first.ensure_square()?;
    let d = first.dim();
    for (n, a) in coeffs.iter().enumerate() {
        if a.rows() != d || a.cols() != d {
            return Err(Error::InvalidInput(format!("coefficient {n} is {}x{}, expected {d}x{d}", a.rows(), a.cols())));
        }
        a.ensure_finite()?;
    }
    Ok(d)
}

/// Truncated power series `sum_{n=0}^N A_n z^n` with `d x d` coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHolo", into = "RawHolo")]
pub struct HoloSeries {
    coeffs: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct RawHolo {
    dim: usize,
    order: usize,
    coeffs: Vec<Matrix>,
}

impl TryFrom<RawHolo> for HoloSeries {
    type Error = Error;
    fn try_from(raw: RawHolo) -> Result<Self> {
        let s = HoloSeries::new(raw.coeffs)?;
        if s.dim() != raw.dim || s.order() != raw.order {
            return Err(Error::InvalidInput("dim/order fields disagree with coefficients".into()));
        }
        Ok(s)
    }
}

impl From<HoloSeries> for RawHolo {
    fn from(s: HoloSeries) -> Self {
        Self { dim: s.dim(), order: s.order(), coeffs: s.coeffs }
    }
}

impl HoloSeries {
    pub fn new(coeffs: Vec<Matrix>) -> Result<Self> {
        check_coeffs(&coeffs)?;
        Ok(Self { coeffs })
    }

    pub(crate) fn from_raw(coeffs: Vec<Matrix>) -> Self {
        Self { coeffs }
    }

    /// `sum a_n z^n I_d`.
    pub fn from_scalar(s: &ScalarSeries, dim: usize) -> Self {
        Self { coeffs: s.coeffs().iter().map(|&a| Matrix::scalar(a, dim)).collect() }
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        Self { coeffs: vec![Matrix::zeros(dim, dim); order + 1] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&Matrix> {
        self.coeffs.get(n)
    }

    pub fn truncated(&self, order: usize) -> HoloSeries {
        let d = self.dim();
        let coeffs = (0..=order).map(|n| self.coeffs.get(n).cloned().unwrap_or_else(|| Matrix::zeros(d, d))).collect();
        Self { coeffs }
    }

    /// Horner evaluation; `|z| < 1` required.
    pub fn evaluate(&self, z: Complex64) -> Result<Matrix> {
        check_disk(z)?;
        Ok(self.horner(z))
    }

    /// Horner evaluation without the disk check.
    pub(crate) fn horner(&self, z: Complex64) -> Matrix {
        let d = self.dim();
        self.coeffs.iter().rev().fold(Matrix::zeros(d, d), |acc, a| acc.scale(z) + a)
    }

    /// Term-by-term derivative; a constant maps to the zero series of order 0.
    pub fn derivative(&self) -> HoloSeries {
        let d = self.dim();
        if self.order() == 0 {
            return HoloSeries::zero(d, 0);
        }
        let coeffs = (1..=self.order()).map(|n| self.coeffs[n].scale_real(n as f64)).collect();
        Self { coeffs }
    }

    /// `L f R` coefficientwise.
    pub fn sandwich(&self, left: &Matrix, right: &Matrix) -> HoloSeries {
        Self { coeffs: self.coeffs.iter().map(|a| left * a * right).collect() }
    }
}

impl DiskFunction for HoloSeries {
    fn dim(&self) -> usize {
        HoloSeries::dim(self)
    }

    fn eval(&self, z: Complex64) -> Result<Matrix> {
        self.evaluate(z)
    }
}

/// Truncated harmonic series `sum_{n=0}^N A_n z^n + sum_{n=1}^N B_n^* conj(z)^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHarmonic", into = "RawHarmonic")]
pub struct HarmonicSeries {
    analytic: Vec<Matrix>,
    coanalytic: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct RawHarmonic {
    dim: usize,
    order: usize,
    analytic: Vec<Matrix>,
    /// `B_1 .. B_N`.
    coanalytic: Vec<Matrix>,
}

impl TryFrom<RawHarmonic> for HarmonicSeries {
    type Error = Error;
    fn try_from(raw: RawHarmonic) -> Result<Self> {
        let s = HarmonicSeries::new(raw.analytic, raw.coanalytic)?;
        if s.dim() != raw.dim || s.order() != raw.order {
            return Err(Error::InvalidInput("dim/order fields disagree with coefficients".into()));
        }
        Ok(s)
    }
}

impl From<HarmonicSeries> for RawHarmonic {
    fn from(s: HarmonicSeries) -> Self {
        Self { dim: s.dim(), order: s.order(), analytic: s.analytic, coanalytic: s.coanalytic }
    }
}

impl HarmonicSeries {
    /// `analytic` holds `A_0..A_N`, `coanalytic` holds `B_1..B_N`.
    pub fn new(analytic: Vec<Matrix>, coanalytic: Vec<Matrix>) -> Result<Self> {
        let d = check_coeffs(&analytic)?;
        if coanalytic.len() + 1 != analytic.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} coanalytic coefficients, got {}",
                analytic.len() - 1,
                coanalytic.len()
            )));
        }
        if !coanalytic.is_empty() && check_coeffs(&coanalytic)? != d {
            return Err(Error::InvalidInput("analytic and coanalytic dimensions differ".into()));
        }
        Ok(Self { analytic, coanalytic })
    }

    /// Holomorphic series viewed as harmonic with `B_n = 0`.
    pub fn from_holo(f: &HoloSeries) -> Self {
        let d = f.dim();
        Self { analytic: f.coeffs().to_vec(), coanalytic: vec![Matrix::zeros(d, d); f.order()] }
    }

    pub fn dim(&self) -> usize {
        self.analytic[0].dim()
    }

    pub fn order(&self) -> usize {
        self.analytic.len() - 1
    }

    /// `A_n`.
    pub fn a(&self, n: usize) -> &Matrix {
        &self.analytic[n]
    }

    /// `B_n` for `1 <= n <= N`.
    pub fn b(&self, n: usize) -> &Matrix {
        assert!(n >= 1, "B_0 is not part of a harmonic expansion");
        &self.coanalytic[n - 1]
    }

    pub fn analytic(&self) -> &[Matrix] {
        &self.analytic
    }

    pub fn coanalytic(&self) -> &[Matrix] {
        &self.coanalytic
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Matrix> {
        check_disk(z)?;
        let d = self.dim();
        let holo = self.analytic.iter().rev().fold(Matrix::zeros(d, d), |acc, a| acc.scale(z) + a);
        let zb = z.conj();
        let anti = self
            .coanalytic
            .iter()
            .rev()
            .fold(Matrix::zeros(d, d), |acc, b| (acc + b.adjoint()).scale(zb));
        Ok(holo + anti)
    }
}

impl DiskFunction for HarmonicSeries {
    fn dim(&self) -> usize {
        HarmonicSeries::dim(self)
    }

    fn eval(&self, z: Complex64) -> Result<Matrix> {
        self.evaluate(z)
    }
}

/// Generic evaluation entry point for series and closed-form instances.
pub fn evaluate<F: DiskFunction + ?Sized>(f: &F, z: Complex64) -> Result<Matrix> {
    f.eval(z)
}

/// Adapts a closure into a [`DiskFunction`].
pub struct FnDisk<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(Complex64) -> Result<Matrix>> FnDisk<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(Complex64) -> Result<Matrix>> DiskFunction for FnDisk<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: Complex64) -> Result<Matrix> {
        check_disk(z)?;
        (self.f)(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_series() {
        let a0 = Matrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let f = HoloSeries::new(vec![a0.clone()]).unwrap();
        assert_eq!(f.evaluate(c(0.3, -0.2)).unwrap(), a0);
        assert!(matches!(f.evaluate(c(1.0, 0.0)), Err(Error::Domain(_))));
        let d = f.derivative();
        assert_eq!(d.order(), 0);
        assert_eq!(d.coeffs()[0].frobenius(), 0.0);
    }

    #[test]
    fn derivative_of_identity_map() {
        let f = HoloSeries::new(vec![Matrix::zeros(2, 2), Matrix::identity(2)]).unwrap();
        let d = f.derivative();
        assert_eq!(d.order(), 0);
        assert_eq!(d.coeffs()[0], Matrix::identity(2));
    }

    #[test]
    fn harmonic_single_coanalytic_term() {
        let b1 = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let h = HarmonicSeries::new(vec![Matrix::zeros(2, 2), Matrix::zeros(2, 2)], vec![b1.clone()]).unwrap();
        let z = c(0.0, 0.5);
        let expected = b1.adjoint().scale(c(0.0, -0.5));
        assert!(h.evaluate(z).unwrap().max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn shape_validation() {
        assert!(HoloSeries::new(vec![]).is_err());
        assert!(HoloSeries::new(vec![Matrix::identity(2), Matrix::identity(3)]).is_err());
        assert!(HarmonicSeries::new(vec![Matrix::identity(2); 3], vec![Matrix::identity(2)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = HoloSeries::new(vec![Matrix::identity(2), Matrix::from_real_diag(&[0.5, -0.25])]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"order\":1"));
        let back: HoloSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = s.replace("\"order\":1", "\"order\":4");
        assert!(serde_json::from_str::<HoloSeries>(&bad).is_err());
    }
}
