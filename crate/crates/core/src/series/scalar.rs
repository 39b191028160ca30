use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncated scalar power series `a_0 + a_1 z + ... + a_N z^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarSeries {
    coeffs: Vec<Complex64>,
}

impl ScalarSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("series has non-finite coefficients".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        Self::new((0..=order).map(f).collect())
    }

    /// The identity map `z`, truncated at `order >= 1`.
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order.max(1) + 1];
        coeffs[1] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Zero-padded or truncated copy of the given order.
    pub fn resized(&self, order: usize) -> Self {
        let coeffs = (0..=order).map(|n| self.coeff(n)).collect();
        Self { coeffs }
    }

    /// Cauchy product truncated at `order`.
    pub fn mul_truncated(&self, other: &ScalarSeries, order: usize) -> ScalarSeries {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        ScalarSeries { coeffs: out }
    }

    /// Series of `exp(self)`, from `n g_n = sum_{k=1}^n k h_k g_{n-k}`.
    pub fn exp(&self) -> ScalarSeries {
        let n_max = self.order();
        let mut g = vec![Complex64::new(0.0, 0.0); n_max + 1];
        g[0] = self.coeffs[0].exp();
        for n in 1..=n_max {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 1..=n {
                s += self.coeffs[k] * g[n - k] * k as f64;
            }
            g[n] = s / n as f64;
        }
        ScalarSeries { coeffs: g }
    }

    pub fn derivative(&self) -> ScalarSeries {
        if self.order() == 0 {
            return ScalarSeries { coeffs: vec![Complex64::new(0.0, 0.0)] };
        }
        let coeffs = (1..=self.order()).map(|n| self.coeffs[n] * n as f64).collect();
        ScalarSeries { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> ScalarSeries {
        ScalarSeries { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }
}

/// Coefficients of `phi^t` up to order `order`, for `phi(0) = 0` and `t >= 1`.
pub fn scalar_power_coeffs(phi: &ScalarSeries, t: usize, order: usize) -> Result<ScalarSeries> {
    if phi.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(Error::Contract(format!("phi(0) must vanish, got {}", phi.coeff(0))));
    }
    if t == 0 {
        return Err(Error::Contract("power t must be at least 1".into()));
    }
    let base = phi.resized(order);
    let mut acc = base.clone();
    for _ in 1..t {
        acc = acc.mul_truncated(&base, order);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(xs: &ScalarSeries) -> Vec<f64> {
        xs.coeffs().iter().map(|z| z.re).collect()
    }

    #[test]
    fn geometric_series_at_half() {
        let s = ScalarSeries::from_real(&[1.0; 61]).unwrap();
        let v = s.eval(Complex64::new(0.5, 0.0));
        assert!((v.re - 2.0).abs() <= 2f64.powi(-60) * 1.0001);
    }

    #[test]
    fn power_examples() {
        let z = ScalarSeries::identity(6);
        assert_eq!(re(&scalar_power_coeffs(&z, 3, 6).unwrap()), vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let z2 = ScalarSeries::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(re(&scalar_power_coeffs(&z2, 2, 6).unwrap()), vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        // (z + z^2)^2 = z^2 + 2z^3 + z^4
        let p = ScalarSeries::from_real(&[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(re(&scalar_power_coeffs(&p, 2, 5).unwrap()), vec![0.0, 0.0, 1.0, 2.0, 1.0, 0.0]);
        assert_eq!(scalar_power_coeffs(&p, 1, 2).unwrap(), p);
        assert!(scalar_power_coeffs(&ScalarSeries::from_real(&[1.0, 1.0]).unwrap(), 2, 3).is_err());
    }

    #[test]
    fn exp_recurrence_gives_factorials() {
        let z = ScalarSeries::identity(12);
        let e = z.exp();
        let mut fact = 1.0;
        for n in 0..=12 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((e.coeff(n).re - 1.0 / fact).abs() < 1e-16);
        }
    }

    #[test]
    fn derivative_of_koebe() {
        let k = ScalarSeries::from_fn(8, |n| Complex64::new(n as f64, 0.0)).unwrap();
        let d = k.derivative();
        for n in 0..8 {
            assert_eq!(d.coeff(n).re, ((n + 1) * (n + 1)) as f64);
        }
    }
}
