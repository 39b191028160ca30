use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_disk, scalar_power_coeffs, HoloSeries, SubordinationWitness};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, operator_norm, Matrix};

/// Default extraction radius for [`koebe_transform`].
pub const KOEBE_RHO: f64 = 0.8;

/// Condition number beyond which `f'(a)` is treated as singular.
pub const SINGULAR_COND: f64 = 1e12;

/// Coefficients of `g = f o phi` to order `order`: `B_0 = A_0`,
/// `B_k = sum_{n=1}^k alpha_k^(n) A_n` with `alpha^(n)` the coefficients of `phi^n`.
pub fn compose_subordination(f: &HoloSeries, w: &SubordinationWitness, order: usize) -> HoloSeries {
    let d = f.dim();
    let mut out = vec![Matrix::zeros(d, d); order + 1];
    out[0] = f.coeffs()[0].clone();
    let top = f.order().min(order);
    if top == 0 {
        return HoloSeries::from_raw(out);
    }
    let base = w.phi().resized(order);
    let mut power = scalar_power_coeffs(&base, 1, order).expect("witness fixes the origin");
    for n in 1..=top {
        let a_n = &f.coeffs()[n];
        for (k, slot) in out.iter_mut().enumerate().skip(n) {
            let alpha = power.coeff(k);
            if alpha != Complex64::new(0.0, 0.0) {
                *slot += &a_n.scale(alpha);
            }
        }
        if n < top {
            power = power.mul_truncated(&base, order);
        }
    }
    HoloSeries::from_raw(out)
}

/// Taylor coefficients `A_0..A_N` of `eval_fn` from `nodes` samples on `|z| = rho`.
pub fn coeffs_via_cauchy_integral<F>(eval_fn: F, order: usize, rho: f64, nodes: usize) -> Result<HoloSeries>
where
    F: Fn(Complex64) -> Result<Matrix>,
{
    if nodes <= 2 * order {
        return Err(Error::Contract(format!("need more than {} nodes for order {order}, got {nodes}", 2 * order)));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("extraction radius {rho} not in (0, 1)")));
    }
    // twiddle[j] = exp(-2 pi i j / M), each computed directly from its index
    let twiddle: Vec<Complex64> = (0..nodes)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / nodes as f64))
        .collect();
    let samples = (0..nodes)
        .map(|m| eval_fn(Complex64::from_polar(rho, 2.0 * PI * m as f64 / nodes as f64)))
        .collect::<Result<Vec<_>>>()?;
    let d = samples[0].rows();
    if samples.iter().any(|s| s.rows() != d || s.cols() != d) {
        return Err(Error::InvalidInput("evaluator returned inconsistent shapes".into()));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut rho_pow = 1.0;
    let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
    for n in 0..=order {
        acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for (m, s) in samples.iter().enumerate() {
            let w = twiddle[(n * m) % nodes];
            for (a, &x) in acc.iter_mut().zip(s.inner().as_slice()) {
                *a += x * w;
            }
        }
        let k = 1.0 / (nodes as f64 * rho_pow);
        coeffs.push(Matrix::from_raw(DMatrix::from_iterator(d, d, acc.iter().map(|&a| a * k))));
        rho_pow *= rho;
    }
    HoloSeries::new(coeffs)
}

/// Koebe transform at `a` with the default extraction radius.
pub fn koebe_transform(f: &HoloSeries, a: Complex64, order: usize) -> Result<HoloSeries> {
    koebe_transform_with(f, a, order, KOEBE_RHO, (4 * (order + 1)).max(256))
}

/// `G(z) = (1-|a|^2)^{-1} f'(a)^{-1} (f((z+a)/(1+conj(a) z)) - f(a))`, extracted on `|z| = rho`.
pub fn koebe_transform_with(f: &HoloSeries, a: Complex64, order: usize, rho: f64, nodes: usize) -> Result<HoloSeries> {
    check_disk(a)?;
    let fp = f.derivative().evaluate(a)?;
    let cond = condition_number(&fp)?;
    if !(cond < SINGULAR_COND) {
        return Err(Error::Contract(format!("f'(a) is numerically singular (condition {cond:.3e})")));
    }
    let fp_inv = fp.inverse()?.scale_real(1.0 / (1.0 - a.norm_sqr()));
    let fa = f.evaluate(a)?;
    let g = coeffs_via_cauchy_integral(
        |z| {
            let u = (z + a) / (Complex64::new(1.0, 0.0) + a.conj() * z);
            Ok(&fp_inv * &(f.evaluate(u)? - &fa))
        },
        order,
        rho,
        nodes,
    )?;
    let d = f.dim();
    let scale = g.coeffs().iter().map(|c| c.frobenius()).fold(1.0, f64::max);
    let g0 = operator_norm(&g.coeffs()[0])?;
    let g1 = if order >= 1 { operator_norm(&(&g.coeffs()[1] - &Matrix::identity(d)))? } else { 0.0 };
    if g0 > 1e-9 * scale || g1 > 1e-9 * scale {
        return Err(Error::Numeric(format!("normalization lost: |G(0)| = {g0:.3e}, |G'(0) - I| = {g1:.3e}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ScalarSeries;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_witness_leaves_series_unchanged() {
        let f = HoloSeries::new((0..6).map(|n| Matrix::from_real_diag(&[n as f64, 1.0 / (n + 1) as f64])).collect())
            .unwrap();
        let g = compose_subordination(&f, &SubordinationWitness::identity(5), 5);
        assert_eq!(g, f);
    }

    #[test]
    fn koebe_under_z_squared() {
        let n_max = 20;
        let f = HoloSeries::from_scalar(&ScalarSeries::from_fn(n_max, |n| c(n as f64)).unwrap(), 2);
        let z2 = ScalarSeries::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let w = SubordinationWitness::certify(z2, &Default::default()).unwrap();
        let g = compose_subordination(&f, &w, n_max);
        for k in 0..=n_max {
            let expected = if k % 2 == 0 { (k / 2) as f64 } else { 0.0 };
            assert!(g.coeffs()[k].max_abs_diff(&Matrix::scalar(c(expected), 2)) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn cauchy_extracts_exp() {
        let s = coeffs_via_cauchy_integral(|z| Ok(Matrix::scalar(z.exp(), 1)), 10, 0.5, 256).unwrap();
        let mut fact = 1.0;
        for n in 0..=10 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((s.coeffs()[n].get(0, 0) - c(1.0 / fact)).norm() < 1e-12);
        }
    }

    #[test]
    fn cauchy_constant_and_contract() {
        let a0 = Matrix::from_real_rows(&[&[1.0, -2.0], &[0.5, 3.0]]).unwrap();
        let s = coeffs_via_cauchy_integral(|_| Ok(a0.clone()), 4, 0.7, 16).unwrap();
        assert!(s.coeffs()[0].max_abs_diff(&a0) < 1e-14);
        for n in 1..=4 {
            assert!(s.coeffs()[n].frobenius() < 1e-13);
        }
        assert!(matches!(coeffs_via_cauchy_integral(|_| Ok(a0.clone()), 8, 0.7, 16), Err(Error::Contract(_))));
    }

    #[test]
    fn koebe_transform_of_identity_map() {
        let f = HoloSeries::new(vec![Matrix::zeros(2, 2), Matrix::identity(2)]).unwrap();
        let g = koebe_transform(&f, c(0.5), 24).unwrap();
        for n in 1..=24 {
            let expected = (-0.5f64).powi(n as i32 - 1);
            assert!(g.coeffs()[n].max_abs_diff(&Matrix::scalar(c(expected), 2)) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn koebe_transform_fixes_normalized_at_zero() {
        let f = HoloSeries::new(vec![
            Matrix::zeros(2, 2),
            Matrix::identity(2),
            Matrix::from_real_rows(&[&[0.3, 0.1], &[0.0, -0.2]]).unwrap(),
            Matrix::from_real_diag(&[0.05, 0.1]),
        ])
        .unwrap();
        let g = koebe_transform(&f, c(0.0), 3).unwrap();
        for n in 0..=3 {
            assert!(g.coeffs()[n].max_abs_diff(&f.coeffs()[n]) < 1e-12);
        }
    }

    #[test]
    fn koebe_transform_rejects_singular_derivative() {
        let f = HoloSeries::new(vec![Matrix::zeros(2, 2), Matrix::from_real_diag(&[1.0, 0.0])]).unwrap();
        assert!(matches!(koebe_transform(&f, c(0.2), 4), Err(Error::Contract(_))));
    }
}
