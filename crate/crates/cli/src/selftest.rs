//! Oracle cross-checks between independent computation paths.

use std::f64::consts::PI;
use std::fmt;

use opbohr::analysis::{bohr_radius_bisect, norm_majorant, psi, psi_peak, thm2_radius, thm3_radius, T4_RADIUS};
use opbohr::funcalc::{
    colligation_log_coeff, herglotz_transfer, log_eig_normal, log_riesz_dunford_adaptive, matrix_exp, BranchCut,
    ColligationSpec,
};
use opbohr::generators::{
    derive_seed, gaussian_matrix, koebe, mobius, random_unitary_rng, sample, seeded_rng, FamilyId, FamilySpec,
};
use opbohr::linalg::{c64, operator_norm, Matrix, ToleranceProfile};
use opbohr::series::{coeffs_via_cauchy_integral, compose_subordination, koebe_transform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    /// Largest discrepancy observed between the two paths.
    pub error: f64,
    pub tol: f64,
}

impl OracleCheck {
    fn new(name: &str, error: f64, tol: f64) -> Self {
        Self { name: name.into(), error, tol }
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tol
    }
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<40} error {:.3e} (tol {:.1e})", self.name, self.error, self.tol)
    }
}

/// `U diag(lambda) U*` with `lambda` uniform in `[lo, hi]`.
fn planted_normal<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> (Matrix, Vec<f64>) {
    let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    let u = random_unitary_rng(n, rng);
    (Matrix::from_real_diag(&lambda).conjugate_by(&u), lambda)
}

/// Contour logarithm against the eigendecomposition logarithm on normal
/// matrices with spectra in `[1, 10]`.
pub fn log_paths_agree(count: usize, seed: u64) -> CliResult<f64> {
    let tol = ToleranceProfile::default();
    let cut = BranchCut::principal();
    let mut worst = 0.0f64;
    for i in 0..count {
        let mut rng = seeded_rng(derive_seed(seed, i as u64));
        let n = rng.random_range(1..=5);
        let (m, _) = planted_normal(n, 1.0, 10.0, &mut rng);
        let a = log_riesz_dunford_adaptive(&m, &cut, &tol)?;
        let b = log_eig_normal(&m, &cut, &tol)?;
        worst = worst.max(a.max_abs_diff(&b));
    }
    Ok(worst)
}

/// Random colligation with `||V||^2` up to 4.
pub fn random_colligation(seed: u64) -> CliResult<ColligationSpec> {
    let mut rng = seeded_rng(seed);
    let d = rng.random_range(1..=4);
    let k = rng.random_range(1..=4);
    let u = random_unitary_rng(k, &mut rng);
    let v = gaussian_matrix(k, d, &mut rng);
    let target = rng.random_range(0.1..2.0);
    let v = v.scale_real(target / operator_norm(&v)?.max(f64::MIN_POSITIVE));
    Ok(ColligationSpec::new(u, v, &ToleranceProfile::default())?)
}

/// Taylor coefficients of the Herglotz transfer, extracted by a Cauchy
/// integral, against the closed form; relative to `max(1, ||V||^2)`.
pub fn herglotz_coefficients_agree(count: usize, order: usize, seed: u64) -> CliResult<f64> {
    let mut worst = 0.0f64;
    for i in 0..count {
        let c = random_colligation(derive_seed(seed, i as u64))?;
        let series = coeffs_via_cauchy_integral(|z| herglotz_transfer(&c, z), order, 0.5, 128)?;
        let scale = c.v_norm_sq()?.max(1.0);
        worst = worst.max(series.coeffs()[0].max_abs_diff(&c.log_a0()) / scale);
        for n in 1..=order {
            let exact = colligation_log_coeff(&c, n as u32)?;
            worst = worst.max(series.coeffs()[n].max_abs_diff(&exact) / scale);
        }
    }
    Ok(worst)
}

/// Composed coefficients against evaluating `f(phi(z))` pointwise for `|z| <= 0.4`.
pub fn composition_agrees(count: usize, seed: u64) -> CliResult<f64> {
    let mut worst = 0.0f64;
    for i in 0..count {
        let s = derive_seed(seed, i as u64);
        let spec = FamilySpec::new(FamilyId::SchurHolo, 1 + i % 3, 48, s);
        let inst = sample(&spec)?;
        let f = match &inst {
            opbohr::generators::Sample::SchurHolo { series, .. } => series.clone(),
            _ => unreachable!("schur_holo yields a holomorphic sample"),
        };
        let w = sample(&FamilySpec::new(FamilyId::Subordination, 1, 48, derive_seed(s, 1)))?;
        let w = w.as_witness().expect("witness sample").clone();
        let g = compose_subordination(&f, &w, 48);
        let mut rng = seeded_rng(derive_seed(s, 2));
        for _ in 0..50 {
            let z = c64(rng.random_range(0.0..0.4), 0.0) * c64(0.0, rng.random_range(0.0..2.0 * PI)).exp();
            let direct = f.evaluate(w.phi().eval(z))?;
            worst = worst.max(g.evaluate(z)?.max_abs_diff(&direct));
        }
    }
    Ok(worst)
}

/// Every cross-check with its pinned tolerance.
pub fn selftest(seed: u64) -> CliResult<Vec<OracleCheck>> {
    let tol = ToleranceProfile::default();
    let mut out = Vec::new();

    let j = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])?;
    out.push(OracleCheck::new("norm of Jordan block vs golden ratio", (operator_norm(&j)? - 1.618_033_988_749_895).abs(), 1e-12));

    let nil = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])?;
    out.push(OracleCheck::new("exp of nilpotent vs I + N", matrix_exp(&nil)?.max_abs_diff(&(&Matrix::identity(2) + &nil)), 1e-14));

    out.push(OracleCheck::new("contour log vs eigen log", log_paths_agree(100, derive_seed(seed, 1))?, 1e-8));
    out.push(OracleCheck::new("herglotz taylor vs closed form", herglotz_coefficients_agree(50, 8, derive_seed(seed, 2))?, 1e-9));
    out.push(OracleCheck::new("composition vs pointwise", composition_agrees(10, derive_seed(seed, 3))?, 1e-10));

    let f = koebe(2, 32);
    let t = koebe_transform(&f, c64(0.0, 0.0), 32)?;
    let err = f.coeffs().iter().zip(t.coeffs()).map(|(a, b)| a.max_abs_diff(b) / a.frobenius().max(1.0)).fold(0.0, f64::max);
    out.push(OracleCheck::new("koebe transform at 0 vs identity", err, 1e-8));

    let (x0, peak) = psi_peak(0.5)?;
    let grid = (0..=100_000).map(|i| psi(0.5, i as f64 / 100_000.0)).fold(f64::MIN, f64::max);
    out.push(OracleCheck::new("psi peak vs dense grid", (psi(0.5, x0) - peak).abs() + (peak - grid).abs(), 1e-9));

    let r2 = thm2_radius(&Matrix::from_real_diag(&[2.0, 2.0]), &tol)?.radius;
    out.push(OracleCheck::new("exterior radius at A0 = 2I vs 1/3", (r2 - 1.0 / 3.0).abs(), 1e-12));
    out.push(OracleCheck::new("subordination radius at A1 = I vs 1/3", (thm3_radius(&Matrix::identity(3))? - 1.0 / 3.0).abs(), 1e-12));

    let km = norm_majorant(koebe(1, 256).coeffs(), T4_RADIUS, 1)?;
    out.push(OracleCheck::new("koebe majorant at 3-2sqrt2 vs 1/4", (km - 0.25).abs(), 1e-10));

    let mut worst = 0.0f64;
    for i in 1..10 {
        let a = i as f64 / 10.0;
        let (series, tail) = mobius(a, 1, 512);
        let est = bohr_radius_bisect(
            |r| norm_majorant(series.coeffs(), r, 0).map(|m| m + tail.tail(r, 512) <= 1.0).unwrap_or(false),
            0.01,
            0.99,
            1e-10,
        )?;
        worst = worst.max((est.radius - 1.0 / (1.0 + 2.0 * a)).abs());
    }
    out.push(OracleCheck::new("mobius bohr radius vs 1/(1+2a)", worst, 1e-6));
    Ok(out)
}
