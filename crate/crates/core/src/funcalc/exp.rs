use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix};

/// Operator norms above this are rejected; `e^700` is near the top of the f64 range.
pub const EXP_NORM_CAP: f64 = 700.0;

// Diagonal [13/13] Pade coefficients and the matching scaling threshold.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring around a [13/13] Pade core.
pub fn matrix_exp(m: &Matrix) -> Result<Matrix> {
    m.ensure_square()?;
    m.ensure_finite()?;
    let norm = operator_norm(m)?;
    if norm > EXP_NORM_CAP {
        return Err(Error::Range(format!("||M|| = {norm:.3e} exceeds the exponential cap {EXP_NORM_CAP}")));
    }
    let n = m.rows();
    let a = m.inner();
    let n1 = one_norm(a);
    let squarings = if n1 > THETA13 { (n1 / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * Complex64::new(2f64.powi(-squarings), 0.0);

    let id = DMatrix::<Complex64>::identity(n, n);
    let b = |i: usize| Complex64::new(PADE13[i], 0.0);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::Numeric("Pade denominator is singular".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    let out = Matrix::from_raw(r);
    out.ensure_finite().map_err(|_| Error::Range("matrix exponential overflowed".into()))?;
    Ok(out)
}
