use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix};
use crate::series::DiskFunction;

/// Rings `r_j = 1 - 2^{-j}`, `j = 1..=rings`, each sampled at `angles` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiminfGrid {
    pub rings: usize,
    pub angles: usize,
}

impl Default for LiminfGrid {
    fn default() -> Self {
        Self { rings: 20, angles: 360 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiminfEstimate {
    /// Minimum of the ring minima over the outermost quarter of the rings.
    pub estimate: f64,
    /// `(r_j, min_theta ||f(r_j e^{i theta}) - base||)` for every ring.
    pub ring_minima: Vec<(f64, f64)>,
}

/// Grid estimate of `liminf_{|z| -> 1} ||f(z) - base||`.
pub fn boundary_distance_liminf<F: DiskFunction + ?Sized>(
    f: &F,
    base: &Matrix,
    grid: LiminfGrid,
) -> Result<LiminfEstimate> {
    if grid.rings == 0 || grid.angles == 0 {
        return Err(Error::InvalidInput("liminf grid needs at least one ring and one angle".into()));
    }
    let mut ring_minima = Vec::with_capacity(grid.rings);
    for j in 1..=grid.rings {
        let rho = 1.0 - 0.5f64.powi(j as i32);
        let mut best = f64::INFINITY;
        for m in 0..grid.angles {
            let z = Complex64::from_polar(rho, 2.0 * PI * m as f64 / grid.angles as f64);
            best = best.min(operator_norm(&(&f.eval(z)? - base))?);
        }
        ring_minima.push((rho, best));
    }
    let start = grid.rings - grid.rings / 4 - 1;
    let estimate = ring_minima[start..].iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    Ok(LiminfEstimate { estimate, ring_minima })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::FnDisk;

    fn scalar(f: impl Fn(Complex64) -> Complex64) -> FnDisk<impl Fn(Complex64) -> Result<Matrix>> {
        FnDisk::new(1, move |z| Ok(Matrix::scalar(f(z), 1)))
    }

    #[test]
    fn half_plane_map() {
        let one = Complex64::new(1.0, 0.0);
        let est = boundary_distance_liminf(&scalar(|z| z / (one - z)), &Matrix::zeros(1, 1), LiminfGrid::default())
            .unwrap();
        assert!((est.estimate - 0.5).abs() < 1e-4);
        let vals: Vec<f64> = est.ring_minima.iter().map(|p| p.1).collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn koebe_map() {
        let one = Complex64::new(1.0, 0.0);
        let est = boundary_distance_liminf(
            &scalar(|z| z / ((one - z) * (one - z))),
            &Matrix::zeros(1, 1),
            LiminfGrid::default(),
        )
        .unwrap();
        assert!((est.estimate - 0.25).abs() < 1e-9);
    }

    #[test]
    fn identity_map() {
        let f = FnDisk::new(2, |z| Ok(Matrix::scalar(z, 2)));
        let est = boundary_distance_liminf(&f, &Matrix::zeros(2, 2), LiminfGrid::default()).unwrap();
        assert!((est.estimate - 1.0).abs() < 1e-4);
    }
}
