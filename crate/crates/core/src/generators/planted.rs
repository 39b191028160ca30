use num_complex::Complex64;
use rand::Rng;

use super::{gaussian_matrix, seeded_rng};
use crate::analysis::TailBound;
use crate::linalg::{lambda_max_hermitian, Matrix};
use crate::series::HoloSeries;

/// `((z - a)/(1 - a z)) I_d`: `A_0 = -a I`, `A_n = (1 - a^2) a^{n-1} I`.
pub fn mobius(a: f64, dim: usize, order: usize) -> (HoloSeries, TailBound) {
    let coeffs = (0..=order)
        .map(|n| {
            let c = if n == 0 { -a } else { (1.0 - a * a) * a.powi(n as i32 - 1) };
            Matrix::scalar(Complex64::new(c, 0.0), dim)
        })
        .collect();
    let tail = if a == 0.0 { TailBound::None } else { TailBound::Geometric { scale: (1.0 - a * a) / a, ratio: a } };
    (HoloSeries::new(coeffs).expect("finite coefficients"), tail)
}

/// `z/(1 - z)^2 I_d`: `A_n = n I`.
pub fn koebe(dim: usize, order: usize) -> HoloSeries {
    HoloSeries::new((0..=order).map(|n| Matrix::scalar(Complex64::new(n as f64, 0.0), dim)).collect())
        .expect("finite coefficients")
}

/// Gaussian coefficients `H_0..H_{len-1}` scaled so that `sum |H_n|^2 <= I`.
pub fn contractive_sequence(dim: usize, len: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = seeded_rng(seed);
    let raw: Vec<Matrix> = (0..len.max(1))
        .map(|_| {
            let decay = rng.random_range(0.0..1.0f64);
            gaussian_matrix(dim, dim, &mut rng).scale_real(decay)
        })
        .collect();
    let mut gram = Matrix::zeros(dim, dim);
    for h in &raw {
        gram += &(h.adjoint() * h);
    }
    let top = lambda_max_hermitian(&gram).expect("gram matrix is Hermitian").max(f64::MIN_POSITIVE);
    let s = 1.0 / top.sqrt();
    raw.into_iter().map(|h| h.scale_real(s)).collect()
}

/// Triples `[alpha, beta, gamma]` with `0 <= gamma <= alpha <= beta`, mixing
/// scales and including ties.
pub fn ordered_triples(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            let mut v: [f64; 3] = std::array::from_fn(|_| 10f64.powf(rng.random_range(-3.0..3.0)));
            if rng.random_bool(0.05) {
                v[0] = 0.0;
            }
            v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let [mut gamma, mut alpha, beta] = v;
            match rng.random_range(0..10) {
                0 => gamma = alpha,
                1 => alpha = beta,
                _ => {}
            }
            [alpha, beta, gamma]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_psd, ToleranceProfile};

    #[test]
    fn contractive_sequence_is_normalized() {
        let h = contractive_sequence(3, 12, 9);
        let mut gram = Matrix::zeros(3, 3);
        for m in &h {
            gram += &(m.adjoint() * m);
        }
        let gap = &Matrix::identity(3) - &gram;
        assert!(is_psd(&gap, &ToleranceProfile::default()).unwrap().holds);
    }

    #[test]
    fn triples_are_ordered() {
        for [a, b, g] in ordered_triples(1000, 3) {
            assert!(0.0 <= g && g <= a && a <= b);
        }
    }
}
