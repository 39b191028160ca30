use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::Matrix;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-trial seed, independent of evaluation order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries `(x + iy)/sqrt(2)` with `x, y` standard normal.
pub fn gaussian_matrix<R: rand::Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut vals = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let x: f64 = StandardNormal.sample(rng);
        let y: f64 = StandardNormal.sample(rng);
        vals.push(Complex64::new(x * s, y * s));
    }
    Matrix::from_fn(rows, cols, |i, j| vals[i * cols + j]).expect("gaussian entries are finite")
}

/// QR of a complex Gaussian matrix with the phases of `R`'s diagonal removed.
pub fn random_unitary_rng<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    assert!(n >= 1, "unitary dimension must be positive");
    let g = gaussian_matrix(n, n, rng).into_inner();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    Matrix::new(u).expect("orthonormalization stays finite")
}

/// Seeded unitary; identical seeds give identical matrices.
pub fn random_unitary(n: usize, seed: u64) -> Matrix {
    random_unitary_rng(n, &mut seeded_rng(seed))
}
