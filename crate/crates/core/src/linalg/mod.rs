//! Dense complex matrices and the operator-theoretic primitives the
//! inequalities are phrased in: operator norm, absolute value, real and
//! imaginary parts, the Loewner order, spectra and the Hausdorff metric.

mod matrix;
mod order;
mod sets;
mod spectral;
mod sum;
mod tolerance;

pub use matrix::Matrix;
pub use order::{is_psd, loewner_leq, LoewnerComparison};
pub use sets::{hausdorff_distance, SpectrumSet};
pub use spectral::{
    abs_value, condition_number, lambda_max_hermitian, lambda_min_hermitian, operator_norm, psd_sqrt,
    re_im_parts, singular_values, smallest_singular_value, spectrum, spectrum_with, HermitianEigen, SchurForm,
};
pub use sum::{CompensatedMatrixSum, CompensatedSum};
pub use tolerance::ToleranceProfile;

pub use num_complex::Complex64;

/// Shorthand for `Complex64::new(re, im)`.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
