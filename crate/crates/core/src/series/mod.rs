//! Truncated power series with matrix coefficients: evaluation,
//! differentiation, composition with a subordination witness, Taylor
//! coefficient extraction on a circle, and the Koebe transform.

mod holo;
mod ops;
mod scalar;
mod witness;

pub(crate) use holo::check_disk;
pub use holo::{evaluate, DiskFunction, FnDisk, HarmonicSeries, HoloSeries};
pub use ops::{
    coeffs_via_cauchy_integral, compose_subordination, koebe_transform, koebe_transform_with, KOEBE_RHO,
    SINGULAR_COND,
};
pub use scalar::{scalar_power_coeffs, ScalarSeries};
pub use witness::{SubordinationWitness, WITNESS_POINTS, WITNESS_RADIUS};
