//! Bohr majorant sums, rotated coefficients, metrics on the sphere and on
//! spectra, the radius formulas, bisection, and one checker per inequality.

mod check;
mod instance;
mod liminf;
mod majorant;
mod metrics;
mod radius;
mod report;

pub use check::{check_theorem, check_theorem_radii, T4_RADIUS};
pub use instance::{ExteriorInstance, Instance, InstanceData, SharedDiskFunction, SubordinateInstance, TailBound};
pub use liminf::{boundary_distance_liminf, LiminfEstimate, LiminfGrid};
pub use majorant::{
    abs_coeffs, norm_coeffs, norm_majorant, operator_majorant, rotated_coeffs, rotated_real_part, weighted_scalar_sum,
    weighted_sum, RotatedSeries,
};
pub use metrics::{psi, psi_peak, spherical_distance, ExtendedComplex};
pub use radius::{bohr_radius_bisect, thm2_radius, thm3_radius, BisectOutcome, Thm2Radius};
pub use report::{CheckOptions, TheoremId, TheoremReport, WitnessRef};
