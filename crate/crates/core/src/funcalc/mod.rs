//! Matrix exponential and logarithm (eigen route and contour-integral route)
//! and the unitary-colligation realization of exterior-valued functions.

mod colligation;
mod exp;
mod log;

pub use colligation::{colligation_log_coeff, exterior_realization_eval, herglotz_transfer, ColligationSpec};
pub use exp::{matrix_exp, EXP_NORM_CAP};
pub use log::{
    log_eig_normal, log_riesz_dunford, log_riesz_dunford_adaptive, BranchCut, ContourSpec, DEFAULT_NODES, MAX_NODES,
};
