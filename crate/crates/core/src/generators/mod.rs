//! Seeded factories for every instance family the checkers consume, plus
//! the planted extremal functions.

mod diag;
mod family;
mod planted;
mod schur;
mod unitary;

pub use diag::{DiagModel, ScalarChannel};
pub use family::{sample, FamilyId, FamilySpec, Sample, CERT_TOL, EXTERIOR_RHO};
pub use planted::{koebe, contractive_sequence, mobius, ordered_triples};
pub use schur::{SchurRealization, CERT_POINTS, CERT_RADIUS, SCHUR_NODES, SCHUR_RHO};
pub use unitary::{derive_seed, gaussian_matrix, random_unitary, random_unitary_rng, seeded_rng};
