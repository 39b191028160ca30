//! Numerical verification of Bohr-type inequalities for matrix-valued
//! holomorphic and harmonic functions on the unit disk.
//!
//! The Hilbert space is modelled by `C^d` with small `d`; operators are dense
//! complex matrices ([`linalg::Matrix`]). Power series with matrix
//! coefficients live in [`series`], the exponential/logarithm and the
//! unitary-colligation realization in [`funcalc`], instance families in
//! [`generators`], and the majorant sums, radius formulas and per-inequality
//! checkers in [`analysis`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod funcalc;
pub mod generators;
pub mod linalg;
pub mod series;

pub use error::{Error, Result};
