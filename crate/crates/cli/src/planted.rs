//! Fixed extremal instances shared by `verify --planted` and the demos.

use std::f64::consts::FRAC_1_SQRT_2;

use opbohr::analysis::{
    check_theorem, CheckOptions, Instance, InstanceData, SubordinateInstance, TailBound, TheoremId, TheoremReport,
    WitnessRef, T4_RADIUS,
};
use opbohr::generators::{koebe, mobius, sample, FamilyId, FamilySpec};
use opbohr::series::{HoloSeries, ScalarSeries, SubordinationWitness};

use crate::error::CliResult;

/// Order used for the Koebe and `z/(1-z)` planted series.
pub const PLANTED_ORDER: usize = 256;

fn subordinate_identity(f: HoloSeries, tail: TailBound, label: &str) -> Instance {
    let (d, n) = (f.dim(), f.order());
    let sub = SubordinateInstance::new(f, SubordinationWitness::identity(n), tail);
    Instance::new(WitnessRef::planted(label, d, n), InstanceData::Subordinate(sub))
}

/// `z/(1 - z) I_d` with the identity witness.
pub fn geometric_instance(dim: usize) -> Instance {
    let s = ScalarSeries::from_fn(PLANTED_ORDER, |n| if n == 0 { 0.0.into() } else { 1.0.into() })
        .expect("finite coefficients");
    subordinate_identity(HoloSeries::from_scalar(&s, dim), TailBound::Geometric { scale: 1.0, ratio: 1.0 }, "geometric")
}

pub fn koebe_instance(dim: usize) -> Instance {
    subordinate_identity(koebe(dim, PLANTED_ORDER), TailBound::Linear { scale: 1.0 }, "koebe")
}

pub fn mobius_instance(a: f64, dim: usize, order: usize) -> Instance {
    let (series, tail) = mobius(a, dim, order);
    let mut w = WitnessRef::planted("mobius", dim, order);
    w.note = Some(format!("a={a}"));
    Instance::new(w, InstanceData::Holo { series, tail })
}

/// `exp(c) I_d` as an exterior instance; `c = ln 2` gives `A_0 = 2I`.
pub fn exterior_constant_instance(c: f64, dim: usize, order: usize) -> CliResult<Instance> {
    let spec = FamilySpec::new(FamilyId::ExteriorDiag, dim, order, 0).with_param("c", c).with_param("beta", 0.0);
    let mut w = WitnessRef::planted("exterior_constant", dim, order);
    w.note = Some(format!("c={c}"));
    Ok(sample(&spec)?.instance(w)?)
}

/// Planted report for `id` at dimension `dim`, if one exists.
pub fn planted_report(id: TheoremId, dim: usize, order: usize, opts: &CheckOptions) -> CliResult<Option<TheoremReport>> {
    let rep = match id {
        TheoremId::E55 => check_theorem(id, &mobius_instance(FRAC_1_SQRT_2, dim, order), FRAC_1_SQRT_2, None, opts)?,
        TheoremId::T2 => check_theorem(id, &exterior_constant_instance(2f64.ln(), dim, order)?, 1.0 / 3.0, None, opts)?,
        TheoremId::T3b => check_theorem(id, &geometric_instance(dim), 1.0 / 3.0, None, opts)?,
        TheoremId::T4b => check_theorem(id, &koebe_instance(dim), T4_RADIUS, None, opts)?,
        _ => return Ok(None),
    };
    Ok(Some(rep))
}
