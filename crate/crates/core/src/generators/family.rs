use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::schur::cert_points;
use super::{random_unitary_rng, seeded_rng, DiagModel, ScalarChannel, SchurRealization};
use crate::analysis::{ExteriorInstance, Instance, InstanceData, SubordinateInstance, TailBound, WitnessRef};
use crate::error::{Error, Result};
use crate::funcalc::{exterior_realization_eval, herglotz_transfer, matrix_exp, ColligationSpec};
use crate::linalg::{operator_norm, Matrix, ToleranceProfile};
use crate::series::{
    coeffs_via_cauchy_integral, koebe_transform, DiskFunction, HarmonicSeries, HoloSeries, ScalarSeries,
    SubordinationWitness,
};

/// Slack for generation-time certification.
pub const CERT_TOL: f64 = 1e-9;

/// Extraction radius for exterior colligation series.
pub const EXTERIOR_RHO: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    SchurHolo,
    SchurHarmonic,
    CommutingHarmonic,
    ExteriorDiag,
    ExteriorColligation,
    ConvexDiag,
    StarlikeDiag,
    Subordination,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::SchurHolo,
        FamilyId::SchurHarmonic,
        FamilyId::CommutingHarmonic,
        FamilyId::ExteriorDiag,
        FamilyId::ExteriorColligation,
        FamilyId::ConvexDiag,
        FamilyId::StarlikeDiag,
        FamilyId::Subordination,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::SchurHolo => "schur_holo",
            FamilyId::SchurHarmonic => "schur_harmonic",
            FamilyId::CommutingHarmonic => "commuting_harmonic",
            FamilyId::ExteriorDiag => "exterior_diag",
            FamilyId::ExteriorColligation => "exterior_colligation",
            FamilyId::ConvexDiag => "convex_diag",
            FamilyId::StarlikeDiag => "starlike_diag",
            FamilyId::Subordination => "subordination",
        }
    }

    /// Parameter names accepted by the family, with defaults.
    pub fn defaults(self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            FamilyId::SchurHolo => &[("s_min", Some(0.5)), ("s_max", Some(0.9))],
            FamilyId::SchurHarmonic | FamilyId::CommutingHarmonic => {
                &[("s_min", Some(0.5)), ("s_max", Some(0.9)), ("t", None)]
            }
            FamilyId::ExteriorDiag => {
                &[("c_min", Some(0.1)), ("c_max", Some(2.0)), ("beta_max", Some(0.95)), ("c", None), ("beta", None)]
            }
            FamilyId::ExteriorColligation => &[("v_min", Some(0.2)), ("v_max", Some(3.0))],
            FamilyId::ConvexDiag => &[("kappa_max", Some(4.0)), ("beta_max", Some(0.95))],
            FamilyId::StarlikeDiag => &[("planted", Some(0.0))],
            FamilyId::Subordination => {
                &[("s_min", Some(0.2)), ("s_max", Some(0.6)), ("scale", None), ("identity", Some(0.0))]
            }
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub dim: usize,
    pub aux_dim: usize,
    pub order: usize,
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(family: FamilyId, dim: usize, order: usize, seed: u64) -> Self {
        Self { family, dim, aux_dim: dim, order, seed, params: BTreeMap::new() }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn with_aux_dim(mut self, aux_dim: usize) -> Self {
        self.aux_dim = aux_dim;
        self
    }

    fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied().or_else(|| {
            self.family.defaults().iter().find(|(k, _)| *k == key).and_then(|(_, v)| *v)
        })
    }

    fn req(&self, key: &str) -> f64 {
        self.param(key).expect("parameter with a default")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("{}: {msg}", self.family)));
        if !(1..=16).contains(&self.dim) {
            return bad(format!("dim {} not in 1..=16", self.dim));
        }
        if self.aux_dim == 0 || self.aux_dim > 16 {
            return bad(format!("aux dim {} not in 1..=16", self.aux_dim));
        }
        if self.order == 0 {
            return bad("order must be at least 1".into());
        }
        let known = self.family.defaults();
        for (k, v) in &self.params {
            if !known.iter().any(|(name, _)| name == k) {
                return bad(format!("unknown parameter '{k}'"));
            }
            if !v.is_finite() {
                return bad(format!("parameter '{k}' is not finite"));
            }
        }
        let in_range = |key: &str, lo: f64, hi: f64, lo_open: bool, hi_open: bool| -> Result<()> {
            if let Some(v) = self.param(key) {
                let ok_lo = if lo_open { v > lo } else { v >= lo };
                let ok_hi = if hi_open { v < hi } else { v <= hi };
                if !(ok_lo && ok_hi) {
                    return Err(Error::InvalidInput(format!("{}: parameter {key} = {v} out of range", self.family)));
                }
            }
            Ok(())
        };
        let ordered = |lo: &str, hi: &str| -> Result<()> {
            if self.req(lo) > self.req(hi) {
                return Err(Error::InvalidInput(format!("{}: {lo} exceeds {hi}", self.family)));
            }
            Ok(())
        };
        match self.family {
            FamilyId::SchurHolo | FamilyId::SchurHarmonic | FamilyId::CommutingHarmonic => {
                in_range("s_min", 0.0, 1.0, true, true)?;
                in_range("s_max", 0.0, 1.0, true, true)?;
                in_range("t", 0.0, 1.0, false, false)?;
                ordered("s_min", "s_max")?;
            }
            FamilyId::ExteriorDiag => {
                in_range("c_min", 0.0, 20.0, true, false)?;
                in_range("c_max", 0.0, 20.0, true, false)?;
                in_range("c", 0.0, 20.0, true, false)?;
                in_range("beta_max", 0.0, 1.0, true, true)?;
                in_range("beta", 0.0, 1.0, false, true)?;
                ordered("c_min", "c_max")?;
            }
            FamilyId::ExteriorColligation => {
                in_range("v_min", 0.0, 20.0, true, false)?;
                in_range("v_max", 0.0, 20.0, true, false)?;
                ordered("v_min", "v_max")?;
            }
            FamilyId::ConvexDiag => {
                in_range("kappa_max", 1.0, 1e6, false, false)?;
                in_range("beta_max", 0.0, 1.0, true, true)?;
            }
            FamilyId::StarlikeDiag => in_range("planted", 0.0, 1.0, false, false)?,
            FamilyId::Subordination => {
                in_range("s_min", 0.0, 1.0, true, true)?;
                in_range("s_max", 0.0, 1.0, true, true)?;
                in_range("scale", -1.0, 1.0, false, false)?;
                in_range("identity", 0.0, 1.0, false, false)?;
                ordered("s_min", "s_max")?;
            }
        }
        Ok(())
    }

    pub fn witness_ref(&self) -> WitnessRef {
        WitnessRef { family: self.family.as_str().into(), seed: Some(self.seed), dim: self.dim, order: self.order, note: None }
    }
}

/// A generated instance together with the closed form it came from.
#[derive(Debug, Clone)]
pub enum Sample {
    SchurHolo { series: HoloSeries, tail: TailBound, realization: SchurRealization },
    Harmonic { series: HarmonicSeries, tail: TailBound },
    ExteriorDiag { instance: ExteriorInstance, model: DiagModel },
    ExteriorColligation { instance: ExteriorInstance, colligation: ColligationSpec },
    /// Convex or starlike diagonal model; `tail` bounds coefficients of every subordinate.
    Univalent { series: HoloSeries, model: DiagModel, tail: TailBound },
    Witness(SubordinationWitness),
}

impl DiskFunction for SchurRealization {
    fn dim(&self) -> usize {
        SchurRealization::dim(self)
    }

    fn eval(&self, z: Complex64) -> Result<Matrix> {
        self.transfer(z)
    }
}

impl Sample {
    /// Instance for the checks that take the sample on its own.
    pub fn instance(&self, witness: WitnessRef) -> Result<Instance> {
        let data = match self {
            Sample::SchurHolo { series, tail, .. } => InstanceData::Holo { series: series.clone(), tail: *tail },
            Sample::Harmonic { series, tail } => InstanceData::Harmonic { series: series.clone(), tail: *tail },
            Sample::ExteriorDiag { instance, .. } | Sample::ExteriorColligation { instance, .. } => {
                InstanceData::Exterior(instance.clone())
            }
            Sample::Univalent { .. } | Sample::Witness(_) => {
                return Err(Error::Contract("this sample needs a subordination witness".into()))
            }
        };
        Ok(Instance::new(witness, data))
    }

    /// `(f, g = f o phi)` with tail and boundary data for the subordination checks.
    pub fn subordinate(&self, w: &SubordinationWitness) -> Result<SubordinateInstance> {
        match self {
            Sample::SchurHolo { series, realization, .. } => {
                Ok(SubordinateInstance::new(series.clone(), w.clone(), TailBound::Geometric { scale: 1.0, ratio: 1.0 })
                    .with_boundary(Arc::new(realization.clone())))
            }
            Sample::Univalent { series, model, tail } => {
                Ok(SubordinateInstance::new(series.clone(), w.clone(), *tail).with_boundary(Arc::new(model.clone())))
            }
            _ => Err(Error::Contract("sample is not a holomorphic function of the unit disk".into())),
        }
    }

    pub fn as_witness(&self) -> Option<&SubordinationWitness> {
        match self {
            Sample::Witness(w) => Some(w),
            _ => None,
        }
    }
}

fn certify(ok: bool, family: FamilyId, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!("{family} sample failed certification: {}", what())))
    }
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Seeded instance of the family; re-certified numerically before returning.
pub fn sample(spec: &FamilySpec) -> Result<Sample> {
    spec.validate()?;
    let mut rng = seeded_rng(spec.seed);
    let (d, k, n) = (spec.dim, spec.aux_dim, spec.order);
    let fam = spec.family;
    match fam {
        FamilyId::SchurHolo => {
            let s = uniform(&mut rng, spec.req("s_min"), spec.req("s_max"));
            let realization = SchurRealization::random(d, k, s, &mut rng)?;
            let sup = realization.grid_sup()?;
            certify(sup <= 1.0 + CERT_TOL, fam, || format!("sup norm {sup}"))?;
            let series = realization.coefficients(n)?;
            Ok(Sample::SchurHolo { series, tail: TailBound::Geometric { scale: 1.0, ratio: s }, realization })
        }
        FamilyId::SchurHarmonic => {
            let sg = uniform(&mut rng, spec.req("s_min"), spec.req("s_max"));
            let sh = uniform(&mut rng, spec.req("s_min"), spec.req("s_max"));
            let t = spec.param("t").unwrap_or_else(|| rng.random_range(0.0..=1.0));
            let g = SchurRealization::random(d, k, sg, &mut rng)?;
            let h = SchurRealization::random(d, k, sh, &mut rng)?;
            let mut sup: f64 = 0.0;
            for z in cert_points() {
                let v = &g.transfer(z)?.scale_real(t) + &h.transfer(z)?.adjoint().scale_real(1.0 - t);
                sup = sup.max(operator_norm(&v)?);
            }
            certify(sup <= 1.0 + CERT_TOL, fam, || format!("sup norm {sup}"))?;
            let gs = g.coefficients(n)?;
            let hs = h.coefficients(n)?;
            let mut analytic = vec![&gs.coeffs()[0].scale_real(t) + &hs.coeffs()[0].adjoint().scale_real(1.0 - t)];
            analytic.extend(gs.coeffs()[1..].iter().map(|a| a.scale_real(t)));
            let coanalytic = hs.coeffs()[1..].iter().map(|b| b.scale_real(1.0 - t)).collect();
            let series = HarmonicSeries::new(analytic, coanalytic)?;
            Ok(Sample::Harmonic { series, tail: TailBound::Geometric { scale: 1.0, ratio: sg.max(sh) } })
        }
        FamilyId::CommutingHarmonic => {
            let w = random_unitary_rng(d, &mut rng);
            let mut channels = Vec::with_capacity(d);
            let mut s_max: f64 = 0.0;
            for _ in 0..d {
                let sg = uniform(&mut rng, spec.req("s_min"), spec.req("s_max"));
                let sh = uniform(&mut rng, spec.req("s_min"), spec.req("s_max"));
                let t = spec.param("t").unwrap_or_else(|| rng.random_range(0.0..=1.0));
                let g = SchurRealization::random(1, k, sg, &mut rng)?;
                let h = SchurRealization::random(1, k, sh, &mut rng)?;
                s_max = s_max.max(sg).max(sh);
                channels.push((t, g, h));
            }
            let mut sup: f64 = 0.0;
            for z in cert_points() {
                for (t, g, h) in &channels {
                    let v = g.transfer(z)?.get(0, 0) * *t + h.transfer(z)?.get(0, 0).conj() * (1.0 - t);
                    sup = sup.max(v.norm());
                }
            }
            certify(sup <= 1.0 + CERT_TOL, fam, || format!("sup norm {sup}"))?;
            let mut gc = Vec::with_capacity(d);
            let mut hc = Vec::with_capacity(d);
            for (t, g, h) in &channels {
                gc.push((*t, g.coefficients(n)?));
                hc.push((1.0 - t, h.coefficients(n)?));
            }
            let diag_at = |m: usize, conj0: bool| -> Matrix {
                let vals: Vec<Complex64> = (0..d)
                    .map(|i| {
                        let a = gc[i].1.coeffs()[m].get(0, 0) * gc[i].0;
                        if m == 0 && conj0 {
                            a + hc[i].1.coeffs()[0].get(0, 0).conj() * hc[i].0
                        } else {
                            a
                        }
                    })
                    .collect();
                Matrix::from_diag(&vals).conjugate_by(&w)
            };
            let analytic = (0..=n).map(|m| diag_at(m, true)).collect();
            let coanalytic = (1..=n)
                .map(|m| {
                    let vals: Vec<Complex64> = (0..d).map(|i| hc[i].1.coeffs()[m].get(0, 0) * hc[i].0).collect();
                    Matrix::from_diag(&vals).conjugate_by(&w)
                })
                .collect();
            let series = HarmonicSeries::new(analytic, coanalytic)?;
            Ok(Sample::Harmonic { series, tail: TailBound::Geometric { scale: 1.0, ratio: s_max } })
        }
        FamilyId::ExteriorDiag => {
            let w = random_unitary_rng(d, &mut rng);
            let channels: Vec<ScalarChannel> = (0..d)
                .map(|_| {
                    let c = spec.param("c").unwrap_or_else(|| uniform(&mut rng, spec.req("c_min"), spec.req("c_max")));
                    let beta = spec.param("beta").unwrap_or_else(|| uniform(&mut rng, 0.0, spec.req("beta_max")));
                    ScalarChannel::Exterior { c, beta }
                })
                .collect();
            let c_max = channels
                .iter()
                .map(|ch| match ch {
                    ScalarChannel::Exterior { c, .. } => *c,
                    _ => unreachable!(),
                })
                .fold(0.0, f64::max);
            let model = DiagModel { left: Matrix::identity(d), frame: w, channels };
            for z in cert_points() {
                let vals = model.channel_values(z);
                let smin = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
                certify(smin >= 1.0 - CERT_TOL, fam, || format!("|f(z)| has eigenvalue {smin} < 1"))?;
                let fz = model.eval(z)?;
                let big = vals.iter().map(|v| v.norm()).fold(1.0, f64::max);
                let defect = fz.normality_defect();
                certify(defect <= 1e-10 * big * big, fam, || format!("normality defect {defect:.3e}"))?;
            }
            let series = model.series(n)?;
            let instance = ExteriorInstance { series, tail: TailBound::Exterior { k: c_max }, normal: true, log_norm: c_max };
            Ok(Sample::ExteriorDiag { instance, model })
        }
        FamilyId::ExteriorColligation => {
            let u = random_unitary_rng(k, &mut rng);
            let v_target = uniform(&mut rng, spec.req("v_min"), spec.req("v_max"));
            let g = super::gaussian_matrix(k, d, &mut rng);
            let v = g.scale_real(v_target.sqrt() / operator_norm(&g)?);
            let colligation = ColligationSpec::new(u, v, &ToleranceProfile::default())?;
            let v_norm_sq = colligation.v_norm_sq()?;
            for z in cert_points() {
                let inv = matrix_exp(&-&herglotz_transfer(&colligation, z)?)?;
                let nrm = operator_norm(&inv)?;
                certify(nrm <= 1.0 + CERT_TOL, fam, || format!("|f(z)^-1| = {nrm} > 1"))?;
            }
            let nodes = (4 * (n + 1)).max(256);
            let extracted = coeffs_via_cauchy_integral(|z| exterior_realization_eval(&colligation, z), n, EXTERIOR_RHO, nodes)?;
            let mut coeffs = extracted.coeffs().to_vec();
            coeffs[0] = colligation.a0()?;
            let series = HoloSeries::new(coeffs)?;
            let half = 0.5 * v_norm_sq;
            let instance = ExteriorInstance { series, tail: TailBound::Exterior { k: half }, normal: false, log_norm: half };
            Ok(Sample::ExteriorColligation { instance, colligation })
        }
        FamilyId::ConvexDiag => {
            let q = random_unitary_rng(d, &mut rng);
            let w = random_unitary_rng(d, &mut rng);
            let channels: Vec<ScalarChannel> = (0..d)
                .map(|_| ScalarChannel::Convex {
                    scale: uniform(&mut rng, 1.0, spec.req("kappa_max")),
                    beta: uniform(&mut rng, 0.0, spec.req("beta_max")),
                })
                .collect();
            let model = DiagModel { left: q, frame: w, channels };
            let series = model.series(n)?;
            let a1 = operator_norm(&series.coeffs()[1])?;
            for (m, c) in series.coeffs().iter().enumerate().skip(1) {
                let nrm = operator_norm(c)?;
                certify(nrm <= a1 * (1.0 + CERT_TOL), fam, || format!("||A_{m}|| = {nrm} exceeds ||A_1|| = {a1}"))?;
            }
            let a = Complex64::from_polar(uniform(&mut rng, 0.0, 0.5), uniform(&mut rng, 0.0, std::f64::consts::TAU));
            koebe_transform(&series, a, n.min(32))
                .map_err(|e| Error::Internal(format!("{fam} sample failed its Koebe normalization: {e}")))?;
            Ok(Sample::Univalent { series, model, tail: TailBound::Geometric { scale: a1, ratio: 1.0 } })
        }
        FamilyId::StarlikeDiag => {
            let planted = spec.req("planted") >= 0.5;
            let w = if planted { Matrix::identity(d) } else { random_unitary_rng(d, &mut rng) };
            let channels: Vec<ScalarChannel> = (0..d)
                .map(|_| {
                    let zeta = if planted {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::from_polar(1.0, uniform(&mut rng, 0.0, std::f64::consts::TAU))
                    };
                    ScalarChannel::Starlike { zeta }
                })
                .collect();
            let model = DiagModel { left: Matrix::identity(d), frame: w, channels };
            let series = model.series(n)?;
            for (m, c) in series.coeffs().iter().enumerate() {
                let nrm = operator_norm(c)?;
                certify(nrm <= m as f64 + CERT_TOL * (m as f64).max(1.0), fam, || format!("||A_{m}|| = {nrm}"))?;
            }
            let rho = 1.0 - 0.5f64.powi(20);
            let ring_min = (0..360)
                .map(|j| {
                    let z = Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / 360.0);
                    model.channel_values(z).iter().map(|v| v.norm()).fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            certify(ring_min >= 0.25 - CERT_TOL, fam, || format!("boundary distance {ring_min} below 1/4"))?;
            Ok(Sample::Univalent { series, model, tail: TailBound::Linear { scale: 1.0 } })
        }
        FamilyId::Subordination => {
            let tol = ToleranceProfile::default();
            let w = if spec.req("identity") >= 0.5 {
                SubordinationWitness::identity(n)
            } else if let Some(s) = spec.param("scale") {
                SubordinationWitness::scaled(Complex64::new(s, 0.0), n)?
            } else {
                let s = uniform(&mut rng, spec.req("s_min"), spec.req("s_max"));
                let b = SchurRealization::random(1, k, s, &mut rng)?;
                let bs = b.coefficients(n - 1)?;
                let phi = ScalarSeries::from_fn(n, |m| {
                    if m == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        bs.coeffs()[m - 1].get(0, 0)
                    }
                })?;
                SubordinationWitness::certify(phi, &tol).map_err(|e| Error::Internal(format!("{fam}: {e}")))?
            };
            Ok(Sample::Witness(w))
        }
    }
}
