use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use opbohr::analysis::{
    bohr_radius_bisect, check_theorem, norm_majorant, CheckOptions, Instance, TailBound, TheoremId,
};
use opbohr::generators::{koebe, mobius, sample, FamilyId, FamilySpec};
use opbohr::linalg::Matrix;
use serde::{Deserialize, Serialize};

use crate::config::{ensure_parent, RunConfig, ScanSpec};
use crate::error::{CliError, CliResult};
use crate::output::to_sorted_json;

/// Bisection resolution for the estimated radius.
pub const BISECT_TOL: f64 = 1e-10;
const SCAN_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub r: f64,
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusScan {
    pub family_id: String,
    pub params: BTreeMap<String, f64>,
    pub theorem: Option<TheoremId>,
    pub points: Vec<ScanPoint>,
    pub estimated_radius: f64,
    /// The predicate still held at `r_max`.
    pub unbracketed: bool,
    pub monotonicity_violations: usize,
}

/// Margin of a scanned predicate as a function of the radius.
enum Predicate {
    /// `bound - (sum_{n >= k0} ||A_n|| r^n + tail)`.
    Majorant { coeffs: Vec<Matrix>, tail: TailBound, k0: usize, bound: f64 },
    /// Normalized margin of a theorem check, run with `force`.
    Check { id: TheoremId, inst: Box<Instance>, mu: Option<f64>, opts: CheckOptions },
}

impl Predicate {
    fn margin(&self, r: f64) -> CliResult<f64> {
        match self {
            Predicate::Majorant { coeffs, tail, k0, bound } => {
                let n = coeffs.len() - 1;
                Ok(bound - (norm_majorant(coeffs, r, *k0)? + tail.tail(r, n)))
            }
            Predicate::Check { id, inst, mu, opts } => Ok(check_theorem(*id, inst, r, *mu, opts)?.normalized_margin()),
        }
    }

    fn slack(&self) -> f64 {
        match self {
            Predicate::Majorant { .. } => 0.0,
            Predicate::Check { opts, .. } => opts.tol.psd_tol,
        }
    }
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn predicate(config: &RunConfig, spec: &ScanSpec) -> CliResult<Predicate> {
    let d = spec.dim;
    match spec.family.as_str() {
        "mobius" => {
            let a = param(&spec.params, "a", 0.5);
            if !(0.0..1.0).contains(&a) {
                return Err(CliError::Config(format!("mobius parameter a = {a} outside [0, 1)")));
            }
            let (series, tail) = mobius(a, d, SCAN_ORDER);
            Ok(Predicate::Majorant { coeffs: series.coeffs().to_vec(), tail, k0: 0, bound: 1.0 })
        }
        "koebe" => Ok(Predicate::Majorant {
            coeffs: koebe(d, SCAN_ORDER).coeffs().to_vec(),
            tail: TailBound::Linear { scale: 1.0 },
            k0: 1,
            bound: 0.25,
        }),
        "constant" => {
            let c = param(&spec.params, "c", 0.5);
            if !(c.is_finite() && c.abs() <= 1.0) {
                return Err(CliError::Config(format!("constant c = {c} is not in the closed unit disk")));
            }
            Ok(Predicate::Majorant {
                coeffs: vec![Matrix::from_real_diag(&vec![c; d])],
                tail: TailBound::None,
                k0: 0,
                bound: 1.0,
            })
        }
        other => {
            let family: FamilyId = other.parse()?;
            let id = spec
                .theorem
                .ok_or_else(|| CliError::Config(format!("scanning family {other} needs a theorem id")))?;
            let mut fs = FamilySpec::new(family, d, config.order, config.seed);
            for (k, v) in &spec.params {
                fs = fs.with_param(k, *v);
            }
            let inst = sample(&fs)?.instance(fs.witness_ref())?;
            let mu = spec.params.get("mu").copied().or(Some(0.0)).filter(|_| {
                matches!(id, TheoremId::T1i | TheoremId::T1ii | TheoremId::T1iii)
            });
            let opts = CheckOptions { tol: config.tol, force: true, normal_variant: config.normal, ..CheckOptions::default() };
            Ok(Predicate::Check { id, inst: Box::new(inst), mu, opts })
        }
    }
}

/// Margin on a uniform grid plus a bisection estimate of the largest radius with non-negative margin.
pub fn scan_radius(config: &RunConfig) -> CliResult<RadiusScan> {
    config.validate()?;
    let spec = config.scan.as_ref().ok_or_else(|| CliError::Config("scan needs a family".into()))?;
    let pred = predicate(config, spec)?;
    let slack = pred.slack();
    let k = spec.steps;
    let points = (0..k)
        .map(|i| {
            let r = spec.r_min + (spec.r_max - spec.r_min) * i as f64 / (k - 1) as f64;
            let margin = pred.margin(r)?;
            Ok(ScanPoint { r, margin, passed: margin >= -slack })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut failure = None;
    let outcome = bohr_radius_bisect(
        |r| match pred.margin(r) {
            Ok(m) => m >= -slack,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        },
        spec.r_min,
        spec.r_max,
        BISECT_TOL,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(RadiusScan {
        family_id: spec.family.clone(),
        params: spec.params.clone(),
        theorem: spec.theorem,
        points,
        estimated_radius: outcome.radius,
        unbracketed: outcome.unbracketed,
        monotonicity_violations: outcome.monotonicity_violations,
    })
}

/// Path of the JSON summary written next to the CSV.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the grid as CSV and the full scan, including the estimate, as JSON alongside it.
pub fn write_scan(scan: &RadiusScan, csv_path: &Path) -> CliResult<()> {
    ensure_parent(csv_path)?;
    let param_json = serde_json::to_string(&scan.params)?;
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(["family_id", "param_json", "r", "margin", "passed"])?;
    for p in &scan.points {
        w.write_record([
            scan.family_id.clone(),
            param_json.clone(),
            p.r.to_string(),
            p.margin.to_string(),
            p.passed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(csv_path, e))?;
    let json = summary_path(csv_path);
    std::fs::write(&json, to_sorted_json(scan)?).map_err(|e| CliError::io(&json, e))
}
