use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;
use std::time::Instant;

use opbohr::analysis::{norm_majorant, operator_majorant, thm2_radius, thm3_radius, CheckOptions, TheoremId, T4_RADIUS};
use opbohr::generators::{koebe, mobius};
use opbohr::linalg::{lambda_max_hermitian, lambda_min_hermitian, Matrix};
use serde::{Deserialize, Serialize};

use crate::config::{Command, DemoId, RunConfig, ScanSpec};
use crate::error::CliResult;
use crate::planted::{planted_report, PLANTED_ORDER};
use crate::scan::scan_radius;
use crate::suite::SuiteReport;

pub const DEMO_DIMS: [usize; 3] = [1, 2, 4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub quantity: String,
    pub reference: f64,
    pub computed: f64,
}

impl DemoRow {
    fn new(quantity: impl Into<String>, reference: f64, computed: f64) -> Self {
        Self { quantity: quantity.into(), reference, computed }
    }

    pub fn abs_diff(&self) -> f64 {
        (self.reference - self.computed).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoOutcome {
    pub id: DemoId,
    pub rows: Vec<DemoRow>,
    pub report: SuiteReport,
}

impl fmt::Display for DemoOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.id.as_str())?;
        writeln!(f, "{:<44} {:>20} {:>20} {:>10}", "quantity", "reference", "computed", "|diff|")?;
        for r in &self.rows {
            writeln!(f, "{:<44} {:>20.15} {:>20.15} {:>10.2e}", r.quantity, r.reference, r.computed, r.abs_diff())?;
        }
        for r in &self.report.reports {
            writeln!(
                f,
                "check {:<6} d={} r={:.12} margin={:+.3e} {}",
                r.theorem_id.as_str(),
                r.witness.dim,
                r.r,
                r.margin,
                if r.passed { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Both ends of the spectrum of a Hermitian matrix; equal for scalar matrices.
fn spread(m: &Matrix) -> CliResult<(f64, f64)> {
    Ok((lambda_min_hermitian(m)?, lambda_max_hermitian(m)?))
}

/// Runs the planted extremal instances of a demo and tabulates the constants.
pub fn demo(config: &RunConfig) -> CliResult<DemoOutcome> {
    config.validate()?;
    let id = config.demo.expect("validated");
    let started = Instant::now();
    let opts = CheckOptions { tol: config.tol, ..CheckOptions::default() };
    let mut rows = Vec::new();
    let theorem = match id {
        DemoId::SharpnessE55 => {
            let r = FRAC_1_SQRT_2;
            for d in DEMO_DIMS {
                let (series, _) = mobius(r, d, config.order);
                let (lo, hi) = spread(&operator_majorant(series.coeffs(), r, 0)?)?;
                rows.push(DemoRow::new(format!("majorant of Mobius(1/sqrt2) I_{d}, min eig"), SQRT_2, lo));
                rows.push(DemoRow::new(format!("majorant of Mobius(1/sqrt2) I_{d}, max eig"), SQRT_2, hi));
            }
            TheoremId::E55
        }
        DemoId::RadiusT2 => {
            for d in DEMO_DIMS {
                let a0 = Matrix::from_real_diag(&vec![2.0; d]);
                let rad = thm2_radius(&a0, &config.tol)?;
                rows.push(DemoRow::new(format!("radius at A0 = 2 I_{d}"), 1.0 / 3.0, rad.radius));
            }
            TheoremId::T2
        }
        DemoId::RadiusT3 => {
            for d in DEMO_DIMS {
                rows.push(DemoRow::new(format!("radius at A1 = I_{d}"), 1.0 / 3.0, thm3_radius(&Matrix::identity(d))?));
            }
            TheoremId::T3b
        }
        DemoId::Koebe => {
            for d in DEMO_DIMS {
                let m = norm_majorant(koebe(d, PLANTED_ORDER).coeffs(), T4_RADIUS, 1)?;
                rows.push(DemoRow::new(format!("norm majorant of Koebe I_{d} at 3-2sqrt2"), 0.25, m));
            }
            let scan = RunConfig {
                command: Command::Scan,
                scan: Some(ScanSpec { family: "koebe".into(), ..ScanSpec::default() }),
                ..config.clone()
            };
            let est = scan_radius(&scan)?.estimated_radius;
            rows.push(DemoRow::new("scanned radius of the Koebe majorant", 3.0 - 2.0 * SQRT_2, est));
            TheoremId::T4b
        }
    };
    let mut reports = Vec::new();
    for d in DEMO_DIMS {
        reports.extend(planted_report(theorem, d, config.order, &opts)?);
    }
    Ok(DemoOutcome { id, rows, report: SuiteReport::assemble(config, reports, started) })
}
