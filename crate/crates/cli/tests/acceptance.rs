//! Acceptance criteria; one PASS/FAIL line each, non-zero exit on any FAIL.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use opbohr::analysis::{norm_majorant, operator_majorant, CheckOptions, TheoremId, T4_RADIUS};
use opbohr::generators::{koebe, mobius};
use opbohr::linalg::Matrix;
use opbohr_cli::planted::planted_report;
use opbohr_cli::selftest::{herglotz_coefficients_agree, log_paths_agree};
use opbohr_cli::{
    run_suite, scan_radius, strip_timestamp, to_sorted_json, write_report, Command, Format, RunConfig, ScanSpec,
    SuiteReport,
};

const PSD_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(ids: &[TheoremId], trials: usize, dims: &[usize], seed: u64) -> Result<SuiteReport, String> {
    run_suite(&RunConfig::verify(ids, trials, dims, seed)).map_err(|e| e.to_string())
}

fn clean(rep: &SuiteReport, expected: usize) -> Result<(), String> {
    let a = &rep.aggregate;
    ensure(rep.reports.len() == expected, format!("{} reports, expected {expected}", rep.reports.len()))?;
    ensure(a.fail_count == 0, format!("{} violations, worst seed {:?}", a.fail_count, a.argmin_seed))?;
    ensure(a.min_margin.is_some_and(|m| m >= -PSD_TOL), format!("min normalized margin {:?}", a.min_margin))
}

fn count(rep: &SuiteReport, id: TheoremId) -> usize {
    rep.reports.iter().filter(|r| r.theorem_id == id).count()
}

fn scan(family: &str, params: &[(&str, f64)]) -> Result<f64, String> {
    let cfg = RunConfig {
        command: Command::Scan,
        scan: Some(ScanSpec {
            family: family.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ..ScanSpec::default()
        }),
        ..RunConfig::default()
    };
    scan_radius(&cfg).map(|s| s.estimated_radius).map_err(|e| e.to_string())
}

fn c1_mobius_sharpness() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for d in [1, 2, 4] {
        let (series, _) = mobius(FRAC_1_SQRT_2, d, 64);
        let m = operator_majorant(series.coeffs(), FRAC_1_SQRT_2, 0).map_err(|e| e.to_string())?;
        worst = worst.max(m.max_abs_diff(&Matrix::identity(d).scale_real(SQRT_2)));
    }
    let dt = t.elapsed();
    ensure(worst <= 1e-6, format!("deviation {worst:.3e}"))?;
    ensure(dt < Duration::from_secs(1), format!("took {dt:?}"))?;
    Ok(format!("max |majorant - sqrt2 I| = {worst:.2e} in {dt:?}"))
}

fn c2_koebe_constant() -> Outcome {
    let m = norm_majorant(koebe(1, 256).coeffs(), T4_RADIUS, 1).map_err(|e| e.to_string())?;
    ensure((m - 0.25).abs() <= 1e-10, format!("majorant {m}"))?;
    let r = scan("koebe", &[])?;
    let target = 3.0 - 2.0 * SQRT_2;
    ensure((r - target).abs() <= 1e-6, format!("scanned radius {r}"))?;
    Ok(format!("|majorant - 1/4| = {:.2e}, |radius - (3-2sqrt2)| = {:.2e}", (m - 0.25).abs(), (r - target).abs()))
}

fn c3_harmonic() -> Outcome {
    let t = Instant::now();
    let rep = suite(&[TheoremId::T1i, TheoremId::T1ii, TheoremId::T1iii], 500, &[1, 2, 3, 4], 2024)?;
    let dt = t.elapsed();
    clean(&rep, 6000)?;
    ensure(dt < Duration::from_secs(120), format!("took {dt:?}"))?;
    Ok(format!("6000 worst-case reports clean, min margin {:.3e}, {dt:.1?}", rep.aggregate.min_margin.unwrap()))
}

fn c4_normal_branches() -> Outcome {
    let cfg = RunConfig { normal: true, ..RunConfig::verify(&[TheoremId::T1i, TheoremId::T1ii], 125, &[1, 2, 3, 4], 31) };
    let rep = run_suite(&cfg).map_err(|e| e.to_string())?;
    clean(&rep, 1000)?;
    ensure(rep.reports.iter().all(|r| r.witness.family == "commuting_harmonic"), "wrong family")?;
    ensure(
        rep.reports.iter().filter(|r| r.theorem_id == TheoremId::T1ii).all(|r| (r.r - 1.0 / 3.0).abs() < 1e-15),
        "t1ii not at 1/3",
    )?;
    Ok(format!("500 samples, min margin {:.3e}", rep.aggregate.min_margin.unwrap()))
}

fn c5_exterior() -> Outcome {
    let rep = suite(&[TheoremId::T2], 50, &[1, 2, 3, 4], 55)?;
    clean(&rep, 400)?;
    let diag: Vec<_> = rep.reports.iter().filter(|r| r.witness.family == "exterior_diag").collect();
    let coll = rep.reports.iter().filter(|r| r.witness.family == "exterior_colligation").count();
    ensure(diag.len() == 200 && coll == 200, "family counts")?;
    let l_dev = diag.iter().map(|r| (r.side_values["l"] - 1.0).abs()).fold(0.0, f64::max);
    ensure(l_dev <= 1e-12, format!("|L - 1| = {l_dev:.3e}"))?;
    Ok(format!("200 + 200 samples clean, max |L - 1| = {l_dev:.1e}"))
}

fn c6_subordination() -> Outcome {
    let t3 = suite(&[TheoremId::T3a, TheoremId::T3b], 50, &[1, 2, 3, 4], 61)?;
    clean(&t3, 400)?;
    let l2 = suite(&[TheoremId::L2a, TheoremId::L2b], 125, &[1, 2, 3, 4], 62)?;
    clean(&l2, 1000)?;
    let t4 = suite(&[TheoremId::T4a, TheoremId::T4b], 50, &[1, 2, 3, 4], 63)?;
    clean(&t4, 400)?;
    ensure(count(&t3, TheoremId::T3a) == 200 && count(&t4, TheoremId::T4b) == 200, "report counts")?;
    let mut planted = 0.0f64;
    for d in [1, 2, 4] {
        let rep = planted_report(TheoremId::T4b, d, 64, &CheckOptions::default()).map_err(|e| e.to_string())?;
        let rep = rep.expect("t4b has a planted case");
        ensure(rep.passed, format!("planted koebe fails at d = {d}"))?;
        planted = planted.max(rep.margin.abs());
    }
    ensure(planted <= 1e-9, format!("planted |margin| = {planted:.3e}"))?;
    Ok(format!("t3 200, l2 500 pairs, t4 200 clean; planted koebe |margin| = {planted:.1e}"))
}

fn c7_funcalc_oracles() -> Outcome {
    let log = log_paths_agree(100, 71).map_err(|e| e.to_string())?;
    let her = herglotz_coefficients_agree(50, 8, 72).map_err(|e| e.to_string())?;
    ensure(log <= 1e-8, format!("log paths differ by {log:.3e}"))?;
    ensure(her <= 1e-9, format!("herglotz coefficients differ by {her:.3e}"))?;
    Ok(format!("log {log:.1e}, herglotz {her:.1e}"))
}

fn c8_sequences() -> Outcome {
    let rep = suite(&[TheoremId::L1], 250, &[1, 2, 3, 4], 81)?;
    clean(&rep, 1000)?;
    let points: f64 = rep.reports.iter().map(|r| r.side_values["sweep_points"]).sum();
    ensure(points == 9000.0, format!("{points} sweep points"))?;
    Ok(format!("1000 sequences x 9 (k, r) pairs, min margin {:.3e}", rep.aggregate.min_margin.unwrap()))
}

fn c9_scalar_bohr() -> Outcome {
    let mut radii = Vec::new();
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let a = i as f64 / 10.0;
        let r = scan("mobius", &[("a", a)])?;
        worst = worst.max((r - 1.0 / (1.0 + 2.0 * a)).abs());
        radii.push(r);
    }
    ensure(worst <= 1e-6, format!("max deviation {worst:.3e}"))?;
    ensure(radii.windows(2).all(|w| w[1] < w[0]), "radii not decreasing")?;
    ensure(radii.iter().all(|&r| r > 1.0 / 3.0), "radius below 1/3")?;
    Ok(format!("max |r - 1/(1+2a)| = {worst:.1e}; r(0.9) - 1/3 = {:.4}", radii[8] - 1.0 / 3.0))
}

fn c10_reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = RunConfig::verify(&TheoremId::ALL, 3, &[1, 3], 101);
    let mut texts = Vec::new();
    for i in 0..2 {
        let rep = run_suite(&cfg).map_err(|e| e.to_string())?;
        let path = dir.path().join(format!("run{i}.json"));
        write_report(&rep, &path, Format::Json).map_err(|e| e.to_string())?;
        texts.push(std::fs::read_to_string(&path).map_err(|e| e.to_string())?);
        ensure(to_sorted_json(&rep).map_err(|e| e.to_string())? == texts[i], "file differs from serialization")?;
    }
    ensure(texts[0] != texts[1] || texts[0].contains("timestamp"), "timestamp missing")?;
    let (a, b) = (strip_timestamp(&texts[0]).map_err(|e| e.to_string())?, strip_timestamp(&texts[1]).map_err(|e| e.to_string())?);
    ensure(a == b, "reports differ outside the timestamp")?;
    Ok(format!("{} bytes identical modulo timestamp", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 mobius sharpness", c1_mobius_sharpness),
        ("2 koebe constant", c2_koebe_constant),
        ("3 harmonic suites", c3_harmonic),
        ("4 normal branches", c4_normal_branches),
        ("5 exterior radius", c5_exterior),
        ("6 subordination", c6_subordination),
        ("7 funcalc oracles", c7_funcalc_oracles),
        ("8 contractive sequences", c8_sequences),
        ("9 scalar bohr radius", c9_scalar_bohr),
        ("10 reproducibility", c10_reproducibility),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
