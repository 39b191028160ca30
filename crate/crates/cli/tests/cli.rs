use std::path::Path;
use std::process::Command as Proc;

use opbohr::analysis::TheoremId;
use opbohr_cli::{
    parse_report, run_suite, scan_radius, strip_timestamp, to_sorted_json, write_report, Command, Format, RunConfig,
    ScanSpec, OUT_DIR_ENV,
};

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_opbohr"))
}

fn status(args: &[&str], out_dir: &Path) -> i32 {
    let out = bin().args(args).env(OUT_DIR_ENV, out_dir).output().expect("binary runs");
    out.status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(status(&["verify", "--theorems", "t1iii", "--trials", "2", "--dims", "1,2"], d), 0);
    assert!(d.join("verify-report.json").exists());
    assert_eq!(status(&["verify", "--theorems", "t1iii", "--trials", "3", "--dims", "2", "--r", "0.95", "--force"], d), 1);
    assert_eq!(status(&["verify", "--theorems", "nope"], d), 2);
    assert_eq!(status(&["verify", "--dims", "0"], d), 2);
    assert_eq!(status(&["verify", "--dims", "17"], d), 2);
    assert_eq!(status(&["verify", "--trials", "0"], d), 2);
    assert_eq!(status(&["verify", "--theorems", "t1iii", "--r", "0.6"], d), 2);
    assert_eq!(status(&["frobnicate"], d), 2);
    assert_eq!(status(&["--help"], d), 0);
    let blocked = d.join("file");
    std::fs::write(&blocked, "x").unwrap();
    let target = blocked.join("report.json");
    assert_eq!(status(&["verify", "--trials", "1", "--dims", "1", "--out", target.to_str().unwrap()], d), 2);
}

#[test]
fn selftest_and_demos_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(status(&["selftest"], dir.path()), 0);
    for name in ["sharpness-e55", "radius-t2", "radius-t3", "koebe"] {
        assert_eq!(status(&["demo", name], dir.path()), 0, "{name}");
        assert!(dir.path().join(format!("demo-{name}.json")).exists());
    }
    assert_eq!(status(&["demo", "unknown"], dir.path()), 2);
}

#[test]
fn scan_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let code = status(
        &["scan", "--family", "mobius", "--param", "a=0.25", "--steps", "11", "--out", csv.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family_id,param_json,r,margin,passed"));
    assert_eq!(lines.count(), 11);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    let est = summary["estimated_radius"].as_f64().unwrap();
    assert!((est - 2.0 / 3.0).abs() < 1e-6);
    assert_eq!(status(&["scan", "--family", "schur_holo"], dir.path()), 2);
    assert_eq!(status(&["scan", "--family", "mobius", "--param", "a"], dir.path()), 2);
}

#[test]
fn csv_report_format() {
    let dir = tempfile::tempdir().unwrap();
    let code = status(&["verify", "--theorems", "l1", "--trials", "2", "--dims", "3", "--format", "csv"], dir.path());
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(dir.path().join("verify-report.csv")).unwrap();
    assert!(text.starts_with("theorem_id,family,seed,dim,order,r,mu,passed,margin,normalized_margin"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn t1iii_suite_example() {
    let cfg = RunConfig::verify(&[TheoremId::T1iii], 100, &[1, 2, 3], 7);
    let rep = run_suite(&cfg).unwrap();
    assert_eq!(rep.reports.len(), 300);
    assert!(rep.reports.iter().all(|r| r.passed));
    assert_eq!(rep.aggregate.pass_count, 300);
    assert_eq!(rep.aggregate.fail_count, 0);
}

#[test]
fn planted_mobius_is_near_equality() {
    let cfg = RunConfig { planted: true, ..RunConfig::verify(&[TheoremId::E55], 1, &[1, 2], 3) };
    let rep = run_suite(&cfg).unwrap();
    let planted: Vec<_> = rep.reports.iter().filter(|r| r.witness.family == "mobius").collect();
    assert_eq!(planted.len(), 2);
    for r in planted {
        assert!(r.passed && r.margin.abs() <= 1e-6, "{r:?}");
    }
}

#[test]
fn aggregate_matches_reports() {
    let cfg = RunConfig { force: true, radii: Some(vec![0.9]), ..RunConfig::verify(&[TheoremId::T1iii], 6, &[2], 1) };
    let rep = run_suite(&cfg).unwrap();
    let fails = rep.reports.iter().filter(|r| !r.passed).count();
    assert!(fails > 0);
    assert_eq!(rep.aggregate.fail_count, fails);
    assert_eq!(rep.aggregate.pass_count + fails, rep.reports.len());
    let worst = rep.reports.iter().map(|r| r.normalized_margin()).fold(f64::INFINITY, f64::min);
    assert_eq!(rep.aggregate.min_margin, Some(worst));
    let argmin = rep.reports.iter().find(|r| r.normalized_margin() == worst).unwrap();
    assert_eq!(rep.aggregate.argmin_seed, argmin.witness.seed);
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let cfg = RunConfig::verify(&[TheoremId::T1i, TheoremId::L2a, TheoremId::T2, TheoremId::E17], 2, &[1, 3], 11);
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    let (ja, jb) = (to_sorted_json(&a).unwrap(), to_sorted_json(&b).unwrap());
    assert_eq!(strip_timestamp(&ja).unwrap(), strip_timestamp(&jb).unwrap());
    assert_eq!(parse_report(&ja).unwrap(), a);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/dir/r.json");
    write_report(&a, &path, Format::Json).unwrap();
    assert_eq!(opbohr_cli::read_report(&path).unwrap(), a);
}

#[test]
fn sorted_keys() {
    let cfg = RunConfig::verify(&[TheoremId::T1iii], 1, &[1], 0);
    let text = to_sorted_json(&run_suite(&cfg).unwrap()).unwrap();
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("aggregate") < pos("config") && pos("config") < pos("meta") && pos("meta") < pos("reports"));
}

#[test]
fn seeds_change_results() {
    let a = run_suite(&RunConfig::verify(&[TheoremId::T1iii], 2, &[2], 1)).unwrap();
    let b = run_suite(&RunConfig::verify(&[TheoremId::T1iii], 2, &[2], 2)).unwrap();
    assert_ne!(a.reports[0].margin, b.reports[0].margin);
}

fn scan(family: &str, params: &[(&str, f64)]) -> RunConfig {
    RunConfig {
        command: Command::Scan,
        scan: Some(ScanSpec {
            family: family.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ..ScanSpec::default()
        }),
        ..RunConfig::default()
    }
}

#[test]
fn scan_examples() {
    let m = scan_radius(&scan("mobius", &[("a", 0.5)])).unwrap();
    assert!((m.estimated_radius - 0.5).abs() <= 1e-6);
    assert!(!m.unbracketed);
    let k = scan_radius(&scan("koebe", &[])).unwrap();
    assert!((k.estimated_radius - (3.0 - 2.0 * 2f64.sqrt())).abs() <= 1e-6);
    let c = scan_radius(&scan("constant", &[("c", 0.9)])).unwrap();
    assert!(c.unbracketed);
    assert_eq!(c.estimated_radius, 0.99);
    assert!(scan_radius(&scan("constant", &[("c", 2.0)])).is_err());
}
