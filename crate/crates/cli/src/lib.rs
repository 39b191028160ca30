//! Command-line harness: seeded verification suites, radius scans, planted
//! demos and oracle self-tests, with JSON and CSV reports.

pub mod cli;
pub mod config;
pub mod demo;
pub mod error;
pub mod output;
pub mod planted;
pub mod scan;
pub mod selftest;
pub mod suite;

use std::process::ExitCode;

pub use config::{Command, DemoId, Format, RunConfig, ScanSpec, OUT_DIR_ENV};
pub use demo::{demo, DemoOutcome, DemoRow};
pub use error::{CliError, CliResult};
pub use output::{parse_report, read_report, strip_timestamp, to_sorted_json, write_report};
pub use scan::{scan_radius, write_scan, RadiusScan, ScanPoint};
pub use selftest::{selftest, OracleCheck};
pub use suite::{run_suite, Aggregate, SuiteReport};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

/// Executes a parsed configuration, writing outputs; returns the exit status.
pub fn execute(config: &RunConfig) -> CliResult<u8> {
    match config.command {
        Command::Verify => {
            let report = run_suite(config)?;
            let path = config.output_path();
            write_report(&report, &path, config.format)?;
            let a = &report.aggregate;
            println!(
                "{} reports: {} passed, {} failed; min normalized margin {}",
                report.reports.len(),
                a.pass_count,
                a.fail_count,
                a.min_margin.map_or("n/a".into(), |m| format!("{m:+.3e}"))
            );
            println!("report written to {}", path.display());
            Ok(if report.all_passed() { EXIT_PASS } else { EXIT_VIOLATION })
        }
        Command::Scan => {
            let scan = scan_radius(config)?;
            let path = config.output_path();
            write_scan(&scan, &path)?;
            println!(
                "estimated radius {:.10}{}",
                scan.estimated_radius,
                if scan.unbracketed { " (unbracketed: predicate holds at r_max)" } else { "" }
            );
            println!("grid written to {}", path.display());
            Ok(EXIT_PASS)
        }
        Command::Demo => {
            let outcome = demo(config)?;
            print!("{outcome}");
            let path = config.output_path();
            write_report(&outcome.report, &path, config.format)?;
            println!("report written to {}", path.display());
            Ok(if outcome.report.all_passed() { EXIT_PASS } else { EXIT_VIOLATION })
        }
        Command::Selftest => {
            let checks = selftest(config.seed)?;
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(OracleCheck::passed) { EXIT_PASS } else { EXIT_VIOLATION })
        }
    }
}

/// Parses `args`, runs, and maps errors to exit status 2.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let parsed = match cli::Cli::try_parse_from(args) {
        Ok(p) => p,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = parsed.command.into_config().and_then(|cfg| execute(&cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
