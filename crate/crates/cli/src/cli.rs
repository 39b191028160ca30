use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use opbohr::linalg::ToleranceProfile;

use crate::config::{parse_params, parse_theorems, Command, DemoId, Format, RunConfig, ScanSpec};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "opbohr", version, about = "Randomized and planted checks of operator Bohr inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Run seeded trials of the selected checks.
    Verify(VerifyArgs),
    /// Tabulate a margin over a radius grid and bisect for the radius.
    Scan(ScanArgs),
    /// Planted extremal cases against their known constants.
    Demo(DemoArgs),
    /// Oracle cross-checks between independent computation paths.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 64)]
    pub order: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Loewner and structural tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "t1i,t1ii,t1iii")]
    pub theorems: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    pub dims: Vec<usize>,
    /// Radii replacing each check's default sweep.
    #[arg(long = "r", value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Commuting samples with the normal-case bounds.
    #[arg(long)]
    pub normal: bool,
    /// Allow radii past the stated ones.
    #[arg(long)]
    pub force: bool,
    /// Also run the planted extremal instances.
    #[arg(long)]
    pub planted: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// mobius, koebe, constant, or a generator family together with --theorem.
    #[arg(long)]
    pub family: String,
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.01)]
    pub r_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub r_max: f64,
    #[arg(long, default_value_t = 99)]
    pub steps: usize,
    #[arg(long)]
    pub normal: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoId,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn tolerance(tol: f64) -> CliResult<ToleranceProfile> {
    let quad = ToleranceProfile::default().quad_tol.min(tol);
    ToleranceProfile::new(tol, tol, quad).map_err(|e| CliError::Config(e.to_string()))
}

fn with_common(base: RunConfig, c: &Common) -> CliResult<RunConfig> {
    Ok(RunConfig { order: c.order, seed: c.seed, tol: tolerance(c.tol)?, out: c.out.clone(), ..base })
}

impl Sub {
    pub fn into_config(self) -> CliResult<RunConfig> {
        let cfg = match self {
            Sub::Verify(a) => with_common(
                RunConfig {
                    command: Command::Verify,
                    theorems: parse_theorems(&a.theorems)?,
                    trials: a.trials,
                    dims: a.dims,
                    radii: a.radii,
                    normal: a.normal,
                    force: a.force,
                    planted: a.planted,
                    format: a.format,
                    ..RunConfig::default()
                },
                &a.common,
            )?,
            Sub::Scan(a) => {
                let theorem = match &a.theorem {
                    Some(t) => Some(t.parse().map_err(|_| CliError::Config(format!("unknown theorem '{t}'")))?),
                    None => None,
                };
                let scan = ScanSpec {
                    family: a.family,
                    params: parse_params(&a.params)?,
                    theorem,
                    dim: a.dim,
                    r_min: a.r_min,
                    r_max: a.r_max,
                    steps: a.steps,
                };
                with_common(
                    RunConfig {
                        command: Command::Scan,
                        theorems: theorem.into_iter().collect(),
                        normal: a.normal,
                        format: Format::Csv,
                        scan: Some(scan),
                        ..RunConfig::default()
                    },
                    &a.common,
                )?
            }
            Sub::Demo(a) => with_common(
                RunConfig {
                    command: Command::Demo,
                    theorems: Vec::new(),
                    format: a.format,
                    demo: Some(a.name),
                    ..RunConfig::default()
                },
                &a.common,
            )?,
            Sub::Selftest(a) => RunConfig { command: Command::Selftest, seed: a.seed, ..RunConfig::default() },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
