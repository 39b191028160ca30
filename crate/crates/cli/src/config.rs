use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use opbohr::analysis::TheoremId;
use opbohr::linalg::ToleranceProfile;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BOHRCHECK_OUT_DIR";

pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Scan,
    Demo,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DemoId {
    SharpnessE55,
    RadiusT2,
    RadiusT3,
    Koebe,
}

impl DemoId {
    pub const ALL: [DemoId; 4] = [DemoId::SharpnessE55, DemoId::RadiusT2, DemoId::RadiusT3, DemoId::Koebe];

    pub fn as_str(self) -> &'static str {
        match self {
            DemoId::SharpnessE55 => "sharpness-e55",
            DemoId::RadiusT2 => "radius-t2",
            DemoId::RadiusT3 => "radius-t3",
            DemoId::Koebe => "koebe",
        }
    }
}

/// What a radius scan sweeps: a closed-form scalar family, or a generator
/// family judged by one theorem check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub theorem: Option<TheoremId>,
    pub dim: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            family: "mobius".into(),
            params: BTreeMap::new(),
            theorem: None,
            dim: 1,
            r_min: 0.01,
            r_max: 0.99,
            steps: 99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub theorems: Vec<TheoremId>,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub order: usize,
    pub seed: u64,
    pub tol: ToleranceProfile,
    /// Replaces the per-theorem radius sweep when present.
    pub radii: Option<Vec<f64>>,
    /// Draw harmonic samples with commuting coefficients and use the normal bounds.
    pub normal: bool,
    /// Allow radii beyond the stated ones.
    pub force: bool,
    /// Append the extremal planted instances to the random trials.
    pub planted: bool,
    pub format: Format,
    pub scan: Option<ScanSpec>,
    pub demo: Option<DemoId>,
    /// Not echoed into reports, so reruns to other paths stay comparable.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Verify,
            theorems: vec![TheoremId::T1i, TheoremId::T1ii, TheoremId::T1iii],
            trials: 10,
            dims: vec![1, 2, 3, 4],
            order: 64,
            seed: 0,
            tol: ToleranceProfile::default(),
            radii: None,
            normal: false,
            force: false,
            planted: false,
            format: Format::Json,
            scan: None,
            demo: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn verify(theorems: &[TheoremId], trials: usize, dims: &[usize], seed: u64) -> Self {
        Self { theorems: theorems.to_vec(), trials, dims: dims.to_vec(), seed, ..Self::default() }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d == 0 || d > MAX_DIM) {
            return Err(CliError::Config(format!("dims must be a non-empty subset of [1, {MAX_DIM}]")));
        }
        if self.order == 0 {
            return Err(CliError::Config("order must be positive".into()));
        }
        let t = &self.tol;
        if [t.psd_tol, t.eq_tol, t.quad_tol].iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        if let Some(rs) = &self.radii {
            if rs.is_empty() || rs.iter().any(|r| !(0.0..1.0).contains(r)) {
                return Err(CliError::Config("radius overrides must lie in [0, 1)".into()));
            }
        }
        match self.command {
            Command::Verify if self.theorems.is_empty() => Err(CliError::Config("no theorems selected".into())),
            Command::Scan => {
                let s = self.scan.as_ref().ok_or_else(|| CliError::Config("scan needs a family".into()))?;
                if !(0.0 <= s.r_min && s.r_min < s.r_max && s.r_max < 1.0) {
                    return Err(CliError::Config(format!("bad scan interval [{}, {}]", s.r_min, s.r_max)));
                }
                if s.steps < 2 {
                    return Err(CliError::Config("scan needs at least two steps".into()));
                }
                if s.dim == 0 || s.dim > MAX_DIM {
                    return Err(CliError::Config(format!("scan dim must lie in [1, {MAX_DIM}]")));
                }
                Ok(())
            }
            Command::Demo if self.demo.is_none() => Err(CliError::Config("demo needs a name".into())),
            _ => Ok(()),
        }
    }

    /// Copy stored in reports.
    pub fn echo(&self) -> RunConfig {
        RunConfig { out: None, ..self.clone() }
    }

    /// Explicit output path, else a default name in `$BOHRCHECK_OUT_DIR` or the working directory.
    pub fn output_path(&self) -> PathBuf {
        if let Some(p) = &self.out {
            return p.clone();
        }
        let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        let ext = match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        let stem = match (self.command, self.demo) {
            (Command::Demo, Some(d)) => format!("demo-{}", d.as_str()),
            (Command::Scan, _) => return dir.join("scan.csv"),
            (Command::Selftest, _) => "selftest".into(),
            _ => "verify-report".into(),
        };
        dir.join(format!("{stem}.{ext}"))
    }
}

/// Parses a comma list of theorem ids; `l2`, `t3` and `t4` expand to both parts and `all` to every id.
pub fn parse_theorems(items: &[String]) -> CliResult<Vec<TheoremId>> {
    let mut out: Vec<TheoremId> = Vec::new();
    let mut push = |id: TheoremId| {
        if !out.contains(&id) {
            out.push(id);
        }
    };
    for raw in items {
        let s = raw.trim().to_ascii_lowercase();
        match s.as_str() {
            "" => {}
            "all" => TheoremId::ALL.into_iter().for_each(&mut push),
            "l2" => [TheoremId::L2a, TheoremId::L2b].into_iter().for_each(&mut push),
            "t3" => [TheoremId::T3a, TheoremId::T3b].into_iter().for_each(&mut push),
            "t4" => [TheoremId::T4a, TheoremId::T4b].into_iter().for_each(&mut push),
            other => push(TheoremId::from_str(other).map_err(|_| CliError::Config(format!("unknown theorem '{other}'")))?),
        }
    }
    Ok(out)
}

/// Parses `key=value` pairs with numeric values.
pub fn parse_params(items: &[String]) -> CliResult<BTreeMap<String, f64>> {
    items
        .iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("expected key=value, got '{kv}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| CliError::Config(format!("non-numeric value in '{kv}'")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub(crate) fn ensure_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e)),
        _ => Ok(()),
    }
}
