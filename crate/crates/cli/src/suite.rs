use std::f64::consts::PI;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use opbohr::analysis::{
    check_theorem, thm2_radius, thm3_radius, CheckOptions, Instance, InstanceData, TheoremId, TheoremReport,
    WitnessRef, T4_RADIUS,
};
use opbohr::generators::{derive_seed, contractive_sequence, ordered_triples, sample, seeded_rng, FamilyId, FamilySpec};
use opbohr::series::SubordinationWitness;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::planted::planted_report;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed rotation angles; every trial adds one seeded angle.
pub const MUS: [f64; 4] = [0.0, 1.0, PI / 3.0, PI / 7.0];
pub const T1I_RADII: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
pub const L1_RADII: [f64; 3] = [0.1, 0.5, 0.9];
pub const L1_KS: [usize; 3] = [0, 1, 3];
pub const L2_RADII: [f64; 3] = [0.1, 0.2, 1.0 / 3.0];
pub const TRIPLES_PER_TRIAL: usize = 100;
const STARLIKE_MIN_ORDER: usize = 256;
const L2_FAMILIES: [FamilyId; 3] = [FamilyId::SchurHolo, FamilyId::ConvexDiag, FamilyId::StarlikeDiag];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub pass_count: usize,
    pub fail_count: usize,
    /// Smallest normalized margin over all reports.
    pub min_margin: Option<f64>,
    pub argmin_seed: Option<u64>,
    pub argmin_theorem: Option<TheoremId>,
}

impl Aggregate {
    pub fn from_reports(reports: &[TheoremReport]) -> Self {
        let pass_count = reports.iter().filter(|r| r.passed).count();
        let worst = reports.iter().min_by(|a, b| a.normalized_margin().total_cmp(&b.normalized_margin()));
        Aggregate {
            pass_count,
            fail_count: reports.len() - pass_count,
            min_margin: worst.map(|r| r.normalized_margin()),
            argmin_seed: worst.and_then(|r| r.witness.seed),
            argmin_theorem: worst.map(|r| r.theorem_id),
        }
    }
}

/// Run metadata; `timestamp` is the only part that differs between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub artifact_version: String,
    pub timestamp: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timestamp {
    pub unix_seconds: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub reports: Vec<TheoremReport>,
    pub aggregate: Aggregate,
    pub meta: Meta,
}

impl SuiteReport {
    pub fn assemble(config: &RunConfig, reports: Vec<TheoremReport>, started: Instant) -> Self {
        let unix_seconds = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        SuiteReport {
            config: config.echo(),
            aggregate: Aggregate::from_reports(&reports),
            reports,
            meta: Meta {
                artifact_version: ARTIFACT_VERSION.into(),
                timestamp: Timestamp { unix_seconds, wall_time_s: started.elapsed().as_secs_f64() },
            },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.aggregate.fail_count == 0
    }
}

/// Where the instances for a group of theorem ids come from.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Source {
    Sequence,
    Triples,
    Sample(FamilyId),
    Subordinate(FamilyId),
    Pairs,
}

fn source_of(id: TheoremId, normal: bool) -> Vec<Source> {
    use TheoremId::*;
    match id {
        L1 => vec![Source::Sequence],
        E17 => vec![Source::Triples],
        T1i | T1ii | T1iii if normal => vec![Source::Sample(FamilyId::CommutingHarmonic)],
        T1i | T1ii | T1iii => vec![Source::Sample(FamilyId::SchurHarmonic)],
        E55 => vec![Source::Sample(FamilyId::SchurHolo)],
        T2 => vec![Source::Sample(FamilyId::ExteriorDiag), Source::Sample(FamilyId::ExteriorColligation)],
        T3a | T3b => vec![Source::Subordinate(FamilyId::ConvexDiag)],
        L2a | L2b => vec![Source::Pairs],
        T4a | T4b => vec![Source::Subordinate(FamilyId::StarlikeDiag)],
    }
}

fn source_tag(s: Source) -> u64 {
    match s {
        Source::Sequence => 1,
        Source::Triples => 2,
        Source::Pairs => 3,
        Source::Sample(f) | Source::Subordinate(f) => 16 + f as u64,
    }
}

/// Theorem ids grouped by instance source, in first-appearance order.
fn groups(config: &RunConfig) -> Vec<(Source, Vec<TheoremId>)> {
    let mut out: Vec<(Source, Vec<TheoremId>)> = Vec::new();
    for &id in &config.theorems {
        for src in source_of(id, config.normal) {
            match out.iter_mut().find(|(s, _)| *s == src) {
                Some((_, ids)) => ids.push(id),
                None => out.push((src, vec![id])),
            }
        }
    }
    out
}

/// Seed of trial `trial` at dimension `dim` for a given source.
fn trial_seed(master: u64, src: Source, dim: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(master, (source_tag(src) << 8) | dim as u64), trial as u64)
}

fn witness_for(seed: u64, order: usize) -> CliResult<SubordinationWitness> {
    let spec = FamilySpec::new(FamilyId::Subordination, 1, order, derive_seed(seed, 1));
    Ok(sample(&spec)?.as_witness().expect("subordination family yields a witness").clone())
}

fn build_instance(src: Source, dim: usize, trial: usize, config: &RunConfig, seed: u64) -> CliResult<Instance> {
    let order = config.order;
    let data_witness = |family: &str, order: usize| WitnessRef {
        family: family.into(),
        seed: Some(seed),
        dim,
        order,
        note: None,
    };
    Ok(match src {
        Source::Sequence => {
            let len = 1 + (seed % 24) as usize;
            Instance::new(data_witness("contractive_sequence", len), InstanceData::Sequence(contractive_sequence(dim, len, seed)))
        }
        Source::Triples => Instance::new(
            data_witness("ordered_triples", TRIPLES_PER_TRIAL),
            InstanceData::Triples(ordered_triples(TRIPLES_PER_TRIAL, seed)),
        ),
        Source::Sample(family) => {
            let spec = FamilySpec::new(family, dim, order, seed);
            sample(&spec)?.instance(spec.witness_ref())?
        }
        Source::Subordinate(_) | Source::Pairs => {
            let family = match src {
                Source::Subordinate(f) => f,
                _ => L2_FAMILIES[trial % L2_FAMILIES.len()],
            };
            let order = if family == FamilyId::StarlikeDiag { order.max(STARLIKE_MIN_ORDER) } else { order };
            let spec = FamilySpec::new(family, dim, order, seed);
            let sub = sample(&spec)?.subordinate(&witness_for(seed, order)?)?;
            let mut w = spec.witness_ref();
            w.note = Some("phi from subordination family".into());
            Instance::new(w, InstanceData::Subordinate(sub))
        }
    })
}

/// Default radius sweep for `id` on `inst`.
fn default_radii(id: TheoremId, inst: &Instance, config: &RunConfig) -> CliResult<Vec<f64>> {
    use TheoremId::*;
    Ok(match id {
        L1 => L1_RADII.to_vec(),
        T1i | E55 => T1I_RADII.to_vec(),
        T1ii if config.normal => vec![1.0 / 3.0],
        T1ii => vec![0.2],
        T1iii => vec![1.0 / 3.0],
        E17 => vec![0.0],
        T2 => {
            let InstanceData::Exterior(ext) = &inst.data else { unreachable!("t2 instances are exterior") };
            let r = thm2_radius(&ext.series.coeffs()[0], &config.tol)?.radius;
            vec![0.1f64.min(r), 0.2f64.min(r), r]
        }
        T3a => {
            let InstanceData::Subordinate(sub) = &inst.data else { unreachable!("t3 instances are subordinate") };
            vec![thm3_radius(&sub.f.coeffs()[1])?]
        }
        T3b => vec![1.0 / 3.0],
        L2a | L2b => L2_RADII.to_vec(),
        T4a | T4b => vec![T4_RADIUS],
    })
}

fn mus_for(id: TheoremId, seed: u64) -> Vec<Option<f64>> {
    match id {
        TheoremId::T1i | TheoremId::T1ii | TheoremId::T1iii => {
            let extra = seeded_rng(derive_seed(seed, 2)).random_range(0.0..2.0 * PI);
            MUS.iter().copied().chain([extra]).map(Some).collect()
        }
        _ => vec![None],
    }
}

/// Worst report of the radius, rotation and `k` sweep of one theorem on one instance.
fn worst_case(id: TheoremId, inst: &Instance, config: &RunConfig, seed: u64) -> CliResult<TheoremReport> {
    let radii = match &config.radii {
        Some(rs) => rs.clone(),
        None => default_radii(id, inst, config)?,
    };
    let ks: &[usize] = if id == TheoremId::L1 { &L1_KS } else { &[0] };
    let mut worst: Option<TheoremReport> = None;
    let mut points = 0usize;
    for &k in ks {
        let opts = CheckOptions {
            tol: config.tol,
            force: config.force,
            normal_variant: config.normal,
            lemma_k: k,
            ..CheckOptions::default()
        };
        for &r in &radii {
            for mu in mus_for(id, seed) {
                let mut rep = check_theorem(id, inst, r, mu, &opts)?;
                if id == TheoremId::L1 {
                    rep.side_values.insert("k".into(), k as f64);
                }
                points += 1;
                if worst.as_ref().is_none_or(|w| rep.normalized_margin() < w.normalized_margin()) {
                    worst = Some(rep);
                }
            }
        }
    }
    let mut rep = worst.expect("non-empty sweep");
    rep.side_values.insert("sweep_points".into(), points as f64);
    Ok(rep)
}

struct Job {
    group: usize,
    dim: usize,
    trial: usize,
}

/// Runs every trial of the configured suite; trials run in parallel, reports
/// come back ordered by group, dimension and trial index.
pub fn run_suite(config: &RunConfig) -> CliResult<SuiteReport> {
    config.validate()?;
    let started = Instant::now();
    let groups = groups(config);
    let jobs: Vec<Job> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, _)| {
            config.dims.iter().flat_map(move |&dim| (0..config.trials).map(move |trial| Job { group: g, dim, trial }))
        })
        .collect();
    let per_job: Vec<CliResult<Vec<TheoremReport>>> = jobs
        .par_iter()
        .map(|job| {
            let (src, ids) = &groups[job.group];
            let seed = trial_seed(config.seed, *src, job.dim, job.trial);
            let inst = build_instance(*src, job.dim, job.trial, config, seed)?;
            ids.iter().map(|&id| worst_case(id, &inst, config, seed)).collect()
        })
        .collect();
    let mut reports = Vec::with_capacity(jobs.len());
    for r in per_job {
        reports.extend(r?);
    }
    if config.planted {
        let opts = CheckOptions { tol: config.tol, ..CheckOptions::default() };
        for &id in &config.theorems {
            for &dim in &config.dims {
                if let Some(rep) = planted_report(id, dim, config.order, &opts)? {
                    reports.push(rep);
                }
            }
        }
    }
    Ok(SuiteReport::assemble(config, reports, started))
}
