//! Implementations behind the CLI subcommands. Each command produces a
//! report struct; the JSON rendering of a report is deterministic for a
//! fixed seed (wall-clock timings are kept out of it and only appear in the
//! human-readable output).

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use slatepath::colgen::{self, ColGenError};
use slatepath::model::{rel_diff, ObjectiveMode, QueryInstance};
use slatepath::oracle;
use slatepath::path::{self, SolveOptions};
use slatepath::{dp, Mask, SolveError};

use crate::format::{self, LoadError, Loaded};
use crate::generator::{GeneratorConfig, InstanceGenerator};

pub const AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    ColGen(#[from] ColGenError),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    /// 1 for load/validation/usage problems, 2 for solver disagreement.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 2,
            _ => 1,
        }
    }
}

pub fn parse_mode(s: &str) -> Result<ObjectiveMode, CliError> {
    match s {
        "bid" => Ok(ObjectiveMode::BidRanked),
        "revenue" => Ok(ObjectiveMode::RevenueRanked),
        "hybrid" => Ok(ObjectiveMode::Hybrid),
        other => Err(CliError::Usage(format!(
            "unknown mode {other:?}; expected bid, revenue, or hybrid"
        ))),
    }
}

// ---------------------------------------------------------------------------
// solve

#[derive(Debug, Clone)]
pub struct SolveArgs {
    pub file: PathBuf,
    pub mode: String,
    pub engine: String,
    pub mask: Option<String>,
    pub allow_empty: bool,
    pub emit_network: bool,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub engine: String,
    pub mode: String,
    pub slate: Vec<usize>,
    pub prices: Vec<f64>,
    pub value: f64,
    #[serde(skip)]
    pub dp_micros: Option<f64>,
    #[serde(skip)]
    pub path_micros: Option<f64>,
    #[serde(skip)]
    pub network: Option<String>,
}

fn resolve_mask(
    instance: &QueryInstance,
    selector: Option<&str>,
) -> Result<Option<Mask>, CliError> {
    match selector {
        None => Ok(None),
        Some("auto") => Ok(Some(Mask::from_instance(instance))),
        Some(bits) => {
            let mask = Mask::from_bitstring(bits)?;
            if mask.len() != instance.n() {
                return Err(CliError::Solve(SolveError::MaskLength {
                    len: mask.len(),
                    expected: instance.n(),
                }));
            }
            Ok(Some(mask))
        }
    }
}

pub fn run_solve(args: &SolveArgs) -> Result<SolveReport, CliError> {
    let instance = match format::load_file(&args.file)? {
        Loaded::Instance(inst) => inst,
        Loaded::Problem(_) => {
            return Err(CliError::Usage(
                "expected an instance file; this is an allocation problem (use `colgen`)"
                    .to_string(),
            ))
        }
    };
    let mode = parse_mode(&args.mode)?;
    let mask = resolve_mask(&instance, args.mask.as_deref())?;
    let mask_restricts = mask
        .as_ref()
        .map_or(false, |m| !m.mandatory_ranks().is_empty());
    let options = SolveOptions {
        allow_empty: args.allow_empty,
    };

    let network = if args.emit_network {
        Some(path::build_network(&instance, mode, mask.as_ref())?.emit_edge_list())
    } else {
        None
    };

    let wants_dp = matches!(args.engine.as_str(), "dp" | "both");
    if wants_dp && mask_restricts {
        return Err(CliError::Usage(
            "the dp engine does not handle masks; use --engine path".to_string(),
        ));
    }
    if wants_dp && args.allow_empty {
        return Err(CliError::Usage(
            "the dp engine never returns an empty slate; use --engine path".to_string(),
        ));
    }

    match args.engine.as_str() {
        "dp" => {
            let start = Instant::now();
            let sol = dp::solve_backward(&instance, mode)?;
            let micros = start.elapsed().as_secs_f64() * 1e6;
            Ok(SolveReport {
                engine: "dp".to_string(),
                mode: mode.as_str().to_string(),
                slate: sol.slate.ranks().to_vec(),
                prices: sol.prices,
                value: sol.value,
                dp_micros: Some(micros),
                path_micros: None,
                network,
            })
        }
        "path" => {
            let start = Instant::now();
            let sol = path::solve_slate_with(&instance, mode, mask.as_ref(), options)?;
            let micros = start.elapsed().as_secs_f64() * 1e6;
            Ok(SolveReport {
                engine: "path".to_string(),
                mode: mode.as_str().to_string(),
                slate: sol.slate.ranks().to_vec(),
                prices: sol.prices,
                value: sol.value,
                dp_micros: None,
                path_micros: Some(micros),
                network,
            })
        }
        "both" => {
            let start = Instant::now();
            let dp_sol = dp::solve_backward(&instance, mode)?;
            let dp_micros = start.elapsed().as_secs_f64() * 1e6;
            let start = Instant::now();
            let path_sol = path::solve_slate_with(&instance, mode, mask.as_ref(), options)?;
            let path_micros = start.elapsed().as_secs_f64() * 1e6;
            if dp_sol.slate != path_sol.slate
                || rel_diff(dp_sol.value, path_sol.value) > AGREEMENT_TOL
            {
                return Err(CliError::Mismatch(format!(
                    "engines disagree: dp {} = {} vs path {} = {}",
                    dp_sol.slate, dp_sol.value, path_sol.slate, path_sol.value
                )));
            }
            Ok(SolveReport {
                engine: "both".to_string(),
                mode: mode.as_str().to_string(),
                slate: path_sol.slate.ranks().to_vec(),
                prices: path_sol.prices,
                value: path_sol.value,
                dp_micros: Some(dp_micros),
                path_micros: Some(path_micros),
                network,
            })
        }
        other => Err(CliError::Usage(format!(
            "unknown engine {other:?}; expected dp, path, or both"
        ))),
    }
}

// ---------------------------------------------------------------------------
// check

#[derive(Debug, Clone)]
pub struct CheckArgs {
    pub fixtures: Option<PathBuf>,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub count: usize,
    pub fixtures_checked: usize,
    pub comparisons: usize,
    pub mismatches: usize,
    pub max_rel_err: f64,
    pub status: String,
}

#[derive(Default)]
struct CheckState {
    comparisons: usize,
    mismatches: usize,
    max_rel_err: f64,
    notes: Vec<String>,
}

impl CheckState {
    fn record(&mut self, label: &str, a: f64, b: f64) {
        let err = rel_diff(a, b);
        self.comparisons += 1;
        if err > self.max_rel_err {
            self.max_rel_err = err;
        }
        if err > AGREEMENT_TOL {
            self.mismatches += 1;
            self.notes.push(format!("{label}: {a} vs {b} (rel {err:.3e})"));
        }
    }

    fn record_outcome_match(&mut self, label: &str, matched: bool) {
        self.comparisons += 1;
        if !matched {
            self.mismatches += 1;
            self.notes.push(format!("{label}: outcome mismatch"));
        }
    }
}

fn valid_modes(instance: &QueryInstance) -> Vec<ObjectiveMode> {
    let mut modes = vec![ObjectiveMode::RevenueRanked, ObjectiveMode::Hybrid];
    if instance.check_mode(ObjectiveMode::BidRanked).is_ok() {
        modes.insert(0, ObjectiveMode::BidRanked);
    }
    modes
}

fn check_instance(
    instance: &QueryInstance,
    mask: Option<&Mask>,
    label: &str,
    state: &mut CheckState,
) {
    for mode in valid_modes(instance) {
        let tag = format!("{label}/{}", mode.as_str());
        let path_sol = path::solve_slate(instance, mode, mask);
        if mask.map_or(true, |m| m.mandatory_ranks().is_empty()) {
            if let (Ok(d), Ok(p)) = (dp::solve_backward(instance, mode), path_sol.as_ref()) {
                state.record(&format!("{tag}/dp-vs-path"), d.value, p.value);
            }
        }
        if instance.n() <= oracle::MAX_ORACLE_N {
            let truth = oracle::enumerate_best(instance, mode, mask);
            match (path_sol.as_ref(), truth) {
                (Ok(p), Ok(t)) => state.record(&format!("{tag}/path-vs-oracle"), p.value, t.value),
                (Err(SolveError::SinkUnreachable), Err(SolveError::SinkUnreachable)) => {
                    state.record_outcome_match(&format!("{tag}/infeasible"), true)
                }
                (a, b) => {
                    let matched = a.is_err() == b.is_err();
                    state.record_outcome_match(&format!("{tag}/outcome {a:?} vs {b:?}"), matched)
                }
            }
        }
    }
}

pub fn run_check(args: &CheckArgs) -> Result<(CheckReport, Vec<String>), CliError> {
    let mut state = CheckState::default();
    let mut fixtures_checked = 0;

    if let Some(dir) = &args.fixtures {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|source| LoadError::Io {
                path: dir.display().to_string(),
                source,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        entries.sort();
        for path in entries {
            let label = path
                .file_name()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_default();
            match format::load_file(&path)? {
                Loaded::Instance(instance) => {
                    check_instance(&instance, None, &label, &mut state);
                    let mask = Mask::from_instance(&instance);
                    check_instance(&instance, Some(&mask), &format!("{label}/masked"), &mut state);
                }
                Loaded::Problem(problem) => {
                    let small = problem.queries().len() <= 6
                        && problem
                            .queries()
                            .iter()
                            .all(|q| q.instance.n() <= 10 && q.instance.positions() <= 4);
                    if small {
                        let outcome = colgen::run_colgen(&problem, 100, 1e-9)?;
                        let (_, truth) = colgen::solve_by_full_enumeration(&problem)?;
                        // Column generation must match the all-columns LP to
                        // a looser tolerance than solver-vs-oracle checks.
                        let err = rel_diff(outcome.master.objective, truth.objective);
                        state.comparisons += 1;
                        state.max_rel_err = state.max_rel_err.max(err);
                        if err > 1e-6 {
                            state.mismatches += 1;
                            state.notes.push(format!(
                                "{label}: colgen {} vs enumeration {}",
                                outcome.master.objective, truth.objective
                            ));
                        }
                    }
                }
            }
            fixtures_checked += 1;
        }
    }

    // Randomized band: small instances against the oracle (plus masked
    // variants), larger ones for dp/path agreement at production scale.
    let modes = [
        ObjectiveMode::BidRanked,
        ObjectiveMode::RevenueRanked,
        ObjectiveMode::Hybrid,
    ];
    for i in 0..args.count {
        let mode = modes[i % 3];
        let seed = args.seed.wrapping_add(i as u64);
        if i % 4 == 3 {
            let mut generator =
                InstanceGenerator::new(seed, GeneratorConfig::new(12, 1, 100, mode));
            let instance = generator.next_instance();
            let d = dp::solve_backward(&instance, mode)?;
            let p = path::solve_slate(&instance, mode, None)?;
            state.record(&format!("random{i}/large/dp-vs-path"), d.value, p.value);
        } else {
            let positions = 1 + i % 4;
            let mut generator =
                InstanceGenerator::new(seed, GeneratorConfig::new(positions, 1, 10, mode));
            let instance = generator.next_instance();
            check_instance(&instance, None, &format!("random{i}"), &mut state);
            let mask = generator.next_mask(instance.n());
            check_instance(
                &instance,
                Some(&mask),
                &format!("random{i}/mask{}", mask.bitstring()),
                &mut state,
            );
        }
    }

    let status = if state.mismatches == 0 { "ok" } else { "mismatch" };
    Ok((
        CheckReport {
            seed: args.seed,
            count: args.count,
            fixtures_checked,
            comparisons: state.comparisons,
            mismatches: state.mismatches,
            max_rel_err: state.max_rel_err,
            status: status.to_string(),
        },
        state.notes,
    ))
}

// ---------------------------------------------------------------------------
// bench

#[derive(Debug, Clone)]
pub struct BenchArgs {
    pub count: usize,
    pub positions: usize,
    pub max_ads: usize,
    pub seed: u64,
}

impl Default for BenchArgs {
    fn default() -> Self {
        BenchArgs {
            count: 5000,
            positions: 12,
            max_ads: 77,
            seed: 42,
        }
    }
}

/// Timing statistics in microseconds; excluded from the JSON rendering so
/// machine-readable output stays deterministic.
#[derive(Debug, Clone, Default)]
pub struct TimingStats {
    pub mean_us: f64,
    pub median_us: f64,
    pub p99_us: f64,
    pub min_us: f64,
    pub max_us: f64,
    pub total_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub count: usize,
    pub positions: usize,
    pub max_ads: usize,
    pub seed: u64,
    /// FNV-1a over every solved slate and value; two runs with the same
    /// seed must produce the same digest.
    pub digest: String,
    pub total_value: f64,
    pub mean_slate_len: f64,
    #[serde(skip)]
    pub timing: TimingStats,
}

struct Fnv64(u64);

impl Fnv64 {
    fn new() -> Self {
        Fnv64(0xcbf29ce484222325)
    }

    fn write_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }
}

pub fn validate_bench_args(args: &BenchArgs) -> Result<(), CliError> {
    if args.count == 0 || args.positions == 0 || args.max_ads == 0 {
        return Err(CliError::Usage(
            "bench needs count, positions, and max-ads all at least 1".to_string(),
        ));
    }
    Ok(())
}

/// Generates `count` random queries and times per-query solving, including
/// instance validation/ranking (the data-structure setup), per the
/// measurement protocol the defaults mirror: 12 positions, 1 to 77 ads.
pub fn run_bench(args: &BenchArgs) -> BenchReport {
    let config = GeneratorConfig::new(args.positions, 1, args.max_ads, ObjectiveMode::RevenueRanked);
    let mut generator = InstanceGenerator::new(args.seed, config);
    let raws: Vec<_> = (0..args.count).map(|_| generator.next_raw()).collect();

    let mut times_us = Vec::with_capacity(args.count);
    let mut digest = Fnv64::new();
    let mut total_value = 0.0;
    let mut total_len = 0usize;
    for raw in raws {
        let start = Instant::now();
        let instance = raw.validate().expect("generated instance is valid");
        let sol = path::solve_slate(&instance, ObjectiveMode::RevenueRanked, None)
            .expect("unmasked solve cannot fail");
        times_us.push(start.elapsed().as_secs_f64() * 1e6);
        digest.write_u64(instance.n() as u64);
        for &rank in sol.slate.ranks() {
            digest.write_u64(rank as u64);
        }
        digest.write_u64(sol.value.to_bits());
        total_value += sol.value;
        total_len += sol.slate.len();
    }

    let mut sorted = times_us.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total: f64 = times_us.iter().sum();
    let pick = |q: f64| sorted[(((sorted.len() as f64) * q).ceil() as usize).max(1) - 1];
    let timing = TimingStats {
        mean_us: total / times_us.len() as f64,
        median_us: pick(0.5),
        p99_us: pick(0.99),
        min_us: sorted[0],
        max_us: sorted[sorted.len() - 1],
        total_ms: total / 1e3,
    };

    BenchReport {
        count: args.count,
        positions: args.positions,
        max_ads: args.max_ads,
        seed: args.seed,
        digest: format!("{:016x}", digest.0),
        total_value,
        mean_slate_len: total_len as f64 / args.count as f64,
        timing,
    }
}

// ---------------------------------------------------------------------------
// colgen

#[derive(Debug, Clone)]
pub struct ColgenArgs {
    pub file: PathBuf,
    pub max_iters: usize,
    pub tolerance: f64,
}

#[derive(Debug, Serialize)]
pub struct AllocationEntry {
    pub query: usize,
    pub slate: Vec<usize>,
    pub showings: f64,
}

#[derive(Debug, Serialize)]
pub struct LogEntry {
    pub iter: usize,
    pub objective: f64,
    pub new_columns: usize,
    pub max_reduced_cost: f64,
}

#[derive(Debug, Serialize)]
pub struct ColgenReport {
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
    pub columns: usize,
    pub budget_duals: Vec<f64>,
    pub inventory_duals: Vec<f64>,
    pub allocations: Vec<AllocationEntry>,
    pub log: Vec<LogEntry>,
}

pub fn run_colgen_cmd(args: &ColgenArgs) -> Result<ColgenReport, CliError> {
    let problem = match format::load_file(&args.file)? {
        Loaded::Problem(p) => p,
        Loaded::Instance(_) => {
            return Err(CliError::Usage(
                "expected an allocation problem file with a `queries` array".to_string(),
            ))
        }
    };
    let outcome = colgen::run_colgen(&problem, args.max_iters, args.tolerance)?;
    let allocations = outcome
        .columns
        .iter()
        .zip(&outcome.master.x)
        .filter(|(_, &x)| x > 1e-9)
        .map(|(col, &x)| AllocationEntry {
            query: col.query,
            slate: col.slate.ranks().to_vec(),
            showings: x,
        })
        .collect();
    Ok(ColgenReport {
        objective: outcome.master.objective,
        converged: outcome.converged,
        iterations: outcome.log.len(),
        columns: outcome.columns.len(),
        budget_duals: outcome.master.budget_duals.clone(),
        inventory_duals: outcome.master.inventory_duals.clone(),
        allocations,
        log: outcome
            .log
            .iter()
            .map(|r| LogEntry {
                iter: r.iter,
                objective: r.objective,
                new_columns: r.new_columns,
                max_reduced_cost: r.max_reduced_cost,
            })
            .collect(),
    })
}
