use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rayon::prelude::*;
use relregion_core::baselines::{rrt_star_plan, BaselineConfig};
use relregion_core::run::Counters;
use relregion_core::world::load_scenario;
use relregion_core::Scenario;

use crate::config::{BenchConfig, COptSource, PlannerEntry, TargetRule};
use crate::registry::{run_planner, RunLimits};
use crate::report::{time_to_target, BenchReport, RunRecord, ScenarioInfo};
use crate::stats::{aggregate, Aggregates};
use crate::BenchError;

pub const THREADS_ENV: &str = "RELREGION_THREADS";

pub fn load_scenario_file(path: &Path) -> Result<Scenario, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    load_scenario(&text).map_err(|source| BenchError::Scenario { path: path.to_path_buf(), source })
}

/// Best cost of one long RRT* run.
pub fn calibrate_c_opt(sc: &Scenario, budget: f64, seed: u64) -> Result<f64, BenchError> {
    let cfg = BaselineConfig { seed, time_budget: budget, ..Default::default() };
    let r = rrt_star_plan(sc, &cfg)?;
    if r.solved() {
        Ok(r.best_cost.value())
    } else {
        Err(BenchError::CalibrationFailed(sc.name.clone()))
    }
}

/// `(c_opt, target)` for one scenario under `rule`.
pub fn resolve_target(sc: &Scenario, rule: &TargetRule) -> Result<(Option<f64>, Option<f64>), BenchError> {
    Ok(match *rule {
        TargetRule::None => (None, None),
        TargetRule::Cost(c) => (None, Some(c)),
        TargetRule::Ratio { ratio, c_opt } => {
            let c = match c_opt {
                COptSource::Fixed(c) => c,
                COptSource::Calibrate { budget, seed } => calibrate_c_opt(sc, budget, seed)?,
            };
            (Some(c), Some(ratio * c))
        }
    })
}

/// Worker count: the configured value (else all cores), capped by `RELREGION_THREADS`.
pub fn thread_count(configured: Option<usize>) -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut n = configured.unwrap_or(cores).max(1);
    if let Some(cap) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        n = n.min(cap.max(1));
    }
    n
}

fn failed(planner: &str, scenario: &str, seed: u64, error: String) -> RunRecord {
    RunRecord {
        planner: planner.to_string(),
        scenario: scenario.to_string(),
        seed,
        status: None,
        trace: Vec::new(),
        counters: Counters::default(),
        time_to_target: None,
        error: Some(error),
    }
}

fn run_one(entry: &PlannerEntry, sc: &Scenario, limits: &RunLimits, target: Option<f64>) -> RunRecord {
    let outcome = catch_unwind(AssertUnwindSafe(|| run_planner(&entry.name, &entry.config, sc, limits)));
    match outcome {
        Ok(Ok(r)) => RunRecord {
            planner: entry.name.clone(),
            scenario: sc.name.clone(),
            seed: limits.seed,
            status: Some(r.status),
            time_to_target: time_to_target(&r.trace, target),
            trace: r.trace,
            counters: r.counters,
            error: None,
        },
        Ok(Err(e)) => failed(&entry.name, &sc.name, limits.seed, e.to_string()),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "planner panicked".into());
            failed(&entry.name, &sc.name, limits.seed, msg)
        }
    }
}

/// Runs every (scenario, planner, run) cell. Run `i` uses seed `base_seed + i`
/// for every planner, so runs are paired across planners.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let mut scenarios = Vec::new();
    let mut infos = Vec::new();
    for path in &cfg.scenarios {
        let sc = load_scenario_file(path)?;
        let (c_opt, target) = resolve_target(&sc, &cfg.target)?;
        infos.push(ScenarioInfo { name: sc.name.clone(), path: path.display().to_string(), c_opt, target });
        scenarios.push(sc);
    }
    let mut cells = Vec::new();
    for (si, info) in infos.iter().enumerate() {
        for entry in &cfg.planners {
            for run in 0..cfg.runs {
                let limits = RunLimits {
                    target_cost: info.target,
                    clock: cfg.clock,
                    ..RunLimits::new(cfg.base_seed + run as u64, cfg.time_budget)
                };
                cells.push((si, entry, limits));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cfg.threads))
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let records: Vec<RunRecord> = pool.install(|| {
        cells
            .par_iter()
            .map(|(si, entry, limits)| run_one(entry, &scenarios[*si], limits, infos[*si].target))
            .collect()
    });
    let mut report = BenchReport {
        time_budget: cfg.time_budget,
        runs: cfg.runs,
        base_seed: cfg.base_seed,
        scenarios: infos,
        planners: cfg.planners.iter().map(|p| p.name.clone()).collect(),
        records,
        aggregates: Aggregates::default(),
    };
    report.aggregates = aggregate(&report);
    Ok(report)
}
