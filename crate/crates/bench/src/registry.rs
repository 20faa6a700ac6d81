//! Planners addressable by name.

use relregion_core::baselines::{BaselineConfig, BaselineKind, BaselinePlanner};
use relregion_core::planner::plan;
use relregion_core::run::ClockMode;
use relregion_core::{PlanResult64, PlannerConfig, Scenario};
use serde::de::DeserializeOwned;

use crate::BenchError;

pub const PLANNERS: [&str; 4] = ["rrtstar", "informed_rrtstar", "rrtsharp", "relregion"];

/// Per-run settings that override whatever the planner config says.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunLimits {
    pub seed: u64,
    pub time_budget: f64,
    pub target_cost: Option<f64>,
    pub clock: ClockMode,
    /// Honored by the baselines only.
    pub max_edge_evals: Option<u64>,
}

impl RunLimits {
    pub fn new(seed: u64, time_budget: f64) -> Self {
        RunLimits { seed, time_budget, target_cost: None, clock: ClockMode::Wall, max_edge_evals: None }
    }
}

fn baseline_kind(name: &str) -> Option<BaselineKind> {
    match name {
        "rrtstar" => Some(BaselineKind::RrtStar),
        "informed_rrtstar" => Some(BaselineKind::InformedRrtStar),
        "rrtsharp" => Some(BaselineKind::RrtSharp),
        _ => None,
    }
}

fn parse<C: DeserializeOwned + Default>(name: &str, config: &serde_json::Value) -> Result<C, BenchError> {
    if config.is_null() {
        return Ok(C::default());
    }
    serde_json::from_value(config.clone()).map_err(|e| BenchError::Config(format!("planner `{name}`: {e}")))
}

/// Checks that `name` is registered and `config` parses and validates.
pub fn check(name: &str, config: &serde_json::Value) -> Result<(), BenchError> {
    let err = |e: relregion_core::PlannerError| BenchError::Config(format!("planner `{name}`: {e}"));
    if name == "relregion" {
        parse::<PlannerConfig>(name, config)?.validate().map_err(err)
    } else if baseline_kind(name).is_some() {
        parse::<BaselineConfig>(name, config)?.validate().map_err(err)
    } else {
        Err(BenchError::UnknownPlanner(name.to_string()))
    }
}

pub fn run_planner(
    name: &str,
    config: &serde_json::Value,
    sc: &Scenario,
    limits: &RunLimits,
) -> Result<PlanResult64, BenchError> {
    if name == "relregion" {
        let mut cfg: PlannerConfig = parse(name, config)?;
        cfg.seed = limits.seed;
        cfg.time_budget = limits.time_budget;
        cfg.target_cost = limits.target_cost;
        cfg.clock = limits.clock;
        return Ok(plan(sc, &cfg)?);
    }
    let kind = baseline_kind(name).ok_or_else(|| BenchError::UnknownPlanner(name.to_string()))?;
    let mut cfg: BaselineConfig = parse(name, config)?;
    cfg.seed = limits.seed;
    cfg.time_budget = limits.time_budget;
    cfg.target_cost = limits.target_cost;
    cfg.clock = limits.clock;
    if limits.max_edge_evals.is_some() {
        cfg.max_edge_evals = limits.max_edge_evals;
    }
    Ok(BaselinePlanner::new(kind, sc, cfg)?.run())
}
