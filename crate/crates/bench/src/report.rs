use relregion_core::run::{Counters, PlanStatus, TraceEvent};
use serde::{Deserialize, Serialize};

use crate::stats::Aggregates;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub planner: String,
    pub scenario: String,
    pub seed: u64,
    /// `None` when the run failed before producing a result.
    pub status: Option<PlanStatus>,
    pub trace: Vec<TraceEvent>,
    pub counters: Counters,
    /// First trace timestamp with cost ≤ target; `None` is a DNF.
    pub time_to_target: Option<f64>,
    pub error: Option<String>,
}

impl RunRecord {
    pub fn final_cost(&self) -> f64 {
        self.trace.last().map_or(f64::INFINITY, |e| e.cost)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioInfo {
    pub name: String,
    pub path: String,
    pub c_opt: Option<f64>,
    /// Cost at which runs stop; `None` means first solution.
    pub target: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub time_budget: f64,
    pub runs: usize,
    pub base_seed: u64,
    pub scenarios: Vec<ScenarioInfo>,
    pub planners: Vec<String>,
    /// Ordered by scenario, then planner, then seed.
    pub records: Vec<RunRecord>,
    pub aggregates: Aggregates,
}

impl BenchReport {
    pub fn target_of(&self, scenario: &str) -> Option<f64> {
        self.scenarios.iter().find(|s| s.name == scenario).and_then(|s| s.target)
    }

    pub fn cell<'a>(&'a self, scenario: &'a str, planner: &'a str) -> impl Iterator<Item = &'a RunRecord> + 'a {
        self.records.iter().filter(move |r| r.scenario == scenario && r.planner == planner)
    }

    pub fn all_dnf(&self) -> bool {
        self.records.iter().all(|r| r.time_to_target.is_none())
    }
}

/// First trace timestamp whose cost is at or below `target` (any finite cost
/// when there is no target).
pub fn time_to_target(trace: &[TraceEvent], target: Option<f64>) -> Option<f64> {
    trace
        .iter()
        .find(|e| match target {
            Some(t) => e.cost <= t,
            None => e.cost.is_finite(),
        })
        .map(|e| e.elapsed_s)
}
