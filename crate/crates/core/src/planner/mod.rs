//! Batch planner with relevant-region sampling and a lazy reverse heuristic.
//!
//! Each iteration prunes samples that can no longer help, draws a mixed batch
//! (perturbed steps from relevant tree vertices plus informed samples), builds
//! a reverse shortest-path tree over the unvalidated k-nearest graph, and
//! grows the forward tree with queue-ordered, postponed edge evaluation.

mod knn;
pub mod relevant;
pub mod reverse;
pub mod rgg;
mod search;

use serde::{Deserialize, Serialize};

pub use relevant::{estimate_step, perturb, vertex_weight, weight_vertices, Noise, StepError, VertexStats};
pub use reverse::{build_reverse_tree, reverse_dijkstra, ReverseTree};
pub use rgg::{build_rgg, rgg_k};
pub use search::{plan, plan_with_progress, RelRegionPlanner, Sample};

use crate::run::ClockMode;
use crate::world::WorldError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    /// Samples per batch (`m`).
    pub batch_size: usize,
    /// Fraction of each batch drawn from the informed set.
    pub p_inf: f64,
    /// Step bound; `None` means 0.1 × the space diagonal.
    pub gamma_max: Option<f64>,
    pub lambda: [f64; 3],
    /// Scale of the k-nearest rule.
    pub k_rgg: f64,
    /// Direction noise (radians).
    pub sigma_dir: f64,
    pub mag_clamp: [f64; 2],
    pub seed: u64,
    /// Seconds.
    pub time_budget: f64,
    pub target_cost: Option<f64>,
    /// Stop after this many batches.
    pub max_iterations: Option<u64>,
    pub clock: ClockMode,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            batch_size: 100,
            p_inf: 0.5,
            gamma_max: None,
            lambda: [1.0, 1.0, 1.0],
            k_rgg: 1.0,
            sigma_dir: 0.5,
            mag_clamp: [0.1, 1.0],
            seed: 0,
            time_budget: 10.0,
            target_cost: None,
            max_iterations: None,
            clock: ClockMode::Wall,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlannerError> {
        let bad = |m: &str| Err(PlannerError::InvalidConfig(m.into()));
        if self.batch_size < 2 {
            return bad("batch_size must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.p_inf) {
            return bad("p_inf must lie in [0, 1]");
        }
        if let Some(g) = self.gamma_max {
            if !(g > 0.0 && g.is_finite()) {
                return bad("gamma_max must be positive");
            }
        }
        if !(self.k_rgg >= 1.0 && self.k_rgg.is_finite()) {
            return bad("k_rgg must be at least 1");
        }
        if !(self.sigma_dir >= 0.0 && self.sigma_dir.is_finite()) {
            return bad("sigma_dir must be nonnegative");
        }
        let [lo, hi] = self.mag_clamp;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return bad("mag_clamp must satisfy 0 < lo <= hi");
        }
        if self.lambda.iter().any(|l| !l.is_finite()) {
            return bad("lambda must be finite");
        }
        if !(self.time_budget >= 0.0) {
            return bad("time_budget must be nonnegative");
        }
        if let ClockMode::Virtual { tick_s } = self.clock {
            if !(tick_s > 0.0 && tick_s.is_finite()) {
                return bad("virtual clock tick must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlannerError {
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scenario(#[from] WorldError),
}
