//! Run bookkeeping shared by every planner: clocks, counters, traces and results.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::statespace::{Cost, State};

/// How elapsed time is measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ClockMode {
    /// Monotonic wall clock from the start of the run.
    #[default]
    Wall,
    /// Deterministic time: every state validity check advances the clock by `tick_s`.
    Virtual { tick_s: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Motion checks actually performed (cache hits excluded).
    pub edge_evals: u64,
    /// State validity checks, including those made while sampling.
    pub state_checks: u64,
    pub samples_drawn: u64,
    pub iterations: u64,
    pub collision_cache_hits: u64,
    pub pruned: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub elapsed_s: f64,
    pub iteration: u64,
    /// Incumbent cost; `+∞` before the first solution.
    #[serde(with = "crate::run::finite_or_null")]
    pub cost: f64,
    pub edge_evals: u64,
}

/// Snapshot handed to progress callbacks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Progress {
    pub elapsed_s: f64,
    pub cost: f64,
    pub counters: Counters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    /// Budget exhausted with a solution.
    Solved,
    /// Stopped because the incumbent reached the target cost.
    TargetReached,
    /// Budget exhausted without a solution.
    Timeout,
    /// No valid state could be sampled.
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct PlanResult<T: Real> {
    pub status: PlanStatus,
    pub best_cost: Cost<T>,
    /// Start first, a goal-region state last; empty without a solution.
    pub path: Vec<State<T>>,
    /// Sample ids along `path`.
    pub path_ids: Vec<usize>,
    /// Incumbent improvements, then one closing event at termination.
    pub trace: Vec<TraceEvent>,
    pub counters: Counters,
}

impl<T: Real> PlanResult<T> {
    pub fn solved(&self) -> bool {
        self.best_cost.is_finite()
    }
}

/// Stop conditions common to all planners.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub time_budget: f64,
    pub target_cost: Option<f64>,
    pub max_iterations: Option<u64>,
    pub clock: ClockMode,
}

pub(crate) struct RunClock {
    mode: ClockMode,
    started: Instant,
}

impl RunClock {
    pub fn start(mode: ClockMode) -> Self {
        RunClock { mode, started: Instant::now() }
    }

    pub fn elapsed(&self, c: &Counters) -> f64 {
        match self.mode {
            ClockMode::Wall => self.started.elapsed().as_secs_f64(),
            ClockMode::Virtual { tick_s } => c.state_checks as f64 * tick_s,
        }
    }
}

/// Trace recorder plus stop-condition bookkeeping.
pub(crate) struct Recorder<'a> {
    pub limits: Limits,
    pub clock: RunClock,
    pub trace: Vec<TraceEvent>,
    pub progress: Option<Box<dyn FnMut(&Progress) + 'a>>,
}

impl<'a> Recorder<'a> {
    pub fn new(limits: Limits, progress: Option<Box<dyn FnMut(&Progress) + 'a>>) -> Self {
        Recorder { limits, clock: RunClock::start(limits.clock), trace: Vec::new(), progress }
    }

    pub fn record(&mut self, cost: f64, c: &Counters) {
        let elapsed_s = self.clock.elapsed(c);
        self.trace.push(TraceEvent { elapsed_s, iteration: c.iterations, cost, edge_evals: c.edge_evals });
        if let Some(cb) = self.progress.as_mut() {
            cb(&Progress { elapsed_s, cost, counters: *c });
        }
    }

    pub fn out_of_time(&self, c: &Counters) -> bool {
        self.clock.elapsed(c) >= self.limits.time_budget
    }

    pub fn out_of_iterations(&self, c: &Counters) -> bool {
        self.limits.max_iterations.is_some_and(|m| c.iterations >= m)
    }

    pub fn target_reached(&self, cost: f64) -> bool {
        self.limits.target_cost.is_some_and(|t| cost <= t)
    }

    pub fn status(&self, cost: f64) -> PlanStatus {
        if self.target_reached(cost) {
            PlanStatus::TargetReached
        } else if cost.is_finite() {
            PlanStatus::Solved
        } else {
            PlanStatus::Timeout
        }
    }
}

/// Serializes non-finite floats as `null` and reads `null` back as `+∞`.
pub mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
