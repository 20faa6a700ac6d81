//! Sampling-based motion planning in SE(2) and SE(3): a batch planner that
//! samples relevant regions around a lazily built reverse-search heuristic,
//! three RRT-family baselines, and a GNAT nearest-neighbor index.
//!
//! Everything is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod baselines;
pub mod gnat;
pub mod graph;
pub mod planner;
pub mod run;
pub mod scalar;
pub mod statespace;
pub mod world;

pub use baselines::{BaselineConfig, BaselineKind, BaselinePlanner};
pub use planner::{PlannerConfig, PlannerError, RelRegionPlanner};
pub use run::{ClockMode, Counters, PlanResult, PlanStatus, TraceEvent};
pub use scalar::Real;

pub type State = statespace::State<f64>;
pub type SpaceDef = statespace::SpaceDef<f64>;
pub type Cost = statespace::Cost<f64>;
pub type Scenario = world::Scenario<f64>;
pub type PlanResult64 = run::PlanResult<f64>;
pub type State32 = statespace::State<f32>;
pub type Scenario32 = world::Scenario<f32>;
