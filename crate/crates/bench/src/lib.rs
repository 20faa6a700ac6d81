//! Benchmark protocol for the planners in `relregion-core`: repeated seeded
//! runs per scenario and planner, time-to-target and cost-over-time
//! statistics, and CSV/JSON/SVG reports.

pub mod config;
pub mod emit;
pub mod registry;
pub mod report;
pub mod run;
pub mod stats;

use std::path::{Path, PathBuf};

use relregion_core::world::WorldError;
use relregion_core::PlannerError;

pub use config::{BenchConfig, COptSource, PlannerEntry, Profile, TargetRule};
pub use emit::{emit, Format, ALL_FORMATS, CSV_HEADER};
pub use registry::{run_planner, RunLimits, PLANNERS};
pub use report::{BenchReport, RunRecord, ScenarioInfo};
pub use run::{calibrate_c_opt, load_scenario_file, run_benchmark};
pub use stats::{aggregate, Aggregates};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Scenario { path: PathBuf, source: WorldError },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown planner `{0}`")]
    UnknownPlanner(String),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("calibration found no solution on `{0}`")]
    CalibrationFailed(String),
    #[error("csv: {0}")]
    Csv(String),
}

impl BenchError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        BenchError::Io { path: path.to_path_buf(), source }
    }
}
