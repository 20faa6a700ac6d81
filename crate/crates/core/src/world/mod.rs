//! Obstacles, robot bodies, validity checking and scenario files.

pub mod builtin;
pub mod geometry;
pub mod io;
pub mod scenario;

pub use builtin::{builtin_names, builtin_scenario, builtin_source};
pub use geometry::{Aabb, ConvexPolygon, Obb};
pub use io::{load_scenario, save_scenario, state_to_json};
pub use scenario::{MotionStats, Obstacle, RobotShape, Scenario, DEFAULT_RESOLUTION};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorldError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}
