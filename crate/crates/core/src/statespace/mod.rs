//! SE(2)/SE(3) states, the compound cost metric, interpolation and samplers.

mod cost;
mod sampling;
mod space;
mod state;

use thiserror::Error;

pub use cost::Cost;
pub use sampling::{
    sample_angle, sample_informed, sample_informed_bounded, sample_quaternion, sample_rotation, sample_uniform,
    ProlateSpheroid,
};
pub(crate) use sampling::unit;
pub use space::{SpaceDef, SpaceKind};
pub use state::{wrap_angle, Quaternion, Rotation, State};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateSpaceError {
    #[error("invalid space definition: {0}")]
    InvalidSpace(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("cost bound is below the start-goal distance; informed set is empty")]
    EmptyInformedSet,
}
