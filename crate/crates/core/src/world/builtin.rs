//! Scenario corpus shipped with the crate.

use super::io::load_scenario;
use super::scenario::Scenario;
use super::WorldError;
use crate::scalar::Real;

const SOURCES: &[(&str, &str)] = &[
    ("empty_se2", include_str!("../../../../scenarios/empty_se2.json")),
    ("wall_infeasible", include_str!("../../../../scenarios/wall_infeasible.json")),
    ("maze_se2", include_str!("../../../../scenarios/maze_se2.json")),
    ("bugtrap_se2", include_str!("../../../../scenarios/bugtrap_se2.json")),
    ("random_polygons_se2", include_str!("../../../../scenarios/random_polygons_se2.json")),
    ("narrow_passage_se3", include_str!("../../../../scenarios/narrow_passage_se3.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

/// Returns the raw document of a bundled scenario.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin_scenario<T: Real>(name: &str) -> Result<Scenario<T>, WorldError> {
    let text = builtin_source(name).ok_or_else(|| WorldError::InvalidScenario(format!("unknown scenario `{name}`")))?;
    load_scenario(text)
}
