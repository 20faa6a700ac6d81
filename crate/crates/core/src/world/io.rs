//! JSON scenario documents (`"format": 1`).
//!
//! ```json
//! {
//!   "format": 1,
//!   "name": "maze",
//!   "space": { "type": "SE2", "bounds": [[0, 10], [0, 10]], "w_t": 1, "w_r": 1 },
//!   "robot": { "kind": "disc", "params": { "radius": 0.1 } },
//!   "obstacles": [
//!     { "kind": "box", "data": { "min": [2, 0], "max": [2.2, 8] } },
//!     { "kind": "polygon", "data": [[5, 5], [6, 5], [5.5, 6]] }
//!   ],
//!   "start": { "translation": [1, 1], "angle": 0 },
//!   "goal": { "center": { "translation": [9, 9], "angle": 0 }, "radius": 0.2 }
//! }
//! ```
//!
//! SE(3) states use `"quaternion": [w, x, y, z]` instead of `"angle"`;
//! quaternions are normalized on load. An optional `"resolution"` sets the
//! motion-check step as a fraction of the space diagonal.

use serde::{Deserialize, Serialize};

use super::geometry::{Aabb, ConvexPolygon};
use super::scenario::{Obstacle, RobotShape, Scenario};
use super::WorldError;
use crate::scalar::Real;
use crate::statespace::{Quaternion, Rotation, SpaceDef, SpaceKind, State};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    format: u32,
    name: String,
    space: SpaceDoc,
    robot: RobotDoc,
    #[serde(default)]
    obstacles: Vec<ObstacleDoc>,
    start: StateDoc,
    goal: GoalDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resolution: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    #[serde(rename = "type")]
    kind: SpaceKind,
    bounds: Vec<[f64; 2]>,
    #[serde(default = "one")]
    w_t: f64,
    #[serde(default = "one")]
    w_r: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
enum RobotDoc {
    Point,
    Disc { radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Box { half_extents: [f64; 3] },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
enum ObstacleDoc {
    Polygon(Vec<[f64; 2]>),
    Box { min: Vec<f64>, max: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    translation: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quaternion: Option<[f64; 4]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GoalDoc {
    center: StateDoc,
    radius: f64,
}

fn invalid(msg: impl Into<String>) -> WorldError {
    WorldError::InvalidScenario(msg.into())
}

fn lit<T: Real>(v: f64) -> T {
    T::lit(v)
}

fn state_from_doc<T: Real>(doc: &StateDoc, kind: SpaceKind, label: &str) -> Result<State<T>, WorldError> {
    let dim = kind.translation_dim();
    if doc.translation.len() != dim {
        return Err(invalid(format!("{label}: expected {dim} translation components")));
    }
    let mut t = [T::zero(); 3];
    for (i, v) in doc.translation.iter().enumerate() {
        t[i] = lit(*v);
    }
    match (kind, doc.angle, doc.quaternion) {
        (SpaceKind::Se2, Some(a), None) => Ok(State::se2(t[0], t[1], lit(a))),
        (SpaceKind::Se3, None, Some(q)) => {
            let q = Quaternion::from_wxyz([lit(q[0]), lit(q[1]), lit(q[2]), lit(q[3])])
                .ok_or_else(|| invalid(format!("{label}: quaternion has zero norm")))?;
            Ok(State::se3(t, q))
        }
        (SpaceKind::Se2, _, _) => Err(invalid(format!("{label}: SE2 states need exactly an `angle`"))),
        (SpaceKind::Se3, _, _) => Err(invalid(format!("{label}: SE3 states need exactly a `quaternion`"))),
    }
}

fn state_to_doc<T: Real>(s: &State<T>, kind: SpaceKind) -> StateDoc {
    let translation = s.translation[..kind.translation_dim()].iter().map(|v| v.to_f64_lossy()).collect();
    match s.rotation {
        Rotation::Planar(a) => StateDoc { translation, angle: Some(a.to_f64_lossy()), quaternion: None },
        Rotation::Spatial(q) => StateDoc {
            translation,
            angle: None,
            quaternion: Some(q.to_wxyz().map(|v| v.to_f64_lossy())),
        },
    }
}

/// A state in scenario-file form (`translation` plus `angle` or `quaternion`).
pub fn state_to_json<T: Real>(s: &State<T>, kind: SpaceKind) -> serde_json::Value {
    serde_json::to_value(state_to_doc(s, kind)).expect("state document serializes")
}

fn polygon<T: Real>(vertices: &[[f64; 2]], label: &str) -> Result<ConvexPolygon<T>, WorldError> {
    ConvexPolygon::new(vertices.iter().map(|v| [lit(v[0]), lit(v[1])]).collect())
        .ok_or_else(|| invalid(format!("{label}: polygon must be strictly convex and counter-clockwise")))
}

/// Parses and validates a scenario document.
pub fn load_scenario<T: Real>(text: &str) -> Result<Scenario<T>, WorldError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| WorldError::Parse {
        line: e.line(),
        reason: e.to_string(),
    })?;
    if doc.format != FORMAT_VERSION {
        return Err(invalid(format!("unsupported format version {}", doc.format)));
    }
    let kind = doc.space.kind;
    let bounds: Vec<[T; 2]> = doc.space.bounds.iter().map(|b| [lit(b[0]), lit(b[1])]).collect();
    let space = SpaceDef::new(kind, &bounds, lit(doc.space.w_t), lit(doc.space.w_r)).map_err(|e| invalid(e.to_string()))?;
    let robot = match &doc.robot {
        RobotDoc::Point => RobotShape::Point,
        RobotDoc::Disc { radius } => RobotShape::Disc { radius: lit(*radius) },
        RobotDoc::Polygon { vertices } => RobotShape::Polygon(polygon(vertices, "robot")?),
        RobotDoc::Box { half_extents } => RobotShape::Box { half_extents: half_extents.map(lit) },
    };
    let mut obstacles = Vec::with_capacity(doc.obstacles.len());
    for (i, o) in doc.obstacles.iter().enumerate() {
        let label = format!("obstacle {i}");
        obstacles.push(match o {
            ObstacleDoc::Polygon(v) => Obstacle::Polygon(polygon(v, &label)?),
            ObstacleDoc::Box { min, max } => match (min.len(), max.len()) {
                (2, 2) => {
                    if !(min[0] < max[0] && min[1] < max[1]) {
                        return Err(invalid(format!("{label}: box needs min < max")));
                    }
                    Obstacle::Box2 { min: [lit(min[0]), lit(min[1])], max: [lit(max[0]), lit(max[1])] }
                }
                (3, 3) => Obstacle::Box3(
                    Aabb::new([lit(min[0]), lit(min[1]), lit(min[2])], [lit(max[0]), lit(max[1]), lit(max[2])])
                        .ok_or_else(|| invalid(format!("{label}: box needs min < max")))?,
                ),
                _ => return Err(invalid(format!("{label}: box corners need 2 or 3 matching components"))),
            },
        });
    }
    let start = state_from_doc(&doc.start, kind, "start")?;
    let goal_center = state_from_doc(&doc.goal.center, kind, "goal center")?;
    Scenario::new(
        doc.name,
        space,
        obstacles,
        robot,
        start,
        goal_center,
        lit(doc.goal.radius),
        doc.resolution.map(lit),
    )
}

/// Serializes a scenario as a pretty-printed document.
pub fn save_scenario<T: Real>(sc: &Scenario<T>) -> String {
    let kind = sc.space.kind();
    let f = |v: T| v.to_f64_lossy();
    let doc = ScenarioDoc {
        format: FORMAT_VERSION,
        name: sc.name.clone(),
        space: SpaceDoc {
            kind,
            bounds: sc.space.bounds().into_iter().map(|b| [f(b[0]), f(b[1])]).collect(),
            w_t: f(sc.space.w_t()),
            w_r: f(sc.space.w_r()),
        },
        robot: match &sc.robot {
            RobotShape::Point => RobotDoc::Point,
            RobotShape::Disc { radius } => RobotDoc::Disc { radius: f(*radius) },
            RobotShape::Polygon(p) => RobotDoc::Polygon { vertices: p.vertices().iter().map(|v| [f(v[0]), f(v[1])]).collect() },
            RobotShape::Box { half_extents } => RobotDoc::Box { half_extents: half_extents.map(f) },
        },
        obstacles: sc
            .obstacles
            .iter()
            .map(|o| match o {
                Obstacle::Polygon(p) => ObstacleDoc::Polygon(p.vertices().iter().map(|v| [f(v[0]), f(v[1])]).collect()),
                Obstacle::Box2 { min, max } => ObstacleDoc::Box { min: min.map(f).to_vec(), max: max.map(f).to_vec() },
                Obstacle::Box3(b) => ObstacleDoc::Box { min: b.min.map(f).to_vec(), max: b.max.map(f).to_vec() },
            })
            .collect(),
        start: state_to_doc(&sc.start, kind),
        goal: GoalDoc { center: state_to_doc(&sc.goal_center, kind), radius: f(sc.goal_radius) },
        resolution: Some(f(sc.resolution)),
    };
    serde_json::to_string_pretty(&doc).expect("scenario documents always serialize")
}
