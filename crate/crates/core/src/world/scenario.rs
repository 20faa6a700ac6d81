use rand::Rng;

use super::geometry::{
    disc_hits_polygon, obb_hits_aabb, polygons_intersect, sphere_hits_aabb, Aabb, ConvexPolygon, Obb,
};
use super::WorldError;
use crate::scalar::vec3;
use crate::scalar::Real;
use crate::statespace::{sample_quaternion, unit, wrap_angle, Cost, Quaternion, Rotation, SpaceDef, SpaceKind, State};

/// Default motion-check resolution as a fraction of the space diagonal.
pub const DEFAULT_RESOLUTION: f64 = 0.01;

const GOAL_SAMPLE_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub enum Obstacle<T> {
    /// Convex CCW polygon (SE(2) only).
    Polygon(ConvexPolygon<T>),
    /// Axis-aligned rectangle (SE(2) only).
    Box2 { min: [T; 2], max: [T; 2] },
    /// Axis-aligned box (SE(3) only).
    Box3(Aabb<T>),
}

impl<T: Real> Obstacle<T> {
    fn fits(&self, kind: SpaceKind) -> bool {
        matches!(
            (self, kind),
            (Obstacle::Polygon(_) | Obstacle::Box2 { .. }, SpaceKind::Se2) | (Obstacle::Box3(_), SpaceKind::Se3)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RobotShape<T> {
    Point,
    /// Disc in SE(2), sphere in SE(3).
    Disc { radius: T },
    /// Footprint polygon in the body frame (SE(2) only).
    Polygon(ConvexPolygon<T>),
    /// Box with the given half extents in the body frame (SE(3) only).
    Box { half_extents: [T; 3] },
}

impl<T: Real> RobotShape<T> {
    fn check(&self, kind: SpaceKind) -> Result<(), WorldError> {
        match (self, kind) {
            (RobotShape::Point, _) => Ok(()),
            (RobotShape::Disc { radius }, _) if *radius > T::zero() && radius.is_finite() => Ok(()),
            (RobotShape::Disc { .. }, _) => Err(WorldError::InvalidScenario("disc radius must be positive".into())),
            (RobotShape::Polygon(_), SpaceKind::Se2) => Ok(()),
            (RobotShape::Box { half_extents }, SpaceKind::Se3) => {
                if half_extents.iter().all(|h| *h > T::zero() && h.is_finite()) {
                    Ok(())
                } else {
                    Err(WorldError::InvalidScenario("box half extents must be positive".into()))
                }
            }
            _ => Err(WorldError::InvalidScenario("robot shape does not match the space".into())),
        }
    }
}

/// Per-check bookkeeping for motion validation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MotionStats {
    pub motions: u64,
    pub states: u64,
}

/// Obstacles in the form the collision routines consume.
#[derive(Clone, Debug)]
enum Prepared<T> {
    Polygon(ConvexPolygon<T>),
    Box3(Aabb<T>),
}

/// A planning problem: space, obstacles, robot body, start and goal region.
#[derive(Clone, Debug)]
pub struct Scenario<T> {
    pub name: String,
    pub space: SpaceDef<T>,
    pub obstacles: Vec<Obstacle<T>>,
    pub robot: RobotShape<T>,
    pub start: State<T>,
    pub goal_center: State<T>,
    pub goal_radius: T,
    /// Motion-check resolution as a fraction of `space.diagonal()`.
    pub resolution: T,
    prepared: Vec<Prepared<T>>,
}

impl<T: Real> Scenario<T> {
    /// Builds and validates a scenario. The start and goal center are
    /// normalized (angle wrap, unit quaternion) first.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        space: SpaceDef<T>,
        obstacles: Vec<Obstacle<T>>,
        robot: RobotShape<T>,
        start: State<T>,
        goal_center: State<T>,
        goal_radius: T,
        resolution: Option<T>,
    ) -> Result<Self, WorldError> {
        robot.check(space.kind())?;
        let mut prepared = Vec::with_capacity(obstacles.len());
        for (i, o) in obstacles.iter().enumerate() {
            if !o.fits(space.kind()) {
                return Err(WorldError::InvalidScenario(format!("obstacle {i} does not match the space")));
            }
            prepared.push(match o {
                Obstacle::Polygon(p) => Prepared::Polygon(p.clone()),
                Obstacle::Box2 { min, max } => Prepared::Polygon(
                    ConvexPolygon::rectangle(*min, *max)
                        .ok_or_else(|| WorldError::InvalidScenario(format!("obstacle {i}: box needs min < max")))?,
                ),
                Obstacle::Box3(b) => Prepared::Box3(*b),
            });
        }
        if !(goal_radius >= T::zero() && goal_radius.is_finite()) {
            return Err(WorldError::InvalidScenario("goal radius must be a nonnegative number".into()));
        }
        let resolution = resolution.unwrap_or_else(|| T::lit(DEFAULT_RESOLUTION));
        if !(resolution > T::zero() && resolution <= T::one()) {
            return Err(WorldError::InvalidScenario("resolution must lie in (0, 1]".into()));
        }
        let start = normalize(start);
        let goal_center = normalize(goal_center);
        for (label, s) in [("start", &start), ("goal center", &goal_center)] {
            space
                .check_state(s)
                .map_err(|e| WorldError::InvalidScenario(format!("{label}: {e}")))?;
        }
        let sc = Scenario { name: name.into(), space, obstacles, robot, start, goal_center, goal_radius, resolution, prepared };
        if !sc.is_state_valid(&sc.start) {
            return Err(WorldError::InvalidScenario("start state is in collision or out of bounds".into()));
        }
        if !sc.is_state_valid(&sc.goal_center) && !sc.goal_region_has_valid_state() {
            return Err(WorldError::InvalidScenario("goal region contains no valid state".into()));
        }
        Ok(sc)
    }

    fn goal_region_has_valid_state(&self) -> bool {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e37_79b9);
        (0..GOAL_SAMPLE_ATTEMPTS).any(|_| {
            let x = self.sample_goal(&mut rng);
            self.is_state_valid(&x)
        })
    }

    /// True iff the robot placed at `x` is inside the bounds and touches no obstacle.
    pub fn is_state_valid(&self, x: &State<T>) -> bool {
        if !self.space.contains(x) {
            return false;
        }
        let t = x.translation;
        match (&self.robot, x.rotation) {
            (RobotShape::Point, Rotation::Planar(_)) => self.prepared.iter().all(|o| match o {
                Prepared::Polygon(p) => !disc_hits_polygon([t[0], t[1]], T::zero(), p),
                Prepared::Box3(_) => true,
            }),
            (RobotShape::Disc { radius }, Rotation::Planar(_)) => self.prepared.iter().all(|o| match o {
                Prepared::Polygon(p) => !disc_hits_polygon([t[0], t[1]], *radius, p),
                Prepared::Box3(_) => true,
            }),
            (RobotShape::Polygon(footprint), Rotation::Planar(theta)) => {
                let placed = footprint.transformed(t[0], t[1], theta);
                self.prepared.iter().all(|o| match o {
                    Prepared::Polygon(p) => !polygons_intersect(&placed, p),
                    Prepared::Box3(_) => true,
                })
            }
            (RobotShape::Point, Rotation::Spatial(_)) => self.prepared.iter().all(|o| match o {
                Prepared::Box3(b) => !sphere_hits_aabb(t, T::zero(), b),
                Prepared::Polygon(_) => true,
            }),
            (RobotShape::Disc { radius }, Rotation::Spatial(_)) => self.prepared.iter().all(|o| match o {
                Prepared::Box3(b) => !sphere_hits_aabb(t, *radius, b),
                Prepared::Polygon(_) => true,
            }),
            (RobotShape::Box { half_extents }, Rotation::Spatial(q)) => {
                let obb = Obb { center: t, axes: q.axes(), half: *half_extents };
                self.prepared.iter().all(|o| match o {
                    Prepared::Box3(b) => !obb_hits_aabb(&obb, b),
                    Prepared::Polygon(_) => true,
                })
            }
            _ => false,
        }
    }

    /// Number of subdivisions used for a motion of length `d`: the smallest
    /// power of two keeping consecutive checks within `resolution · diagonal`.
    fn subdivisions(&self, d: T) -> u64 {
        let step = self.resolution * self.space.diagonal();
        let ratio = (d / step).to_f64_lossy();
        let mut n = 1u64;
        while (n as f64) < ratio && n < (1 << 40) {
            n <<= 1;
        }
        n
    }

    /// Discretized edge check. Endpoints are included, and the checked set
    /// is independent of the argument order.
    pub fn check_motion(&self, a: &State<T>, b: &State<T>, stats: &mut MotionStats) -> bool {
        stats.motions += 1;
        let (a, b) = if b.lex_less(a) { (b, a) } else { (a, b) };
        stats.states += 1;
        if !self.is_state_valid(a) {
            return false;
        }
        if a == b {
            return true;
        }
        stats.states += 1;
        if !self.is_state_valid(b) {
            return false;
        }
        let n = self.subdivisions(self.space.dist(a, b));
        let inv = T::one() / T::from_u64(n).expect("subdivision count fits");
        // coarse-to-fine order finds blocked motions early; the set is every i/n
        let mut stride = n;
        while stride > 1 {
            let half = stride / 2;
            let mut i = half;
            while i < n {
                let u = T::from_u64(i).expect("index fits") * inv;
                stats.states += 1;
                if !self.is_state_valid(&self.space.interpolate(a, b, u)) {
                    return false;
                }
                i += stride;
            }
            stride = half;
        }
        true
    }

    pub fn is_motion_valid(&self, a: &State<T>, b: &State<T>) -> bool {
        self.check_motion(a, b, &mut MotionStats::default())
    }

    /// Distance from `x` to the goal center.
    pub fn goal_distance(&self, x: &State<T>) -> Cost<T> {
        self.space.distance(x, &self.goal_center)
    }

    pub fn in_goal(&self, x: &State<T>) -> bool {
        self.space.dist(x, &self.goal_center) <= self.goal_radius
    }

    /// Admissible lower bound on the cost of reaching the goal region from `x`.
    pub fn cost_to_goal_lower_bound(&self, x: &State<T>) -> T {
        (self.space.dist(x, &self.goal_center) - self.goal_radius).max(T::zero())
    }

    /// Draws a state within `goal_radius` of the goal center (metric ball).
    /// Validity is not checked.
    pub fn sample_goal<R: Rng + ?Sized>(&self, rng: &mut R) -> State<T> {
        let r = self.goal_radius;
        if r <= T::zero() {
            return self.goal_center;
        }
        let dim = self.space.kind().translation_dim();
        let w_t = self.space.w_t();
        let w_r = self.space.w_r();
        let t_radius = r / w_t;
        let pi = T::PI();
        for _ in 0..GOAL_SAMPLE_ATTEMPTS {
            // translation offset uniform in the ball of radius r / w_t
            let mut off = [T::zero(); 3];
            loop {
                let mut n2 = T::zero();
                for v in off.iter_mut().take(dim) {
                    *v = T::lit(2.0) * unit::<T, R>(rng) - T::one();
                    n2 = n2 + *v * *v;
                }
                if n2 <= T::one() {
                    break;
                }
            }
            let translation = vec3::add(self.goal_center.translation, vec3::scale(off, t_radius));
            let max_angle = if w_r > T::zero() { (r / w_r).min(pi) } else { pi };
            let rotation = match self.goal_center.rotation {
                Rotation::Planar(a) => {
                    Rotation::Planar(wrap_angle(a + max_angle * (T::lit(2.0) * unit::<T, R>(rng) - T::one())))
                }
                Rotation::Spatial(q) => {
                    let axis = sample_quaternion::<T, R>(rng).rotate([T::one(), T::zero(), T::zero()]);
                    let angle = max_angle * unit::<T, R>(rng);
                    let q = q.mul(Quaternion::from_axis_angle(axis, angle));
                    Rotation::Spatial(q.normalized().unwrap_or(q))
                }
            };
            let x = State { translation, rotation };
            if self.space.dist(&x, &self.goal_center) <= r {
                return x;
            }
        }
        self.goal_center
    }
}

fn normalize<T: Real>(s: State<T>) -> State<T> {
    match s.rotation {
        Rotation::Planar(a) => State { translation: s.translation, rotation: Rotation::Planar(wrap_angle(a)) },
        Rotation::Spatial(q) => State {
            translation: s.translation,
            rotation: Rotation::Spatial(crate::statespace::Quaternion::from_wxyz(q.to_wxyz()).unwrap_or(q)),
        },
    }
}
