use serde::{Deserialize, Serialize};

use super::cost::Cost;
use super::state::{wrap_angle, Rotation, State};
use super::StateSpaceError;
use crate::scalar::vec3;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    #[serde(rename = "SE2")]
    Se2,
    #[serde(rename = "SE3")]
    Se3,
}

impl SpaceKind {
    /// Number of translational axes.
    pub fn translation_dim(self) -> usize {
        match self {
            SpaceKind::Se2 => 2,
            SpaceKind::Se3 => 3,
        }
    }

    /// Degrees of freedom of the full configuration space.
    pub fn dof(self) -> usize {
        match self {
            SpaceKind::Se2 => 3,
            SpaceKind::Se3 => 6,
        }
    }
}

/// Bounded SE(2)/SE(3) configuration space with the weighted compound metric
/// `w_t·‖Δt‖ + w_r·ρ(Δr)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceDef<T> {
    kind: SpaceKind,
    lo: [T; 3],
    hi: [T; 3],
    w_t: T,
    w_r: T,
}

impl<T: Real> SpaceDef<T> {
    pub fn new(kind: SpaceKind, bounds: &[[T; 2]], w_t: T, w_r: T) -> Result<Self, StateSpaceError> {
        let dim = kind.translation_dim();
        if bounds.len() != dim {
            return Err(StateSpaceError::InvalidSpace(format!(
                "expected {dim} translation bounds, got {}",
                bounds.len()
            )));
        }
        let mut lo = [T::zero(); 3];
        let mut hi = [T::zero(); 3];
        for (axis, b) in bounds.iter().enumerate() {
            if !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1]) {
                return Err(StateSpaceError::InvalidSpace(format!(
                    "axis {axis}: bounds must satisfy lo < hi"
                )));
            }
            lo[axis] = b[0];
            hi[axis] = b[1];
        }
        if !(w_t.is_finite() && w_t > T::zero()) {
            return Err(StateSpaceError::InvalidSpace("w_t must be positive".into()));
        }
        if !(w_r.is_finite() && w_r >= T::zero()) {
            return Err(StateSpaceError::InvalidSpace("w_r must be nonnegative".into()));
        }
        Ok(SpaceDef { kind, lo, hi, w_t, w_r })
    }

    /// SE(2) space with unit weights.
    pub fn se2(x: [T; 2], y: [T; 2]) -> Result<Self, StateSpaceError> {
        Self::new(SpaceKind::Se2, &[x, y], T::one(), T::one())
    }

    pub fn se3(x: [T; 2], y: [T; 2], z: [T; 2]) -> Result<Self, StateSpaceError> {
        Self::new(SpaceKind::Se3, &[x, y, z], T::one(), T::one())
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn w_t(&self) -> T {
        self.w_t
    }

    pub fn w_r(&self) -> T {
        self.w_r
    }

    pub fn bounds(&self) -> Vec<[T; 2]> {
        (0..self.kind.translation_dim()).map(|i| [self.lo[i], self.hi[i]]).collect()
    }

    pub(crate) fn lo(&self) -> [T; 3] {
        self.lo
    }

    pub(crate) fn hi(&self) -> [T; 3] {
        self.hi
    }

    /// Volume of the translational box.
    pub fn box_volume(&self) -> T {
        (0..self.kind.translation_dim()).fold(T::one(), |acc, i| acc * (self.hi[i] - self.lo[i]))
    }

    /// Largest possible distance between two states.
    pub fn diagonal(&self) -> T {
        self.w_t * vec3::norm(vec3::sub(self.hi, self.lo)) + self.w_r * T::PI()
    }

    pub fn contains(&self, x: &State<T>) -> bool {
        (0..self.kind.translation_dim()).all(|i| x.translation[i] >= self.lo[i] && x.translation[i] <= self.hi[i])
    }

    /// Checks that the rotation variant matches the space and quaternions are unit.
    pub fn check_state(&self, x: &State<T>) -> Result<(), StateSpaceError> {
        if !x.translation.iter().all(|v| v.is_finite()) {
            return Err(StateSpaceError::InvalidState("non-finite translation".into()));
        }
        match (self.kind, x.rotation) {
            (SpaceKind::Se2, Rotation::Planar(a)) => {
                if x.translation[2] != T::zero() {
                    return Err(StateSpaceError::InvalidState("SE(2) state with nonzero z".into()));
                }
                if !(a > -T::PI() && a <= T::PI()) {
                    return Err(StateSpaceError::InvalidState("angle outside (-π, π]".into()));
                }
                Ok(())
            }
            (SpaceKind::Se3, Rotation::Spatial(q)) => {
                let tol = T::lit(1e-9).max(T::epsilon() * T::lit(16.0));
                if (q.norm() - T::one()).abs() > tol {
                    return Err(StateSpaceError::InvalidState("quaternion is not unit".into()));
                }
                Ok(())
            }
            _ => Err(StateSpaceError::InvalidState("rotation type does not match space".into())),
        }
    }

    /// Rotational distance in `[0, π]`.
    pub fn rotation_distance(&self, a: &State<T>, b: &State<T>) -> T {
        match (a.rotation, b.rotation) {
            (Rotation::Planar(x), Rotation::Planar(y)) => wrap_angle(y - x).abs(),
            (Rotation::Spatial(p), Rotation::Spatial(q)) => p.angle_to(q),
            _ => panic!("mixed SE(2)/SE(3) states"),
        }
    }

    pub fn translation_distance(&self, a: &State<T>, b: &State<T>) -> T {
        vec3::norm(vec3::sub(b.translation, a.translation))
    }

    /// Raw-scalar form of [`SpaceDef::distance`]. Bitwise symmetric in its
    /// arguments.
    #[inline]
    pub fn dist(&self, a: &State<T>, b: &State<T>) -> T {
        let (a, b) = if b.lex_less(a) { (b, a) } else { (a, b) };
        let t = self.w_t * self.translation_distance(a, b);
        if self.w_r == T::zero() {
            t
        } else {
            t + self.w_r * self.rotation_distance(a, b)
        }
    }

    pub fn distance(&self, a: &State<T>, b: &State<T>) -> Cost<T> {
        Cost::new(self.dist(a, b))
    }

    /// Geodesic interpolation: linear translation, shortest-arc rotation.
    pub fn interpolate(&self, a: &State<T>, b: &State<T>, u: T) -> State<T> {
        if u <= T::zero() {
            return *a;
        }
        if u >= T::one() {
            return *b;
        }
        let translation = vec3::lerp(a.translation, b.translation, u);
        let rotation = match (a.rotation, b.rotation) {
            (Rotation::Planar(x), Rotation::Planar(y)) => Rotation::Planar(wrap_angle(x + u * wrap_angle(y - x))),
            (Rotation::Spatial(p), Rotation::Spatial(q)) => Rotation::Spatial(p.slerp(q, u)),
            _ => panic!("mixed SE(2)/SE(3) states"),
        };
        State { translation, rotation }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::Quaternion;
    use std::f64::consts::PI;

    fn se2() -> SpaceDef<f64> {
        SpaceDef::se2([-10.0, 10.0], [-10.0, 10.0]).unwrap()
    }

    #[test]
    fn planar_euclidean() {
        let s = se2();
        let d = s.distance(&State::se2(0.0, 0.0, 0.0), &State::se2(3.0, 4.0, 0.0));
        assert_eq!(d.value(), 5.0);
    }

    #[test]
    fn pure_rotation() {
        let s = se2();
        let d = s.distance(&State::se2(0.0, 0.0, 0.0), &State::se2(0.0, 0.0, PI));
        assert_eq!(d.value(), PI);
    }

    #[test]
    fn se3_identity_is_zero() {
        let s = SpaceDef::se3([0.0, 1.0], [0.0, 1.0], [0.0, 1.0]).unwrap();
        let q = Quaternion::from_wxyz([0.3, -0.2, 0.5, 0.1]).unwrap();
        let a = State::se3([0.2, 0.4, 0.6], q);
        assert_eq!(s.dist(&a, &a), 0.0);
        let neg = State::se3([0.2, 0.4, 0.6], q.neg());
        assert!(s.dist(&a, &neg) < 1e-12);
    }

    #[test]
    fn midpoint_and_endpoints() {
        let s = se2();
        let a = State::se2(0.0, 0.0, 0.0);
        let b = State::se2(2.0, 0.0, 0.0);
        assert_eq!(s.interpolate(&a, &b, 0.5), State::se2(1.0, 0.0, 0.0));
        assert_eq!(s.interpolate(&a, &b, 0.0), a);
        assert_eq!(s.interpolate(&a, &b, 1.0), b);
    }

    #[test]
    fn interpolation_wraps_through_pi() {
        let s = se2();
        let a = State::se2(0.0, 0.0, 3.0);
        let b = State::se2(0.0, 0.0, -3.0);
        let m = s.interpolate(&a, &b, 0.5);
        let theta = m.angle().unwrap();
        assert!((theta.abs() - PI).abs() < 1e-12, "{theta}");
        // additivity pins the shortest arc: the long way round would be 2π - 6 + ...
        let total = s.dist(&a, &b);
        assert!((s.dist(&a, &m) + s.dist(&m, &b) - total).abs() < 1e-12);
        assert!((total - (2.0 * PI - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn diagonal_formula() {
        let s = SpaceDef::new(SpaceKind::Se2, &[[0.0, 3.0], [0.0, 4.0]], 2.0, 0.5).unwrap();
        assert!((s.diagonal() - (10.0 + 0.5 * PI)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_definitions() {
        assert!(SpaceDef::<f64>::new(SpaceKind::Se2, &[[1.0, 1.0], [0.0, 1.0]], 1.0, 1.0).is_err());
        assert!(SpaceDef::<f64>::new(SpaceKind::Se2, &[[0.0, 1.0], [0.0, 1.0]], 0.0, 1.0).is_err());
        assert!(SpaceDef::<f64>::new(SpaceKind::Se3, &[[0.0, 1.0], [0.0, 1.0]], 1.0, 1.0).is_err());
        assert!(SpaceDef::<f64>::new(SpaceKind::Se2, &[[0.0, 1.0], [0.0, 1.0]], 1.0, -1.0).is_err());
    }
}
