use crate::scalar::vec3::{self, Vec3};
use crate::scalar::Real;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    if x > -pi && x <= pi {
        return x;
    }
    let mut r = x - two_pi * ((x + pi) / two_pi).floor();
    // r is now in [-π, π) up to rounding
    if r <= -pi {
        r = r + two_pi;
    }
    if r > pi {
        r = r - two_pi;
    }
    r
}

/// Unit quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub fn identity() -> Self {
        Quaternion { w: T::one(), x: T::zero(), y: T::zero(), z: T::zero() }
    }

    /// Builds a quaternion from `[w, x, y, z]` and normalizes it.
    pub fn from_wxyz(q: [T; 4]) -> Option<Self> {
        Quaternion { w: q[0], x: q[1], y: q[2], z: q[3] }.normalized()
    }

    pub fn to_wxyz(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let half = angle / T::lit(2.0);
        let s = half.sin();
        Quaternion { w: half.cos(), x: axis[0] * s, y: axis[1] * s, z: axis[2] * s }
    }

    pub fn norm(self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if !n.is_finite() || n <= T::epsilon() {
            return None;
        }
        if (n - T::one()).abs() <= T::epsilon() * T::lit(4.0) {
            // already unit: keep the bits so repeated normalization is stable
            return Some(self);
        }
        Some(Quaternion { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n })
    }

    pub fn conj(self) -> Self {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn neg(self) -> Self {
        Quaternion { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn mul(self, o: Self) -> Self {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    fn vector(self) -> Vec3<T> {
        [self.x, self.y, self.z]
    }

    /// Rotation angle in `[0, π]` between the two orientations; `q` and `-q` coincide.
    pub fn angle_to(self, other: Self) -> T {
        if self == other {
            return T::zero();
        }
        let r = self.conj().mul(other);
        let s = vec3::norm(r.vector());
        T::lit(2.0) * s.atan2(r.w.abs())
    }

    /// Spherical interpolation along the shorter great circle.
    pub fn slerp(self, other: Self, u: T) -> Self {
        if u == T::zero() {
            return self;
        }
        if u == T::one() {
            return other;
        }
        let mut r = self.conj().mul(other);
        if r.w < T::zero() {
            r = r.neg();
        }
        let s = vec3::norm(r.vector());
        if s <= T::zero() {
            return self;
        }
        let theta = T::lit(2.0) * s.atan2(r.w);
        let axis = vec3::scale(r.vector(), T::one() / s);
        self.mul(Quaternion::from_axis_angle(axis, u * theta))
    }

    /// Rotates a vector by this (unit) quaternion.
    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        let qv = self.vector();
        let two = T::lit(2.0);
        let t = vec3::scale(vec3::cross(qv, v), two);
        vec3::add(vec3::add(v, vec3::scale(t, self.w)), vec3::cross(qv, t))
    }

    /// Columns of the rotation matrix.
    pub fn axes(self) -> [Vec3<T>; 3] {
        let o = T::zero();
        let l = T::one();
        [self.rotate([l, o, o]), self.rotate([o, l, o]), self.rotate([o, o, l])]
    }
}

/// Rotational part of a configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation<T> {
    /// Heading angle in `(-π, π]`.
    Planar(T),
    Spatial(Quaternion<T>),
}

/// A rigid-body configuration. SE(2) states keep `translation[2] == 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State<T> {
    pub translation: Vec3<T>,
    pub rotation: Rotation<T>,
}

impl<T: Real> State<T> {
    pub fn se2(x: T, y: T, theta: T) -> Self {
        State { translation: [x, y, T::zero()], rotation: Rotation::Planar(wrap_angle(theta)) }
    }

    pub fn se3(translation: Vec3<T>, rotation: Quaternion<T>) -> Self {
        State { translation, rotation: Rotation::Spatial(rotation) }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self.rotation, Rotation::Planar(_))
    }

    pub fn angle(&self) -> Option<T> {
        match self.rotation {
            Rotation::Planar(a) => Some(a),
            Rotation::Spatial(_) => None,
        }
    }

    pub fn quaternion(&self) -> Option<Quaternion<T>> {
        match self.rotation {
            Rotation::Planar(_) => None,
            Rotation::Spatial(q) => Some(q),
        }
    }

    /// Lexicographic key used to canonicalize unordered state pairs.
    pub(crate) fn lex_less(&self, other: &Self) -> bool {
        let a = self.flat();
        let b = other.flat();
        for (x, y) in a.iter().zip(b.iter()) {
            if x < y {
                return true;
            }
            if x > y {
                return false;
            }
        }
        false
    }

    fn flat(&self) -> [T; 7] {
        let t = self.translation;
        match self.rotation {
            Rotation::Planar(a) => [t[0], t[1], t[2], a, T::zero(), T::zero(), T::zero()],
            Rotation::Spatial(q) => [t[0], t[1], t[2], q.w, q.x, q.y, q.z],
        }
    }
}
