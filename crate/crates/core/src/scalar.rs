//! Scalar abstraction shared by every geometric and search routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Three-component vector helpers. SE(2) states keep `z = 0`.
pub(crate) mod vec3 {
    use super::Real;

    pub type Vec3<T> = [T; 3];

    #[inline]
    pub fn sub<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    #[inline]
    pub fn add<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    #[inline]
    pub fn scale<T: Real>(a: Vec3<T>, s: T) -> Vec3<T> {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    #[inline]
    pub fn dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[inline]
    pub fn cross<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    #[inline]
    pub fn norm<T: Real>(a: Vec3<T>) -> T {
        (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
    }

    /// Linear interpolation `a + u (b - a)`, returning `b` exactly at `u = 1`.
    #[inline]
    pub fn lerp<T: Real>(a: Vec3<T>, b: Vec3<T>, u: T) -> Vec3<T> {
        if u == T::one() {
            return b;
        }
        [
            a[0] + u * (b[0] - a[0]),
            a[1] + u * (b[1] - a[1]),
            a[2] + u * (b[2] - a[2]),
        ]
    }

    /// Some unit vector orthogonal to the unit vector `e`.
    pub fn any_orthogonal<T: Real>(e: Vec3<T>) -> Vec3<T> {
        let ax = e[0].abs();
        let ay = e[1].abs();
        let az = e[2].abs();
        let helper = if ax <= ay && ax <= az {
            [T::one(), T::zero(), T::zero()]
        } else if ay <= az {
            [T::zero(), T::one(), T::zero()]
        } else {
            [T::zero(), T::zero(), T::one()]
        };
        let o = cross(e, helper);
        scale(o, T::one() / norm(o))
    }
}
