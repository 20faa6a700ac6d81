//! Uniform and informed (prolate hyperspheroid) samplers.

use rand::Rng;
use rand_distr::{Distribution, UnitBall, UnitDisc};

use super::cost::Cost;
use super::space::{SpaceDef, SpaceKind};
use super::state::{Quaternion, Rotation, State};
use super::StateSpaceError;
use crate::scalar::vec3::{self, Vec3};
use crate::scalar::Real;

const BOUNDED_ATTEMPTS: usize = 10_000;

#[inline]
pub(crate) fn unit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.random::<f64>())
}

/// Uniform heading in `(-π, π]`.
pub fn sample_angle<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let pi = T::PI();
    pi - (pi + pi) * unit::<T, R>(rng)
}

/// Uniform rotation over SO(3) from three uniform variates (subgroup method).
pub fn sample_quaternion<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Quaternion<T> {
    let u1: T = unit(rng);
    let u2: T = unit(rng);
    let u3: T = unit(rng);
    let two_pi = T::PI() + T::PI();
    let a = (T::one() - u1).sqrt();
    let b = u1.sqrt();
    let q = Quaternion {
        w: b * (two_pi * u3).cos(),
        x: a * (two_pi * u2).sin(),
        y: a * (two_pi * u2).cos(),
        z: b * (two_pi * u3).sin(),
    };
    q.normalized().unwrap_or_else(Quaternion::identity)
}

pub fn sample_rotation<T: Real, R: Rng + ?Sized>(kind: SpaceKind, rng: &mut R) -> Rotation<T> {
    match kind {
        SpaceKind::Se2 => Rotation::Planar(sample_angle(rng)),
        SpaceKind::Se3 => Rotation::Spatial(sample_quaternion(rng)),
    }
}

/// Uniform state over the translational bounds and the rotation group.
pub fn sample_uniform<T: Real, R: Rng + ?Sized>(space: &SpaceDef<T>, rng: &mut R) -> State<T> {
    let lo = space.lo();
    let hi = space.hi();
    let mut t = [T::zero(); 3];
    for i in 0..space.kind().translation_dim() {
        t[i] = lo[i] + (hi[i] - lo[i]) * unit::<T, R>(rng);
    }
    State { translation: t, rotation: sample_rotation(space.kind(), rng) }
}

/// Geometry of the translational informed set for a cost bound.
#[derive(Clone, Copy, Debug)]
pub struct ProlateSpheroid<T> {
    pub center: Vec3<T>,
    /// Orthonormal frame whose first column is the focal axis.
    pub frame: [Vec3<T>; 3],
    pub transverse_radius: T,
    pub conjugate_radius: T,
    pub dim: usize,
}

impl<T: Real> ProlateSpheroid<T> {
    pub fn new(space: &SpaceDef<T>, start: &State<T>, goal: &State<T>, c_cur: Cost<T>) -> Result<Self, StateSpaceError> {
        let dim = space.kind().translation_dim();
        let diff = vec3::sub(goal.translation, start.translation);
        let c_min = vec3::norm(diff);
        let diameter = c_cur.value() / space.w_t();
        if !diameter.is_finite() {
            return Err(StateSpaceError::EmptyInformedSet);
        }
        let slack = T::epsilon() * T::lit(64.0) * (T::one() + c_min);
        if diameter < c_min - slack {
            return Err(StateSpaceError::EmptyInformedSet);
        }
        let two = T::lit(2.0);
        let diameter = diameter.max(c_min);
        let transverse_radius = diameter / two;
        let conjugate_radius = (diameter * diameter - c_min * c_min).max(T::zero()).sqrt() / two;
        let axis = if c_min > T::zero() {
            vec3::scale(diff, T::one() / c_min)
        } else {
            [T::one(), T::zero(), T::zero()]
        };
        let frame = if dim == 2 {
            [axis, [-axis[1], axis[0], T::zero()], [T::zero(), T::zero(), T::one()]]
        } else {
            let o1 = vec3::any_orthogonal(axis);
            [axis, o1, vec3::cross(axis, o1)]
        };
        let center = vec3::scale(vec3::add(start.translation, goal.translation), T::one() / two);
        Ok(ProlateSpheroid { center, frame, transverse_radius, conjugate_radius, dim })
    }

    /// Volume of the translational spheroid.
    pub fn volume(&self) -> T {
        let pi = T::PI();
        if self.dim == 2 {
            pi * self.transverse_radius * self.conjugate_radius
        } else {
            T::lit(4.0 / 3.0) * pi * self.transverse_radius * self.conjugate_radius * self.conjugate_radius
        }
    }

    /// Unit-ball sample, scaled by the radii, rotated onto the focal axis, and
    /// translated to the center.
    pub fn sample_translation<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3<T> {
        let ball: [f64; 3] = if self.dim == 2 {
            let d: [f64; 2] = UnitDisc.sample(rng);
            [d[0], d[1], 0.0]
        } else {
            UnitBall.sample(rng)
        };
        let scaled = [
            T::lit(ball[0]) * self.transverse_radius,
            T::lit(ball[1]) * self.conjugate_radius,
            T::lit(ball[2]) * self.conjugate_radius,
        ];
        let mut out = self.center;
        for (k, column) in self.frame.iter().enumerate() {
            out = vec3::add(out, vec3::scale(*column, scaled[k]));
        }
        if self.dim == 2 {
            out[2] = T::zero();
        }
        out
    }
}

/// Samples a state whose translation is uniform in the prolate hyperspheroid
/// with foci at the start/goal translations and transverse diameter
/// `c_cur / w_t`. Rotation is uniform. With `c_cur = +∞` this is
/// [`sample_uniform`].
pub fn sample_informed<T: Real, R: Rng + ?Sized>(
    space: &SpaceDef<T>,
    start: &State<T>,
    goal: &State<T>,
    c_cur: Cost<T>,
    rng: &mut R,
) -> Result<State<T>, StateSpaceError> {
    if !c_cur.is_finite() {
        return Ok(sample_uniform(space, rng));
    }
    let spheroid = ProlateSpheroid::new(space, start, goal, c_cur)?;
    let translation = spheroid.sample_translation(rng);
    Ok(State { translation, rotation: sample_rotation(space.kind(), rng) })
}

/// Informed sampling restricted to the space bounds.
///
/// Draws from whichever of the box and the spheroid is smaller and rejects
/// against the other, so the result is uniform over their intersection. If
/// the intersection is too thin to hit, the last spheroid draw is returned
/// (it still satisfies the focal-sum bound, and callers reject out-of-bounds
/// states through validity checking).
pub fn sample_informed_bounded<T: Real, R: Rng + ?Sized>(
    space: &SpaceDef<T>,
    start: &State<T>,
    goal: &State<T>,
    c_cur: Cost<T>,
    rng: &mut R,
) -> Result<State<T>, StateSpaceError> {
    if !c_cur.is_finite() {
        return Ok(sample_uniform(space, rng));
    }
    let spheroid = ProlateSpheroid::new(space, start, goal, c_cur)?;
    let bound = c_cur.value();
    if spheroid.volume() >= space.box_volume() {
        for _ in 0..BOUNDED_ATTEMPTS {
            let x = sample_uniform(space, rng);
            let focal = space.w_t()
                * (vec3::norm(vec3::sub(x.translation, start.translation))
                    + vec3::norm(vec3::sub(x.translation, goal.translation)));
            if focal <= bound {
                return Ok(x);
            }
        }
    } else {
        for _ in 0..BOUNDED_ATTEMPTS {
            let translation = spheroid.sample_translation(rng);
            let x = State { translation, rotation: sample_rotation(space.kind(), rng) };
            if space.contains(&x) {
                return Ok(x);
            }
        }
    }
    let translation = spheroid.sample_translation(rng);
    Ok(State { translation, rotation: sample_rotation(space.kind(), rng) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn focal_sum(x: &State<f64>, s: &State<f64>, g: &State<f64>) -> f64 {
        vec3::norm(vec3::sub(x.translation, s.translation)) + vec3::norm(vec3::sub(x.translation, g.translation))
    }

    #[test]
    fn uniform_support_and_mean() {
        let space = SpaceDef::se2([-2.0, 6.0], [1.0, 3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let mut sum = [0.0; 2];
        for _ in 0..n {
            let x = sample_uniform(&space, &mut rng);
            assert!(space.contains(&x));
            let a = x.angle().unwrap();
            assert!(a > -std::f64::consts::PI && a <= std::f64::consts::PI);
            sum[0] += x.translation[0];
            sum[1] += x.translation[1];
        }
        // mean estimator std = width / sqrt(12 n)
        for (axis, (lo, hi)) in [(-2.0, 6.0), (1.0, 3.0)].into_iter().enumerate() {
            let mean = sum[axis] / n as f64;
            let sigma = (hi - lo) / (12.0 * n as f64).sqrt();
            assert!((mean - (lo + hi) / 2.0).abs() < 5.0 * sigma, "axis {axis}: {mean}");
        }
    }

    #[test]
    fn uniform_is_deterministic_under_seed() {
        let space = SpaceDef::se3([0.0, 1.0], [0.0, 1.0], [0.0, 1.0]).unwrap();
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..100).map(|_| sample_uniform(&space, &mut rng)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b: Vec<_> = (0..100).map(|_| sample_uniform(&space, &mut rng)).collect();
        assert_eq!(a, b);
        for x in &a {
            space.check_state(x).unwrap();
        }
    }

    #[test]
    fn informed_membership() {
        let space = SpaceDef::se2([-10.0, 10.0], [-10.0, 10.0]).unwrap();
        let s = State::se2(0.0, 0.0, 0.0);
        let g = State::se2(4.0, 0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let x = sample_informed(&space, &s, &g, Cost::new(5.0), &mut rng).unwrap();
            assert!(focal_sum(&x, &s, &g) <= 5.0 + 1e-9);
        }
    }

    #[test]
    fn degenerate_spheroid_is_the_segment() {
        let space = SpaceDef::se2([-10.0, 10.0], [-10.0, 10.0]).unwrap();
        let s = State::se2(-1.0, 2.0, 0.0);
        let g = State::se2(3.0, -1.0, 0.0);
        let c = Cost::new(space.translation_distance(&s, &g));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = sample_informed(&space, &s, &g, c, &mut rng).unwrap();
            assert!((focal_sum(&x, &s, &g) - c.value()).abs() < 1e-9);
        }
    }

    #[test]
    fn infinite_cost_falls_back_to_uniform() {
        let space = SpaceDef::se2([0.0, 1.0], [0.0, 1.0]).unwrap();
        let s = State::se2(0.1, 0.1, 0.0);
        let g = State::se2(0.9, 0.9, 0.0);
        let mut a = ChaCha8Rng::seed_from_u64(2);
        let mut b = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = sample_informed(&space, &s, &g, Cost::infinity(), &mut a).unwrap();
            assert_eq!(x, sample_uniform(&space, &mut b));
        }
    }

    #[test]
    fn empty_informed_set_is_an_error() {
        let space = SpaceDef::se2([-10.0, 10.0], [-10.0, 10.0]).unwrap();
        let s = State::se2(0.0, 0.0, 0.0);
        let g = State::se2(4.0, 0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            sample_informed(&space, &s, &g, Cost::new(3.9), &mut rng),
            Err(StateSpaceError::EmptyInformedSet)
        ));
    }

    #[test]
    fn bounded_variant_respects_both_sets() {
        let space = SpaceDef::se3([0.0, 2.0], [0.0, 1.0], [0.0, 1.0]).unwrap();
        let s = State::se3([0.2, 0.5, 0.5], Quaternion::identity());
        let g = State::se3([1.8, 0.5, 0.5], Quaternion::identity());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for c in [1.7, 2.5, 40.0] {
            for _ in 0..2000 {
                let x = sample_informed_bounded(&space, &s, &g, Cost::new(c), &mut rng).unwrap();
                assert!(space.contains(&x));
                assert!(focal_sum(&x, &s, &g) <= c + 1e-9);
            }
        }
    }

    #[test]
    fn quaternion_samples_are_unit_and_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut mean_abs_w = 0.0;
        let n = 20_000;
        for _ in 0..n {
            let q: Quaternion<f64> = sample_quaternion(&mut rng);
            assert!((q.norm() - 1.0).abs() < 1e-12);
            mean_abs_w += q.w.abs();
        }
        // w has density (2/π)·sqrt(1 - w²) under the uniform measure on S³, so E|w| = 4 / (3π)
        mean_abs_w /= n as f64;
        assert!((mean_abs_w - 4.0 / (3.0 * std::f64::consts::PI)).abs() < 0.01, "{mean_abs_w}");
    }
}
