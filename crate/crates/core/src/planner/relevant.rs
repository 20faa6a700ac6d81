//! Vertex weighting, step estimation and the perturbed relevant-region draw.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::scalar::vec3::{self, Vec3};
use crate::scalar::Real;
use crate::statespace::{sample_quaternion, wrap_angle, Quaternion, Rotation, SpaceDef, State};

/// `λ1·n_s + λ2·n_o + λ3·(g + h)/c_cur`; the last term is 0 while `c_cur = +∞`.
pub fn vertex_weight<T: Real>(lambda: [T; 3], n_s: u32, n_o: u32, g: T, h: T, c_cur: T) -> T {
    let ratio = if c_cur.is_finite() { (g + h) / c_cur } else { T::zero() };
    lambda[0] * T::lit(n_s as f64) + lambda[1] * T::lit(n_o as f64) + lambda[2] * ratio
}

/// Forward-tree vertex summary fed to [`weight_vertices`].
#[derive(Clone, Copy, Debug)]
pub struct VertexStats<T> {
    pub id: usize,
    pub n_selected: u32,
    pub n_out: u32,
    pub g: T,
    pub h_rev: T,
}

/// Relevant vertices (`g + h_rev < c_cur`, both finite) ordered by
/// ascending weight, then id.
pub fn weight_vertices<T: Real>(vertices: &[VertexStats<T>], lambda: [T; 3], c_cur: T) -> Vec<(T, usize)> {
    let mut q: Vec<(T, usize)> = vertices
        .iter()
        .filter(|v| v.g.is_finite() && v.h_rev.is_finite() && v.g + v.h_rev < c_cur)
        .map(|v| (vertex_weight(lambda, v.n_selected, v.n_out, v.g, v.h_rev, c_cur), v.id))
        .collect();
    q.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    /// `c_cur − g ≤ 0`: nothing below this vertex can improve the incumbent.
    #[error("vertex cannot lead to a better solution")]
    SubtreeObsolete,
    /// `c_cur − g − h_rev ≤ 0`.
    #[error("no promising step from this vertex")]
    NotPromising,
    /// No reverse successor, or it shares the vertex's translation.
    #[error("no reverse-tree direction at this vertex")]
    NoDirection,
}

/// Step magnitude `γ_rel = min(c_cur − g − h_rev, γ_max)` and the unit
/// translation direction towards the reverse-tree successor.
pub fn estimate_step<T: Real>(
    v: &State<T>,
    g: T,
    h_rev: T,
    successor: Option<&State<T>>,
    c_cur: T,
    gamma_max: T,
) -> Result<(T, Vec3<T>), StepError> {
    if c_cur - g <= T::zero() {
        return Err(StepError::SubtreeObsolete);
    }
    let gamma = (c_cur - g - h_rev).min(gamma_max);
    if !(gamma > T::zero()) {
        return Err(StepError::NotPromising);
    }
    let s = successor.ok_or(StepError::NoDirection)?;
    let diff = vec3::sub(s.translation, v.translation);
    let len = vec3::norm(diff);
    if !(len > T::zero()) {
        return Err(StepError::NoDirection);
    }
    Ok((gamma, vec3::scale(diff, T::one() / len)))
}

/// Noise parameters for [`perturb`].
#[derive(Clone, Copy, Debug)]
pub struct Noise<T> {
    /// Standard deviation of the direction rotation (radians).
    pub sigma_dir: T,
    /// Bounds on the magnitude factor `|N(1, 0.25)|`.
    pub mag_clamp: [T; 2],
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R, mean: f64, sd: T) -> T {
    let d = Normal::new(mean, sd.to_f64_lossy()).expect("standard deviation is finite and nonnegative");
    T::lit(d.sample(rng))
}

/// Rotates `v` about the unit `axis` by `angle` (Rodrigues).
fn rotate_about<T: Real>(v: Vec3<T>, axis: Vec3<T>, angle: T) -> Vec3<T> {
    let (s, c) = angle.sin_cos();
    let kxv = vec3::cross(axis, v);
    let kdv = vec3::dot(axis, v);
    vec3::add(vec3::add(vec3::scale(v, c), vec3::scale(kxv, s)), vec3::scale(axis, kdv * (T::one() - c)))
}

/// One relevant-region draw `x̂ = v + γ̂·ê`.
///
/// The translation moves `γ̂ / w_t` along `ê`, where `ê` is `e` turned by a
/// `N(0, σ_dir)` angle (in-plane for SE(2), about a random axis orthogonal
/// to `e` for SE(3)) and `γ̂ = γ_rel · clamp(|N(1, 0.25)|, mag_clamp)`. The
/// orientation of `v` gets an `N(0, σ_dir)` jitter limited so that
/// `d(v, x̂) ≤ γ_rel · mag_clamp[1]`.
pub fn perturb<T: Real, R: Rng + ?Sized>(
    space: &SpaceDef<T>,
    v: &State<T>,
    gamma_rel: T,
    e: Vec3<T>,
    noise: Noise<T>,
    rng: &mut R,
) -> State<T> {
    let delta = normal(rng, 0.0, noise.sigma_dir);
    let e_hat = if v.is_planar() {
        let (s, c) = delta.sin_cos();
        [e[0] * c - e[1] * s, e[0] * s + e[1] * c, T::zero()]
    } else {
        let u = vec3::any_orthogonal(e);
        let w = vec3::cross(e, u);
        let phi = T::lit(std::f64::consts::TAU * rng.random::<f64>());
        let axis = vec3::add(vec3::scale(u, phi.cos()), vec3::scale(w, phi.sin()));
        rotate_about(e, axis, delta)
    };
    let [lo, hi] = noise.mag_clamp;
    let factor = normal(rng, 1.0, T::lit(0.25)).abs().max(lo).min(hi);
    let gamma_hat = gamma_rel * factor;
    let translation = vec3::add(v.translation, vec3::scale(e_hat, gamma_hat / space.w_t()));

    let budget = if space.w_r() > T::zero() {
        ((gamma_rel * hi - gamma_hat) / space.w_r()).max(T::zero()).min(T::PI())
    } else {
        T::PI()
    };
    let rotation = match v.rotation {
        Rotation::Planar(theta) => {
            let j = normal(rng, 0.0, noise.sigma_dir).max(-budget).min(budget);
            Rotation::Planar(wrap_angle(theta + j))
        }
        Rotation::Spatial(q) => {
            let axis = sample_quaternion::<T, R>(rng).rotate([T::one(), T::zero(), T::zero()]);
            let j = normal(rng, 0.0, noise.sigma_dir).abs().min(budget);
            let r = q.mul(Quaternion::from_axis_angle(axis, j));
            Rotation::Spatial(r.normalized().unwrap_or(r))
        }
    };
    State { translation, rotation }
}
