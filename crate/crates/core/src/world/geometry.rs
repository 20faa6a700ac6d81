//! Convex collision primitives: point/disc vs polygon, polygon vs polygon
//! (separating axes), sphere vs box, and oriented box vs axis-aligned box
//! (15-axis separating axis test).
//!
//! Contact counts as collision everywhere: shapes are separated only by a
//! strictly positive gap.

use crate::scalar::vec3::{self, Vec3};
use crate::scalar::Real;

pub type Point2<T> = [T; 2];

#[inline]
fn cross2<T: Real>(o: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Returns true when the vertex list is strictly convex and counter-clockwise.
pub fn is_convex_ccw<T: Real>(vertices: &[Point2<T>]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| cross2(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) > T::zero())
}

/// Convex CCW polygon with cached edge normals and bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon<T> {
    vertices: Vec<Point2<T>>,
    normals: Vec<Point2<T>>,
    min: Point2<T>,
    max: Point2<T>,
}

impl<T: Real> ConvexPolygon<T> {
    /// `None` unless the vertices are strictly convex and CCW.
    pub fn new(vertices: Vec<Point2<T>>) -> Option<Self> {
        if !is_convex_ccw(&vertices) || !vertices.iter().all(|v| v[0].is_finite() && v[1].is_finite()) {
            return None;
        }
        Some(Self::from_trusted(vertices))
    }

    pub fn rectangle(min: Point2<T>, max: Point2<T>) -> Option<Self> {
        if !(min[0] < max[0] && min[1] < max[1]) {
            return None;
        }
        Some(Self::from_trusted(vec![min, [max[0], min[1]], max, [min[0], max[1]]]))
    }

    fn from_trusted(vertices: Vec<Point2<T>>) -> Self {
        let n = vertices.len();
        let normals = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                // outward normal of a CCW edge; left unnormalized
                [b[1] - a[1], a[0] - b[0]]
            })
            .collect();
        let mut min = vertices[0];
        let mut max = vertices[0];
        for v in &vertices {
            min = [min[0].min(v[0]), min[1].min(v[1])];
            max = [max[0].max(v[0]), max[1].max(v[1])];
        }
        ConvexPolygon { vertices, normals, min, max }
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn bounds(&self) -> (Point2<T>, Point2<T>) {
        (self.min, self.max)
    }

    /// Rigid transform: rotate by `theta` about the origin, then translate.
    pub fn transformed(&self, tx: T, ty: T, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let vertices = self
            .vertices
            .iter()
            .map(|v| [c * v[0] - s * v[1] + tx, s * v[0] + c * v[1] + ty])
            .collect();
        Self::from_trusted(vertices)
    }

    fn project(&self, axis: Point2<T>) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for v in &self.vertices {
            let p = v[0] * axis[0] + v[1] * axis[1];
            lo = lo.min(p);
            hi = hi.max(p);
        }
        (lo, hi)
    }

    /// Signed distance from `p` to the polygon boundary: negative inside,
    /// zero on the boundary.
    pub fn signed_distance(&self, p: Point2<T>) -> T {
        let n = self.vertices.len();
        let mut inside = true;
        let mut best = T::infinity();
        let mut max_plane = T::neg_infinity();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let nrm = self.normals[i];
            let len = nrm[0].hypot(nrm[1]);
            let plane = ((p[0] - a[0]) * nrm[0] + (p[1] - a[1]) * nrm[1]) / len;
            max_plane = max_plane.max(plane);
            if plane > T::zero() {
                inside = false;
            }
            best = best.min(segment_distance(p, a, b));
        }
        if inside {
            // inside a convex polygon the boundary distance is the nearest edge plane
            max_plane.min(T::zero())
        } else {
            best
        }
    }

    /// Containment test with an outward tolerance.
    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let nrm = self.normals[i];
            let len = nrm[0].hypot(nrm[1]);
            ((p[0] - a[0]) * nrm[0] + (p[1] - a[1]) * nrm[1]) / len <= tol
        })
    }
}

fn segment_distance<T: Real>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let u = if len2 > T::zero() {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let d = [ap[0] - u * ab[0], ap[1] - u * ab[1]];
    d[0].hypot(d[1])
}

/// Disc (radius 0 for a point) against a convex polygon.
pub fn disc_hits_polygon<T: Real>(center: Point2<T>, radius: T, poly: &ConvexPolygon<T>) -> bool {
    let (min, max) = poly.bounds();
    if center[0] - radius > max[0]
        || center[0] + radius < min[0]
        || center[1] - radius > max[1]
        || center[1] + radius < min[1]
    {
        return false;
    }
    poly.signed_distance(center) <= radius
}

/// Separating axis test between two convex polygons.
pub fn polygons_intersect<T: Real>(a: &ConvexPolygon<T>, b: &ConvexPolygon<T>) -> bool {
    let (amin, amax) = a.bounds();
    let (bmin, bmax) = b.bounds();
    if amin[0] > bmax[0] || bmin[0] > amax[0] || amin[1] > bmax[1] || bmin[1] > amax[1] {
        return false;
    }
    polygon_separation(a, b) <= T::zero()
}

/// Largest projected gap over the edge normals of both polygons. Positive
/// means separated; otherwise its magnitude bounds the penetration.
pub fn polygon_separation<T: Real>(a: &ConvexPolygon<T>, b: &ConvexPolygon<T>) -> T {
    let mut best = T::neg_infinity();
    for axis in a.normals.iter().chain(b.normals.iter()) {
        let len = axis[0].hypot(axis[1]);
        if len <= T::zero() {
            continue;
        }
        let (alo, ahi) = a.project(*axis);
        let (blo, bhi) = b.project(*axis);
        let gap = (blo - ahi).max(alo - bhi) / len;
        best = best.max(gap);
    }
    best
}

/// Axis-aligned box in 3D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb<T> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn new(min: Vec3<T>, max: Vec3<T>) -> Option<Self> {
        if (0..3).all(|i| min[i].is_finite() && max[i].is_finite() && min[i] < max[i]) {
            Some(Aabb { min, max })
        } else {
            None
        }
    }

    pub fn center(&self) -> Vec3<T> {
        vec3::scale(vec3::add(self.min, self.max), T::lit(0.5))
    }

    pub fn half_extents(&self) -> Vec3<T> {
        vec3::scale(vec3::sub(self.max, self.min), T::lit(0.5))
    }

    pub fn distance_to_point(&self, p: Vec3<T>) -> T {
        let mut d = [T::zero(); 3];
        for i in 0..3 {
            d[i] = (self.min[i] - p[i]).max(p[i] - self.max[i]).max(T::zero());
        }
        vec3::norm(d)
    }

    pub fn contains(&self, p: Vec3<T>, tol: T) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] - tol && p[i] <= self.max[i] + tol)
    }
}

/// Oriented box: center, orthonormal axes (columns), half extents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obb<T> {
    pub center: Vec3<T>,
    pub axes: [Vec3<T>; 3],
    pub half: Vec3<T>,
}

impl<T: Real> Obb<T> {
    pub fn contains(&self, p: Vec3<T>, tol: T) -> bool {
        let d = vec3::sub(p, self.center);
        (0..3).all(|i| vec3::dot(d, self.axes[i]).abs() <= self.half[i] + tol)
    }

    pub fn corners(&self) -> [Vec3<T>; 8] {
        let mut out = [self.center; 8];
        for (k, corner) in out.iter_mut().enumerate() {
            for i in 0..3 {
                let sign = if (k >> i) & 1 == 1 { T::one() } else { -T::one() };
                *corner = vec3::add(*corner, vec3::scale(self.axes[i], sign * self.half[i]));
            }
        }
        out
    }
}

pub fn sphere_hits_aabb<T: Real>(center: Vec3<T>, radius: T, b: &Aabb<T>) -> bool {
    b.distance_to_point(center) <= radius
}

/// Largest separation over the 15 candidate axes of the OBB/AABB pair.
/// Positive means separated.
pub fn obb_aabb_separation<T: Real>(o: &Obb<T>, b: &Aabb<T>) -> T {
    let world = [
        [T::one(), T::zero(), T::zero()],
        [T::zero(), T::one(), T::zero()],
        [T::zero(), T::zero(), T::one()],
    ];
    let bh = b.half_extents();
    let d = vec3::sub(o.center, b.center());
    let mut best = T::neg_infinity();
    let mut test = |axis: Vec3<T>| {
        let len = vec3::norm(axis);
        if len <= T::lit(1e-9) {
            // parallel edge pair; covered by the face axes
            return;
        }
        let ra = (0..3).fold(T::zero(), |acc, i| acc + bh[i] * vec3::dot(axis, world[i]).abs());
        let rb = (0..3).fold(T::zero(), |acc, i| acc + o.half[i] * vec3::dot(axis, o.axes[i]).abs());
        let gap = (vec3::dot(axis, d).abs() - ra - rb) / len;
        best = best.max(gap);
    };
    for axis in world {
        test(axis);
    }
    for axis in o.axes {
        test(axis);
    }
    for a in world {
        for e in o.axes {
            test(vec3::cross(a, e));
        }
    }
    best
}

pub fn obb_hits_aabb<T: Real>(o: &Obb<T>, b: &Aabb<T>) -> bool {
    // cheap bounding-sphere reject first
    let r = vec3::norm(o.half);
    if b.distance_to_point(o.center) > r {
        return false;
    }
    obb_aabb_separation(o, b) <= T::zero()
}
