//! Rotations about arbitrary axes and great-circle arcs on the unit sphere.
//!
//! Every rotation here is *active*: the vector turns while the frame stays
//! fixed, counterclockwise about the axis when viewed from its tip.

use std::f64::consts::PI;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Two unit vectors whose dot product is within this distance of ±1 are
/// treated as parallel.
pub const PARALLEL_EPS: f64 = 1e-9;

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// `acos` with its argument clamped to `[-1, 1]`.
pub fn clamped_acos(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let a = (angle + PI).rem_euclid(2.0 * PI) - PI;
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// A point on the unit sphere, equivalently a unit vector from its center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    pub const X: Self = Self([1.0, 0.0, 0.0]);
    pub const Y: Self = Self([0.0, 1.0, 0.0]);
    pub const Z: Self = Self([0.0, 0.0, 1.0]);

    /// Normalizes `(x, y, z)`; fails when the input is too short to carry a
    /// direction.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_array([x, y, z])
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        let n = norm(v);
        if !n.is_finite() || n <= 1e-12 {
            return Err(Error::ZeroVector(n));
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Wraps a vector already known to be unit length.
    pub(crate) fn new_unchecked(v: [f64; 3]) -> Self {
        Self(v)
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn to_array(self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(self.0, other.0)
    }

    pub fn cross(&self, other: &Self) -> [f64; 3] {
        cross(self.0, other.0)
    }

    pub fn norm(&self) -> f64 {
        norm(self.0)
    }

    /// Arc length between two points on the sphere.
    pub fn angle_to(&self, other: &Self) -> f64 {
        clamped_acos(self.dot(other))
    }

    /// Squared chordal distance.
    pub fn distance_squared(&self, other: &Self) -> f64 {
        let d = [self.0[0] - other.0[0], self.0[1] - other.0[1], self.0[2] - other.0[2]];
        dot(d, d)
    }

    pub fn is_parallel(&self, other: &Self) -> bool {
        self.dot(other).abs() >= 1.0 - PARALLEL_EPS
    }
}

/// A proper orthogonal 3×3 matrix, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation([[f64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Self = Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply_array(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
    }
}

impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, rhs: Rotation) -> Rotation {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        Rotation(out)
    }
}

/// Active rotation by `angle` about `axis` (right-hand rule).
///
/// This is the closed form of `exp(angle · K)` where `K` is the cross-product
/// matrix of `axis`: `I + sin(angle) K + (1 - cos(angle)) K²`.
pub fn rotation_about_axis(angle: f64, axis: &UnitVector3) -> Rotation {
    let [x, y, z] = axis.0;
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    Rotation([
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ])
}

pub fn apply(rotation: &Rotation, v: &UnitVector3) -> UnitVector3 {
    UnitVector3(rotation.apply_array(v.0))
}

/// Rotates `v` about `axis` without materializing the matrix.
pub(crate) fn rotate(v: &UnitVector3, angle: f64, axis: &UnitVector3) -> UnitVector3 {
    let (s, c) = angle.sin_cos();
    let k = axis.0;
    let kxv = cross(k, v.0);
    let kdv = dot(k, v.0) * (1.0 - c);
    UnitVector3([
        v.0[0] * c + kxv[0] * s + k[0] * kdv,
        v.0[1] * c + kxv[1] * s + k[1] * kdv,
        v.0[2] * c + kxv[2] * s + k[2] * kdv,
    ])
}

/// The shorter great-circle arc from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicArc {
    pub start: UnitVector3,
    pub end: UnitVector3,
    pub axis: UnitVector3,
    pub arc_angle: f64,
}

pub fn geodesic_between(h1: &UnitVector3, h2: &UnitVector3) -> Result<GeodesicArc> {
    if h1.is_parallel(h2) {
        return Err(Error::DegenerateGeodesic);
    }
    let axis = UnitVector3::from_array(h1.cross(h2)).map_err(|_| Error::DegenerateGeodesic)?;
    Ok(GeodesicArc { start: *h1, end: *h2, axis, arc_angle: h1.angle_to(h2) })
}

/// Point reached after travelling `t` radians from the arc's start. Values
/// outside `[0, arc_angle]` continue along the same great circle.
pub fn evaluate_geodesic(arc: &GeodesicArc, t: f64) -> UnitVector3 {
    rotate(&arc.start, t, &arc.axis)
}

/// Signed angle at `vertex` from the geodesic towards `a` to the geodesic
/// towards `b`, counterclockwise about the outward normal. Result in `(-π, π]`.
pub fn spherical_angle_at_vertex(vertex: &UnitVector3, a: &UnitVector3, b: &UnitVector3) -> Result<f64> {
    let tangent = |p: &UnitVector3| {
        if vertex.is_parallel(p) {
            return Err(Error::DegenerateGeodesic);
        }
        let d = vertex.dot(p);
        let v = vertex.0;
        UnitVector3::from_array([p.0[0] - d * v[0], p.0[1] - d * v[1], p.0[2] - d * v[2]])
            .map_err(|_| Error::DegenerateGeodesic)
    };
    let ta = tangent(a)?;
    let tb = tangent(b)?;
    let angle = dot(vertex.0, ta.cross(&tb)).atan2(ta.dot(&tb));
    Ok(if angle <= -PI { PI } else { angle })
}
