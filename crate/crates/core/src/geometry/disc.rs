//! Points and lines of the Poincaré disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint {
    pub x: f64,
    pub y: f64,
}

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self {
            x: r * theta.cos(),
            y: r * theta.sin(),
        }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_z(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn is_inside(&self) -> bool {
        self.norm_sqr() < 1.0
    }

    /// Klein model image: `2z / (1 + |z|^2)`. Geodesics become chords.
    pub fn klein(&self) -> [f64; 2] {
        let s = 2.0 / (1.0 + self.norm_sqr());
        [self.x * s, self.y * s]
    }

    pub fn from_klein(k: [f64; 2]) -> Self {
        let n = k[0] * k[0] + k[1] * k[1];
        let s = 1.0 / (1.0 + (1.0 - n).max(0.0).sqrt());
        Self {
            x: k[0] * s,
            y: k[1] * s,
        }
    }

    pub fn euclid(&self, other: &DiscPoint) -> f64 {
        (self.z() - other.z()).norm()
    }
}

/// Hyperbolic distance.
pub fn distance(u: &DiscPoint, v: &DiscPoint) -> f64 {
    let d2 = (u.z() - v.z()).norm_sqr();
    let den = (1.0 - u.norm_sqr()) * (1.0 - v.norm_sqr());
    (1.0 + 2.0 * d2 / den).acosh()
}

/// `z -> (z - u) / (1 - conj(u) z)`, which sends `u` to the origin.
pub fn to_origin(u: Complex64, z: Complex64) -> Complex64 {
    (z - u) / (Complex64::new(1.0, 0.0) - u.conj() * z)
}

pub fn from_origin(u: Complex64, w: Complex64) -> Complex64 {
    (w + u) / (Complex64::new(1.0, 0.0) + u.conj() * w)
}

/// Direction of the geodesic from `u` towards `v`, as an angle measured at `u`.
pub fn direction(u: &DiscPoint, v: &DiscPoint) -> f64 {
    to_origin(u.z(), v.z()).arg()
}

/// Angle at `vertex` from `a` to `b`, counter-clockwise, in `[0, 2pi)`.
pub fn angle_ccw(vertex: &DiscPoint, a: &DiscPoint, b: &DiscPoint) -> f64 {
    let t = direction(vertex, b) - direction(vertex, a);
    t.rem_euclid(std::f64::consts::TAU)
}

/// Unsigned angle at `vertex` between `a` and `b`, in `[0, pi]`.
pub fn angle(vertex: &DiscPoint, a: &DiscPoint, b: &DiscPoint) -> f64 {
    let t = angle_ccw(vertex, a, b);
    t.min(std::f64::consts::TAU - t)
}

/// Point at hyperbolic distance `d` from `u` in direction `theta` (at `u`).
pub fn offset(u: &DiscPoint, theta: f64, d: f64) -> DiscPoint {
    let w = Complex64::from_polar((d / 2.0).tanh(), theta);
    DiscPoint::from_z(from_origin(u.z(), w))
}

pub fn midpoint(u: &DiscPoint, v: &DiscPoint) -> DiscPoint {
    let w = to_origin(u.z(), v.z());
    let r = w.norm();
    if r == 0.0 {
        return *u;
    }
    let half = (r.atanh() / 2.0).tanh();
    DiscPoint::from_z(from_origin(u.z(), w * (half / r)))
}

/// A complete hyperbolic line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Geodesic {
    Diameter { dx: f64, dy: f64 },
    Arc { cx: f64, cy: f64, r: f64 },
}

/// The two ideal endpoints of the line through `u` and `v`, ordered so that
/// the line runs from the first through `u` then `v` to the second.
pub fn ideal_endpoints(u: &DiscPoint, v: &DiscPoint) -> (DiscPoint, DiscPoint) {
    let w = to_origin(u.z(), v.z());
    let dir = w / w.norm();
    let back = from_origin(u.z(), -dir);
    let ahead = from_origin(u.z(), dir);
    (DiscPoint::from_z(back), DiscPoint::from_z(ahead))
}

impl Geodesic {
    pub fn through(u: &DiscPoint, v: &DiscPoint) -> Geodesic {
        let (a, b) = ideal_endpoints(u, v);
        Self::between_ideal(&a, &b)
    }

    /// Line with the given endpoints on the unit circle.
    pub fn between_ideal(a: &DiscPoint, b: &DiscPoint) -> Geodesic {
        let cross = a.x * b.y - a.y * b.x;
        if cross.abs() < 1e-12 {
            return Geodesic::Diameter { dx: a.x, dy: a.y };
        }
        // the circle is centred where the tangents at a and b meet
        let s = a.z() + b.z();
        let dot = a.x * b.x + a.y * b.y;
        let c = s / (1.0 + dot);
        let r = (c.norm_sqr() - 1.0).max(0.0).sqrt();
        Geodesic::Arc {
            cx: c.re,
            cy: c.im,
            r,
        }
    }

    /// `|c|^2 - r^2 - 1`, zero for a circle orthogonal to the boundary.
    pub fn orthogonality_defect(&self) -> f64 {
        match *self {
            Geodesic::Diameter { .. } => 0.0,
            Geodesic::Arc { cx, cy, r } => cx * cx + cy * cy - r * r - 1.0,
        }
    }
}

/// Line through two points, kept with a point and a direction so that
/// distances can be measured in a frame where the line is the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub base: DiscPoint,
    pub theta: f64,
}

impl Line {
    pub fn through(u: &DiscPoint, v: &DiscPoint) -> Line {
        Line {
            base: *u,
            theta: direction(u, v),
        }
    }

    fn frame(&self, z: &DiscPoint) -> Complex64 {
        to_origin(self.base.z(), z.z()) * Complex64::from_polar(1.0, -self.theta)
    }

    /// Signed hyperbolic distance: positive on the left of the direction
    /// of travel.
    pub fn signed_distance(&self, z: &DiscPoint) -> f64 {
        let w = self.frame(z);
        (2.0 * w.im / (1.0 - w.norm_sqr())).asinh()
    }

    pub fn distance(&self, z: &DiscPoint) -> f64 {
        self.signed_distance(z).abs()
    }

    /// Position of the foot of `z` along the line, as a signed distance
    /// from the base point.
    pub fn abscissa(&self, z: &DiscPoint) -> f64 {
        let w = self.frame(z);
        // the geodesic through w orthogonal to the real axis meets it at x
        // with x / (1 + x^2) = Re(w) / (1 + |w|^2)
        let k = 2.0 * w.re / (1.0 + w.norm_sqr());
        k.atanh()
    }

    pub fn geodesic(&self) -> Geodesic {
        let ahead = offset(&self.base, self.theta, 1.0);
        Geodesic::through(&self.base, &ahead)
    }
}

/// Signed area test in the Klein model: positive when `z` is on the left of
/// the chord from `a` to `b`.
pub fn klein_side(a: [f64; 2], b: [f64; 2], z: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (z[1] - a[1]) - (b[1] - a[1]) * (z[0] - a[0])
}
