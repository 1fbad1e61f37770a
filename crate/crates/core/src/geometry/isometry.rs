//! Isometries of the disc in coefficient form.
//!
//! `z -> (a w + b) / (conj(b) w + conj(a))` with `w = z`, or `w = conj(z)` when
//! the map reverses orientation. Coefficients are kept with
//! `|a|^2 - |b|^2 = 1`.

use num_complex::Complex64;

use super::disc::{direction, DiscPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryKind {
    Identity,
    Rotation,
    Translation,
    Reflection,
    Composite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscIsometry {
    pub a: Complex64,
    pub b: Complex64,
    pub reversing: bool,
    pub kind: IsometryKind,
}

impl DiscIsometry {
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            reversing: false,
            kind: IsometryKind::Identity,
        }
    }

    /// Rotation by `theta` about the origin.
    pub fn rotation(theta: f64) -> Self {
        Self {
            a: Complex64::from_polar(1.0, theta / 2.0),
            b: Complex64::new(0.0, 0.0),
            reversing: false,
            kind: IsometryKind::Rotation,
        }
    }

    /// Translation sending `u` to the origin.
    pub fn to_origin(u: &DiscPoint) -> Self {
        let s = (1.0 - u.norm_sqr()).sqrt();
        Self {
            a: Complex64::new(1.0 / s, 0.0),
            b: -u.z() / s,
            reversing: false,
            kind: IsometryKind::Translation,
        }
    }

    /// Translation sending the origin to `u`.
    pub fn from_origin(u: &DiscPoint) -> Self {
        let s = (1.0 - u.norm_sqr()).sqrt();
        Self {
            a: Complex64::new(1.0 / s, 0.0),
            b: u.z() / s,
            reversing: false,
            kind: IsometryKind::Translation,
        }
    }

    /// Reflection in the diameter at angle `theta`.
    pub fn diameter_reflection(theta: f64) -> Self {
        Self {
            a: Complex64::from_polar(1.0, theta),
            b: Complex64::new(0.0, 0.0),
            reversing: true,
            kind: IsometryKind::Reflection,
        }
    }

    pub fn rotation_about(center: &DiscPoint, theta: f64) -> Self {
        let mut m = Self::from_origin(center)
            .compose(&Self::rotation(theta))
            .compose(&Self::to_origin(center));
        m.kind = IsometryKind::Rotation;
        m
    }

    /// Reflection in the line through `u` and `v`.
    pub fn reflection(u: &DiscPoint, v: &DiscPoint) -> Self {
        let theta = direction(u, v);
        let mut m = Self::from_origin(u)
            .compose(&Self::diameter_reflection(theta))
            .compose(&Self::to_origin(u));
        m.kind = IsometryKind::Reflection;
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiscIsometry) -> DiscIsometry {
        let (a2, b2) = if self.reversing {
            (other.a.conj(), other.b.conj())
        } else {
            (other.a, other.b)
        };
        let a = self.a * a2 + self.b * b2.conj();
        let b = self.a * b2 + self.b * a2.conj();
        let n = (a.norm_sqr() - b.norm_sqr()).sqrt();
        DiscIsometry {
            a: a / n,
            b: b / n,
            reversing: self.reversing != other.reversing,
            kind: IsometryKind::Composite,
        }
    }

    pub fn inverse(&self) -> DiscIsometry {
        // inverse matrix of [[a, b], [conj b, conj a]] is [[conj a, -b], [-conj b, a]]
        let (a, b) = (self.a.conj(), -self.b);
        let (a, b) = if self.reversing {
            (a.conj(), b.conj())
        } else {
            (a, b)
        };
        DiscIsometry {
            a,
            b,
            reversing: self.reversing,
            kind: self.kind,
        }
    }

    pub fn apply_z(&self, z: Complex64) -> Complex64 {
        let w = if self.reversing { z.conj() } else { z };
        (self.a * w + self.b) / (self.b.conj() * w + self.a.conj())
    }

    pub fn apply(&self, p: &DiscPoint) -> DiscPoint {
        DiscPoint::from_z(self.apply_z(p.z()))
    }
}
