//! Minimal planar vector algebra.
//!
//! The rotation convention is fixed once for the whole crate:
//! `rot90` sends (x, y) to (-y, x), i.e. rotation by +90 degrees.
//! Every sign-sensitive formula downstream (pairings, windings, Reeb
//! fields, densities) is expressed through [`Vec2::dot`] and
//! [`Vec2::rot90`] so the convention lives in exactly one place.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub const fn v2(x: f64, y: f64) -> Vec2 {
    Vec2 { x, y }
}

impl Vec2 {
    pub const ZERO: Vec2 = v2(0.0, 0.0);

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Rotation by +90 degrees: (x, y) -> (-y, x).
    pub fn rot90(self) -> Vec2 {
        v2(-self.y, self.x)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn normalize(self) -> Vec2 {
        let n = self.norm();
        v2(self.x / n, self.y / n)
    }

    /// Angle in (-pi, pi] measured from the positive x-axis.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(theta: f64) -> Vec2 {
        v2(theta.cos(), theta.sin())
    }
}

/// `<u, i v>` with `i` the +90 degree rotation; expands to `u.y*v.x - u.x*v.y`.
///
/// This single pairing carries all orientation-sensitive quantities:
/// the stabilization pairing `<g, i h'>`, the contact density `<h, i h'>`,
/// and the monotonicity density `<dh/dt, i h'>`.
pub fn ipair(u: Vec2, v: Vec2) -> f64 {
    u.dot(v.rot90())
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        v2(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        v2(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        v2(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        v2(-self.x, -self.y)
    }
}

/// Wrap an angle difference into (-pi, pi].
pub fn wrap_angle(mut d: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    d %= TAU;
    if d <= -PI {
        d += TAU;
    } else if d > PI {
        d -= TAU;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_matches_component_formula() {
        let u = v2(1.5, -0.25);
        let v = v2(0.3, 2.0);
        assert_eq!(ipair(u, v), u.y * v.x - u.x * v.y);
    }

    #[test]
    fn wrap_angle_range() {
        for k in -10..10 {
            let d = wrap_angle(0.3 + k as f64 * std::f64::consts::TAU);
            assert!((d - 0.3).abs() < 1e-12);
        }
    }
}
