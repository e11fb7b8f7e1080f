//! Oriented rectangles and separating-axis overlap tests.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Body axes for heading `theta`, measured from +y: forward is
/// `(sin θ, cos θ)` and lateral is `(cos θ, -sin θ)`. At `theta = 0` the
/// lateral axis is +x and the forward axis is +y.
#[inline]
pub fn body_axes(theta: f64) -> (Vec2, Vec2) {
    let (s, c) = theta.sin_cos();
    (Vec2::new(s, c), Vec2::new(c, -s))
}

/// Rectangle with `size = [sx, sy]` given at `theta = 0`: `sx` along the
/// lateral axis, `sy` along the forward axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obb {
    pub center: Vec2,
    pub half_lat: f64,
    pub half_fwd: f64,
    pub lat: Vec2,
    pub fwd: Vec2,
}

impl Obb {
    pub fn new(center: Vec2, size: [f64; 2], theta: f64) -> Self {
        let (fwd, lat) = body_axes(theta);
        Obb {
            center,
            half_lat: size[0] / 2.0,
            half_fwd: size[1] / 2.0,
            lat,
            fwd,
        }
    }

    pub fn corners(&self) -> [Vec2; 4] {
        let a = self.lat * self.half_lat;
        let b = self.fwd * self.half_fwd;
        [
            self.center + a + b,
            self.center + a - b,
            self.center - a - b,
            self.center - a + b,
        ]
    }

    #[inline]
    fn radius_on(&self, axis: Vec2) -> f64 {
        self.half_lat * self.lat.dot(axis).abs() + self.half_fwd * self.fwd.dot(axis).abs()
    }

    pub fn contains(&self, p: Vec2) -> bool {
        let d = p - self.center;
        d.dot(self.lat).abs() < self.half_lat && d.dot(self.fwd).abs() < self.half_fwd
    }

    pub fn half_diagonal(&self) -> f64 {
        (self.half_lat * self.half_lat + self.half_fwd * self.half_fwd).sqrt()
    }

    /// Axis-aligned extent `(min, max)`.
    pub fn aabb(&self) -> (Vec2, Vec2) {
        let ex = self.radius_on(Vec2::new(1.0, 0.0));
        let ey = self.radius_on(Vec2::new(0.0, 1.0));
        (
            Vec2::new(self.center.x - ex, self.center.y - ey),
            Vec2::new(self.center.x + ex, self.center.y + ey),
        )
    }
}

/// Minimum translation to separate `b` from `a`: the unit direction (pointing
/// from `a` towards `b`) and depth. `None` when the interiors do not overlap;
/// touching boundaries count as separated.
pub fn penetration(a: &Obb, b: &Obb) -> Option<(Vec2, f64)> {
    let d = b.center - a.center;
    let mut best: Option<(Vec2, f64)> = None;
    for axis in [a.lat, a.fwd, b.lat, b.fwd] {
        let dist = d.dot(axis);
        let overlap = a.radius_on(axis) + b.radius_on(axis) - dist.abs();
        if overlap <= 0.0 {
            return None;
        }
        if best.is_none_or(|(_, o)| overlap < o) {
            let dir = if dist >= 0.0 { axis } else { -axis };
            best = Some((dir, overlap));
        }
    }
    best
}

/// The overlap predicate used throughout the hybrid planner.
#[inline]
pub fn overlaps(a: &Obb, b: &Obb) -> bool {
    penetration(a, b).is_some()
}
