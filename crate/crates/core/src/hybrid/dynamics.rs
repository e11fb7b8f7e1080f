use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// Wrap an angle into `[-π, π)`.
#[inline]
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta - TAU * ((theta + PI) / TAU).floor();
    // guard the rounding edge where t lands exactly on +π
    if t >= PI {
        t - TAU
    } else {
        t
    }
}

/// Shortest signed difference `a - b`, in `[-π, π)`.
#[inline]
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(a - b)
}

/// Planar pose; `theta` is the heading measured from the +y axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoseSE2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl PoseSE2 {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        PoseSE2 {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub v: f64,
    pub omega: f64,
}

impl Control {
    pub const fn new(v: f64, omega: f64) -> Self {
        Control { v, omega }
    }
}

#[inline]
fn f_dyn(theta: f64, u: Control) -> [f64; 3] {
    [u.v * theta.sin(), u.v * theta.cos(), u.omega]
}

/// One RK4 step of `(ẋ, ẏ, θ̇) = (v sin θ, v cos θ, ω)`.
pub fn integrate_unicycle(pose: PoseSE2, u: Control, dt: f64) -> PoseSE2 {
    let th = pose.theta;
    let k1 = f_dyn(th, u);
    let k2 = f_dyn(th + 0.5 * dt * k1[2], u);
    let k3 = f_dyn(th + 0.5 * dt * k2[2], u);
    let k4 = f_dyn(th + dt * k3[2], u);
    let step = |i: usize| dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    PoseSE2::new(pose.x + step(0), pose.y + step(1), pose.theta + step(2))
}
