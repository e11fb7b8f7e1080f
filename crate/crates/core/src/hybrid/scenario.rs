//! Continuous-space planning problems and their TOML file format.
//!
//! ```toml
//! bounds = [0.0, 0.0, 4.0, 12.0]      # xmin, ymin, xmax, ymax
//! robot_size = [1.0, 1.0]
//! start = [2.0, 1.0, 0.0]             # x, y, heading from +y
//! goal = [2.0, 7.0, 0.0]
//! goal_tolerance = [0.25, 0.25, 3.14159]
//! resolution = [0.2, 0.2, 0.4]
//! dt = 1.0
//! substeps = 10
//! controls = [[1.0, 0.5], [1.0, -0.5], [1.0, 0.0], [-0.2, 0.0]]
//!
//! [[statics]]
//! center = [0.6, 4.0]
//! size = [1.2, 8.0]
//!
//! [[objects]]
//! center = [2.0, 4.0]
//! size = [0.8, 0.8]
//! theta = 0.0
//! ```
//!
//! Rectangle `size` is `[extent along x, extent along y]` at heading 0.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::dynamics::{Control, PoseSE2};
use super::geometry::{Obb, Vec2};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectSpec {
    pub center: [f64; 2],
    pub size: [f64; 2],
    #[serde(default)]
    pub theta: f64,
}

impl RectSpec {
    pub fn new(center: [f64; 2], size: [f64; 2], theta: f64) -> Self {
        RectSpec { center, size, theta }
    }

    pub fn obb(&self) -> Obb {
        Obb::new(Vec2::new(self.center[0], self.center[1]), self.size, self.theta)
    }

    pub fn pose(&self) -> PoseSE2 {
        PoseSE2::new(self.center[0], self.center[1], self.theta)
    }
}

/// Control set used when a scenario does not list one.
pub const DEFAULT_CONTROLS: [[f64; 2]; 8] = [
    [1.0, 0.5],
    [1.0, -0.5],
    [1.0, 0.0],
    [-0.2, 0.0],
    [1.0, 0.25],
    [1.0, -0.25],
    [0.0, 0.5],
    [0.0, -0.5],
];

fn default_robot_size() -> [f64; 2] {
    [1.0, 1.0]
}

fn default_tolerance() -> [f64; 3] {
    [0.25, 0.25, PI]
}

fn default_resolution() -> [f64; 3] {
    [0.2, 0.2, 0.4]
}

fn default_controls() -> Vec<[f64; 2]> {
    DEFAULT_CONTROLS.to_vec()
}

fn default_dt() -> f64 {
    1.0
}

fn default_substeps() -> u32 {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// `[xmin, ymin, xmax, ymax]`
    pub bounds: [f64; 4],
    #[serde(default = "default_robot_size")]
    pub robot_size: [f64; 2],
    pub start: [f64; 3],
    pub goal: [f64; 3],
    #[serde(default = "default_tolerance")]
    pub goal_tolerance: [f64; 3],
    #[serde(default = "default_resolution")]
    pub resolution: [f64; 3],
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_substeps")]
    pub substeps: u32,
    #[serde(default = "default_controls")]
    pub controls: Vec<[f64; 2]>,
    #[serde(default)]
    pub statics: Vec<RectSpec>,
    #[serde(default)]
    pub objects: Vec<RectSpec>,
}

impl Scenario {
    /// Scenario with default robot, tolerances, resolution, controls and timing.
    pub fn new(bounds: [f64; 4], start: [f64; 3], goal: [f64; 3]) -> Self {
        Scenario {
            bounds,
            robot_size: default_robot_size(),
            start,
            goal,
            goal_tolerance: default_tolerance(),
            resolution: default_resolution(),
            dt: default_dt(),
            substeps: default_substeps(),
            controls: default_controls(),
            statics: Vec::new(),
            objects: Vec::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::InvalidScenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenarios always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScenario(m.to_string()));
        let [x0, y0, x1, y1] = self.bounds;
        if x0.partial_cmp(&x1) != Some(std::cmp::Ordering::Less) || y0.partial_cmp(&y1) != Some(std::cmp::Ordering::Less) {
            return bad("bounds must satisfy xmin < xmax and ymin < ymax");
        }
        if self.resolution.iter().any(|r| r.is_nan() || *r <= 0.0) {
            return bad("cell resolution must be strictly positive");
        }
        if self.goal_tolerance.iter().any(|r| r.is_nan() || *r < 0.0) {
            return bad("goal tolerance must be non-negative");
        }
        if self.controls.is_empty() {
            return bad("control set must not be empty");
        }
        if self.dt.is_nan() || self.dt <= 0.0 {
            return bad("dt must be positive");
        }
        if self.substeps == 0 {
            return bad("substeps must be at least 1");
        }
        if self.controls.iter().all(|c| c[0] == 0.0) {
            return bad("at least one control must translate the robot");
        }
        let sizes = std::iter::once(&self.robot_size)
            .chain(self.statics.iter().map(|r| &r.size))
            .chain(self.objects.iter().map(|r| &r.size));
        for s in sizes {
            if s.iter().any(|v| v.is_nan() || *v <= 0.0) {
                return bad("rectangle sizes must be positive");
            }
        }
        Ok(())
    }

    pub fn start_pose(&self) -> PoseSE2 {
        PoseSE2::new(self.start[0], self.start[1], self.start[2])
    }

    pub fn goal_pose(&self) -> PoseSE2 {
        PoseSE2::new(self.goal[0], self.goal[1], self.goal[2])
    }

    pub fn control_set(&self) -> Vec<Control> {
        self.controls.iter().map(|c| Control::new(c[0], c[1])).collect()
    }

    pub fn max_speed(&self) -> f64 {
        self.controls.iter().map(|c| c[0].abs()).fold(0.0, f64::max)
    }

    pub fn robot_obb(&self, pose: &PoseSE2) -> Obb {
        Obb::new(Vec2::new(pose.x, pose.y), self.robot_size, pose.theta)
    }

    pub fn object_obb(&self, index: usize, pose: &PoseSE2) -> Obb {
        Obb::new(Vec2::new(pose.x, pose.y), self.objects[index].size, pose.theta)
    }

    pub fn static_obbs(&self) -> Vec<Obb> {
        self.statics.iter().map(RectSpec::obb).collect()
    }

    /// Rectangle lies inside the workspace bounds.
    pub fn inside(&self, r: &Obb) -> bool {
        let (lo, hi) = r.aabb();
        let [x0, y0, x1, y1] = self.bounds;
        lo.x >= x0 && lo.y >= y0 && hi.x <= x1 && hi.y <= y1
    }
}
