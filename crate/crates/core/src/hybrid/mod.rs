//! Planning in continuous space: SE(2) poses for the robot and for
//! rectangular objects, unicycle motion primitives and push simulation.

pub mod dynamics;
pub mod geometry;
pub mod planner;
pub mod scenario;
pub mod sim;

pub use dynamics::{angle_diff, integrate_unicycle, normalize_angle, Control, PoseSE2};
pub use geometry::{overlaps, penetration, Obb, Vec2};
pub use planner::{at_goal, hybrid_cell, solve_hybrid, solve_hybrid_with, verify_trajectory, HybridResult, HybridStats, Trajectory};
pub use scenario::{RectSpec, Scenario, DEFAULT_CONTROLS};
pub use sim::{simulate_step, simulate_step_traced, ContactModel, HybridWorldState, QuasiStaticPush, World};
