//! Forward simulation of one motion primitive, with pluggable push physics.

use serde::{Deserialize, Serialize};

use super::dynamics::{integrate_unicycle, Control, PoseSE2};
use super::geometry::{penetration, Obb, Vec2};
use super::scenario::Scenario;

/// Robot pose plus the pose of every object, indexed as in the scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridWorldState {
    pub robot: PoseSE2,
    pub objects: Vec<PoseSE2>,
}

impl HybridWorldState {
    pub fn initial(scenario: &Scenario) -> Self {
        HybridWorldState {
            robot: scenario.start_pose(),
            objects: scenario.objects.iter().map(|o| o.pose()).collect(),
        }
    }
}

/// Robot–object interaction. Implementations must be deterministic and keep
/// no state between calls.
pub trait ContactModel {
    /// The robot has just moved to `robot` under control `u`. Update
    /// `objects` so nothing overlaps, or return `false` if that is impossible.
    fn resolve(&self, world: &World<'_>, robot: &PoseSE2, u: Control, objects: &mut [PoseSE2]) -> bool;
}

/// Quasi-static positional pushing: no mass, friction or restitution.
/// An overlapped object is moved out along the minimum-penetration direction
/// and turned a little about its centre depending on where it was hit.
#[derive(Clone, Copy, Debug)]
pub struct QuasiStaticPush {
    pub max_iters: usize,
    /// Extra clearance added to every correction so resolved boxes do not touch.
    pub slop: f64,
    /// Largest rotation applied per correction (rad).
    pub max_turn: f64,
}

impl Default for QuasiStaticPush {
    fn default() -> Self {
        QuasiStaticPush {
            max_iters: 20,
            slop: 1e-6,
            max_turn: 0.2,
        }
    }
}

fn contact_point(a: &Obb, b: &Obb) -> Vec2 {
    let mut sum = Vec2::default();
    let mut n = 0.0;
    for p in a.corners().into_iter().filter(|p| b.contains(*p)) {
        sum = sum + p;
        n += 1.0;
    }
    for p in b.corners().into_iter().filter(|p| a.contains(*p)) {
        sum = sum + p;
        n += 1.0;
    }
    if n == 0.0 {
        (a.center + b.center) * 0.5
    } else {
        sum * (1.0 / n)
    }
}

impl QuasiStaticPush {
    /// Move `pose` (box `ob`) out of `pusher` along `n` by `depth`.
    fn displace(&self, pose: &PoseSE2, pusher: &Obb, ob: &Obb, n: Vec2, depth: f64) -> PoseSE2 {
        let c = contact_point(pusher, ob);
        let r = c - ob.center;
        let rr = ob.half_diagonal();
        // headings grow clockwise, so a counter-clockwise torque lowers theta
        let turn = (-r.cross(n) * depth / (rr * rr)).clamp(-self.max_turn, self.max_turn);
        let shift = n * (depth + self.slop);
        PoseSE2::new(pose.x + shift.x, pose.y + shift.y, pose.theta + turn)
    }
}

impl ContactModel for QuasiStaticPush {
    fn resolve(&self, world: &World<'_>, robot: &PoseSE2, u: Control, objects: &mut [PoseSE2]) -> bool {
        let sc = world.scenario;
        let rb = sc.robot_obb(robot);
        let rc = Vec2::new(robot.x, robot.y);
        for _ in 0..self.max_iters {
            let mut moved = false;
            for (i, pose) in objects.iter_mut().enumerate() {
                let ob = sc.object_obb(i, pose);
                // a box can be turned back into the robot by a later correction,
                // so settle each one against the robot before moving on
                let Some((n, depth)) = penetration(&rb, &ob) else {
                    continue;
                };
                if u.v < 0.0 {
                    return false;
                }
                let next = self.displace(pose, &rb, &ob, n, depth);
                if !world.object_clear(i, &next) {
                    return false;
                }
                *pose = next;
                moved = true;
            }
            for i in 0..objects.len() {
                for j in (i + 1)..objects.len() {
                    let a = sc.object_obb(i, &objects[i]);
                    let b = sc.object_obb(j, &objects[j]);
                    let Some((n, depth)) = penetration(&a, &b) else {
                        continue;
                    };
                    // the box farther from the robot is the one being shoved
                    let da = (a.center - rc).norm();
                    let db = (b.center - rc).norm();
                    let (k, next) = if db >= da {
                        (j, self.displace(&objects[j], &a, &b, n, depth))
                    } else {
                        (i, self.displace(&objects[i], &b, &a, -n, depth))
                    };
                    if !world.object_clear(k, &next) {
                        return false;
                    }
                    objects[k] = next;
                    moved = true;
                }
            }
            if !moved {
                return true;
            }
        }
        world.overlap_free(robot, objects).is_ok()
    }
}

/// A scenario with its static geometry prepared for repeated simulation.
pub struct World<'a> {
    pub scenario: &'a Scenario,
    statics: Vec<Obb>,
}

impl<'a> World<'a> {
    pub fn new(scenario: &'a Scenario) -> Self {
        World {
            scenario,
            statics: scenario.static_obbs(),
        }
    }

    /// Robot footprint inside the bounds and clear of static geometry.
    pub fn robot_clear(&self, robot: &PoseSE2) -> bool {
        let rb = self.scenario.robot_obb(robot);
        self.scenario.inside(&rb) && self.statics.iter().all(|s| penetration(s, &rb).is_none())
    }

    /// Object `i` inside the bounds and clear of static geometry.
    pub fn object_clear(&self, i: usize, pose: &PoseSE2) -> bool {
        let ob = self.scenario.object_obb(i, pose);
        self.scenario.inside(&ob) && self.statics.iter().all(|s| penetration(s, &ob).is_none())
    }

    /// Full validity check of a configuration; the error names the violation.
    pub fn overlap_free(&self, robot: &PoseSE2, objects: &[PoseSE2]) -> Result<(), String> {
        let sc = self.scenario;
        if objects.len() != sc.objects.len() {
            return Err(format!("expected {} objects, got {}", sc.objects.len(), objects.len()));
        }
        if !self.robot_clear(robot) {
            return Err("robot outside bounds or in a static obstacle".into());
        }
        let rb = sc.robot_obb(robot);
        let boxes: Vec<Obb> = objects.iter().enumerate().map(|(i, p)| sc.object_obb(i, p)).collect();
        for (i, ob) in boxes.iter().enumerate() {
            if !self.object_clear(i, &objects[i]) {
                return Err(format!("object {i} outside bounds or in a static obstacle"));
            }
            if penetration(&rb, ob).is_some() {
                return Err(format!("robot overlaps object {i}"));
            }
            for (j, other) in boxes.iter().enumerate().skip(i + 1) {
                if penetration(ob, other).is_some() {
                    return Err(format!("objects {i} and {j} overlap"));
                }
            }
        }
        Ok(())
    }

    /// Run one primitive, returning the state after every substep.
    pub fn step_traced<M: ContactModel>(
        &self,
        model: &M,
        state: &HybridWorldState,
        u: Control,
        dt: f64,
    ) -> Option<Vec<HybridWorldState>> {
        let n = self.scenario.substeps.max(1);
        let h = dt / f64::from(n);
        let mut robot = state.robot;
        let mut objects = state.objects.clone();
        let mut out = Vec::with_capacity(n as usize);
        for _ in 0..n {
            robot = integrate_unicycle(robot, u, h);
            if !self.robot_clear(&robot) || !model.resolve(self, &robot, u, &mut objects) {
                return None;
            }
            out.push(HybridWorldState {
                robot,
                objects: objects.clone(),
            });
        }
        Some(out)
    }

    pub fn step<M: ContactModel>(
        &self,
        model: &M,
        state: &HybridWorldState,
        u: Control,
        dt: f64,
    ) -> Option<HybridWorldState> {
        self.step_traced(model, state, u, dt).and_then(|mut v| v.pop())
    }
}

/// One motion primitive under the reference push model.
pub fn simulate_step(state: &HybridWorldState, u: Control, dt: f64, scenario: &Scenario) -> Option<HybridWorldState> {
    World::new(scenario).step(&QuasiStaticPush::default(), state, u, dt)
}

/// As [`simulate_step`], keeping every substep.
pub fn simulate_step_traced(
    state: &HybridWorldState,
    u: Control,
    dt: f64,
    scenario: &Scenario,
) -> Option<Vec<HybridWorldState>> {
    World::new(scenario).step_traced(&QuasiStaticPush::default(), state, u, dt)
}
