//! Best-first search over hybrid states with one retained state per cell.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::dynamics::{angle_diff, Control, PoseSE2};
use super::scenario::Scenario;
use super::sim::{ContactModel, HybridWorldState, QuasiStaticPush, World};
use crate::error::{Error, Result};
use crate::search::Limits;

/// Cell of a pose: `floor(x/Δx), floor(y/Δy), floor(θ/Δθ)` with θ in `[-π, π)`.
fn pose_cell(p: &PoseSE2, res: &[f64; 3], out: &mut Vec<i64>) {
    out.push((p.x / res[0]).floor() as i64);
    out.push((p.y / res[1]).floor() as i64);
    out.push((p.theta / res[2]).floor() as i64);
}

/// Pruning key: the robot's cell followed by each object's cell, in order.
pub fn hybrid_cell(state: &HybridWorldState, scenario: &Scenario) -> Vec<i64> {
    let mut key = Vec::with_capacity(3 * (1 + state.objects.len()));
    pose_cell(&state.robot, &scenario.resolution, &mut key);
    for o in &state.objects {
        pose_cell(o, &scenario.resolution, &mut key);
    }
    key
}

pub fn at_goal(pose: &PoseSE2, scenario: &Scenario) -> bool {
    let [gx, gy, gt] = scenario.goal;
    let [ex, ey, et] = scenario.goal_tolerance;
    (pose.x - gx).abs() <= ex && (pose.y - gy).abs() <= ey && angle_diff(pose.theta, gt).abs() <= et
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: HybridWorldState,
    pub steps: Vec<(Control, HybridWorldState)>,
    /// `dt` times the number of primitives.
    pub arrival_time: f64,
}

impl Trajectory {
    pub fn controls(&self) -> Vec<Control> {
        self.steps.iter().map(|(u, _)| *u).collect()
    }

    /// Number of primitives that moved at least one object.
    pub fn pushes(&self) -> usize {
        let mut prev = &self.start;
        let mut n = 0;
        for (_, s) in &self.steps {
            if s.objects != prev.objects {
                n += 1;
            }
            prev = s;
        }
        n
    }

    pub fn final_state(&self) -> &HybridWorldState {
        self.steps.last().map(|(_, s)| s).unwrap_or(&self.start)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HybridStats {
    pub expansions: u64,
    pub generated: u64,
    pub pruned: u64,
    pub invalid: u64,
    pub cells: u64,
    pub wall_time: Duration,
    pub timed_out: bool,
}

#[derive(Clone, Debug)]
pub struct HybridResult {
    pub trajectory: Option<Trajectory>,
    pub stats: HybridStats,
}

struct Node {
    state: HybridWorldState,
    steps: u32,
    parent: u32,
    control: u32,
}

struct Open {
    f: f64,
    node: u32,
}

impl PartialEq for Open {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Open {
    // max-heap: smaller f first, then the most recently generated node
    fn cmp(&self, o: &Self) -> Ordering {
        o.f.total_cmp(&self.f).then(self.node.cmp(&o.node))
    }
}

/// Plan with the reference push model.
pub fn solve_hybrid(scenario: &Scenario, limits: &Limits) -> Result<HybridResult> {
    solve_hybrid_with(scenario, &QuasiStaticPush::default(), limits)
}

pub fn solve_hybrid_with<M: ContactModel>(scenario: &Scenario, model: &M, limits: &Limits) -> Result<HybridResult> {
    scenario.validate()?;
    let world = World::new(scenario);
    let start = HybridWorldState::initial(scenario);
    world
        .overlap_free(&start.robot, &start.objects)
        .map_err(|e| Error::InvalidScenario(format!("start state is not collision-free: {e}")))?;

    let t0 = Instant::now();
    let controls = scenario.control_set();
    let vmax = scenario.max_speed();
    let [gx, gy, _] = scenario.goal;
    let h = |p: &PoseSE2| ((p.x - gx).powi(2) + (p.y - gy).powi(2)).sqrt() / vmax;

    let mut stats = HybridStats::default();
    let mut best: FxHashMap<Vec<i64>, u32> = FxHashMap::default();
    let mut nodes = vec![Node {
        state: start,
        steps: 0,
        parent: u32::MAX,
        control: 0,
    }];
    best.insert(hybrid_cell(&nodes[0].state, scenario), 0);
    let mut open = BinaryHeap::new();
    open.push(Open {
        f: h(&nodes[0].state.robot),
        node: 0,
    });

    let mut found = None;
    while let Some(Open { node, .. }) = open.pop() {
        if limits.time.is_some_and(|t| t0.elapsed() >= t)
            || limits.expansions.is_some_and(|e| stats.expansions >= e)
            || limits.states.is_some_and(|s| best.len() as u64 >= s)
        {
            stats.timed_out = true;
            break;
        }
        let cur = &nodes[node as usize];
        let key = hybrid_cell(&cur.state, scenario);
        if best.get(&key).is_some_and(|&g| g < cur.steps) {
            // a cheaper state took this cell after this one was queued
            continue;
        }
        if at_goal(&cur.state.robot, scenario) {
            found = Some(node);
            break;
        }
        stats.expansions += 1;
        let steps = cur.steps + 1;
        let parent_state = cur.state.clone();
        for (ci, u) in controls.iter().enumerate() {
            let Some(next) = world.step(model, &parent_state, *u, scenario.dt) else {
                stats.invalid += 1;
                continue;
            };
            stats.generated += 1;
            let key = hybrid_cell(&next, scenario);
            match best.get_mut(&key) {
                Some(g) if *g <= steps => {
                    stats.pruned += 1;
                    continue;
                }
                Some(g) => *g = steps,
                None => {
                    best.insert(key, steps);
                }
            }
            let f = f64::from(steps) * scenario.dt + h(&next.robot);
            let id = nodes.len() as u32;
            nodes.push(Node {
                state: next,
                steps,
                parent: node,
                control: ci as u32,
            });
            open.push(Open { f, node: id });
        }
    }
    stats.cells = best.len() as u64;
    stats.wall_time = t0.elapsed();

    let trajectory = found.map(|goal| {
        let mut steps = Vec::new();
        let mut i = goal;
        while nodes[i as usize].parent != u32::MAX {
            let n = &nodes[i as usize];
            steps.push((controls[n.control as usize], n.state.clone()));
            i = n.parent;
        }
        steps.reverse();
        Trajectory {
            start: nodes[0].state.clone(),
            arrival_time: steps.len() as f64 * scenario.dt,
            steps,
        }
    });
    Ok(HybridResult { trajectory, stats })
}

/// Re-simulate a trajectory's controls and check it end to end: every stored
/// state reproduced bit-exactly, no overlap at any substep, goal reached.
pub fn verify_trajectory(scenario: &Scenario, traj: &Trajectory) -> std::result::Result<(), String> {
    let world = World::new(scenario);
    let model = QuasiStaticPush::default();
    if traj.start != HybridWorldState::initial(scenario) {
        return Err("trajectory does not begin at the scenario start".into());
    }
    world.overlap_free(&traj.start.robot, &traj.start.objects)?;
    let mut s = traj.start.clone();
    for (k, (u, stored)) in traj.steps.iter().enumerate() {
        let subs = world
            .step_traced(&model, &s, *u, scenario.dt)
            .ok_or_else(|| format!("step {k}: primitive is invalid on replay"))?;
        for (j, sub) in subs.iter().enumerate() {
            world
                .overlap_free(&sub.robot, &sub.objects)
                .map_err(|e| format!("step {k} substep {j}: {e}"))?;
        }
        s = subs.into_iter().last().expect("at least one substep");
        if &s != stored {
            return Err(format!("step {k}: replayed state differs from the stored one"));
        }
    }
    let expected = traj.steps.len() as f64 * scenario.dt;
    if traj.arrival_time != expected {
        return Err(format!("arrival time {} but {} primitives", traj.arrival_time, traj.steps.len()));
    }
    if !at_goal(&s.robot, scenario) {
        return Err("final robot pose is outside the goal tolerance".into());
    }
    Ok(())
}
