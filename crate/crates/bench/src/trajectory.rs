//! Columnar trajectory output for plotting.
//!
//! Columns: `step, time, v, omega, robot_x, robot_y, robot_theta`, then
//! `obj{i}_x, obj{i}_y, obj{i}_theta` for every object. Row 0 is the start
//! state with empty control fields; row k holds the control applied during
//! primitive k and the state it ended in.

use std::io::Write;

use anyhow::Result;
use pamo::hybrid::{HybridWorldState, Trajectory};

pub fn header(objects: usize) -> Vec<String> {
    let mut h: Vec<String> = ["step", "time", "v", "omega", "robot_x", "robot_y", "robot_theta"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for i in 0..objects {
        for c in ["x", "y", "theta"] {
            h.push(format!("obj{i}_{c}"));
        }
    }
    h
}

fn row(step: usize, time: f64, u: Option<(f64, f64)>, s: &HybridWorldState) -> Vec<String> {
    let mut r = vec![step.to_string(), time.to_string()];
    match u {
        Some((v, w)) => r.extend([v.to_string(), w.to_string()]),
        None => r.extend([String::new(), String::new()]),
    }
    for p in std::iter::once(&s.robot).chain(&s.objects) {
        r.extend([p.x.to_string(), p.y.to_string(), p.theta.to_string()]);
    }
    r
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, dt: f64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(traj.start.objects.len()))?;
    w.write_record(row(0, 0.0, None, &traj.start))?;
    for (k, (u, s)) in traj.steps.iter().enumerate() {
        w.write_record(row(k + 1, (k + 1) as f64 * dt, Some((u.v, u.omega)), s))?;
    }
    w.flush()?;
    Ok(())
}
