//! Per-configuration aggregates over run records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::suite::{RunOutcome, RunRecord, SolverMode};

/// One row per (map, mode, fraction). Medians come first; when any run timed
/// out its wall time and expansions are censored at the limit and
/// `censored` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub map: String,
    pub mode: SolverMode,
    pub fraction: f64,
    pub runs: usize,
    pub solved: usize,
    pub infeasible: usize,
    pub timeouts: usize,
    pub solve_rate: f64,
    pub median_time_s: f64,
    pub mean_time_s: f64,
    pub median_expansions: f64,
    pub mean_expansions: f64,
    pub median_solutions: f64,
    pub mean_solutions: f64,
    pub censored: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub rows: Vec<Aggregate>,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn aggregate(key: &(String, SolverMode, u64), group: &[&RunRecord]) -> Aggregate {
    let count = |o: RunOutcome| group.iter().filter(|r| r.outcome == o).count();
    let col = |f: fn(&RunRecord) -> f64| group.iter().map(|r| f(r)).collect::<Vec<_>>();
    let times = col(|r| r.wall_time_s);
    let exps = col(|r| r.expansions as f64);
    let sols = col(|r| r.solutions as f64);
    let solved = count(RunOutcome::Solved);
    let timeouts = count(RunOutcome::Timeout);
    Aggregate {
        map: key.0.clone(),
        mode: key.1,
        fraction: f64::from_bits(key.2),
        runs: group.len(),
        solved,
        infeasible: count(RunOutcome::Infeasible),
        timeouts,
        solve_rate: solved as f64 / group.len() as f64,
        median_time_s: median(times.clone()),
        mean_time_s: mean(&times),
        median_expansions: median(exps.clone()),
        mean_expansions: mean(&exps),
        median_solutions: median(sols.clone()),
        mean_solutions: mean(&sols),
        censored: timeouts > 0,
    }
}

/// Group records by configuration and aggregate each group.
pub fn emit_report(records: &[RunRecord]) -> Report {
    // fractions are grouped by bit pattern: they come verbatim from the suite
    let mut groups: BTreeMap<(String, SolverMode, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.map.clone(), r.mode, r.fraction.to_bits()))
            .or_default()
            .push(r);
    }
    let mut rows: Vec<Aggregate> = groups.iter().map(|(k, g)| aggregate(k, g)).collect();
    rows.sort_by(|a, b| (&a.map, a.mode).cmp(&(&b.map, b.mode)).then(a.fraction.total_cmp(&b.fraction)));
    Report { rows }
}

impl Report {
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        if self.rows.is_empty() {
            w.write_record(["map", "mode", "fraction", "runs"])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        if self.rows.is_empty() {
            s.push_str("no runs\n");
            return s;
        }
        for r in &self.rows {
            let config = match r.mode {
                SolverMode::Hybrid => format!("{} hybrid", r.map),
                m => format!("{} {} {:.0}%", r.map, m.as_str(), r.fraction * 100.0),
            };
            let _ = writeln!(
                s,
                "{config}: {}/{} solved ({} infeasible, {} timeout), median {:.3} s / {} expansions, mean {:.3} s / {:.1} expansions, median solutions {}{}",
                r.solved,
                r.runs,
                r.infeasible,
                r.timeouts,
                r.median_time_s,
                r.median_expansions,
                r.mean_time_s,
                r.mean_expansions,
                r.median_solutions,
                if r.censored { " [censored by timeouts]" } else { "" }
            );
        }
        s
    }
}
