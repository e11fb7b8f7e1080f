//! Benchmark suites: a sweep over maps, object fractions and seeds, run under
//! a per-instance time limit with results streamed to CSV.
//!
//! ```toml
//! mode = "rc"               # mo | rc | hybrid
//! k_push = 3                # rc only; omit for an unlimited budget
//! time_limit = 60.0         # seconds per instance
//! workers = 2
//! fractions = [0.1, 0.2, 0.3]
//! seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
//! output = "results/empty8.csv"
//!
//! [[maps]]
//! path = "../maps/empty-8-8.map"
//! start = [0, 0]            # optional, see `corner_endpoints`
//! goal = [7, 7]
//! ```
//!
//! Relative paths resolve against the suite file's directory. In `hybrid`
//! mode each `maps` entry names a scenario file and fractions and seeds are
//! ignored.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use pamo::grid::instance::generate_instance_shared;
use pamo::hybrid::{solve_hybrid, verify_trajectory, Scenario};
use pamo::{parse_map, replay, solve_mo, solve_rc, Budget, Cell, GridMap, Instance, Limits, SearchResult};
use serde::{Deserialize, Serialize};

/// Default memory guard for grid searches, in stored states.
pub const DEFAULT_MAX_STATES: u64 = 8_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    Mo,
    Rc,
    Hybrid,
}

impl SolverMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMode::Mo => "mo",
            SolverMode::Rc => "rc",
            SolverMode::Hybrid => "hybrid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub path: PathBuf,
    #[serde(default)]
    pub start: Option<[u16; 2]>,
    #[serde(default)]
    pub goal: Option<[u16; 2]>,
}

fn default_time_limit() -> f64 {
    60.0
}

fn default_workers() -> usize {
    1
}

fn default_max_states() -> u64 {
    DEFAULT_MAX_STATES
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSuite {
    pub mode: SolverMode,
    #[serde(default)]
    pub k_push: Option<f64>,
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_max_states")]
    pub max_states: u64,
    #[serde(default)]
    pub fractions: Vec<f64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    pub maps: Vec<MapEntry>,
    pub output: PathBuf,
    /// If set, every generated instance is also written here as a document.
    #[serde(default)]
    pub instances_dir: Option<PathBuf>,
}

impl BenchSuite {
    /// Parse a suite and make its relative paths absolute against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut s: BenchSuite = toml::from_str(text).context("invalid suite file")?;
        for m in &mut s.maps {
            m.path = base.join(&m.path);
        }
        s.output = base.join(&s.output);
        s.instances_dir = s.instances_dir.map(|d| base.join(d));
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read suite {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time_limit > 0.0 && self.time_limit.is_finite()) {
            bail!("time_limit must be a positive number of seconds");
        }
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();
        if seeds.windows(2).any(|w| w[0] == w[1]) {
            bail!("seeds must be distinct");
        }
        if let Some(f) = self.fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
            bail!("object fraction {f} not in [0, 1]");
        }
        if self.k_push.is_some_and(|k| k.is_nan() || k < 0.0) {
            bail!("k_push must be non-negative");
        }
        if self.workers == 0 {
            bail!("workers must be at least 1");
        }
        Ok(())
    }

    fn limits(&self) -> Limits {
        Limits {
            time: Some(Duration::from_secs_f64(self.time_limit)),
            expansions: None,
            states: Some(self.max_states),
        }
    }

    fn budget(&self) -> Budget {
        self.k_push.map_or(Budget::Unlimited, Budget::Finite)
    }
}

/// Start and goal used when a suite does not give them: the free cells nearest
/// the top-left and bottom-right corners.
pub fn corner_endpoints(map: &GridMap) -> Option<(Cell, Cell)> {
    let start = map.nearest_free(Cell::new(0, 0))?;
    let goal = map.nearest_free(Cell::new(map.width() - 1, map.height() - 1))?;
    (start != goal).then_some((start, goal))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunOutcome {
    Solved,
    Infeasible,
    Timeout,
}

/// One line of the records CSV. Column order is part of the file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub map: String,
    pub mode: SolverMode,
    pub fraction: f64,
    pub seed: u64,
    pub objects: usize,
    pub outcome: RunOutcome,
    pub wall_time_s: f64,
    pub expansions: u64,
    pub generated: u64,
    pub solutions: usize,
    /// `t:p` pairs joined by `;`, empty unless solved.
    pub costs: String,
    /// Every reported solution replayed to its stated cost.
    pub verified: bool,
}

/// Columns of the records CSV, version `pamo.records/1`.
pub const RECORD_COLUMNS: [&str; 13] = [
    "instance",
    "map",
    "mode",
    "fraction",
    "seed",
    "objects",
    "outcome",
    "wall_time_s",
    "expansions",
    "generated",
    "solutions",
    "costs",
    "verified",
];

enum Job {
    Grid {
        map: usize,
        fraction: f64,
        seed: u64,
    },
    Hybrid {
        map: usize,
    },
}

enum Loaded {
    Grid { map: Arc<GridMap>, start: Cell, goal: Cell },
    Hybrid(Box<Scenario>),
}

fn map_label(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn instance_id(map: &str, fraction: f64, seed: u64) -> String {
    format!("{map}_f{fraction}_s{seed}")
}

fn load_all(suite: &BenchSuite) -> Result<Vec<Loaded>> {
    suite
        .maps
        .iter()
        .map(|m| {
            let text = fs::read_to_string(&m.path).with_context(|| format!("cannot read {}", m.path.display()))?;
            if suite.mode == SolverMode::Hybrid {
                let sc = Scenario::from_toml(&text).with_context(|| format!("in {}", m.path.display()))?;
                return Ok(Loaded::Hybrid(Box::new(sc)));
            }
            let map = parse_map(&text).with_context(|| format!("in {}", m.path.display()))?;
            let (start, goal) = match (m.start, m.goal) {
                (Some(s), Some(g)) => (Cell::new(s[0], s[1]), Cell::new(g[0], g[1])),
                (None, None) => corner_endpoints(&map)
                    .with_context(|| format!("{} has no two free corner cells", m.path.display()))?,
                _ => bail!("{}: give both start and goal or neither", m.path.display()),
            };
            for c in [start, goal] {
                if !map.is_free(c) {
                    bail!("{}: endpoint {c} is not a free cell", m.path.display());
                }
            }
            Ok(Loaded::Grid {
                map: Arc::new(map),
                start,
                goal,
            })
        })
        .collect()
}

fn grid_record(suite: &BenchSuite, inst: &Instance, id: String, map: String, fraction: f64, seed: u64, res: &SearchResult) -> RunRecord {
    let scale = inst.costs();
    let verified = res
        .solutions
        .iter()
        .all(|s| matches!(replay(inst, &s.actions), Ok((end, c)) if c == s.cost && end.robot() == inst.goal()));
    let outcome = if res.stats.timed_out {
        RunOutcome::Timeout
    } else if res.solutions.is_empty() {
        RunOutcome::Infeasible
    } else {
        RunOutcome::Solved
    };
    let costs = if outcome == RunOutcome::Solved {
        res.solutions
            .iter()
            .map(|s| {
                let [a, b] = scale.real_pair(s.cost);
                format!("{a}:{b}")
            })
            .collect::<Vec<_>>()
            .join(";")
    } else {
        String::new()
    };
    RunRecord {
        instance: id,
        map,
        mode: suite.mode,
        fraction,
        seed,
        objects: inst.objects().len(),
        outcome,
        wall_time_s: res.stats.wall_time.as_secs_f64(),
        expansions: res.stats.expansions,
        generated: res.stats.generated,
        solutions: res.solutions.len(),
        costs,
        verified,
    }
}

fn run_job(suite: &BenchSuite, loaded: &[Loaded], job: &Job) -> Result<RunRecord> {
    match *job {
        Job::Grid { map, fraction, seed } => {
            let Loaded::Grid {
                map: grid,
                start,
                goal,
            } = &loaded[map]
            else {
                unreachable!("grid job on a scenario")
            };
            let label = map_label(&suite.maps[map].path);
            let id = instance_id(&label, fraction, seed);
            let mut inst = generate_instance_shared(grid.clone(), fraction, *start, *goal, seed)
                .with_context(|| format!("generating {id}"))?;
            inst.map_path = suite.maps[map].path.to_string_lossy().into_owned();
            if let Some(dir) = &suite.instances_dir {
                fs::write(dir.join(format!("{id}.toml")), inst.to_document())?;
            }
            let res = match suite.mode {
                SolverMode::Mo => solve_mo(&inst, &suite.limits()),
                _ => solve_rc(&inst, suite.budget(), &suite.limits()),
            };
            Ok(grid_record(suite, &inst, id, label, fraction, seed, &res))
        }
        Job::Hybrid { map } => {
            let Loaded::Hybrid(sc) = &loaded[map] else {
                unreachable!("hybrid job on a grid map")
            };
            let label = map_label(&suite.maps[map].path);
            let res = solve_hybrid(sc, &suite.limits())?;
            let outcome = match (&res.trajectory, res.stats.timed_out) {
                (Some(_), _) => RunOutcome::Solved,
                (None, true) => RunOutcome::Timeout,
                (None, false) => RunOutcome::Infeasible,
            };
            let t = res.trajectory.as_ref();
            Ok(RunRecord {
                instance: label.clone(),
                map: label,
                mode: SolverMode::Hybrid,
                fraction: 0.0,
                seed: 0,
                objects: sc.objects.len(),
                outcome,
                wall_time_s: res.stats.wall_time.as_secs_f64(),
                expansions: res.stats.expansions,
                generated: res.stats.generated,
                solutions: usize::from(t.is_some()),
                costs: t.map(|t| format!("{}:{}", t.arrival_time, t.pushes())).unwrap_or_default(),
                verified: t.is_none_or(|t| verify_trajectory(sc, t).is_ok()),
            })
        }
    }
}

/// Run every instance of the suite. Records are appended to the output CSV as
/// they finish; the returned list is in suite order regardless of workers.
pub fn run_suite(suite: &BenchSuite) -> Result<Vec<RunRecord>> {
    run_suite_with(suite, |_| {})
}

/// As [`run_suite`], calling `progress` after each record is written.
pub fn run_suite_with(suite: &BenchSuite, progress: impl Fn(&RunRecord) + Sync) -> Result<Vec<RunRecord>> {
    suite.validate()?;
    let loaded = load_all(suite)?;
    let jobs: Vec<Job> = if suite.mode == SolverMode::Hybrid {
        (0..loaded.len()).map(|map| Job::Hybrid { map }).collect()
    } else {
        let mut v = Vec::new();
        for map in 0..loaded.len() {
            for &fraction in &suite.fractions {
                for &seed in &suite.seeds {
                    v.push(Job::Grid { map, fraction, seed });
                }
            }
        }
        v
    };

    if let Some(dir) = suite.output.parent() {
        fs::create_dir_all(dir)?;
    }
    if let Some(dir) = &suite.instances_dir {
        fs::create_dir_all(dir)?;
    }
    // header written by hand so even an empty suite produces one
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&suite.output)
        .with_context(|| format!("cannot write {}", suite.output.display()))?;
    writer.write_record(RECORD_COLUMNS)?;
    writer.flush()?;
    let writer = Mutex::new(writer);

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<RunRecord>>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    let workers = suite.workers.min(jobs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else {
                    break;
                };
                let rec = run_job(suite, &loaded, job).and_then(|r| {
                    let mut w = writer.lock().expect("record writer poisoned");
                    w.serialize(&r)?;
                    w.flush()?;
                    drop(w);
                    progress(&r);
                    Ok(r)
                });
                results.lock().expect("results poisoned")[i] = Some(rec);
            });
        }
    });
    results
        .into_inner()
        .expect("results poisoned")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

/// Read a records CSV written by [`run_suite`].
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    rd.deserialize().map(|r| r.map_err(Into::into)).collect()
}
