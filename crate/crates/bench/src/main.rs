use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pamo::grid::instance::{instance_map_path, load_instance_shared};
use pamo::grid::state::actions_to_string;
use pamo::hybrid::{solve_hybrid, Scenario};
use pamo::oracle::{oracle_pareto, oracle_rc, OracleConfig};
use pamo::search::report::ResultDoc;
use pamo::{generate_instance, parse_map, solve_mo, solve_rc, Budget, Cell, GridMap, Instance, Limits};
use pamo_bench::suite::{read_records, DEFAULT_MAX_STATES};
use pamo_bench::trajectory::write_trajectory;
use pamo_bench::{emit_report, run_suite_with, BenchSuite};
use serde::Serialize;

const SOLVED: u8 = 0;
const USAGE: u8 = 1;
const INFEASIBLE: u8 = 2;
const TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "pamo", version, about = "Path planning among movable obstacles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridMode {
    Mo,
    Rc,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Empty,
    Random,
    Rooms,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one grid instance and print the result as JSON.
    Solve {
        /// Map file; defaults to the instance's `map` field.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: GridMode,
        /// Push budget for `rc`; `inf` or omitted means unlimited.
        #[arg(long)]
        k_push: Option<f64>,
        /// Seconds.
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance on a map.
    Gen {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        fraction: f64,
        #[arg(long)]
        seed: u64,
        /// `X,Y`; defaults to the free cell nearest the top-left corner.
        #[arg(long, value_parser = parse_cell)]
        start: Option<Cell>,
        /// `X,Y`; defaults to the free cell nearest the bottom-right corner.
        #[arg(long, value_parser = parse_cell)]
        goal: Option<Cell>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a map file.
    Genmap {
        #[arg(long, value_enum)]
        kind: MapKind,
        #[arg(long)]
        width: u16,
        #[arg(long)]
        height: u16,
        /// Obstacle fraction for `random`.
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        /// Room side for `rooms`.
        #[arg(long, default_value_t = 7)]
        room: u16,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite and write records plus aggregates.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        /// Override the suite's worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Aggregate an existing records CSV.
    Report {
        #[arg(long)]
        records: PathBuf,
    },
    /// Plan in a continuous scenario; writes the trajectory as CSV.
    Hybrid {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 30.0)]
        time_limit: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive ground truth for a small instance.
    Oracle {
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k_push: Option<f64>,
        #[arg(long, default_value_t = 5_000_000)]
        max_states: usize,
    },
}

fn parse_cell(s: &str) -> Result<Cell, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got `{s}`"))?;
    let p = |v: &str| v.trim().parse::<u16>().map_err(|e| format!("bad coordinate `{v}`: {e}"));
    Ok(Cell::new(p(x)?, p(y)?))
}

fn budget(k: Option<f64>) -> Result<Budget> {
    match k {
        None => Ok(Budget::Unlimited),
        Some(k) if k.is_nan() || k < 0.0 => bail!("--k-push must be non-negative"),
        Some(k) if k.is_infinite() => Ok(Budget::Unlimited),
        Some(k) => Ok(Budget::Finite(k)),
    }
}

fn seconds(s: f64) -> Result<Duration> {
    if s.is_nan() || s <= 0.0 {
        bail!("time limit must be positive");
    }
    Ok(Duration::try_from_secs_f64(s)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_map(path: &Path) -> Result<GridMap> {
    parse_map(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Instance plus its map; without `--map` the instance's own `map` field is
/// resolved against the instance file's directory.
fn load(instance: &Path, map: Option<&Path>) -> Result<Instance> {
    let text = read(instance)?;
    let map_path = match map {
        Some(m) => m.to_path_buf(),
        None => {
            let rel = instance_map_path(&text)?;
            if rel.is_empty() {
                bail!("{} names no map; pass --map", instance.display());
            }
            instance.parent().unwrap_or(Path::new(".")).join(rel)
        }
    };
    let map = load_map(&map_path)?;
    load_instance_shared(&text, map.into()).with_context(|| format!("in {}", instance.display()))
}

#[derive(Serialize)]
struct OracleDoc {
    schema: &'static str,
    mode: &'static str,
    solutions: Vec<pamo::search::report::SolutionDoc>,
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Solve {
            map,
            instance,
            mode,
            k_push,
            time_limit,
            max_states,
            out,
        } => {
            let inst = load(&instance, map.as_deref())?;
            let limits = Limits {
                time: Some(seconds(time_limit)?),
                expansions: None,
                states: Some(max_states),
            };
            let (res, name, k) = match mode {
                GridMode::Mo => (solve_mo(&inst, &limits), "mo", None),
                GridMode::Rc => {
                    let b = budget(k_push)?;
                    let k = match b {
                        Budget::Finite(k) => Some(k),
                        Budget::Unlimited => None,
                    };
                    (solve_rc(&inst, b, &limits), "rc", k)
                }
            };
            let doc = ResultDoc::new(&res, inst.costs(), name, k);
            write_out(out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            Ok(if res.stats.timed_out {
                TIMEOUT
            } else if res.solutions.is_empty() {
                INFEASIBLE
            } else {
                SOLVED
            })
        }
        Cmd::Gen {
            map,
            fraction,
            seed,
            start,
            goal,
            out,
        } => {
            let grid = load_map(&map)?;
            let (s, g) = match (start, goal) {
                (Some(s), Some(g)) => (s, g),
                (s, g) => {
                    let (cs, cg) = pamo_bench::corner_endpoints(&grid).ok_or_else(|| anyhow!("map has no free corners"))?;
                    (s.unwrap_or(cs), g.unwrap_or(cg))
                }
            };
            let mut inst = generate_instance(grid, fraction, s, g, seed)?;
            inst.map_path = map_reference(&map, out.as_deref());
            write_out(out.as_deref(), &inst.to_document())?;
            Ok(SOLVED)
        }
        Cmd::Genmap {
            kind,
            width,
            height,
            density,
            room,
            seed,
            out,
        } => {
            if width == 0 || height == 0 {
                bail!("width and height must be positive");
            }
            let m = match kind {
                MapKind::Empty => GridMap::empty(width, height),
                MapKind::Random => GridMap::random(width, height, density, seed),
                MapKind::Rooms => GridMap::rooms(width, height, room, seed),
            };
            write_out(out.as_deref(), &m.to_text())?;
            Ok(SOLVED)
        }
        Cmd::Bench { suite, workers } => {
            let mut s = BenchSuite::load(&suite)?;
            if let Some(w) = workers {
                s.workers = w;
            }
            s.validate()?;
            let records = run_suite_with(&s, |r| {
                eprintln!("{} {:?} {:.3}s", r.instance, r.outcome, r.wall_time_s);
            })?;
            let report = emit_report(&records);
            let agg = s.output.with_extension("summary.csv");
            fs::write(&agg, report.to_csv()?)?;
            print!("{}", report.summary());
            eprintln!("records: {}\naggregates: {}", s.output.display(), agg.display());
            Ok(SOLVED)
        }
        Cmd::Report { records } => {
            let report = emit_report(&read_records(&records)?);
            print!("{}", report.to_csv()?);
            eprint!("{}", report.summary());
            Ok(SOLVED)
        }
        Cmd::Hybrid {
            scenario,
            time_limit,
            out,
        } => {
            let sc = Scenario::from_toml(&read(&scenario)?).with_context(|| format!("in {}", scenario.display()))?;
            let res = solve_hybrid(&sc, &Limits::time(seconds(time_limit)?))?;
            let st = &res.stats;
            match &res.trajectory {
                Some(t) => {
                    let mut buf = Vec::new();
                    write_trajectory(t, sc.dt, &mut buf)?;
                    write_out(out.as_deref(), std::str::from_utf8(&buf)?)?;
                    eprintln!(
                        "arrival time {} s, {} primitives, {} pushing, {} expansions in {:.3?}",
                        t.arrival_time,
                        t.steps.len(),
                        t.pushes(),
                        st.expansions,
                        st.wall_time
                    );
                    Ok(SOLVED)
                }
                None if st.timed_out => {
                    eprintln!("limit reached after {} expansions", st.expansions);
                    Ok(TIMEOUT)
                }
                None => {
                    eprintln!("no trajectory found ({} expansions)", st.expansions);
                    Ok(INFEASIBLE)
                }
            }
        }
        Cmd::Oracle {
            map,
            instance,
            k_push,
            max_states,
        } => {
            let inst = load(&instance, map.as_deref())?;
            let cfg = OracleConfig {
                max_states,
                ..OracleConfig::default()
            };
            let (mode, points) = match k_push {
                None => ("mo", oracle_pareto(&inst, &cfg)?),
                Some(_) => ("rc", oracle_rc(&inst, budget(k_push)?, &cfg)?.into_iter().collect()),
            };
            let costs = inst.costs();
            let doc = OracleDoc {
                schema: "pamo.oracle/1",
                mode,
                solutions: points
                    .iter()
                    .map(|p| pamo::search::report::SolutionDoc {
                        cost: costs.real_pair(p.cost),
                        actions: actions_to_string(&p.actions),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(if points.is_empty() { INFEASIBLE } else { SOLVED })
        }
    }
}

/// How an instance written to `out` should refer to `map`: relative when both
/// live in the same directory, otherwise absolute.
fn map_reference(map: &Path, out: Option<&Path>) -> String {
    let abs = |p: &Path| fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    let Some(out) = out else {
        return map.to_string_lossy().into_owned();
    };
    let map_abs = abs(map);
    let out_dir = abs(out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new(".")));
    match map_abs.strip_prefix(&out_dir) {
        Ok(rel) => rel.to_string_lossy().into_owned(),
        Err(_) => map_abs.to_string_lossy().into_owned(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { SOLVED });
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
