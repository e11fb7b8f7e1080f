//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::cell::RefCell;
use std::time::{Duration, Instant};

use pamo::hybrid::{
    angle_diff, at_goal, integrate_unicycle, solve_hybrid, verify_trajectory, Control, PoseSE2, Scenario,
};
use pamo::oracle::{oracle_pareto, oracle_rc, shortest_path_objects_as_walls, OracleConfig};
use pamo::search::{backward_dijkstra, FrontierSet, Mode, Search};
use pamo::{
    generate_instance, load_instance, parse_map, replay, solve_mo, solve_rc, successors, ActionKind, ActionStep,
    Budget, Cell, CostVec2, GridMap, Instance, Limits, WorldState,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_INSTANCES: u64 = 100;
const ORACLE_MAX_SIDE: u16 = 6;
const ORACLE_MAX_OBJECTS: usize = 4;

const GRID_TIME_LIMIT: Duration = Duration::from_secs(60);
const GRID_STATE_CAP: u64 = 8_000_000;

const EXPLORATION_SEEDS: u64 = 10;
const MO_MEDIAN_MAX: f64 = 1e4;
const RC_MEDIAN_MAX: f64 = 1e3;
const STATE_SPACE_MARGIN: f64 = 1e15;

const SCALE_SEEDS: u64 = 10;
const SCALE_MIN_SOLVED: usize = 7;

const REDUCTION_MAPS: u64 = 50;

const HYBRID_TIME_LIMIT: Duration = Duration::from_secs(30);
const RK4_TOL: f64 = 1e-6;

const PROPERTY_CASES: u32 = 10_000;

fn grid_limits() -> Limits {
    Limits {
        time: Some(GRID_TIME_LIMIT),
        expansions: None,
        states: Some(GRID_STATE_CAP),
    }
}

/// Random instance on a grid of at most `max_side` per side. Objects may sit
/// on the goal; only the start is kept clear.
fn small_instance(seed: u64, max_side: u16, max_objects: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let w = rng.gen_range(1..=max_side);
        let h = rng.gen_range(1..=max_side);
        let map = GridMap::random(w, h, rng.gen_range(0.0..0.3), rng.gen());
        let mut free: Vec<Cell> = map.free_cells().collect();
        if free.len() < 2 {
            continue;
        }
        free.shuffle(&mut rng);
        let start = free[0];
        let goal = free[1];
        let mut rest = free[1..].to_vec();
        rest.shuffle(&mut rng);
        let k = rng.gen_range(0..=max_objects.min(rest.len()));
        rest.truncate(k);
        return Instance::new(map, start, goal, rest).expect("generated instances are valid");
    }
}

/// Counts every solver output checked with `replay`.
#[derive(Default)]
struct ReplayLog {
    checked: usize,
    failures: Vec<String>,
}

impl ReplayLog {
    fn check(&mut self, what: &str, inst: &Instance, cost: CostVec2, actions: &[ActionStep]) {
        self.checked += 1;
        match replay(inst, actions) {
            Ok((end, c)) if c == cost && end.robot() == inst.goal() => {}
            Ok((end, c)) => self.failures.push(format!("{what}: replay gave {c} at {}, expected {cost}", end.robot())),
            Err(e) => self.failures.push(format!("{what}: {e}")),
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn median(v: &mut [u64]) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn oracle_equivalence(log: &mut ReplayLog) -> Outcome {
    let cfg = OracleConfig::default();
    let limits = Limits::none();
    let mut mismatches = Vec::new();
    for seed in 0..ORACLE_INSTANCES {
        let inst = small_instance(seed, ORACLE_MAX_SIDE, ORACLE_MAX_OBJECTS);
        let oracle = oracle_pareto(&inst, &cfg).expect("oracle within caps");
        for p in &oracle {
            log.check(&format!("oracle seed {seed}"), &inst, p.cost, &p.actions);
        }
        let mo = solve_mo(&inst, &limits);
        for s in &mo.solutions {
            log.check(&format!("mo seed {seed}"), &inst, s.cost, &s.actions);
        }
        let mut got = mo.costs();
        got.sort();
        let want: Vec<CostVec2> = oracle.iter().map(|p| p.cost).collect();
        if !mo.completed() || got != want {
            mismatches.push(format!("seed {seed} mo {got:?} vs {want:?}"));
        }
        for k in [Budget::from(0), Budget::from(1), Budget::from(2), Budget::Unlimited] {
            let rc = solve_rc(&inst, k, &limits);
            for s in &rc.solutions {
                log.check(&format!("rc seed {seed}"), &inst, s.cost, &s.actions);
            }
            let o = oracle_rc(&inst, k, &cfg).expect("oracle within caps");
            if let Some(p) = &o {
                log.check(&format!("oracle rc seed {seed}"), &inst, p.cost, &p.actions);
            }
            let got = rc.solutions.first().map(|s| s.cost);
            let want = o.map(|p| p.cost);
            if !rc.completed() || got != want {
                mismatches.push(format!("seed {seed} rc {k:?}: {got:?} vs {want:?}"));
            }
        }
    }
    let detail = format!(
        "{} instances, {} mismatches{}",
        ORACLE_INSTANCES,
        mismatches.len(),
        mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
    );
    outcome(mismatches.is_empty(), detail)
}

fn small_exploration(log: &mut ReplayLog) -> Outcome {
    let map = GridMap::empty(8, 8);
    let (start, goal) = (Cell::new(0, 0), Cell::new(7, 7));
    let mut mo_exp = Vec::new();
    let mut rc_exp = Vec::new();
    let mut counts = Vec::new();
    for seed in 0..EXPLORATION_SEEDS {
        let inst = generate_instance(map.clone(), 0.2, start, goal, seed).unwrap();
        counts.push(inst.objects().len());
        let mo = solve_mo(&inst, &grid_limits());
        for s in &mo.solutions {
            log.check(&format!("empty8 mo seed {seed}"), &inst, s.cost, &s.actions);
        }
        let rc = solve_rc(&inst, Budget::Unlimited, &grid_limits());
        for s in &rc.solutions {
            log.check(&format!("empty8 rc seed {seed}"), &inst, s.cost, &s.actions);
        }
        mo_exp.push(mo.stats.expansions);
        rc_exp.push(rc.stats.expansions);
    }
    let max_exp = *mo_exp.iter().chain(&rc_exp).max().unwrap() as f64;
    let mo_med = median(&mut mo_exp);
    let rc_med = median(&mut rc_exp);
    // |S| = 64^13 for a robot and 12 objects on 64 cells
    let space = 64f64.powi(13);
    let pass = counts.iter().all(|&c| c == 12)
        && mo_med <= MO_MEDIAN_MAX
        && rc_med <= RC_MEDIAN_MAX
        && max_exp * STATE_SPACE_MARGIN <= space;
    outcome(
        pass,
        format!(
            "median expansions mo {mo_med} (<= {MO_MEDIAN_MAX}), rc {rc_med} (<= {RC_MEDIAN_MAX}); max {max_exp} vs |S| {space:.3e}"
        ),
    )
}

fn scalability(log: &mut ReplayLog) -> Outcome {
    let map = GridMap::random(32, 32, 0.1, 0);
    let start = map.nearest_free(Cell::new(0, 0)).unwrap();
    let goal = map.nearest_free(Cell::new(31, 31)).unwrap();
    let mut solved = 0;
    let mut slowest = Duration::ZERO;
    for seed in 0..SCALE_SEEDS {
        let inst = generate_instance(map.clone(), 0.1, start, goal, seed).unwrap();
        assert_eq!(inst.objects().len(), 102);
        let rc = solve_rc(&inst, Budget::Unlimited, &grid_limits());
        for s in &rc.solutions {
            log.check(&format!("random32 seed {seed}"), &inst, s.cost, &s.actions);
        }
        if !rc.solutions.is_empty() && rc.stats.wall_time <= GRID_TIME_LIMIT {
            solved += 1;
            slowest = slowest.max(rc.stats.wall_time);
        }
    }
    outcome(
        solved >= SCALE_MIN_SOLVED,
        format!("{solved}/{SCALE_SEEDS} solved (need {SCALE_MIN_SOLVED}), slowest solved {slowest:.2?}"),
    )
}

fn detour_front(log: &mut ReplayLog) -> Outcome {
    let map = parse_map(include_str!("../../../maps/detour.map")).unwrap();
    let inst = load_instance(include_str!("../../../maps/detour.toml"), map).unwrap();
    let mo = solve_mo(&inst, &Limits::none());
    for s in &mo.solutions {
        log.check("detour", &inst, s.cost, &s.actions);
    }
    let mut got = mo.costs();
    got.sort();
    let oracle: Vec<CostVec2> = oracle_pareto(&inst, &OracleConfig::default())
        .unwrap()
        .iter()
        .map(|p| p.cost)
        .collect();
    let shape = got.len() == 2 && {
        let (a, b) = (got[0], got[1]);
        a.c2 > 0 && b.c2 == 0 && b.c1 > a.c1
    };
    outcome(shape && got == oracle, format!("front {got:?}, oracle {oracle:?}"))
}

fn degenerate_reductions(log: &mut ReplayLog) -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..REDUCTION_MAPS {
        let inst = small_instance(1_000 + seed, 12, 10);
        let plain = Instance::new(inst.map().clone(), inst.start(), inst.goal(), vec![]).unwrap();
        let d = backward_dijkstra(plain.map(), plain.goal()).get(plain.start());
        let mo = solve_mo(&plain, &Limits::none());
        for s in &mo.solutions {
            log.check(&format!("no objects seed {seed}"), &plain, s.cost, &s.actions);
        }
        let want: Vec<CostVec2> = d.map(|d| CostVec2::new(d as u64, 0)).into_iter().collect();
        if mo.costs() != want {
            bad.push(format!("seed {seed}: no-object front {:?} vs {want:?}", mo.costs()));
        }
        let rc = solve_rc(&inst, 0u64, &Limits::none());
        for s in &rc.solutions {
            log.check(&format!("k=0 seed {seed}"), &inst, s.cost, &s.actions);
        }
        let got = rc.solutions.first().map(|s| s.cost.c1);
        let walls = shortest_path_objects_as_walls(&inst);
        if got != walls || rc.solutions.iter().any(|s| s.cost.c2 != 0) {
            bad.push(format!("seed {seed}: k=0 gives {got:?}, walls {walls:?}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{REDUCTION_MAPS} maps, {} mismatches{}", bad.len(), bad.first().map(|m| format!(" ({m})")).unwrap_or_default()),
    )
}

fn replay_soundness(log: &ReplayLog) -> Outcome {
    outcome(
        log.checked > 0 && log.failures.is_empty(),
        format!(
            "{}/{} solutions replay exactly{}",
            log.checked - log.failures.len(),
            log.checked,
            log.failures.first().map(|m| format!(" (first failure: {m})")).unwrap_or_default()
        ),
    )
}

fn hybrid_sanity() -> Outcome {
    let scenarios = [
        ("open field", include_str!("../../../scenarios/open_field.toml")),
        ("corridor", include_str!("../../../scenarios/corridor.toml")),
        ("L-shaped room", include_str!("../../../scenarios/l_room.toml")),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, text) in scenarios {
        let sc = Scenario::from_toml(text).unwrap();
        let t0 = Instant::now();
        let res = solve_hybrid(&sc, &Limits::time(HYBRID_TIME_LIMIT)).unwrap();
        let took = t0.elapsed();
        match &res.trajectory {
            Some(t) => match verify_trajectory(&sc, t) {
                Ok(()) if took <= HYBRID_TIME_LIMIT && at_goal(&t.final_state().robot, &sc) => {
                    parts.push(format!("{name} {:.1}s/{} pushes in {took:.2?}", t.arrival_time, t.pushes()))
                }
                Ok(()) => {
                    pass = false;
                    parts.push(format!("{name} took {took:.2?}"));
                }
                Err(e) => {
                    pass = false;
                    parts.push(format!("{name} replay: {e}"));
                }
            },
            None => {
                pass = false;
                parts.push(format!("{name} unsolved (timed out: {})", res.stats.timed_out));
            }
        }
    }
    // constant twist over 1 s in 100 RK4 steps against the exact arc
    let u = Control::new(1.0, 0.5);
    let p0 = PoseSE2::new(0.0, 0.0, 0.0);
    let mut p = p0;
    for _ in 0..100 {
        p = integrate_unicycle(p, u, 0.01);
    }
    let th = p0.theta + u.omega;
    let r = u.v / u.omega;
    let ex = p0.x + r * (p0.theta.cos() - th.cos());
    let ey = p0.y + r * (th.sin() - p0.theta.sin());
    let err = ((p.x - ex).powi(2) + (p.y - ey).powi(2)).sqrt();
    let heading_ok = angle_diff(p.theta, th).abs() < 1e-12;
    pass &= err <= RK4_TOL && heading_ok;
    parts.push(format!("rk4 arc error {err:.2e} m"));
    outcome(pass, parts.join("; "))
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String>
where
    S::Value: std::fmt::Debug,
{
    let cases = RefCell::new(0u32);
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| {
            *cases.borrow_mut() += 1;
            test(v)
        })
        .map(|_| format!("{name} {}", cases.borrow()))
        .map_err(|e| format!("{name}: {e}"))
}

fn brute_front(points: &[CostVec2]) -> Vec<CostVec2> {
    let mut out: Vec<CostVec2> = points
        .iter()
        .copied()
        .filter(|p| !points.iter().any(|q| q.c1 <= p.c1 && q.c2 <= p.c2 && q != p))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Random valid world state on a random small map.
fn random_state(seed: u64) -> (GridMap, WorldState) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let map = GridMap::random(rng.gen_range(1..=7), rng.gen_range(1..=7), rng.gen_range(0.0..0.3), rng.gen());
        let mut free: Vec<Cell> = map.free_cells().collect();
        if free.is_empty() {
            continue;
        }
        free.shuffle(&mut rng);
        let k = rng.gen_range(0..free.len());
        return (map, WorldState::new(free[0], free[1..=k].to_vec()));
    }
}

fn invariant_suites() -> Outcome {
    let mut parts = Vec::new();
    let mut errors = Vec::new();
    let mut record = |r: Result<String, String>| match r {
        Ok(s) => parts.push(s),
        Err(e) => errors.push(e),
    };

    record(run_property(
        "frontier-shape",
        prop::collection::vec((0u64..30, 0u64..30), 0..40),
        |pts| {
            let mut f = FrontierSet::new();
            let mut kept = Vec::new();
            for (a, b) in pts {
                let g = CostVec2::new(a, b);
                if !f.covers(&g) {
                    f.insert(g);
                    kept.push(g);
                }
                prop_assert!(f.is_well_formed());
                let w = f.entries();
                prop_assert!(w.windows(2).all(|p| p[0].c1 < p[1].c1 && p[0].c2 > p[1].c2));
            }
            prop_assert_eq!(f.entries().to_vec(), brute_front(&kept));
            Ok(())
        },
    ));

    record(run_property("lexicographic-monotonicity", any::<u64>(), |seed| {
        let inst = small_instance(seed, 5, 3);
        let mut search = Search::new(&inst, Mode::MultiObjective, Limits::none()).with_trace(true);
        let res = search.run();
        let trace = res.trace.unwrap();
        prop_assert!(trace.windows(2).all(|w| w[0] <= w[1]), "trace {:?}", trace);
        for (_, f) in search.frontiers() {
            prop_assert!(f.is_well_formed());
        }
        Ok(())
    }));

    record(run_property("push-locality", any::<u64>(), |seed| {
        let (map, s) = random_state(seed);
        let succ = successors(&s, &map);
        prop_assert!(succ.len() <= 4);
        for (t, step) in &succ {
            prop_assert!(t.validate(&map).is_ok());
            prop_assert_eq!(t.objects().len(), s.objects().len());
            let (dx, dy) = step.direction.delta();
            prop_assert_eq!(Some(t.robot()), s.robot().offset(dx, dy));
            let gone: Vec<Cell> = s.objects().iter().copied().filter(|c| !t.has_object(*c)).collect();
            let came: Vec<Cell> = t.objects().iter().copied().filter(|c| !s.has_object(*c)).collect();
            match step.kind {
                ActionKind::Move => {
                    prop_assert!(gone.is_empty() && came.is_empty());
                    let back = successors(t, &map);
                    prop_assert!(back.iter().any(|(b, st)| b == &s && st.kind == ActionKind::Move));
                }
                ActionKind::Push => {
                    prop_assert_eq!(gone.clone(), vec![t.robot()]);
                    prop_assert_eq!(came, vec![t.robot().offset(dx, dy).unwrap()]);
                }
            }
        }
        Ok(())
    }));

    record(run_property("untouched-objects", any::<u64>(), |seed| {
        let inst = small_instance(seed, 6, 4);
        let res = solve_mo(&inst, &Limits::none());
        for sol in &res.solutions {
            let mut s = inst.initial_state();
            let mut path = vec![s.robot()];
            for a in &sol.actions {
                s = s.apply(inst.map(), a.direction).map_err(TestCaseError::fail)?.0;
                path.push(s.robot());
            }
            for o in inst.objects() {
                if path.iter().all(|c| c.manhattan(*o) > 1) {
                    prop_assert!(s.has_object(*o), "object {} moved without contact", o);
                }
            }
        }
        Ok(())
    }));

    outcome(
        errors.is_empty(),
        format!("cases: {}{}", parts.join(", "), errors.first().map(|e| format!("; {e}")).unwrap_or_default()),
    )
}

type Criterion = Box<dyn FnOnce(&mut ReplayLog) -> Outcome>;

fn main() {
    let mut log = ReplayLog::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 oracle equivalence", Box::new(oracle_equivalence)),
        ("2 small exploration on Empty 8x8", Box::new(small_exploration)),
        ("3 scalability on Random 32x32", Box::new(scalability)),
        ("4 detour trade-off front", Box::new(detour_front)),
        ("5 degenerate reductions", Box::new(degenerate_reductions)),
        ("6 replay soundness", Box::new(|log: &mut ReplayLog| replay_soundness(log))),
        ("7 hybrid sanity", Box::new(|_: &mut ReplayLog| hybrid_sanity())),
        ("8 invariant suites", Box::new(|_: &mut ReplayLog| invariant_suites())),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t0 = Instant::now();
        let o = run(&mut log);
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.1?}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t0.elapsed()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
