//! Label-setting best-first search over (robot, objects) states.
//!
//! One engine serves both problems:
//!
//! * [`solve_mo`] enumerates the cost-unique Pareto front over (time, pushes),
//! * [`solve_rc`] returns the fastest path whose push cost stays within a budget.
//!
//! Labels are popped in lexicographic `f` order. A label is dropped when a
//! label already retained at its state is no worse in both components
//! (the local check) or when it cannot beat what is already known globally
//! (found solutions, or the push budget). States are interned on first touch;
//! the full product space is never enumerated.

pub mod frontier;
pub mod heuristic;
pub mod report;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::cost::CostVec2;
use crate::grid::instance::Instance;
use crate::grid::state::{successors, ActionKind, ActionStep, StateId, StateStore, WorldState};

pub use frontier::{frontier_check, solution_check_mo, solution_check_rc, FrontierSet};
pub use heuristic::{backward_dijkstra, heuristic, DistanceField};

/// Resource caps for one search. Exceeding either marks the result timed out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub time: Option<Duration>,
    pub expansions: Option<u64>,
    /// Memory guard: stop once this many distinct states have been stored.
    pub states: Option<u64>,
}

impl Limits {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn time(limit: Duration) -> Self {
        Limits {
            time: Some(limit),
            ..Self::default()
        }
    }
}

/// Push budget in real (unscaled) cost units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Budget {
    Finite(f64),
    Unlimited,
}

impl Budget {
    /// Budget in the instance's integer cost units.
    pub fn to_units(self, scale: u64) -> Option<u64> {
        match self {
            Budget::Unlimited => None,
            Budget::Finite(k) if k.is_infinite() => None,
            Budget::Finite(k) => Some((k.max(0.0) * scale as f64 + 1e-9).floor() as u64),
        }
    }
}

impl From<u64> for Budget {
    fn from(k: u64) -> Self {
        Budget::Finite(k as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    MultiObjective,
    ResourceConstrained(Budget),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub cost: CostVec2,
    pub actions: Vec<ActionStep>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expansions: u64,
    pub generated: u64,
    pub pruned_frontier: u64,
    pub pruned_solution: u64,
    pub states: u64,
    pub wall_time: Duration,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub solutions: Vec<Solution>,
    pub stats: SearchStats,
    /// `f` of every label that survived the pop-time checks, in pop order.
    /// Only filled when tracing is enabled.
    pub trace: Option<Vec<CostVec2>>,
}

impl SearchResult {
    pub fn costs(&self) -> Vec<CostVec2> {
        self.solutions.iter().map(|s| s.cost).collect()
    }

    pub fn completed(&self) -> bool {
        !self.stats.timed_out
    }
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Label {
    state: StateId,
    g: CostVec2,
    parent: u32,
    action: Option<ActionStep>,
}

/// Open-list entry; `BinaryHeap` is a max-heap, so the ordering is reversed on
/// `f` and ties go to the most recently created label.
#[derive(Clone, Copy, PartialEq, Eq)]
struct OpenEntry {
    f: CostVec2,
    label: u32,
}

impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .cmp(&self.f)
            .then_with(|| self.label.cmp(&other.label))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A single search over one instance. Use [`solve_mo`] / [`solve_rc`] unless you
/// need to inspect the frontiers afterwards.
pub struct Search<'a> {
    instance: &'a Instance,
    dist: DistanceField,
    mode: Mode,
    limits: Limits,
    trace: bool,
    store: StateStore,
    frontiers: Vec<FrontierSet>,
    labels: Vec<Label>,
    open: BinaryHeap<OpenEntry>,
    goal_frontier: FrontierSet,
    found: Vec<u32>,
}

impl<'a> Search<'a> {
    pub fn new(instance: &'a Instance, mode: Mode, limits: Limits) -> Self {
        let dist = backward_dijkstra(instance.map(), instance.goal());
        Self::with_distances(instance, dist, mode, limits)
    }

    /// Reuse a precomputed goal distance field.
    pub fn with_distances(instance: &'a Instance, dist: DistanceField, mode: Mode, limits: Limits) -> Self {
        Search {
            instance,
            dist,
            mode,
            limits,
            trace: false,
            store: StateStore::with_base(instance.objects()),
            frontiers: Vec::new(),
            labels: Vec::new(),
            open: BinaryHeap::new(),
            goal_frontier: FrontierSet::new(),
            found: Vec::new(),
        }
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    pub fn distances(&self) -> &DistanceField {
        &self.dist
    }

    /// Frontier of every state touched so far, paired with the state.
    pub fn frontiers(&self) -> impl Iterator<Item = (WorldState, &FrontierSet)> {
        self.frontiers
            .iter()
            .enumerate()
            .map(|(i, f)| (self.store.get(StateId(i as u32)), f))
    }

    fn intern(&mut self, state: WorldState) -> StateId {
        let (id, fresh) = self.store.intern(state);
        if fresh {
            self.frontiers.push(FrontierSet::new());
        }
        id
    }

    fn solution_pruned(&self, f: &CostVec2, budget: Option<u64>) -> bool {
        match self.mode {
            Mode::MultiObjective => solution_check_mo(f, &self.goal_frontier),
            Mode::ResourceConstrained(_) => solution_check_rc(f, budget),
        }
    }

    fn reconstruct(&self, mut idx: u32) -> Vec<ActionStep> {
        let mut actions = Vec::new();
        while idx != NO_PARENT {
            let l = &self.labels[idx as usize];
            if let Some(a) = l.action {
                actions.push(a);
            }
            idx = l.parent;
        }
        actions.reverse();
        actions
    }

    pub fn run(&mut self) -> SearchResult {
        let started = Instant::now();
        let deadline = self.limits.time.map(|t| started + t);
        let inst = self.instance;
        let map = inst.map();
        let goal = inst.goal();
        let costs = *inst.costs();
        let budget = match self.mode {
            Mode::ResourceConstrained(b) => b.to_units(costs.scale),
            Mode::MultiObjective => None,
        };
        let mut stats = SearchStats::default();
        let mut trace = self.trace.then(Vec::new);

        let s0 = inst.initial_state();
        if let Some(h0) = heuristic(&s0, &self.dist, &costs) {
            let id = self.intern(s0);
            self.labels.push(Label {
                state: id,
                g: CostVec2::ZERO,
                parent: NO_PARENT,
                action: None,
            });
            self.open.push(OpenEntry { f: h0, label: 0 });
            stats.generated += 1;
        }

        while let Some(OpenEntry { f, label: li }) = self.open.pop() {
            if deadline.is_some_and(|d| Instant::now() >= d)
                || self.limits.expansions.is_some_and(|m| stats.expansions >= m)
                || self.limits.states.is_some_and(|m| self.store.len() as u64 >= m)
            {
                stats.timed_out = true;
                break;
            }
            let Label { state, g, .. } = self.labels[li as usize];
            if frontier_check(&g, &self.frontiers[state.0 as usize]) {
                stats.pruned_frontier += 1;
                continue;
            }
            if self.solution_pruned(&f, budget) {
                stats.pruned_solution += 1;
                continue;
            }
            self.frontiers[state.0 as usize].insert(g);
            if let Some(t) = trace.as_mut() {
                t.push(f);
            }

            let ws = self.store.get(state);
            if ws.robot() == goal {
                // goal labels have h = 0, so f = g
                let removed = self.goal_frontier.insert(g);
                debug_assert_eq!(removed, 0, "a later goal label dominated an earlier one");
                self.found.push(li);
                match self.mode {
                    Mode::ResourceConstrained(_) => break,
                    Mode::MultiObjective => continue,
                }
            }

            stats.expansions += 1;
            for (next, step) in successors(&ws, map) {
                stats.generated += 1;
                let Some(h) = heuristic(&next, &self.dist, &costs) else {
                    continue;
                };
                let g2 = g + match step.kind {
                    ActionKind::Move => costs.mov,
                    ActionKind::Push => costs.push,
                };
                let f2 = g2 + h;
                let id = self.intern(next);
                if frontier_check(&g2, &self.frontiers[id.0 as usize]) {
                    stats.pruned_frontier += 1;
                    continue;
                }
                if self.solution_pruned(&f2, budget) {
                    stats.pruned_solution += 1;
                    continue;
                }
                let idx = self.labels.len() as u32;
                self.labels.push(Label {
                    state: id,
                    g: g2,
                    parent: li,
                    action: Some(step),
                });
                self.open.push(OpenEntry { f: f2, label: idx });
            }
        }

        let solutions = self
            .found
            .iter()
            .map(|&li| Solution {
                cost: self.labels[li as usize].g,
                actions: self.reconstruct(li),
            })
            .collect();
        stats.states = self.store.len() as u64;
        stats.wall_time = started.elapsed();
        SearchResult {
            solutions,
            stats,
            trace,
        }
    }
}

/// Cost-unique Pareto front over (time, pushes), one witness path per point,
/// in increasing time order.
pub fn solve_mo(instance: &Instance, limits: &Limits) -> SearchResult {
    Search::new(instance, Mode::MultiObjective, *limits).run()
}

/// Minimum-time path with push cost at most `k_push`; at most one solution.
pub fn solve_rc(instance: &Instance, k_push: impl Into<Budget>, limits: &Limits) -> SearchResult {
    Search::new(instance, Mode::ResourceConstrained(k_push.into()), *limits).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::map::{parse_map, GridMap};
    use crate::grid::state::{actions_to_string, replay};
    use crate::grid::Cell;

    fn c(x: u16, y: u16) -> Cell {
        Cell::new(x, y)
    }

    fn corridor() -> Instance {
        Instance::new(GridMap::empty(6, 1), c(0, 0), c(4, 0), vec![c(2, 0)]).unwrap()
    }

    #[test]
    fn corridor_front() {
        let inst = corridor();
        let res = solve_mo(&inst, &Limits::none());
        assert!(res.completed());
        assert_eq!(res.costs(), vec![CostVec2::new(4, 3)]);
        assert_eq!(actions_to_string(&res.solutions[0].actions), "Rrrr");
        let (end, cost) = replay(&inst, &res.solutions[0].actions).unwrap();
        assert_eq!(cost, CostVec2::new(4, 3));
        assert_eq!(end.objects(), &[c(5, 0)]);
    }

    #[test]
    fn corridor_budgets() {
        let inst = corridor();
        let res = solve_rc(&inst, 3, &Limits::none());
        assert_eq!(res.costs(), vec![CostVec2::new(4, 3)]);
        for k in [0, 1, 2] {
            let res = solve_rc(&inst, k, &Limits::none());
            assert!(res.solutions.is_empty(), "k = {k}");
            assert!(res.completed());
        }
        let res = solve_rc(&inst, Budget::Unlimited, &Limits::none());
        assert_eq!(res.costs(), vec![CostVec2::new(4, 3)]);
    }

    #[test]
    fn walled_goal_is_infeasible() {
        let map = parse_map("type octile\nheight 3\nwidth 3\nmap\n...\n.@@\n.@.\n").unwrap();
        let inst = Instance::new(map, c(0, 0), c(2, 2), vec![]).unwrap();
        let res = solve_mo(&inst, &Limits::none());
        assert!(res.solutions.is_empty());
        assert!(!res.stats.timed_out);
        assert_eq!(res.stats.expansions, 0);
    }

    #[test]
    fn start_is_goal() {
        let inst = Instance::new(GridMap::empty(3, 3), c(1, 1), c(1, 1), vec![c(0, 0)]).unwrap();
        let res = solve_mo(&inst, &Limits::none());
        assert_eq!(res.costs(), vec![CostVec2::ZERO]);
        assert!(res.solutions[0].actions.is_empty());
    }

    #[test]
    fn expansion_limit_times_out() {
        let inst = Instance::new(GridMap::empty(8, 8), c(0, 0), c(7, 7), vec![c(3, 3)]).unwrap();
        let res = solve_mo(
            &inst,
            &Limits {
                expansions: Some(3),
                ..Limits::none()
            },
        );
        assert!(res.stats.timed_out);
        assert_eq!(res.stats.expansions, 3);
    }

    #[test]
    fn goal_reached_by_a_push() {
        // object sits on the goal; the last step pushes it off
        let inst = Instance::new(GridMap::empty(4, 1), c(0, 0), c(2, 0), vec![c(2, 0)]).unwrap();
        let res = solve_mo(&inst, &Limits::none());
        assert_eq!(res.costs(), vec![CostVec2::new(2, 1)]);
        assert_eq!(actions_to_string(&res.solutions[0].actions), "Rr");
    }

    #[test]
    fn open_list_order() {
        let mut heap = BinaryHeap::new();
        heap.push(OpenEntry { f: CostVec2::new(3, 1), label: 0 });
        heap.push(OpenEntry { f: CostVec2::new(2, 5), label: 1 });
        heap.push(OpenEntry { f: CostVec2::new(3, 0), label: 2 });
        heap.push(OpenEntry { f: CostVec2::new(2, 5), label: 3 });
        let order: Vec<u32> = std::iter::from_fn(|| heap.pop().map(|e| e.label)).collect();
        assert_eq!(order, vec![3, 1, 2, 0]);
    }

    #[test]
    fn weighted_push_cost_changes_front() {
        let text = "cost_move = [1, 0]\ncost_push = [3, 1]\ngoal = [4, 0]\nobjects = [[2, 0]]\nstart = [0, 0]\n";
        let inst = crate::grid::instance::load_instance(text, GridMap::empty(6, 1)).unwrap();
        let res = solve_mo(&inst, &Limits::none());
        assert_eq!(res.costs(), vec![CostVec2::new(10, 3)]);
    }

    #[test]
    fn budget_units() {
        assert_eq!(Budget::Finite(2.0).to_units(1), Some(2));
        assert_eq!(Budget::Finite(2.5).to_units(10), Some(25));
        assert_eq!(Budget::Finite(f64::INFINITY).to_units(1), None);
        assert_eq!(Budget::Unlimited.to_units(1), None);
    }
}
