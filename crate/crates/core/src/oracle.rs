//! Exhaustive ground truth for small instances.
//!
//! Nothing here is shared with [`crate::search`] beyond the transition rules in
//! [`crate::grid`]: no heuristic, no goal pruning, separate label bookkeeping.
//! Use it on toy grids only.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::cost::CostVec2;
use crate::error::{Error, Result};
use crate::grid::instance::Instance;
use crate::grid::state::{successors, ActionKind, ActionStep, WorldState};
use crate::grid::Cell;
use crate::search::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Refuse once more distinct states than this have been reached.
    pub max_states: usize,
    /// Refuse once a retained label's first cost component exceeds this.
    pub max_cost: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_states: 5_000_000,
            max_cost: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OraclePoint {
    pub cost: CostVec2,
    pub actions: Vec<ActionStep>,
}

struct Interner {
    ids: HashMap<WorldState, usize>,
    states: Vec<WorldState>,
    cap: usize,
}

impl Interner {
    fn new(cap: usize) -> Self {
        Interner {
            ids: HashMap::new(),
            states: Vec::new(),
            cap,
        }
    }

    fn id(&mut self, s: WorldState) -> Result<usize> {
        if let Some(&i) = self.ids.get(&s) {
            return Ok(i);
        }
        if self.states.len() >= self.cap {
            return Err(Error::OracleCap(format!("more than {} distinct states", self.cap)));
        }
        let i = self.states.len();
        self.ids.insert(s.clone(), i);
        self.states.push(s);
        Ok(i)
    }
}

struct Node {
    cost: CostVec2,
    parent: Option<usize>,
    action: Option<ActionStep>,
}

fn unwind(nodes: &[Node], mut i: usize) -> Vec<ActionStep> {
    let mut out = Vec::new();
    loop {
        let n = &nodes[i];
        if let Some(a) = n.action {
            out.push(a);
        }
        match n.parent {
            Some(p) => i = p,
            None => break,
        }
    }
    out.reverse();
    out
}

fn step_cost(instance: &Instance, kind: ActionKind) -> CostVec2 {
    match kind {
        ActionKind::Move => instance.costs().mov,
        ActionKind::Push => instance.costs().push,
    }
}

/// Exact cost-unique Pareto front by uninformed label correction: every
/// non-dominated label at every state is expanded until none remain, then the
/// labels sitting at the goal cell are filtered. Sorted by increasing time.
pub fn oracle_pareto(instance: &Instance, cfg: &OracleConfig) -> Result<Vec<OraclePoint>> {
    let map = instance.map();
    let mut states = Interner::new(cfg.max_states);
    let mut nodes: Vec<Node> = Vec::new();
    // per state: (cost, node) pairs, pairwise non-dominated and cost-distinct
    let mut kept: Vec<Vec<(CostVec2, usize)>> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut node_state: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();

    let s0 = states.id(instance.initial_state())?;
    kept.push(vec![(CostVec2::ZERO, 0)]);
    nodes.push(Node {
        cost: CostVec2::ZERO,
        parent: None,
        action: None,
    });
    alive.push(true);
    node_state.push(s0);
    queue.push_back(0usize);

    while let Some(ni) = queue.pop_front() {
        if !alive[ni] {
            continue;
        }
        let here = states.states[node_state[ni]].clone();
        let base = nodes[ni].cost;
        for (next, step) in successors(&here, map) {
            let cost = base + step_cost(instance, step.kind);
            let si = states.id(next)?;
            if si == kept.len() {
                kept.push(Vec::new());
            }
            let bucket = &mut kept[si];
            if bucket.iter().any(|(c, _)| c.c1 <= cost.c1 && c.c2 <= cost.c2) {
                continue;
            }
            if cost.c1 > cfg.max_cost {
                return Err(Error::OracleCap(format!("label cost {cost} exceeds max_cost {}", cfg.max_cost)));
            }
            bucket.retain(|(c, n)| {
                let worse = cost.c1 <= c.c1 && cost.c2 <= c.c2;
                if worse {
                    alive[*n] = false;
                }
                !worse
            });
            let id = nodes.len();
            nodes.push(Node {
                cost,
                parent: Some(ni),
                action: Some(step),
            });
            alive.push(true);
            node_state.push(si);
            bucket.push((cost, id));
            queue.push_back(id);
        }
    }

    let goal = instance.goal();
    let mut at_goal: Vec<(CostVec2, usize)> = Vec::new();
    for (si, bucket) in kept.iter().enumerate() {
        if states.states[si].robot() == goal {
            at_goal.extend(bucket.iter().copied());
        }
    }
    let mut front: Vec<(CostVec2, usize)> = Vec::new();
    for &(c, n) in &at_goal {
        let beaten = at_goal
            .iter()
            .any(|(o, _)| o.c1 <= c.c1 && o.c2 <= c.c2 && *o != c);
        if !beaten && !front.iter().any(|(f, _)| *f == c) {
            front.push((c, n));
        }
    }
    front.sort_by_key(|(c, _)| (c.c1, c.c2));
    Ok(front
        .into_iter()
        .map(|(cost, n)| OraclePoint {
            cost,
            actions: unwind(&nodes, n),
        })
        .collect())
}

/// Lexicographically smallest (time, pushes) among paths with push cost within
/// `k_push`, by uniform-cost search over (state, push cost used). With unit
/// costs this visits nodes layer by layer exactly like breadth-first search.
pub fn oracle_rc(instance: &Instance, k_push: impl Into<Budget>, cfg: &OracleConfig) -> Result<Option<OraclePoint>> {
    let limit = k_push.into().to_units(instance.costs().scale);
    let map = instance.map();
    let goal = instance.goal();
    let mut states = Interner::new(cfg.max_states);
    let mut nodes: Vec<Node> = Vec::new();
    // (state, resource used, or 0 when unlimited) -> best time settled/tentative
    let mut best: HashMap<(usize, u64), (u64, u64)> = HashMap::new();
    let mut heap = BinaryHeap::new();

    let s0 = states.id(instance.initial_state())?;
    nodes.push(Node {
        cost: CostVec2::ZERO,
        parent: None,
        action: None,
    });
    best.insert((s0, 0), (0, 0));
    heap.push(Reverse((0u64, 0u64, s0, 0usize)));

    while let Some(Reverse((t, r, si, ni))) = heap.pop() {
        let key = (si, if limit.is_some() { r } else { 0 });
        if best.get(&key).is_some_and(|b| *b < (t, r)) {
            continue;
        }
        let here = states.states[si].clone();
        if here.robot() == goal {
            return Ok(Some(OraclePoint {
                cost: CostVec2::new(t, r),
                actions: unwind(&nodes, ni),
            }));
        }
        for (next, step) in successors(&here, map) {
            let c = step_cost(instance, step.kind);
            let (t2, r2) = (t + c.c1, r + c.c2);
            if limit.is_some_and(|k| r2 > k) {
                continue;
            }
            if t2 > cfg.max_cost {
                return Err(Error::OracleCap(format!("time {t2} exceeds max_cost {}", cfg.max_cost)));
            }
            let sj = states.id(next)?;
            let key = (sj, if limit.is_some() { r2 } else { 0 });
            // unlimited: the resource dimension collapses and (time, pushes)
            // compares lexicographically
            if best.get(&key).is_some_and(|b| *b <= (t2, r2)) {
                continue;
            }
            best.insert(key, (t2, r2));
            let id = nodes.len();
            nodes.push(Node {
                cost: CostVec2::new(t2, r2),
                parent: Some(ni),
                action: Some(step),
            });
            heap.push(Reverse((t2, r2, sj, id)));
        }
    }
    Ok(None)
}

/// Breadth-first shortest move count treating every object as a wall.
pub fn shortest_path_objects_as_walls(instance: &Instance) -> Option<u64> {
    let map = instance.map();
    let blocked = |c: Cell| map.is_blocked(c) || instance.objects().binary_search(&c).is_ok();
    let mut dist = vec![u64::MAX; map.num_cells()];
    let mut queue = VecDeque::new();
    dist[map.index(instance.start())] = 0;
    queue.push_back(instance.start());
    while let Some(c) = queue.pop_front() {
        let d = dist[map.index(c)];
        if c == instance.goal() {
            return Some(d);
        }
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            if let Some(n) = map.step(c, dx, dy) {
                if !blocked(n) && dist[map.index(n)] == u64::MAX {
                    dist[map.index(n)] = d + 1;
                    queue.push_back(n);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::map::{parse_map, GridMap};
    use crate::grid::state::{actions_to_string, replay};

    fn c(x: u16, y: u16) -> Cell {
        Cell::new(x, y)
    }

    fn corridor() -> Instance {
        Instance::new(GridMap::empty(6, 1), c(0, 0), c(4, 0), vec![c(2, 0)]).unwrap()
    }

    #[test]
    fn corridor_front_by_hand() {
        // the only route: step right, then push three times
        let inst = corridor();
        let front = oracle_pareto(&inst, &OracleConfig::default()).unwrap();
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].cost, CostVec2::new(4, 3));
        assert_eq!(actions_to_string(&front[0].actions), "Rrrr");
        assert_eq!(replay(&inst, &front[0].actions).unwrap().1, CostVec2::new(4, 3));
    }

    #[test]
    fn corridor_budgets() {
        let inst = corridor();
        let cfg = OracleConfig::default();
        assert_eq!(oracle_rc(&inst, 2, &cfg).unwrap(), None);
        assert_eq!(oracle_rc(&inst, 3, &cfg).unwrap().unwrap().cost, CostVec2::new(4, 3));
        assert_eq!(
            oracle_rc(&inst, Budget::Unlimited, &cfg).unwrap().unwrap().cost,
            CostVec2::new(4, 3)
        );
    }

    #[test]
    fn no_objects_reduces_to_bfs() {
        let map = parse_map("type octile\nheight 3\nwidth 4\nmap\n....\n.@@.\n....\n").unwrap();
        let inst = Instance::new(map, c(0, 1), c(3, 1), vec![]).unwrap();
        let front = oracle_pareto(&inst, &OracleConfig::default()).unwrap();
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].cost, CostVec2::new(5, 0));
        assert_eq!(shortest_path_objects_as_walls(&inst), Some(5));
    }

    #[test]
    fn infeasible_is_empty() {
        let map = parse_map("type octile\nheight 1\nwidth 3\nmap\n.@.\n").unwrap();
        let inst = Instance::new(map, c(0, 0), c(2, 0), vec![]).unwrap();
        assert!(oracle_pareto(&inst, &OracleConfig::default()).unwrap().is_empty());
        assert!(oracle_rc(&inst, Budget::Unlimited, &OracleConfig::default()).unwrap().is_none());
    }

    #[test]
    fn zero_budget_matches_objects_as_walls() {
        let map = GridMap::empty(4, 3);
        let inst = Instance::new(map, c(0, 0), c(3, 0), vec![c(1, 0), c(2, 1)]).unwrap();
        let rc = oracle_rc(&inst, 0, &OracleConfig::default()).unwrap().unwrap();
        assert_eq!(Some(rc.cost.c1), shortest_path_objects_as_walls(&inst));
        assert_eq!(rc.cost.c2, 0);
    }

    #[test]
    fn caps_refuse() {
        let inst = Instance::new(GridMap::empty(5, 5), c(0, 0), c(4, 4), vec![c(2, 2)]).unwrap();
        let tiny = OracleConfig {
            max_states: 10,
            max_cost: 1_000,
        };
        assert!(matches!(oracle_pareto(&inst, &tiny), Err(Error::OracleCap(_))));
        assert!(matches!(oracle_rc(&inst, 1, &tiny), Err(Error::OracleCap(_))));
        let short = OracleConfig {
            max_states: 1_000_000,
            max_cost: 3,
        };
        assert!(matches!(oracle_pareto(&inst, &short), Err(Error::OracleCap(_))));
    }
}
