use std::collections::VecDeque;

use crate::cost::{ActionCosts, CostVec2};
use crate::grid::map::GridMap;
use crate::grid::state::{Direction, WorldState};
use crate::grid::Cell;

/// Shortest move counts to a goal cell among static obstacles only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    width: u16,
    dist: Vec<u32>,
}

impl DistanceField {
    pub const UNREACHABLE: u32 = u32::MAX;

    /// `None` when the cell cannot reach the goal (or is off the map).
    #[inline]
    pub fn get(&self, c: Cell) -> Option<u32> {
        if c.x >= self.width {
            return None;
        }
        let i = c.y as usize * self.width as usize + c.x as usize;
        self.dist.get(i).copied().filter(|d| *d != Self::UNREACHABLE)
    }
}

/// Backward search from `goal` over free cells, ignoring objects. Every edge
/// costs one move, so the Dijkstra frontier is a FIFO queue.
pub fn backward_dijkstra(map: &GridMap, goal: Cell) -> DistanceField {
    let mut dist = vec![DistanceField::UNREACHABLE; map.num_cells()];
    if map.is_free(goal) {
        let mut queue = VecDeque::new();
        dist[map.index(goal)] = 0;
        queue.push_back(goal);
        while let Some(c) = queue.pop_front() {
            let d = dist[map.index(c)];
            for dir in Direction::ALL {
                let (dx, dy) = dir.delta();
                if let Some(n) = map.step(c, dx, dy) {
                    let i = map.index(n);
                    if map.is_free(n) && dist[i] == DistanceField::UNREACHABLE {
                        dist[i] = d + 1;
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    DistanceField {
        width: map.width(),
        dist,
    }
}

/// `(d*(robot), 0)` under unit costs; in general `d*` times the cheapest step
/// cost in each component. `None` means the goal is unreachable even with every
/// object removed.
pub fn heuristic(state: &WorldState, dist: &DistanceField, costs: &ActionCosts) -> Option<CostVec2> {
    dist.get(state.robot()).map(|d| costs.min_step().scaled(d as u64))
}
