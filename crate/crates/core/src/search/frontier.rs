use smallvec::SmallVec;

use crate::cost::CostVec2;

/// Non-dominated cost vectors retained at one state.
///
/// Entries are kept sorted with `c1` strictly increasing and `c2` strictly
/// decreasing; for two objectives that shape is the same as pairwise
/// non-dominance, and it makes both checks a binary search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrontierSet {
    entries: SmallVec<[CostVec2; 1]>,
}

impl FrontierSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[CostVec2] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True if some retained vector is component-wise `<= g` (equality prunes).
    #[inline]
    pub fn covers(&self, g: &CostVec2) -> bool {
        // last entry with c1 <= g.c1 has the smallest c2 among all such entries
        let n = self.entries.partition_point(|e| e.c1 <= g.c1);
        n > 0 && self.entries[n - 1].c2 <= g.c2
    }

    /// Insert `g`, dropping every entry it dominates. Callers must have checked
    /// `!self.covers(&g)` first. Returns the number of entries removed.
    pub fn insert(&mut self, g: CostVec2) -> usize {
        debug_assert!(!self.covers(&g), "insert of a covered vector {g}");
        let lo = self.entries.partition_point(|e| e.c1 < g.c1);
        // entries from `lo` on have c1 >= g.c1 and decreasing c2
        let hi = lo + self.entries[lo..].partition_point(|e| e.c2 >= g.c2);
        let removed = hi - lo;
        if removed == 0 {
            self.entries.insert(lo, g);
        } else {
            self.entries[lo] = g;
            self.entries.drain(lo + 1..hi);
        }
        removed
    }

    /// Sorted strictly-monotone shape holds.
    pub fn is_well_formed(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].c1 < w[1].c1 && w[0].c2 > w[1].c2)
    }
}

/// Prune test for a label with cost `g` against the frontier of its state.
pub fn frontier_check(g: &CostVec2, frontier: &FrontierSet) -> bool {
    frontier.covers(g)
}

/// Bi-objective global prune: some solution found so far is `<= f`.
pub fn solution_check_mo(f: &CostVec2, goal_frontier: &FrontierSet) -> bool {
    goal_frontier.covers(f)
}

/// Budgeted global prune: the second component exceeds the limit (`None` is unlimited).
pub fn solution_check_rc(f: &CostVec2, limit: Option<u64>) -> bool {
    limit.is_some_and(|k| f.c2 > k)
}
