//! Stable serialized form of a search result.
//!
//! ```json
//! {
//!   "schema": "pamo.result/1",
//!   "mode": "mo",
//!   "completed": true,
//!   "solutions": [ { "cost": [4.0, 3.0], "actions": "Rrrr" } ],
//!   "stats": { "expansions": 4, "generated": 6, ... }
//! }
//! ```
//!
//! Action letters: `R` +x, `L` -x, `D` +y, `U` -y; pushes are lowercase.

use serde::{Deserialize, Serialize};

use super::SearchResult;
use crate::cost::ActionCosts;
use crate::grid::state::actions_to_string;

pub const RESULT_SCHEMA: &str = "pamo.result/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub cost: [f64; 2],
    pub actions: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub expansions: u64,
    pub generated: u64,
    pub pruned_frontier: u64,
    pub pruned_solution: u64,
    pub states: u64,
    pub wall_time_s: f64,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub schema: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_push: Option<f64>,
    pub completed: bool,
    pub solutions: Vec<SolutionDoc>,
    pub stats: StatsDoc,
}

impl ResultDoc {
    pub fn new(result: &SearchResult, costs: &ActionCosts, mode: &str, k_push: Option<f64>) -> Self {
        ResultDoc {
            schema: RESULT_SCHEMA.to_string(),
            mode: mode.to_string(),
            k_push,
            completed: result.completed(),
            solutions: result
                .solutions
                .iter()
                .map(|s| SolutionDoc {
                    cost: costs.real_pair(s.cost),
                    actions: actions_to_string(&s.actions),
                })
                .collect(),
            stats: StatsDoc {
                expansions: result.stats.expansions,
                generated: result.stats.generated,
                pruned_frontier: result.stats.pruned_frontier,
                pruned_solution: result.stats.pruned_solution,
                states: result.stats.states,
                wall_time_s: result.stats.wall_time.as_secs_f64(),
                timed_out: result.stats.timed_out,
            },
        }
    }
}
