//! Planning among movable obstacles.
//!
//! A robot on a 4-connected occupancy grid may push single-cell objects out of its
//! way. This crate computes
//!
//! * the cost-unique Pareto front over (arrival time, push count) with [`solve_mo`],
//! * the fastest path under a push budget with [`solve_rc`],
//! * exhaustive ground truth for small instances in [`oracle`],
//! * a hybrid-state planner over continuous robot and box poses in [`hybrid`].
//!
//! ```
//! use pamo::{parse_map, Cell, Instance, Limits, solve_mo};
//!
//! let map = parse_map("type octile\nheight 1\nwidth 6\nmap\n......\n").unwrap();
//! let inst = Instance::new(map, Cell::new(0, 0), Cell::new(4, 0), vec![Cell::new(2, 0)]).unwrap();
//! let res = solve_mo(&inst, &Limits::none());
//! assert_eq!(res.costs(), vec![pamo::CostVec2::new(4, 3)]);
//! ```

pub mod cost;
pub mod error;
pub mod grid;
pub mod hybrid;
pub mod oracle;
pub mod search;

pub use cost::{dominates, ActionCosts, CostVec2};
pub use error::{Error, Result};
pub use grid::instance::{generate_instance, load_instance, Instance};
pub use grid::map::{parse_map, GridMap};
pub use grid::state::{replay, successors, ActionKind, ActionStep, Direction, StateId, StateStore, WorldState};
pub use grid::Cell;
pub use search::{solve_mo, solve_rc, Budget, Limits, SearchResult, SearchStats, Solution};
