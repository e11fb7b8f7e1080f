//! Problem instances and their TOML document format.
//!
//! ```toml
//! cost_move = [1, 0]
//! cost_push = [1, 1]
//! goal = [7, 7]
//! map = "maps/empty-8-8.map"
//! object_fraction = 0.1
//! objects = [[3, 0], [5, 2]]
//! seed = 4
//! start = [0, 0]
//! ```
//!
//! Keys are written in sorted order and the document ends with a newline, so
//! regenerated files diff cleanly.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::map::GridMap;
use super::state::WorldState;
use super::Cell;
use crate::cost::ActionCosts;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    map: Arc<GridMap>,
    start: Cell,
    goal: Cell,
    objects: Vec<Cell>,
    costs: ActionCosts,
    pub map_path: String,
    pub seed: Option<u64>,
    pub object_fraction: Option<f64>,
}

impl Instance {
    /// Default costs: move (1, 0), push (1, 1).
    pub fn new(map: GridMap, start: Cell, goal: Cell, objects: Vec<Cell>) -> Result<Self> {
        Self::with_costs(Arc::new(map), start, goal, objects, ActionCosts::default())
    }

    pub fn with_costs(
        map: Arc<GridMap>,
        start: Cell,
        goal: Cell,
        mut objects: Vec<Cell>,
        costs: ActionCosts,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if !map.in_bounds(start) {
            return bad(format!("start {start} is out of bounds"));
        }
        if !map.in_bounds(goal) {
            return bad(format!("goal {goal} is out of bounds"));
        }
        if map.is_blocked(start) {
            return bad(format!("start {start} is a static obstacle"));
        }
        if map.is_blocked(goal) {
            return bad(format!("goal {goal} is a static obstacle"));
        }
        for o in &objects {
            if !map.in_bounds(*o) {
                return bad(format!("object {o} is out of bounds"));
            }
            if map.is_blocked(*o) {
                return bad(format!("object {o} is on a static obstacle"));
            }
            if *o == start {
                return bad(format!("object {o} is on the start cell"));
            }
        }
        objects.sort_unstable();
        if let Some(w) = objects.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("duplicate object at {}", w[0]));
        }
        Ok(Instance {
            map,
            start,
            goal,
            objects,
            costs,
            map_path: String::new(),
            seed: None,
            object_fraction: None,
        })
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn shared_map(&self) -> Arc<GridMap> {
        Arc::clone(&self.map)
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    /// Initial object cells in canonical order.
    pub fn objects(&self) -> &[Cell] {
        &self.objects
    }

    pub fn costs(&self) -> &ActionCosts {
        &self.costs
    }

    pub fn initial_state(&self) -> WorldState {
        WorldState::new(self.start, self.objects.clone())
    }

    /// Serialize to the instance document format.
    pub fn to_document(&self) -> String {
        let num = |units: u64| {
            if self.costs.scale == 1 {
                Num::Int(units as i64)
            } else {
                Num::Float(self.costs.to_real(units))
            }
        };
        let doc = InstanceDoc {
            cost_move: Some([num(self.costs.mov.c1), num(self.costs.mov.c2)]),
            cost_push: Some([num(self.costs.push.c1), num(self.costs.push.c2)]),
            goal: pair(self.goal),
            map: self.map_path.clone(),
            object_fraction: self.object_fraction,
            objects: self.objects.iter().map(|c| pair(*c)).collect(),
            seed: self.seed,
            start: pair(self.start),
        };
        let mut text = toml::to_string(&doc).expect("instance documents always serialize");
        if !text.ends_with('\n') {
            text.push('\n');
        }
        text
    }
}

fn pair(c: Cell) -> [u32; 2] {
    [c.x as u32, c.y as u32]
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
}

impl Num {
    fn value(self) -> f64 {
        match self {
            Num::Int(i) => i as f64,
            Num::Float(f) => f,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cost_move: Option<[Num; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cost_push: Option<[Num; 2]>,
    goal: [u32; 2],
    #[serde(default)]
    map: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    object_fraction: Option<f64>,
    #[serde(default)]
    objects: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    start: [u32; 2],
}

fn to_cell(what: &str, p: [u32; 2]) -> Result<Cell> {
    if p[0] > u16::MAX as u32 || p[1] > u16::MAX as u32 {
        return Err(Error::InvalidInstance(format!("{what} [{}, {}] is out of bounds", p[0], p[1])));
    }
    Ok(Cell::new(p[0] as u16, p[1] as u16))
}

fn parse_doc(text: &str) -> Result<InstanceDoc> {
    toml::from_str(text).map_err(|e| Error::InstanceFormat(e.to_string()))
}

/// The `map` field of an instance document, without validating the rest.
pub fn instance_map_path(text: &str) -> Result<String> {
    Ok(parse_doc(text)?.map)
}

pub fn load_instance(text: &str, map: GridMap) -> Result<Instance> {
    load_instance_shared(text, Arc::new(map))
}

pub fn load_instance_shared(text: &str, map: Arc<GridMap>) -> Result<Instance> {
    let doc = parse_doc(text)?;
    let defaults = ActionCosts::default();
    let mov = doc
        .cost_move
        .map(|c| [c[0].value(), c[1].value()])
        .unwrap_or_else(|| defaults.mov_real());
    let push = doc
        .cost_push
        .map(|c| [c[0].value(), c[1].value()])
        .unwrap_or_else(|| defaults.push_real());
    let costs = ActionCosts::from_real(mov, push)?;
    let objects = doc
        .objects
        .iter()
        .map(|p| to_cell("object", *p))
        .collect::<Result<Vec<_>>>()?;
    let mut inst = Instance::with_costs(
        map,
        to_cell("start", doc.start)?,
        to_cell("goal", doc.goal)?,
        objects,
        costs,
    )?;
    inst.map_path = doc.map;
    inst.seed = doc.seed;
    inst.object_fraction = doc.object_fraction;
    Ok(inst)
}

/// Number of objects placed for a given fraction: `floor(fraction * width * height)`.
pub fn object_count(map: &GridMap, object_fraction: f64) -> usize {
    (object_fraction * map.num_cells() as f64 + 1e-9).floor() as usize
}

/// Place `object_count(map, fraction)` objects uniformly at random on free cells
/// other than start and goal. Deterministic in `seed`.
pub fn generate_instance(map: GridMap, object_fraction: f64, start: Cell, goal: Cell, seed: u64) -> Result<Instance> {
    generate_instance_shared(Arc::new(map), object_fraction, start, goal, seed)
}

pub fn generate_instance_shared(
    map: Arc<GridMap>,
    object_fraction: f64,
    start: Cell,
    goal: Cell,
    seed: u64,
) -> Result<Instance> {
    if !(0.0..=1.0).contains(&object_fraction) {
        return Err(Error::InvalidInstance(format!("object fraction {object_fraction} not in [0, 1]")));
    }
    for (what, c) in [("start", start), ("goal", goal)] {
        if map.is_blocked(c) {
            return Err(Error::InvalidInstance(format!("{what} {c} is not a free cell")));
        }
    }
    let needed = object_count(&map, object_fraction);
    let mut eligible: Vec<Cell> = map.free_cells().filter(|c| *c != start && *c != goal).collect();
    if needed > eligible.len() {
        return Err(Error::NotEnoughCells {
            needed,
            available: eligible.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (chosen, _) = eligible.partial_shuffle(&mut rng, needed);
    let objects = chosen.to_vec();
    let mut inst = Instance::with_costs(map, start, goal, objects, ActionCosts::default())?;
    inst.seed = Some(seed);
    inst.object_fraction = Some(object_fraction);
    Ok(inst)
}
