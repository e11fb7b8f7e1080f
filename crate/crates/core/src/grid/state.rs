//! World states and the move/push transition rules.

use std::fmt;
use std::hash::BuildHasherDefault;

use indexmap::IndexSet;
use rustc_hash::FxHasher;

use super::instance::Instance;
use super::map::GridMap;
use super::Cell;
use crate::cost::CostVec2;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    PosX,
    NegX,
    PosY,
    NegY,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::PosX, Direction::NegX, Direction::PosY, Direction::NegY];

    #[inline]
    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::PosX => (1, 0),
            Direction::NegX => (-1, 0),
            Direction::PosY => (0, 1),
            Direction::NegY => (0, -1),
        }
    }

    pub fn reverse(self) -> Direction {
        match self {
            Direction::PosX => Direction::NegX,
            Direction::NegX => Direction::PosX,
            Direction::PosY => Direction::NegY,
            Direction::NegY => Direction::PosY,
        }
    }

    /// Letter used in action strings. Rows grow downward in map files, so +y is `D`.
    pub fn letter(self) -> char {
        match self {
            Direction::PosX => 'R',
            Direction::NegX => 'L',
            Direction::PosY => 'D',
            Direction::NegY => 'U',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Move,
    Push,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ActionStep {
    pub direction: Direction,
    pub kind: ActionKind,
}

impl ActionStep {
    pub fn new(direction: Direction, kind: ActionKind) -> Self {
        ActionStep { direction, kind }
    }

    /// Uppercase for moves, lowercase for pushes.
    pub fn to_char(self) -> char {
        let c = self.direction.letter();
        match self.kind {
            ActionKind::Move => c,
            ActionKind::Push => c.to_ascii_lowercase(),
        }
    }

    pub fn from_char(c: char) -> Option<ActionStep> {
        let kind = if c.is_ascii_lowercase() { ActionKind::Push } else { ActionKind::Move };
        let direction = match c.to_ascii_uppercase() {
            'R' => Direction::PosX,
            'L' => Direction::NegX,
            'D' => Direction::PosY,
            'U' => Direction::NegY,
            _ => return None,
        };
        Some(ActionStep { direction, kind })
    }
}

/// Encode a plan as e.g. `"RrrD"`.
pub fn actions_to_string(actions: &[ActionStep]) -> String {
    actions.iter().map(|a| a.to_char()).collect()
}

pub fn actions_from_str(s: &str) -> Result<Vec<ActionStep>> {
    s.chars()
        .enumerate()
        .map(|(i, c)| {
            ActionStep::from_char(c).ok_or_else(|| Error::IllegalAction {
                index: i,
                reason: format!("unknown action letter {c:?}"),
            })
        })
        .collect()
}

/// Robot cell plus the object cells in canonical `(y, x)` order. Objects are
/// interchangeable, so two index-permuted layouts are the same state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WorldState {
    robot: Cell,
    objects: Box<[Cell]>,
}

impl WorldState {
    pub fn new(robot: Cell, mut objects: Vec<Cell>) -> Self {
        objects.sort_unstable();
        WorldState {
            robot,
            objects: objects.into_boxed_slice(),
        }
    }

    pub fn robot(&self) -> Cell {
        self.robot
    }

    pub fn objects(&self) -> &[Cell] {
        &self.objects
    }

    #[inline]
    pub fn has_object(&self, c: Cell) -> bool {
        self.objects.binary_search(&c).is_ok()
    }

    /// Check the state invariants against `map`.
    pub fn validate(&self, map: &GridMap) -> Result<()> {
        if map.is_blocked(self.robot) {
            return Err(Error::InvalidInstance(format!("robot at {} is not a free cell", self.robot)));
        }
        for w in self.objects.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInstance(format!("objects not distinct/sorted at {}", w[1])));
            }
        }
        for o in self.objects.iter() {
            if map.is_blocked(*o) {
                return Err(Error::InvalidInstance(format!("object at {o} is not a free cell")));
            }
        }
        if self.has_object(self.robot) {
            return Err(Error::InvalidInstance(format!("robot shares cell {} with an object", self.robot)));
        }
        Ok(())
    }

    /// Apply one step, or explain why it is illegal.
    pub fn apply(&self, map: &GridMap, dir: Direction) -> std::result::Result<(WorldState, ActionKind), &'static str> {
        let (dx, dy) = dir.delta();
        let target = match map.step(self.robot, dx, dy) {
            Some(t) if map.is_free(t) => t,
            Some(_) => return Err("robot would enter a static obstacle"),
            None => return Err("robot would leave the grid"),
        };
        match self.objects.binary_search(&target) {
            Err(_) => Ok((
                WorldState {
                    robot: target,
                    objects: self.objects.clone(),
                },
                ActionKind::Move,
            )),
            Ok(k) => {
                let dest = match map.step(target, dx, dy) {
                    Some(d) if map.is_free(d) => d,
                    Some(_) => return Err("object would be pushed into a static obstacle"),
                    None => return Err("object would be pushed off the grid"),
                };
                if self.has_object(dest) {
                    return Err("object would be pushed into another object");
                }
                let mut objects = self.objects.to_vec();
                objects.remove(k);
                let pos = objects.binary_search(&dest).unwrap_err();
                objects.insert(pos, dest);
                Ok((
                    WorldState {
                        robot: target,
                        objects: objects.into_boxed_slice(),
                    },
                    ActionKind::Push,
                ))
            }
        }
    }
}

impl fmt::Display for WorldState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "robot {} objects [", self.robot)?;
        for (i, o) in self.objects.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "]")
    }
}

/// All legal successors of `state`, at most one per direction.
pub fn successors(state: &WorldState, map: &GridMap) -> Vec<(WorldState, ActionStep)> {
    let mut out = Vec::with_capacity(4);
    for dir in Direction::ALL {
        if let Ok((next, kind)) = state.apply(map, dir) {
            out.push((next, ActionStep::new(dir, kind)));
        }
    }
    out
}

/// Apply `actions` from the instance's initial state, accumulating cost.
pub fn replay(instance: &Instance, actions: &[ActionStep]) -> Result<(WorldState, CostVec2)> {
    let map = instance.map();
    let costs = instance.costs();
    let mut state = instance.initial_state();
    let mut cost = CostVec2::ZERO;
    for (index, step) in actions.iter().enumerate() {
        let (next, kind) = state
            .apply(map, step.direction)
            .map_err(|reason| Error::IllegalAction {
                index,
                reason: reason.to_string(),
            })?;
        if kind != step.kind {
            return Err(Error::IllegalAction {
                index,
                reason: format!("step labelled {:?} but the transition is a {:?}", step.kind, kind),
            });
        }
        cost = cost
            + match kind {
                ActionKind::Move => costs.mov,
                ActionKind::Push => costs.push,
            };
        state = next;
    }
    Ok((state, cost))
}

/// Dense id handed out by a [`StateStore`]; equal ids iff equal states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

#[inline]
fn pack(c: Cell) -> u32 {
    ((c.y as u32) << 16) | c.x as u32
}

#[inline]
fn unpack(v: u32) -> Cell {
    Cell::new((v & 0xffff) as u16, (v >> 16) as u16)
}

/// Interns world states so each distinct state gets a small fixed-size key.
///
/// States are stored as a delta against a base object layout (usually the
/// initial one): the robot cell, the base cells that are now empty and the
/// non-base cells that are now occupied. The delta is unique for a given object
/// set, so comparing deltas is comparing full states, and keys never collide.
#[derive(Default)]
pub struct StateStore {
    base: Vec<Cell>,
    states: IndexSet<Box<[u32]>, BuildHasherDefault<FxHasher>>,
}

impl StateStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Store deltas against `base` (sorted internally).
    pub fn with_base(base: &[Cell]) -> Self {
        let mut base = base.to_vec();
        base.sort_unstable();
        StateStore {
            base,
            states: IndexSet::default(),
        }
    }

    fn encode(&self, state: &WorldState) -> Box<[u32]> {
        let objs = state.objects();
        let (mut i, mut j) = (0, 0);
        let mut removed = Vec::new();
        let mut added = Vec::new();
        while i < self.base.len() || j < objs.len() {
            match (self.base.get(i), objs.get(j)) {
                (Some(b), Some(o)) if b == o => {
                    i += 1;
                    j += 1;
                }
                (Some(b), Some(o)) if b < o => {
                    removed.push(pack(*b));
                    i += 1;
                }
                (Some(b), None) => {
                    removed.push(pack(*b));
                    i += 1;
                }
                (_, Some(o)) => {
                    added.push(pack(*o));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let mut key = Vec::with_capacity(2 + removed.len() + added.len());
        key.push(pack(state.robot()));
        key.push(removed.len() as u32);
        key.extend(removed);
        key.extend(added);
        key.into_boxed_slice()
    }

    fn decode(&self, key: &[u32]) -> WorldState {
        let robot = unpack(key[0]);
        let n_removed = key[1] as usize;
        let removed = &key[2..2 + n_removed];
        let added = &key[2 + n_removed..];
        let mut objects: Vec<Cell> = Vec::with_capacity(self.base.len() + added.len() - removed.len());
        let mut r = 0;
        let mut a = 0;
        for b in &self.base {
            while a < added.len() && unpack(added[a]) < *b {
                objects.push(unpack(added[a]));
                a += 1;
            }
            if r < removed.len() && unpack(removed[r]) == *b {
                r += 1;
            } else {
                objects.push(*b);
            }
        }
        objects.extend(added[a..].iter().map(|v| unpack(*v)));
        WorldState {
            robot,
            objects: objects.into_boxed_slice(),
        }
    }

    /// Returns the key and whether the state was new.
    pub fn intern(&mut self, state: WorldState) -> (StateId, bool) {
        let (i, fresh) = self.states.insert_full(self.encode(&state));
        (StateId(i as u32), fresh)
    }

    pub fn key(&self, state: &WorldState) -> Option<StateId> {
        self.states.get_index_of(&self.encode(state)).map(|i| StateId(i as u32))
    }

    pub fn get(&self, id: StateId) -> WorldState {
        self.decode(&self.states[id.0 as usize])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::map::parse_map;

    fn corridor(n: u16) -> GridMap {
        GridMap::empty(n, 1)
    }

    fn c(x: u16, y: u16) -> Cell {
        Cell::new(x, y)
    }

    #[test]
    fn push_in_corridor() {
        let map = corridor(4);
        let s = WorldState::new(c(0, 0), vec![c(1, 0)]);
        let succ = successors(&s, &map);
        assert_eq!(succ.len(), 1);
        let (next, step) = &succ[0];
        assert_eq!(next.robot(), c(1, 0));
        assert_eq!(next.objects(), &[c(2, 0)]);
        assert_eq!(*step, ActionStep::new(Direction::PosX, ActionKind::Push));
    }

    #[test]
    fn cannot_push_into_object() {
        let map = corridor(4);
        let s = WorldState::new(c(0, 0), vec![c(1, 0), c(2, 0)]);
        assert!(successors(&s, &map).is_empty());
    }

    #[test]
    fn cannot_push_off_grid_or_into_wall() {
        let map = corridor(3);
        let s = WorldState::new(c(1, 0), vec![c(2, 0)]);
        let dirs: Vec<Direction> = successors(&s, &map).iter().map(|(_, a)| a.direction).collect();
        assert_eq!(dirs, vec![Direction::NegX]);

        let map = parse_map("type octile\nheight 1\nwidth 3\nmap\n..@\n").unwrap();
        let s = WorldState::new(c(0, 0), vec![c(1, 0)]);
        assert!(successors(&s, &map).is_empty());
    }

    #[test]
    fn moves_in_open_space() {
        let map = GridMap::empty(3, 3);
        let s = WorldState::new(c(1, 1), vec![]);
        let succ = successors(&s, &map);
        assert_eq!(succ.len(), 4);
        assert!(succ.iter().all(|(_, a)| a.kind == ActionKind::Move));
    }

    #[test]
    fn canonical_order() {
        let a = WorldState::new(c(0, 0), vec![c(2, 1), c(1, 0), c(0, 2)]);
        let b = WorldState::new(c(0, 0), vec![c(0, 2), c(2, 1), c(1, 0)]);
        assert_eq!(a, b);
        assert_eq!(a.objects(), &[c(1, 0), c(2, 1), c(0, 2)]);
    }

    #[test]
    fn state_keys() {
        let mut store = StateStore::new();
        let a = WorldState::new(c(0, 0), vec![c(1, 1), c(2, 2)]);
        let b = WorldState::new(c(0, 0), vec![c(2, 2), c(1, 1)]);
        let d = WorldState::new(c(0, 0), vec![c(1, 1), c(2, 1)]);
        let (ka, fresh) = store.intern(a.clone());
        assert!(fresh);
        assert_eq!(store.intern(a.clone()), (ka, false));
        assert_eq!(store.intern(b).0, ka);
        let (kd, fresh) = store.intern(d.clone());
        assert!(fresh);
        assert_ne!(ka, kd);
        assert_eq!(store.get(kd), d);
        assert_eq!(store.key(&a), Some(ka));
    }

    proptest::proptest! {
        #[test]
        fn delta_encoding_round_trips(
            base in proptest::collection::btree_set((0u16..6, 0u16..6), 0..8),
            objs in proptest::collection::btree_set((0u16..6, 0u16..6), 0..8),
            robot in (0u16..6, 0u16..6),
        ) {
            let base: Vec<Cell> = base.into_iter().map(Cell::from).collect();
            let objs: Vec<Cell> = objs.into_iter().map(Cell::from).collect();
            let mut store = StateStore::with_base(&base);
            let s = WorldState::new(Cell::from(robot), objs);
            let (id, _) = store.intern(s.clone());
            proptest::prop_assert_eq!(store.get(id), s.clone());
            let mut plain = StateStore::new();
            let (id, _) = plain.intern(s.clone());
            proptest::prop_assert_eq!(plain.get(id), s);
        }
    }

    #[test]
    fn action_letters_round_trip() {
        let s = "RrDdLlUu";
        let acts = actions_from_str(s).unwrap();
        assert_eq!(actions_to_string(&acts), s);
        assert!(actions_from_str("RX").is_err());
    }

    #[test]
    fn validate_rejects_bad_states() {
        let map = parse_map("type octile\nheight 1\nwidth 3\nmap\n..@\n").unwrap();
        assert!(WorldState::new(c(2, 0), vec![]).validate(&map).is_err());
        assert!(WorldState::new(c(0, 0), vec![c(0, 0)]).validate(&map).is_err());
        assert!(WorldState::new(c(0, 0), vec![c(1, 0), c(1, 0)]).validate(&map).is_err());
        assert!(WorldState::new(c(0, 0), vec![c(1, 0)]).validate(&map).is_ok());
    }
}
