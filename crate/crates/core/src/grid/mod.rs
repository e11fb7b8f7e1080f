//! Grid world: maps, instances, states and the push/move transition rules.

pub mod instance;
pub mod map;
pub mod state;

use std::cmp::Ordering;
use std::fmt;

/// A grid cell, `x` is the column and `y` the row.
///
/// Cells order by `(y, x)`, which is also row-major index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: u16,
    pub y: u16,
}

impl Cell {
    pub const fn new(x: u16, y: u16) -> Self {
        Cell { x, y }
    }

    /// Neighbor at offset `(dx, dy)`, or `None` if it would leave the non-negative quadrant.
    #[inline]
    pub fn offset(self, dx: i32, dy: i32) -> Option<Cell> {
        let x = self.x as i32 + dx;
        let y = self.y as i32 + dy;
        if x < 0 || y < 0 || x > u16::MAX as i32 || y > u16::MAX as i32 {
            None
        } else {
            Some(Cell::new(x as u16, y as u16))
        }
    }

    pub fn manhattan(self, other: Cell) -> u32 {
        (self.x as i32 - other.x as i32).unsigned_abs() + (self.y as i32 - other.y as i32).unsigned_abs()
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(u16, u16)> for Cell {
    fn from((x, y): (u16, u16)) -> Self {
        Cell::new(x, y)
    }
}
