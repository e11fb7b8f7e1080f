//! Static occupancy grids in the octile benchmark map format, plus a few
//! deterministic generators for synthetic benchmark maps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Cell;
use crate::error::{Error, Result};

const OBSTACLE_CHARS: [char; 4] = ['@', 'O', 'T', 'W'];
const FREE_CHARS: [char; 3] = ['.', 'G', 'S'];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridMap {
    width: u16,
    height: u16,
    static_mask: Vec<bool>,
}

impl GridMap {
    pub fn new(width: u16, height: u16, static_mask: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInstance(format!("map must be at least 1x1, got {width}x{height}")));
        }
        if static_mask.len() != width as usize * height as usize {
            return Err(Error::InvalidInstance(format!(
                "static mask has {} entries, expected {}",
                static_mask.len(),
                width as usize * height as usize
            )));
        }
        Ok(GridMap {
            width,
            height,
            static_mask,
        })
    }

    pub fn empty(width: u16, height: u16) -> Self {
        GridMap::new(width, height, vec![false; width as usize * height as usize]).expect("positive dimensions")
    }

    pub fn width(&self) -> u16 {
        self.width
    }

    pub fn height(&self) -> u16 {
        self.height
    }

    pub fn num_cells(&self) -> usize {
        self.static_mask.len()
    }

    #[inline]
    pub fn in_bounds(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height
    }

    #[inline]
    pub fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width as usize + c.x as usize
    }

    #[inline]
    pub fn cell_at(&self, index: usize) -> Cell {
        Cell::new((index % self.width as usize) as u16, (index / self.width as usize) as u16)
    }

    /// Static obstacle test; off-grid cells count as obstacles.
    #[inline]
    pub fn is_blocked(&self, c: Cell) -> bool {
        !self.in_bounds(c) || self.static_mask[self.index(c)]
    }

    #[inline]
    pub fn is_free(&self, c: Cell) -> bool {
        !self.is_blocked(c)
    }

    /// Step from `c` by `(dx, dy)`; `None` if that leaves the grid.
    #[inline]
    pub fn step(&self, c: Cell, dx: i32, dy: i32) -> Option<Cell> {
        c.offset(dx, dy).filter(|n| self.in_bounds(*n))
    }

    pub fn set_blocked(&mut self, c: Cell, blocked: bool) {
        let i = self.index(c);
        self.static_mask[i] = blocked;
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.num_cells()).map(|i| self.cell_at(i))
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells().filter(|c| self.is_free(*c))
    }

    /// Render in the octile benchmark format.
    pub fn to_text(&self) -> String {
        let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", self.height, self.width);
        for y in 0..self.height {
            for x in 0..self.width {
                out.push(if self.is_blocked(Cell::new(x, y)) { '@' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    /// Uniformly random static obstacles covering `floor(density * cells)` cells.
    pub fn random(width: u16, height: u16, density: f64, seed: u64) -> Self {
        let mut map = GridMap::empty(width, height);
        let n = (density * map.num_cells() as f64 + 1e-9).floor() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx: Vec<usize> = (0..map.num_cells()).collect();
        idx.shuffle(&mut rng);
        for i in idx.into_iter().take(n) {
            map.static_mask[i] = true;
        }
        map
    }

    /// Square rooms of `room` free cells per side separated by one-cell walls; every
    /// wall between two neighboring rooms gets one random door, so the free space is
    /// connected.
    pub fn rooms(width: u16, height: u16, room: u16, seed: u64) -> Self {
        assert!(room >= 1);
        let mut map = GridMap::empty(width, height);
        let pitch = room + 1;
        for y in 0..height {
            for x in 0..width {
                if x % pitch == room || y % pitch == room {
                    map.set_blocked(Cell::new(x, y), true);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rooms_x = width.div_ceil(pitch);
        let rooms_y = height.div_ceil(pitch);
        for ry in 0..rooms_y {
            for rx in 0..rooms_x {
                let x0 = rx * pitch;
                let y0 = ry * pitch;
                // door in the east wall
                let wall_x = x0 + room;
                if wall_x + 1 < width {
                    let span = room.min(height - y0);
                    let y = y0 + rng.gen_range(0..span);
                    map.set_blocked(Cell::new(wall_x, y), false);
                }
                // door in the south wall
                let wall_y = y0 + room;
                if wall_y + 1 < height {
                    let span = room.min(width - x0);
                    let x = x0 + rng.gen_range(0..span);
                    map.set_blocked(Cell::new(x, wall_y), false);
                }
            }
        }
        map
    }

    /// Free cell closest (Manhattan, then row-major) to `target`.
    pub fn nearest_free(&self, target: Cell) -> Option<Cell> {
        self.free_cells().min_by_key(|c| (c.manhattan(target), *c))
    }
}

fn perr(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::MapParse {
        line,
        column,
        msg: msg.into(),
    }
}

/// Parse a map in the octile benchmark format:
///
/// ```text
/// type octile
/// height H
/// width W
/// map
/// <H rows of W characters>
/// ```
pub fn parse_map(text: &str) -> Result<GridMap> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let mut height: Option<u16> = None;
    let mut width: Option<u16> = None;
    let mut saw_type = false;
    let mut header_end = 0;

    for (ln, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "map" {
            header_end = ln;
            break;
        }
        let mut parts = trimmed.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let value = parts.next().ok_or_else(|| perr(ln, 1, format!("header `{key}` has no value")))?;
        if parts.next().is_some() {
            return Err(perr(ln, 1, format!("header `{key}` has trailing tokens")));
        }
        let value_col = line.find(value).map_or(1, |p| p + 1);
        match key {
            "type" => saw_type = true,
            "height" | "width" => {
                let n: u16 = value
                    .parse()
                    .map_err(|_| perr(ln, value_col, format!("`{value}` is not a valid {key}")))?;
                if n == 0 {
                    return Err(perr(ln, value_col, format!("{key} must be positive")));
                }
                if key == "height" {
                    height = Some(n);
                } else {
                    width = Some(n);
                }
            }
            other => return Err(perr(ln, 1, format!("unknown header `{other}`"))),
        }
    }
    if header_end == 0 {
        return Err(perr(text.lines().count().max(1), 1, "missing `map` line"));
    }
    if !saw_type {
        return Err(perr(1, 1, "missing `type` header"));
    }
    let height = height.ok_or_else(|| perr(1, 1, "missing `height` header"))?;
    let width = width.ok_or_else(|| perr(1, 1, "missing `width` header"))?;

    let mut mask = Vec::with_capacity(width as usize * height as usize);
    let mut rows = 0usize;
    let mut last_line = header_end;
    for (ln, line) in lines {
        last_line = ln;
        if rows == height as usize {
            if line.trim().is_empty() {
                continue;
            }
            return Err(perr(ln, 1, format!("more than the declared {height} rows")));
        }
        let mut cols = 0usize;
        for (ci, ch) in line.chars().enumerate() {
            if cols == width as usize {
                return Err(perr(ln, ci + 1, format!("row longer than the declared width {width}")));
            }
            if OBSTACLE_CHARS.contains(&ch) {
                mask.push(true);
            } else if FREE_CHARS.contains(&ch) {
                mask.push(false);
            } else {
                return Err(perr(ln, ci + 1, format!("unknown map character {ch:?}")));
            }
            cols += 1;
        }
        if cols != width as usize {
            return Err(perr(ln, cols + 1, format!("row has {cols} cells, expected {width}")));
        }
        rows += 1;
    }
    if rows != height as usize {
        return Err(perr(last_line + 1, 1, format!("found {rows} rows, expected {height}")));
    }
    GridMap::new(width, height, mask)
}
