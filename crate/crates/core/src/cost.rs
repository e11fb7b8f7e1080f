//! Two-component cost vectors and per-action costs.
//!
//! Costs are exact integers. Fractional action costs from instance documents are
//! scaled by a common power of ten so that dominance tests never compare floats.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// (arrival time, push count) in integer cost units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CostVec2 {
    pub c1: u64,
    pub c2: u64,
}

impl CostVec2 {
    pub const ZERO: CostVec2 = CostVec2 { c1: 0, c2: 0 };

    pub const fn new(c1: u64, c2: u64) -> Self {
        CostVec2 { c1, c2 }
    }

    /// Component-wise `self <= other`, equality included.
    #[inline]
    pub fn weakly_dominates(&self, other: &CostVec2) -> bool {
        self.c1 <= other.c1 && self.c2 <= other.c2
    }

    /// Multiply both components by a scalar.
    #[inline]
    pub fn scaled(&self, k: u64) -> CostVec2 {
        CostVec2::new(self.c1.saturating_mul(k), self.c2.saturating_mul(k))
    }
}

impl Add for CostVec2 {
    type Output = CostVec2;

    #[inline]
    fn add(self, rhs: CostVec2) -> CostVec2 {
        CostVec2::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl fmt::Display for CostVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c1, self.c2)
    }
}

/// `a` dominates `b` iff `a <= b` component-wise and `a != b`.
#[inline]
pub fn dominates(a: &CostVec2, b: &CostVec2) -> bool {
    a.weakly_dominates(b) && a != b
}

/// Cost of a plain move and of a push, both in units of `1 / scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ActionCosts {
    pub mov: CostVec2,
    pub push: CostVec2,
    pub scale: u64,
}

impl Default for ActionCosts {
    fn default() -> Self {
        ActionCosts {
            mov: CostVec2::new(1, 0),
            push: CostVec2::new(1, 1),
            scale: 1,
        }
    }
}

const MAX_DECIMALS: u32 = 6;

impl ActionCosts {
    /// Build from real-valued costs, choosing the smallest power-of-ten scale that
    /// makes every component an exact integer.
    pub fn from_real(mov: [f64; 2], push: [f64; 2]) -> Result<Self> {
        let all = [mov[0], mov[1], push[0], push[1]];
        if let Some(bad) = all.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInstance(format!(
                "action costs must be finite and non-negative, got {bad}"
            )));
        }
        for k in 0..=MAX_DECIMALS {
            let scale = 10u64.pow(k);
            let ints: Vec<Option<u64>> = all.iter().map(|v| to_int(*v * scale as f64)).collect();
            if ints.iter().all(Option::is_some) {
                let i: Vec<u64> = ints.into_iter().flatten().collect();
                return Ok(ActionCosts {
                    mov: CostVec2::new(i[0], i[1]),
                    push: CostVec2::new(i[2], i[3]),
                    scale,
                });
            }
        }
        Err(Error::InvalidInstance(format!(
            "action costs need more than {MAX_DECIMALS} decimal places: {all:?}"
        )))
    }

    pub fn mov_real(&self) -> [f64; 2] {
        [self.to_real(self.mov.c1), self.to_real(self.mov.c2)]
    }

    pub fn push_real(&self) -> [f64; 2] {
        [self.to_real(self.push.c1), self.to_real(self.push.c2)]
    }

    pub fn to_real(&self, units: u64) -> f64 {
        units as f64 / self.scale as f64
    }

    pub fn real_pair(&self, c: CostVec2) -> [f64; 2] {
        [self.to_real(c.c1), self.to_real(c.c2)]
    }

    /// Cheapest per-step cost in each component; multiplied by a static
    /// distance this is a lower bound on the cost-to-go.
    pub fn min_step(&self) -> CostVec2 {
        CostVec2::new(self.mov.c1.min(self.push.c1), self.mov.c2.min(self.push.c2))
    }
}

fn to_int(v: f64) -> Option<u64> {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) && r <= u32::MAX as f64 {
        Some(r as u64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_examples() {
        assert!(dominates(&CostVec2::new(1, 0), &CostVec2::new(2, 0)));
        assert!(!dominates(&CostVec2::new(2, 1), &CostVec2::new(3, 0)));
        assert!(!dominates(&CostVec2::new(3, 0), &CostVec2::new(2, 1)));
        assert!(!dominates(&CostVec2::new(1, 1), &CostVec2::new(1, 1)));
    }

    #[test]
    fn integer_costs_keep_unit_scale() {
        let c = ActionCosts::from_real([1.0, 0.0], [1.0, 1.0]).unwrap();
        assert_eq!(c, ActionCosts::default());
    }

    #[test]
    fn fractional_costs_are_scaled() {
        let c = ActionCosts::from_real([1.0, 0.0], [2.5, 1.0]).unwrap();
        assert_eq!(c.scale, 10);
        assert_eq!(c.mov, CostVec2::new(10, 0));
        assert_eq!(c.push, CostVec2::new(25, 10));
        assert_eq!(c.push_real(), [2.5, 1.0]);
        let c = ActionCosts::from_real([0.1, 0.0], [0.25, 1.0]).unwrap();
        assert_eq!(c.scale, 100);
    }

    #[test]
    fn negative_or_irrational_costs_rejected() {
        assert!(ActionCosts::from_real([-1.0, 0.0], [1.0, 1.0]).is_err());
        assert!(ActionCosts::from_real([std::f64::consts::PI, 0.0], [1.0, 1.0]).is_err());
    }
}
