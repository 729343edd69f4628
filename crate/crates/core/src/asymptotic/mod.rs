//! Limits as the number of objects grows, with time `t = n/N`.

pub mod logpoly;
pub mod lower;
pub mod quadrature;
pub mod thresholds;
pub mod upper;

use serde::{Deserialize, Serialize};

pub use logpoly::{LogPoly, PiecewiseValue};
pub use lower::{lower_bound, truncation_bound, LowerBound, MemoryOneClosedForm, MAX_MEMORY};
pub use thresholds::{asymptotic_q, solve_threshold_t, AsymptoticThresholds, TABLE_M};
pub use upper::{upper_bound, UpperBound, UpperConstants};

use crate::error::Result;

/// One row of the memory-`k` bound table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryBound {
    pub k: u32,
    /// Bound on the value lost by remembering only `k` candidates.
    pub truncation_bound: f64,
    /// `v^k(0, -1)`.
    pub lower_bound: f64,
}

/// Thresholds, upper-bound constants and the memory-`k` lower bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub t1: f64,
    pub upper_constants: UpperConstants,
    pub upper_bound: f64,
    pub memory_bounds: Vec<MemoryBound>,
}

impl AsymptoticModel {
    pub fn build(max_k: u32) -> Result<Self> {
        let ub = upper_bound()?;
        let memory_bounds = (0..=max_k)
            .map(|k| {
                Ok(MemoryBound { k, truncation_bound: truncation_bound(k)?, lower_bound: lower_bound(k)?.value() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AsymptoticModel { t1: ub.t1, upper_constants: ub.constants, upper_bound: ub.t0, memory_bounds })
    }
}
