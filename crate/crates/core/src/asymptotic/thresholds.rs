//! Continuous-time acceptance thresholds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, StackError};

pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 10_000;

/// Values of `m` listed in the published threshold table.
pub const TABLE_M: [u64; 19] =
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100, 200, 500, 1_000, 10_000, 100_000, 1_000_000];

pub fn inv_e() -> f64 {
    (-1.0f64).exp()
}

/// Posterior threshold `q(t) = (1-t)/(2-t+ln t)` on `[e^-1, 1]`.
pub fn asymptotic_q(t: f64) -> Result<f64> {
    if !(t >= inv_e() - 1e-15 && t <= 1.0) {
        return Err(invalid(format!("t must lie in [e^-1, 1], got {t}")));
    }
    let den = 2.0 - t + t.ln();
    Ok(((1.0 - t) / den).min(1.0))
}

/// Time `t_m` from which the `m`-th candidate after `e^-1` is accepted under the
/// count-based rule: the fixed point of `t -> exp((1-m-t)/m)`.
pub fn solve_threshold_t(m: u64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let mf = m as f64;
    let g = |t: f64| ((1.0 - mf - t) / mf).exp();
    let mut t = 0.5;
    for _ in 0..FIXED_POINT_MAX_ITER {
        // Relaxation matched to the slope g'(t) = -g(t)/m.
        let gt = g(t);
        let step = (gt - t) / (1.0 + gt / mf);
        t += step;
        if step.abs() < FIXED_POINT_TOL {
            return Ok(t);
        }
    }
    Err(StackError::NonConvergence(format!("t_{m}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticThresholds {
    pub t: BTreeMap<u64, f64>,
}

impl AsymptoticThresholds {
    pub fn for_indices(ms: &[u64]) -> Result<Self> {
        let t = ms.iter().map(|&m| solve_threshold_t(m).map(|v| (m, v))).collect::<Result<_>>()?;
        Ok(AsymptoticThresholds { t })
    }

    pub fn table() -> Result<Self> {
        Self::for_indices(&TABLE_M)
    }

    pub fn t1(&self) -> Option<f64> {
        self.t.get(&1).copied()
    }
}
