//! Player 2's belief that the latest candidate is the best object seen so far.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{is_unit_interval, Scalar};

/// Player 2's information at a moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Belief<T> {
    /// Player 1 has not accepted yet (count `-1`).
    P1Searching,
    /// Player 1 has accepted; no candidate since (count `0`, posterior 0).
    NoCandidate,
    /// `count` candidates since Player 1 accepted; the latest one is the best so
    /// far with probability `p`.
    Candidate { count: u32, p: T },
}

impl<T: Scalar> Belief<T> {
    /// Count with `-1` for "Player 1 still searching".
    pub fn count(&self) -> i64 {
        match self {
            Belief::P1Searching => -1,
            Belief::NoCandidate => 0,
            Belief::Candidate { count, .. } => *count as i64,
        }
    }

    pub fn posterior(&self) -> Option<T> {
        match self {
            Belief::P1Searching => None,
            Belief::NoCandidate => Some(T::zero()),
            Belief::Candidate { p, .. } => Some(p.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorState<T> {
    pub moment: u32,
    pub belief: Belief<T>,
}

/// Moments `μ_1 < μ_2 < ...` of the candidates Player 2 has seen since `n*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateHistory {
    moments: Vec<u32>,
}

impl CandidateHistory {
    pub fn new(moments: Vec<u32>, n_star: u32) -> Result<Self> {
        if let Some(&first) = moments.first() {
            if first <= n_star {
                return Err(invalid(format!("first candidate moment {first} must exceed n* = {n_star}")));
            }
        }
        if moments.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("candidate moments must be strictly increasing"));
        }
        Ok(CandidateHistory { moments })
    }

    pub fn moments(&self) -> &[u32] {
        &self.moments
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }
}

/// Posterior at candidate moment `k` given posterior `p` at the previous candidate moment `n`.
pub fn update_posterior<T: Scalar>(n: u32, k: u32, p: &T) -> Result<T> {
    if k <= n {
        return Err(invalid(format!("next candidate moment {k} must exceed {n}")));
    }
    if n < 2 {
        return Err(invalid(format!("candidate moment {n} must be at least 2")));
    }
    if !is_unit_interval(p) {
        return Err(invalid(format!("posterior {p:?} is not a probability")));
    }
    Ok(posterior_step(n, k, p))
}

/// Unchecked form of [`update_posterior`].
pub(crate) fn posterior_step<T: Scalar>(n: u32, k: u32, p: &T) -> T {
    if p.is_one() {
        return T::one();
    }
    let q = T::one() - p.clone();
    let n1 = T::int(n as i64 - 1);
    let num = n1.clone() * q.clone();
    let den = T::int(k as i64 - 2) * p.clone() + T::int(2) * n1 * q;
    T::one() - num / den
}

/// Posterior for the latest candidate of a history; 0 for the empty history.
pub fn posterior_from_history<T: Scalar>(history: &CandidateHistory) -> T {
    let moments = history.moments();
    if moments.is_empty() {
        return T::zero();
    }
    moments.windows(2).fold(T::ratio(1, 2), |p, w| posterior_step(w[0], w[1], &p))
}

/// Limit of [`update_posterior`] with `n = s_prev N`, `k = s_next N`.
pub fn asymptotic_update(s_prev: f64, s_next: f64, p: f64) -> Result<f64> {
    let lower = (-1.0f64).exp();
    if !(s_prev >= lower - 1e-15 && s_prev < s_next && s_next <= 1.0) {
        return Err(invalid(format!("need e^-1 <= s_prev < s_next <= 1, got {s_prev}, {s_next}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("posterior {p} is not a probability")));
    }
    Ok((s_next * p + s_prev * (1.0 - p)) / (s_next * p + 2.0 * s_prev * (1.0 - p)))
}
