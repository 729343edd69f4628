//! Seeded Monte Carlo play.

use serde::{Deserialize, Serialize};

use super::rules::DecisionRule;
use super::{inference_holds, play, InferenceReport, Scratch};
use crate::classical::p1_threshold;
use crate::error::{check_range, invalid, Result};
use crate::parallel::{map_merge, Execution, Merge};
use crate::posterior::CandidateHistory;
use crate::rng::{block_rng, shuffle_ranks, BLOCK_TRIALS};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl SimReport {
    pub fn new(trials: u64, successes: u64, seed: u64) -> Self {
        let estimate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let std_error = if trials == 0 { 0.0 } else { (estimate * (1.0 - estimate) / trials as f64).sqrt() };
        SimReport { trials, successes, estimate, std_error, seed }
    }

    /// Distance from `target` in standard errors (infinite for a zero error and a miss).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.estimate - target).abs();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub player1: SimReport,
    pub player2: SimReport,
}

#[derive(Default)]
struct Counts {
    trials: u64,
    p1: u64,
    p2: u64,
}

impl Merge for Counts {
    fn merge(self, o: Self) -> Self {
        Counts { trials: self.trials + o.trials, p1: self.p1 + o.p1, p2: self.p2 + o.p2 }
    }
}

fn block_count(trials: u64) -> u64 {
    trials.div_ceil(BLOCK_TRIALS)
}

fn block_len(trials: u64, block: u64) -> u64 {
    BLOCK_TRIALS.min(trials - block * BLOCK_TRIALS)
}

/// Run `f` on every block, grouping blocks into `shards` contiguous work items.
fn over_blocks<R: Merge, F>(trials: u64, exec: Execution, shards: u64, f: F) -> R
where
    F: Fn(u64) -> R + Sync + Send,
{
    let blocks = block_count(trials);
    let shards = shards.clamp(1, blocks.max(1));
    let per = blocks.div_ceil(shards);
    map_merge(exec, 0..shards, |s| {
        let lo = s * per;
        let hi = ((s + 1) * per).min(blocks);
        (lo..hi).map(&f).fold(R::default(), R::merge)
    })
}

/// Monte Carlo estimate of both players' success probabilities.
pub fn simulate<T: Scalar>(
    n_objects: u32,
    p1: &DecisionRule<T>,
    p2: &DecisionRule<T>,
    trials: u64,
    seed: u64,
) -> Result<SimOutcome> {
    simulate_with(n_objects, p1, p2, trials, seed, Execution::default(), block_count(trials))
}

/// [`simulate`] with explicit execution mode and shard count; the result does
/// not depend on either.
pub fn simulate_with<T: Scalar>(
    n_objects: u32,
    p1: &DecisionRule<T>,
    p2: &DecisionRule<T>,
    trials: u64,
    seed: u64,
    exec: Execution,
    shards: u64,
) -> Result<SimOutcome> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    check_range("N", n_objects as i64, 1, u32::MAX as i64 / 2)?;
    let counts: Counts = over_blocks(trials, exec, shards, |b| {
        let mut rng = block_rng(seed, b);
        let mut perm = vec![0u32; n_objects as usize];
        let mut scratch = Scratch::new(n_objects as usize);
        let mut c = Counts::default();
        for _ in 0..block_len(trials, b) {
            shuffle_ranks(&mut rng, &mut perm);
            let o = play(&perm, p1, p2, &mut scratch, |_| {});
            c.trials += 1;
            c.p1 += o.p1_wins as u64;
            c.p2 += o.p2_wins as u64;
        }
        c
    });
    Ok(SimOutcome {
        player1: SimReport::new(counts.trials, counts.p1, seed),
        player2: SimReport::new(counts.trials, counts.p2, seed),
    })
}

/// Check Player 2's moment inference at every decision point of simulated runs
/// where Player 1 plays the optimal threshold.
pub fn verify_candidate_inference(n_objects: u32, trials: u64, seed: u64) -> Result<InferenceReport> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let n_star = p1_threshold(n_objects)?;
    let p1 = DecisionRule::<f64>::p1_threshold(n_star);
    let p2 = DecisionRule::<f64>::Never;
    Ok(over_blocks(trials, Execution::default(), block_count(trials), |b| {
        let mut rng = block_rng(seed, b);
        let mut perm = vec![0u32; n_objects as usize];
        let mut scratch = Scratch::new(n_objects as usize);
        let mut rep = InferenceReport::default();
        for _ in 0..block_len(trials, b) {
            shuffle_ranks(&mut rng, &mut perm);
            rep.runs += 1;
            play(&perm, &p1, &p2, &mut scratch, |ev| {
                rep.decision_points += 1;
                rep.violations += !inference_holds(n_star, &ev) as u64;
            });
        }
        rep
    }))
}

/// Empirical frequency with which the latest candidate of a given history is
/// the best object so far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub history: Vec<u32>,
    /// Runs whose first candidates after `n*` appeared exactly at `history`.
    pub matches: SimReport,
    /// Model posterior for the history.
    pub predicted: f64,
}

#[derive(Default)]
struct Calib {
    trials: u64,
    matches: u64,
    best: u64,
}

impl Merge for Calib {
    fn merge(self, o: Self) -> Self {
        Calib { trials: self.trials + o.trials, matches: self.matches + o.matches, best: self.best + o.best }
    }
}

pub fn posterior_calibration(n_objects: u32, history: &[u32], trials: u64, seed: u64) -> Result<CalibrationReport> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let n_star = p1_threshold(n_objects)?;
    let h = CandidateHistory::new(history.to_vec(), n_star)?;
    let Some(&last) = history.last() else {
        return Err(invalid("history must contain at least one candidate"));
    };
    check_range("last candidate moment", last as i64, 1, n_objects as i64)?;
    let predicted = crate::posterior::posterior_from_history::<f64>(&h);
    let p1 = DecisionRule::<f64>::p1_threshold(n_star);
    let p2 = DecisionRule::<f64>::Never;
    let c: Calib = over_blocks(trials, Execution::default(), block_count(trials), |b| {
        let mut rng = block_rng(seed, b);
        let mut perm = vec![0u32; n_objects as usize];
        let mut scratch = Scratch::new(n_objects as usize);
        let mut c = Calib::default();
        let mut seen = Vec::with_capacity(history.len() + 1);
        for _ in 0..block_len(trials, b) {
            shuffle_ranks(&mut rng, &mut perm);
            c.trials += 1;
            seen.clear();
            let mut last_rank = 0;
            play(&perm, &p1, &p2, &mut scratch, |ev| {
                if ev.true_moment > ev.p1_moment && seen.len() < history.len() {
                    seen.push(ev.true_moment);
                    last_rank = ev.original_relative_rank;
                }
            });
            if seen == history {
                c.matches += 1;
                c.best += (last_rank == 1) as u64;
            }
        }
        c
    });
    Ok(CalibrationReport { history: history.to_vec(), matches: SimReport::new(c.matches, c.best, seed), predicted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_is_reproducible() {
        let p1 = DecisionRule::<f64>::p1_threshold(19);
        let p2 = DecisionRule::<f64>::p2_from_moment(19, 1);
        let a = simulate(50, &p1, &p2, 1, 42).unwrap();
        let b = simulate(50, &p1, &p2, 1, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.player2.estimate == 0.0 || a.player2.estimate == 1.0);
    }

    #[test]
    fn shard_count_does_not_matter() {
        let p1 = DecisionRule::<f64>::p1_threshold(4);
        let p2 = DecisionRule::<f64>::p2_from_moment(4, 5);
        let one = simulate_with(10, &p1, &p2, 30_000, 7, Execution::Parallel, 1).unwrap();
        let eight = simulate_with(10, &p1, &p2, 30_000, 7, Execution::Parallel, 8).unwrap();
        let seq = simulate_with(10, &p1, &p2, 30_000, 7, Execution::Sequential, 3).unwrap();
        assert_eq!(one, eight);
        assert_eq!(one, seq);
    }

    #[test]
    fn four_objects_accept_first() {
        let p1 = DecisionRule::<f64>::p1_threshold(2);
        let p2 = DecisionRule::<f64>::p2_from_moment(2, 1);
        let out = simulate(4, &p1, &p2, 100_000, 11).unwrap();
        assert!(out.player2.z_score(0.25) < 4.0);
        assert!(out.player1.z_score(11.0 / 24.0) < 4.0);
    }

    #[test]
    fn inference_never_fails() {
        let rep = verify_candidate_inference(30, 5_000, 3).unwrap();
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.runs, 5_000);
    }
}
