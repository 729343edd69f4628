//! Ground-truth evaluation of strategy pairs by playing them on permutations.

pub mod enumerate;
pub mod rules;
pub mod simulate;

use crate::scalar::Scalar;
use crate::sequence::RankCounter;
use rules::{infer_moment, Decision, DecisionRule, Observation};

/// Result of one play of the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    /// Moment of Player 1's acceptance, `N + 1` if none.
    pub p1_moment: u32,
    /// Original moment of Player 2's acceptance, `N + 1` if none.
    pub p2_moment: u32,
    pub p1_wins: bool,
    pub p2_wins: bool,
}

/// A candidate in Player 2's stream, with the ground truth Player 2 cannot see.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateEvent {
    pub index: u32,
    pub true_moment: u32,
    pub p1_moment: u32,
    pub original_relative_rank: u32,
}

/// Reusable buffers for [`play`].
#[derive(Debug, Clone)]
pub struct Scratch {
    counter: RankCounter,
    rel: Vec<u32>,
}

impl Scratch {
    pub fn new(n_objects: usize) -> Self {
        Scratch { counter: RankCounter::new(n_objects), rel: Vec::with_capacity(n_objects) }
    }
}

/// Play both rules on the permutation `abs` (absolute ranks, 1 = best).
///
/// Player 2's rule only receives its own stream; `on_candidate` sees each of
/// those candidates together with hidden facts, for auditing.
pub fn play<T: Scalar, F: FnMut(CandidateEvent)>(
    abs: &[u32],
    p1: &DecisionRule<T>,
    p2: &DecisionRule<T>,
    scratch: &mut Scratch,
    mut on_candidate: F,
) -> Outcome {
    let n = abs.len();
    let never = n as u32 + 1;
    scratch.counter.reset(n);
    scratch.rel.clear();
    for &a in abs {
        let r = scratch.counter.push(a);
        scratch.rel.push(r);
    }
    let mut state = p1.start();
    let mut p1_moment = never;
    for (i, &r) in scratch.rel.iter().enumerate() {
        let obs = Observation { index: i as u32 + 1, relative_rank: r };
        if p1.decide(&mut state, obs) == Decision::Accept {
            p1_moment = i as u32 + 1;
            break;
        }
    }

    scratch.counter.reset(n);
    let mut state = p2.start();
    let mut p2_moment = never;
    let mut index = 0u32;
    for (i, &a) in abs.iter().enumerate() {
        let moment = i as u32 + 1;
        if moment == p1_moment {
            continue;
        }
        index += 1;
        let s = scratch.counter.push(a);
        if s == 1 {
            on_candidate(CandidateEvent {
                index,
                true_moment: moment,
                p1_moment,
                original_relative_rank: scratch.rel[i],
            });
        }
        let obs = Observation { index, relative_rank: s };
        if p2.decide(&mut state, obs) == Decision::Accept {
            p2_moment = moment;
            break;
        }
    }
    let wins = |m: u32| m <= n as u32 && abs[m as usize - 1] == 1;
    Outcome { p1_moment, p2_moment, p1_wins: wins(p1_moment), p2_wins: wins(p2_moment) }
}

/// Whether Player 2's reading of a candidate event matches the truth.
pub(crate) fn inference_holds(n_star: u32, ev: &CandidateEvent) -> bool {
    let (moment, p1_done) = infer_moment(n_star, ev.index);
    moment == ev.true_moment && p1_done == (ev.p1_moment < ev.true_moment)
}

/// Violations of Player 2's inference over a batch of permutations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct InferenceReport {
    pub runs: u64,
    pub decision_points: u64,
    pub violations: u64,
}

impl crate::parallel::Merge for InferenceReport {
    fn merge(self, o: Self) -> Self {
        InferenceReport {
            runs: self.runs + o.runs,
            decision_points: self.decision_points + o.decision_points,
            violations: self.violations + o.violations,
        }
    }
}

pub use enumerate::{
    enumerate_exact, enumerate_exact_capped, verify_candidate_inference_exhaustive, ExactOutcome, MAX_ENUMERATION_N,
};
pub use simulate::{
    posterior_calibration, simulate, simulate_with, verify_candidate_inference, CalibrationReport, SimOutcome,
    SimReport,
};
