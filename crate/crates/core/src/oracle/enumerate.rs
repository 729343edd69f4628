//! Exhaustive play over all `N!` permutations.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::rules::DecisionRule;
use super::{inference_holds, play, InferenceReport, Scratch};
use crate::classical::p1_threshold;
use crate::error::{check_range, Result};
use crate::parallel::{map_merge, Execution, Merge};
use crate::scalar::{fraction_string, Exact, Scalar};

pub const MAX_ENUMERATION_N: u32 = 12;
/// Upper limit accepted by [`enumerate_exact_capped`].
pub const HARD_ENUMERATION_N: u32 = 13;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactOutcome {
    pub n_objects: u32,
    pub permutations: u64,
    pub p1_wins: u64,
    pub p2_wins: u64,
}

impl Merge for ExactOutcome {
    fn merge(self, o: Self) -> Self {
        ExactOutcome {
            n_objects: self.n_objects.max(o.n_objects),
            permutations: self.permutations + o.permutations,
            p1_wins: self.p1_wins + o.p1_wins,
            p2_wins: self.p2_wins + o.p2_wins,
        }
    }
}

impl ExactOutcome {
    fn ratio(&self, wins: u64) -> Exact {
        Exact::new(BigInt::from(wins), BigInt::from(self.permutations))
    }

    pub fn u1(&self) -> Exact {
        self.ratio(self.p1_wins)
    }

    pub fn u2(&self) -> Exact {
        self.ratio(self.p2_wins)
    }

    pub fn u1_string(&self) -> String {
        fraction_string(&self.u1())
    }

    pub fn u2_string(&self) -> String {
        fraction_string(&self.u2())
    }
}

/// Rearrange into the next permutation in lexicographic order; false after the last.
pub(crate) fn next_permutation(xs: &mut [u32]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Visit every permutation starting with `first`, in lexicographic order.
fn for_each_with_first(n: u32, first: u32, mut f: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = std::iter::once(first).chain((1..=n).filter(|&v| v != first)).collect();
    loop {
        f(&perm);
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
}

/// Exact success probabilities of both players over all permutations, `N <= 12`.
pub fn enumerate_exact<T: Scalar>(n_objects: u32, p1: &DecisionRule<T>, p2: &DecisionRule<T>) -> Result<ExactOutcome> {
    enumerate_exact_capped(n_objects, p1, p2, MAX_ENUMERATION_N, Execution::default())
}

/// As [`enumerate_exact`] with an explicit size cap (at most 13) and execution mode.
pub fn enumerate_exact_capped<T: Scalar>(
    n_objects: u32,
    p1: &DecisionRule<T>,
    p2: &DecisionRule<T>,
    cap: u32,
    exec: Execution,
) -> Result<ExactOutcome> {
    check_range("N", n_objects as i64, 1, cap.min(HARD_ENUMERATION_N) as i64)?;
    let out = map_merge(exec, 0..n_objects as u64, |b| {
        let mut scratch = Scratch::new(n_objects as usize);
        let mut acc = ExactOutcome { n_objects, ..Default::default() };
        for_each_with_first(n_objects, b as u32 + 1, |perm| {
            let o = play(perm, p1, p2, &mut scratch, |_| {});
            acc.permutations += 1;
            acc.p1_wins += o.p1_wins as u64;
            acc.p2_wins += o.p2_wins as u64;
        });
        acc
    });
    Ok(out)
}

/// Check Player 2's moment inference at every decision point of every permutation.
pub fn verify_candidate_inference_exhaustive(n_objects: u32) -> Result<InferenceReport> {
    check_range("N", n_objects as i64, 1, MAX_ENUMERATION_N as i64)?;
    let n_star = p1_threshold(n_objects)?;
    let p1 = DecisionRule::<f64>::p1_threshold(n_star);
    let p2 = DecisionRule::<f64>::Never;
    Ok(map_merge(Execution::default(), 0..n_objects as u64, |b| {
        let mut scratch = Scratch::new(n_objects as usize);
        let mut rep = InferenceReport::default();
        for_each_with_first(n_objects, b as u32 + 1, |perm| {
            rep.runs += 1;
            play(perm, &p1, &p2, &mut scratch, |ev| {
                rep.decision_points += 1;
                rep.violations += !inference_holds(n_star, &ev) as u64;
            });
        });
        rep
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let mut all = Vec::new();
        for first in 1..=3 {
            for_each_with_first(3, first, |p| all.push(p.to_vec()));
        }
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn four_object_strategies() {
        let p1 = DecisionRule::<Exact>::p1_threshold(2);
        let want = [(1, Exact::ratio(1, 4)), (3, Exact::ratio(5, 24)), (4, Exact::ratio(1, 6))];
        for (from, u2) in want {
            let out = enumerate_exact(4, &p1, &DecisionRule::p2_from_moment(2, from)).unwrap();
            assert_eq!(out.permutations, 24);
            assert_eq!(out.u2(), u2);
            assert_eq!(out.u1(), Exact::ratio(11, 24));
        }
    }

    #[test]
    fn size_cap() {
        let p1 = DecisionRule::<f64>::p1_threshold(5);
        assert!(enumerate_exact(13, &p1, &DecisionRule::Never).is_err());
        assert!(enumerate_exact(0, &p1, &DecisionRule::Never).is_err());
    }

    #[test]
    fn exhaustive_inference() {
        for n in [4, 5, 6] {
            let rep = verify_candidate_inference_exhaustive(n).unwrap();
            assert_eq!(rep.violations, 0);
            assert!(rep.decision_points > 0);
        }
    }
}
