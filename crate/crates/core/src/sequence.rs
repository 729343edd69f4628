//! Rank sequences and the stream Player 2 observes.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::oracle::rules::{Decision, DecisionRule, Observation};
use crate::rng;
use crate::scalar::Scalar;

/// Binary indexed tree counting which ranks have been seen.
#[derive(Debug, Clone)]
pub(crate) struct RankCounter {
    tree: Vec<u32>,
}

impl RankCounter {
    pub(crate) fn new(n: usize) -> Self {
        RankCounter { tree: vec![0; n + 1] }
    }

    pub(crate) fn reset(&mut self, n: usize) {
        self.tree.clear();
        self.tree.resize(n + 1, 0);
    }

    pub(crate) fn insert(&mut self, rank: u32) {
        let mut i = rank as usize;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of inserted ranks strictly smaller than `rank`.
    pub(crate) fn count_below(&self, rank: u32) -> u32 {
        let mut i = rank as usize - 1;
        let mut total = 0;
        while i > 0 {
            total += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        total
    }

    /// Insert `rank` and return its relative rank among everything inserted so far.
    pub(crate) fn push(&mut self, rank: u32) -> u32 {
        let r = self.count_below(rank) + 1;
        self.insert(rank);
        r
    }
}

fn check_permutation(abs_ranks: &[u32]) -> Result<()> {
    if abs_ranks.is_empty() {
        return Err(invalid("a rank sequence needs at least one object"));
    }
    let n = abs_ranks.len();
    let mut seen = vec![false; n + 1];
    for &a in abs_ranks {
        if a == 0 || a as usize > n {
            return Err(invalid(format!("rank {a} is outside 1..={n}")));
        }
        if seen[a as usize] {
            return Err(invalid(format!("rank {a} appears twice")));
        }
        seen[a as usize] = true;
    }
    Ok(())
}

/// Relative rank of each object among those seen up to and including it.
pub fn relative_ranks(abs_ranks: &[u32]) -> Result<Vec<u32>> {
    check_permutation(abs_ranks)?;
    let mut counter = RankCounter::new(abs_ranks.len());
    Ok(abs_ranks.iter().map(|&a| counter.push(a)).collect())
}

/// A permutation of absolute ranks (1 = best) with its relative ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSequence {
    abs_ranks: Vec<u32>,
    rel_ranks: Vec<u32>,
}

impl RankSequence {
    pub fn new(abs_ranks: Vec<u32>) -> Result<Self> {
        let rel_ranks = relative_ranks(&abs_ranks)?;
        Ok(RankSequence { abs_ranks, rel_ranks })
    }

    pub fn n_objects(&self) -> u32 {
        self.abs_ranks.len() as u32
    }

    pub fn abs_ranks(&self) -> &[u32] {
        &self.abs_ranks
    }

    pub fn rel_ranks(&self) -> &[u32] {
        &self.rel_ranks
    }

    /// Absolute rank of the object at 1-based `moment`.
    pub fn abs_rank(&self, moment: u32) -> u32 {
        self.abs_ranks[moment as usize - 1]
    }

    /// Relative rank of the object at 1-based `moment`.
    pub fn rel_rank(&self, moment: u32) -> u32 {
        self.rel_ranks[moment as usize - 1]
    }

    /// Moments at which a best-so-far object appears.
    pub fn candidate_moments(&self) -> Vec<u32> {
        (1..=self.n_objects()).filter(|&n| self.rel_rank(n) == 1).collect()
    }
}

/// Uniformly random permutation of `1..=n` reproducible from `seed`.
pub fn random_permutation(n: u32, seed: u64) -> Result<RankSequence> {
    if n == 0 {
        return Err(invalid("random_permutation needs N >= 1"));
    }
    let mut buf = vec![0; n as usize];
    rng::shuffle_ranks(&mut rng::block_rng(seed, 0), &mut buf);
    RankSequence::new(buf)
}

/// What Player 2 sees once Player 1's choice has been removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Player2View {
    /// Moment of Player 1's acceptance, or `N + 1` when Player 1 never accepts.
    pub p1_accept_moment: u32,
    /// Absolute ranks in the order Player 2 sees them.
    pub observed: Vec<u32>,
    /// Original moment of each observed object.
    pub observed_moments: Vec<u32>,
    /// Relative ranks within the observed stream.
    pub observed_rel_ranks: Vec<u32>,
    /// Original moments at which Player 2 sees a best-so-far object.
    pub p2_candidate_moments: Vec<u32>,
}

impl Player2View {
    pub fn candidates_after_p1(&self) -> Vec<u32> {
        self.p2_candidate_moments.iter().copied().filter(|&m| m > self.p1_accept_moment).collect()
    }
}

/// Play `p1_rule` on `seq` and build the view left for Player 2.
pub fn player2_view<T: Scalar>(seq: &RankSequence, p1_rule: &DecisionRule<T>) -> Player2View {
    let n = seq.n_objects();
    let mut state = p1_rule.start();
    let mut mu0 = n + 1;
    for moment in 1..=n {
        let obs = Observation { index: moment, relative_rank: seq.rel_rank(moment) };
        if p1_rule.decide(&mut state, obs) == Decision::Accept {
            mu0 = moment;
            break;
        }
    }
    let observed_moments: Vec<u32> = (1..=n).filter(|&m| m != mu0).collect();
    let observed: Vec<u32> = observed_moments.iter().map(|&m| seq.abs_rank(m)).collect();
    let mut counter = RankCounter::new(n as usize);
    let observed_rel_ranks: Vec<u32> = observed.iter().map(|&a| counter.push(a)).collect();
    let p2_candidate_moments =
        observed_moments.iter().zip(&observed_rel_ranks).filter(|(_, &r)| r == 1).map(|(&m, _)| m).collect();
    Player2View { p1_accept_moment: mu0, observed, observed_moments, observed_rel_ranks, p2_candidate_moments }
}
