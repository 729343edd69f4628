//! Player 2's optimal response to Player 1's classical rule.

use crate::classical::{
    harmonic_tails, p1_threshold, solve_p1, stopping_reward_y, stopping_reward_z, tail_pair, P1Solution,
};
use crate::dp::{pre_phase, Engine, Memo, PostModel};
use crate::error::{check_range, invalid, Result};
use crate::near_optimal::always_accepted_index;
use crate::posterior::{posterior_step, Belief, PosteriorState};
use crate::scalar::{is_unit_interval, Scalar};
use crate::strategy::{summarize, StrategySummary};

pub const MIN_GAME_N: u32 = 3;
pub const MAX_GAME_N: u32 = 500;

pub(crate) fn check_game_n(n_objects: u32) -> Result<()> {
    check_range("N", n_objects as i64, MIN_GAME_N as i64, MAX_GAME_N as i64)
}

/// Acceptance thresholds `q_n` for `n* < n <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable<T: Scalar = f64> {
    pub n_objects: u32,
    pub n_star: u32,
    q: Vec<T>,
}

impl<T: Scalar> QTable<T> {
    pub fn build(n_objects: u32, n_star: u32) -> Self {
        let tails = harmonic_tails::<T>(n_objects);
        let q = (n_star + 1..=n_objects).map(|n| q_from_sums(n_objects, n, &tails[n as usize])).collect();
        QTable { n_objects, n_star, q }
    }

    pub fn get(&self, n: u32) -> Option<&T> {
        n.checked_sub(self.n_star + 1).and_then(|i| self.q.get(i as usize))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &T)> {
        (self.n_star + 1..).zip(self.q.iter())
    }

    /// Whether a candidate with posterior `p` at moment `n` is accepted.
    pub fn accepts(&self, n: u32, p: &T) -> bool {
        self.get(n).is_some_and(|q| p >= q)
    }
}

fn q_from_sums<T: Scalar>(n_objects: u32, n: u32, s1: &T) -> T {
    let s2 = T::int(n as i64 - 1) * tail_pair::<T>(n_objects, n);
    s2.clone() / (T::one() + s2 - s1.clone())
}

/// `q_n = S2/(1 + S2 - S1)`; a candidate is accepted iff its posterior is at least `q_n`.
pub fn q_threshold<T: Scalar>(n_objects: u32, n: u32) -> Result<T> {
    check_game_n(n_objects)?;
    let n_star = p1_threshold(n_objects)?;
    check_range("n", n as i64, n_star as i64 + 1, n_objects as i64)?;
    let s1 = crate::classical::tail_harmonic::<T>(n_objects, n);
    Ok(q_from_sums(n_objects, n, &s1))
}

/// Reward `n p / N` of accepting a candidate with posterior `p` at moment `n`.
pub fn stop_now_reward<T: Scalar>(n_objects: u32, n: u32, p: &T) -> Result<T> {
    check_range("n", n as i64, 1, n_objects as i64)?;
    if !is_unit_interval(p) {
        return Err(invalid(format!("posterior {p:?} is not a probability")));
    }
    Ok(T::ratio(n as i64, n_objects as i64) * p.clone())
}

/// Reward `p z_n + (1-p) y_n` of rejecting now and accepting the next candidate.
pub fn one_step_reward_w<T: Scalar>(n_objects: u32, n: u32, p: &T) -> Result<T> {
    let n_star = p1_threshold(n_objects)?;
    check_range("n", n as i64, n_star as i64 - 1, n_objects as i64 - 1)?;
    if !is_unit_interval(p) {
        return Err(invalid(format!("posterior {p:?} is not a probability")));
    }
    let z: T = stopping_reward_z(n_objects, n)?;
    let y: T = stopping_reward_y(n_objects, n)?;
    Ok(p.clone() * z + (T::one() - p.clone()) * y)
}

/// Exact-posterior model. A node is the posterior together with the candidate
/// moments that produced it.
pub(crate) struct ExactModel<'a, T: Scalar> {
    pub q: &'a QTable<T>,
}

#[derive(Clone)]
pub(crate) struct ExactNode<T> {
    pub p: T,
    pub history: Vec<u32>,
}

impl<T: Scalar> PostModel<T> for ExactModel<'_, T> {
    type Node = ExactNode<T>;
    type Key = T::MemoKey;

    fn key(&self, node: &ExactNode<T>) -> T::MemoKey {
        node.p.memo_key(&node.history)
    }

    fn posterior(&self, node: &ExactNode<T>) -> T {
        node.p.clone()
    }

    fn step(&self, n: u32, node: &ExactNode<T>, k: u32) -> (T, bool) {
        let p = posterior_step(n, k, &node.p);
        let accept = self.q.accepts(k, &p);
        (p, accept)
    }

    fn child(&self, node: &ExactNode<T>, k: u32, p_next: T) -> ExactNode<T> {
        let mut history = node.history.clone();
        history.push(k);
        ExactNode { p: p_next, history }
    }
}

/// Solved game: Player 1's classical rule and Player 2's optimal response.
#[derive(Debug, Clone)]
pub struct GameSolution<T: Scalar = f64> {
    pub n_objects: u32,
    pub n_star: u32,
    /// First moment before `n*` from which Player 2 accepts candidates (`n*` if never).
    pub n0: u32,
    /// First moment from which the first candidate after `n*` is accepted; `None`
    /// when Player 2 always takes the first object.
    pub n1: Option<u32>,
    pub u1: T,
    pub u2: T,
    pub q_table: QTable<T>,
    /// Candidate index from which Player 2 accepts at any moment.
    pub m0: u32,
    pub strategy_summary: StrategySummary,
    pub p1: P1Solution<T>,
    v_searching: Vec<T>,
    v_no_candidate: Vec<T>,
    v_cache: Memo<T::MemoKey, T>,
}

pub fn solve_game<T: Scalar>(n_objects: u32) -> Result<GameSolution<T>> {
    check_game_n(n_objects)?;
    let p1 = solve_p1::<T>(n_objects)?;
    let n_star = p1.threshold;
    let q_table = QTable::<T>::build(n_objects, n_star);
    let model = ExactModel { q: &q_table };
    let mut engine = Engine::new(n_objects, &model, None);
    let mut v_no_candidate = vec![T::zero(); n_objects as usize + 1];
    for n in n_star..=n_objects {
        let root = ExactNode { p: T::zero(), history: Vec::new() };
        v_no_candidate[n as usize] = engine.value(n, &root);
    }
    let v_cache = engine.memo;
    let pre = pre_phase(n_objects, n_star, &v_no_candidate);
    let n1 = if pre.n0 <= 1 {
        None
    } else {
        let half = T::ratio(1, 2);
        q_table.entries().find(|(_, q)| half >= **q).map(|(n, _)| n)
    };
    let m0 = always_accepted_index::<T>(n_objects, n_star)?;
    let strategy_summary = summarize(n_objects, n_star, pre.n0, m0, &q_table);
    Ok(GameSolution {
        n_objects,
        n_star,
        n0: pre.n0,
        n1,
        u1: p1.value().clone(),
        u2: pre.v_searching[0].clone(),
        q_table,
        m0,
        strategy_summary,
        p1,
        v_searching: pre.v_searching,
        v_no_candidate,
        v_cache,
    })
}

/// Earliest pre-`n*` acceptance moment of Player 2's optimal response.
pub fn pre_threshold_n0(n_objects: u32) -> Result<u32> {
    Ok(solve_game::<f64>(n_objects)?.n0)
}

impl<T: Scalar> GameSolution<T> {
    /// `v(n, -1)`: value while Player 1 is still searching, `0 <= n <= N`.
    pub fn v_searching(&self, n: u32) -> Option<&T> {
        self.v_searching.get(n as usize)
    }

    /// `v(n, 0)`: value after Player 1 accepted with no candidate since, `n* <= n <= N`.
    pub fn v_no_candidate(&self, n: u32) -> Option<&T> {
        if n < self.n_star {
            return None;
        }
        self.v_no_candidate.get(n as usize)
    }

    /// Number of memoised post-acceptance states.
    pub fn cached_states(&self) -> usize {
        self.v_cache.len()
    }

    /// Value of continuing optimally after rejecting in `state`.
    pub fn value_v(&self, state: &PosteriorState<T>) -> Result<T> {
        let n = state.moment;
        check_range("moment", n as i64, 0, self.n_objects as i64)?;
        match &state.belief {
            Belief::P1Searching => Ok(self.v_searching[n as usize].clone()),
            Belief::NoCandidate => {
                check_range("moment", n as i64, self.n_star as i64, self.n_objects as i64)?;
                Ok(self.v_no_candidate[n as usize].clone())
            }
            Belief::Candidate { count, p } => {
                let m = *count as i64;
                if m < 1 {
                    return Err(invalid("a candidate state needs count >= 1"));
                }
                check_range("moment", n as i64, self.n_star as i64 + m, self.n_objects as i64)?;
                let floor = T::ratio(m, m + 1);
                if *p < floor || *p > T::one() || (m == 1 && *p != floor) {
                    return Err(invalid(format!("posterior {p:?} is not reachable after {m} candidates")));
                }
                Ok(self.value_from(n, p.clone(), vec![0]))
            }
        }
    }

    /// Value after rejecting the latest candidate of `history` (moments after `n*`).
    pub fn value_after_history(&self, history: &[u32]) -> Result<T> {
        let h = crate::posterior::CandidateHistory::new(history.to_vec(), self.n_star)?;
        let Some(&n) = history.last() else {
            return Err(invalid("history must contain at least one candidate"));
        };
        check_range("moment", n as i64, 1, self.n_objects as i64)?;
        let p = crate::posterior::posterior_from_history::<T>(&h);
        Ok(self.value_from(n, p, history.to_vec()))
    }

    fn value_from(&self, n: u32, p: T, history: Vec<u32>) -> T {
        let model = ExactModel { q: &self.q_table };
        let mut engine = Engine::new(self.n_objects, &model, Some(&self.v_cache));
        engine.value(n, &ExactNode { p, history })
    }

    /// Player 2's decision for a candidate at moment `n` after the given history.
    pub fn accepts_after(&self, history: &[u32], p: &T) -> bool {
        match history.last() {
            Some(&n) => self.q_table.accepts(n, p),
            None => false,
        }
    }
}

/// A candidate Player 2 can face while following the optimal response.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachableCandidate<T> {
    /// Candidate moments after `n*`, ending with the current one.
    pub history: Vec<u32>,
    pub p: T,
    pub accepted: bool,
}

/// Every post-`n*` candidate situation reachable when all earlier candidates were
/// rejected, up to `max_count` candidates.
pub fn reachable_candidates<T: Scalar>(q_table: &QTable<T>, max_count: usize) -> Vec<ReachableCandidate<T>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u32>, T)> = Vec::new();
    for k in q_table.n_star + 1..=q_table.n_objects {
        stack.push((vec![k], T::ratio(1, 2)));
    }
    while let Some((history, p)) = stack.pop() {
        let n = *history.last().unwrap();
        let accepted = q_table.accepts(n, &p);
        if !accepted && history.len() < max_count {
            for k in n + 1..=q_table.n_objects {
                let mut h = history.clone();
                h.push(k);
                stack.push((h, posterior_step(n, k, &p)));
            }
        }
        out.push(ReachableCandidate { history, p, accepted });
    }
    out.sort_by(|a, b| a.history.cmp(&b.history));
    out
}
