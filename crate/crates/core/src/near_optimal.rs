//! Count-based response: the posterior of the `m`-th candidate is replaced by
//! its floor `m/(m+1)`.

use std::collections::BTreeMap;

use crate::classical::{harmonic_tails, p1_threshold, solve_p1, stopping_reward_y, stopping_reward_z, tail_pair};
use crate::dp::{pre_phase, Engine, PostModel};
use crate::error::{check_range, invalid, Result};
use crate::exact::{check_game_n, reachable_candidates, GameSolution};
use crate::scalar::Scalar;

fn k_from_sums<T: Scalar>(n_objects: u32, n: u32, s1: &T) -> Result<u32> {
    let slack = T::one() - s1.clone();
    if slack <= T::zero() {
        return Err(invalid(format!("S1 >= 1 at n = {n}")));
    }
    let s2 = T::int(n as i64 - 1) * tail_pair::<T>(n_objects, n);
    Ok((s2 / slack).ceil_u64() as u32)
}

/// Smallest candidate count accepted at moment `n`: `ceil(S2/(1 - S1))`.
pub fn count_threshold_k<T: Scalar>(n_objects: u32, n: u32) -> Result<u32> {
    check_game_n(n_objects)?;
    let n_star = p1_threshold(n_objects)?;
    check_range("n", n as i64, n_star as i64 + 1, n_objects as i64)?;
    k_from_sums::<T>(n_objects, n, &crate::classical::tail_harmonic(n_objects, n))
}

/// Smallest `m` with `m >= K(n* + m)`.
pub(crate) fn always_accepted_index<T: Scalar>(n_objects: u32, n_star: u32) -> Result<u32> {
    let tails = harmonic_tails::<T>(n_objects);
    for m in 1..=n_objects - n_star {
        let n = n_star + m;
        if m >= k_from_sums::<T>(n_objects, n, &tails[n as usize])? {
            return Ok(m);
        }
    }
    Err(invalid("no candidate index is always accepted"))
}

/// Reward `p z_n + (1-p) y_n` with `p = m/(m+1)`.
pub fn w_approx<T: Scalar>(n_objects: u32, n: u32, m: u64) -> Result<T> {
    let n_star = p1_threshold(n_objects)?;
    check_range("n", n as i64, n_star as i64 - 1, n_objects as i64 - 1)?;
    let m = m as i64;
    let p = T::ratio(m, m + 1);
    let z: T = stopping_reward_z(n_objects, n)?;
    let y: T = stopping_reward_y(n_objects, n)?;
    Ok(p.clone() * z + (T::one() - p) * y)
}

pub(crate) struct CountModel<'a> {
    pub m0: u32,
    pub n_m: &'a [u32],
}

impl CountModel<'_> {
    pub(crate) fn accepts(&self, m: u32, k: u32) -> bool {
        m >= self.m0 || k >= self.n_m[m as usize]
    }
}

impl<T: Scalar> PostModel<T> for CountModel<'_> {
    type Node = u32;
    type Key = u32;

    fn key(&self, node: &u32) -> u32 {
        *node
    }

    fn posterior(&self, node: &u32) -> T {
        T::ratio(*node as i64, *node as i64 + 1)
    }

    fn step(&self, _n: u32, node: &u32, k: u32) -> (T, bool) {
        let m = (*node + 1).min(self.m0);
        (T::zero(), self.accepts(m, k))
    }

    fn child(&self, node: &u32, _k: u32, _p: T) -> u32 {
        (*node + 1).min(self.m0)
    }
}

#[derive(Debug, Clone)]
pub struct NearOptimalSolution<T: Scalar = f64> {
    pub n_objects: u32,
    pub n_star: u32,
    /// Candidate index accepted at any moment.
    pub m0: u32,
    /// `n_m[m]` for `1 <= m <= m0`: the `m`-th candidate is accepted iff its moment is at least `n_m[m]`; index 0 is unused.
    pub n_m: Vec<u32>,
    pub n0_a: u32,
    /// `v^a(0, -1)`.
    pub value: T,
    v_searching: Vec<T>,
    va: BTreeMap<(u32, u32), T>,
}

pub fn solve_near_optimal<T: Scalar>(n_objects: u32) -> Result<NearOptimalSolution<T>> {
    check_game_n(n_objects)?;
    let p1 = solve_p1::<T>(n_objects)?;
    let n_star = p1.threshold;
    let tails = harmonic_tails::<T>(n_objects);
    let m0 = always_accepted_index::<T>(n_objects, n_star)?;
    let mut k_of = vec![u32::MAX; n_objects as usize + 1];
    for n in n_star + 1..=n_objects {
        k_of[n as usize] = k_from_sums::<T>(n_objects, n, &tails[n as usize])?;
    }
    let mut n_m = vec![0u32; m0 as usize + 1];
    for m in 1..=m0 {
        n_m[m as usize] = (n_star + 1..=n_objects).find(|&n| k_of[n as usize] <= m).unwrap_or(n_objects);
    }
    let model = CountModel { m0, n_m: &n_m };
    let mut engine = Engine::new(n_objects, &model, None);
    let mut v_no_candidate = vec![T::zero(); n_objects as usize + 1];
    for n in n_star..=n_objects {
        v_no_candidate[n as usize] = engine.value(n, &0u32);
    }
    // Fill every reachable (n, m) so the cache is complete.
    for m in 1..m0 {
        for n in n_star + m..=n_objects {
            engine.value(n, &m);
        }
    }
    let va = engine.memo.into_iter().collect();
    let pre = pre_phase(n_objects, n_star, &v_no_candidate);
    Ok(NearOptimalSolution {
        n_objects,
        n_star,
        m0,
        n_m,
        n0_a: pre.n0,
        value: pre.v_searching[0].clone(),
        v_searching: pre.v_searching,
        va,
    })
}

impl<T: Scalar> NearOptimalSolution<T> {
    /// `v^a(n, -1)` for `0 <= n <= N`.
    pub fn v_searching(&self, n: u32) -> Option<&T> {
        self.v_searching.get(n as usize)
    }

    /// `v^a(n, m)` for `0 <= m < m0`, `n* + m <= n <= N`.
    pub fn va(&self, n: u32, m: u32) -> Option<&T> {
        self.va.get(&(n, m))
    }

    /// Whether the `m`-th candidate after `n*`, seen at moment `n`, is accepted.
    pub fn accepts(&self, m: u32, n: u32) -> bool {
        m >= self.m0 || n >= self.n_m[m as usize]
    }

    /// Player 2 decision before `n*`.
    pub fn accepts_early(&self, n: u32) -> bool {
        n >= self.n0_a && n < self.n_star
    }
}

/// A decision situation where the count-based and optimal responses disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    /// Candidate moments after `n*`, ending with the current one.
    pub history: Vec<u32>,
    pub optimal_accepts: bool,
}

/// Compare the two responses on every candidate situation reachable under either.
pub fn compare_strategies<T: Scalar>(
    game: &GameSolution<T>,
    near: &NearOptimalSolution<T>,
) -> (bool, Vec<Disagreement>) {
    let pre_same = (1..game.n_star).all(|n| (n >= game.n0) == near.accepts_early(n));
    let mut diffs = Vec::new();
    let mut stack: Vec<(Vec<u32>, T)> = (game.n_star + 1..=game.n_objects).map(|k| (vec![k], T::ratio(1, 2))).collect();
    while let Some((history, p)) = stack.pop() {
        let n = *history.last().unwrap();
        let opt = game.q_table.accepts(n, &p);
        let approx = near.accepts(history.len() as u32, n);
        if opt != approx {
            diffs.push(Disagreement { history: history.clone(), optimal_accepts: opt });
        }
        if !(opt && approx) {
            for k in n + 1..=game.n_objects {
                let mut h = history.clone();
                h.push(k);
                stack.push((h, crate::posterior::posterior_step(n, k, &p)));
            }
        }
    }
    diffs.sort_by(|a, b| a.history.cmp(&b.history));
    (pre_same, diffs)
}

/// Check `v^a(n, m) <= v(n, p)` on every optimal-reachable history with fewer than `m0` candidates.
pub fn sandwich_violations<T: Scalar>(
    game: &GameSolution<T>,
    near: &NearOptimalSolution<T>,
    slack: f64,
) -> Result<usize> {
    let mut bad = 0;
    for c in reachable_candidates(&game.q_table, near.m0.saturating_sub(1) as usize) {
        let n = *c.history.last().unwrap();
        let m = c.history.len() as u32;
        let Some(va) = near.va(n, m) else { continue };
        let v = game.value_after_history(&c.history)?;
        if va.as_f64() > v.as_f64() + slack {
            bad += 1;
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_game;
    use crate::scalar::Exact;

    #[test]
    fn k_examples() {
        assert_eq!(count_threshold_k::<f64>(50, 20).unwrap(), 9);
        assert_eq!(count_threshold_k::<f64>(50, 23).unwrap(), 3);
        assert_eq!(count_threshold_k::<f64>(50, 29).unwrap(), 1);
        assert_eq!(count_threshold_k::<Exact>(50, 29).unwrap(), 1);
        assert!(count_threshold_k::<f64>(50, 19).is_err());
    }

    #[test]
    fn fifty_objects() {
        let s = solve_near_optimal::<f64>(50).unwrap();
        assert_eq!(s.m0, 4);
        assert_eq!(&s.n_m[1..4], &[29, 25, 23]);
        assert_eq!(s.n0_a, 11);
        assert!((s.v_searching(18).unwrap() - 0.145868).abs() < 5e-7);
        assert!((s.value - 0.203155).abs() < 5e-7);
    }

    #[test]
    fn w_approx_examples() {
        let w: f64 = w_approx(50, 18, 1_000_000).unwrap();
        assert!((w - 0.374275).abs() < 1e-5);
        // m = 0 at n = N - 1 is y_{N-1} = 1/N.
        let w: Exact = w_approx(5, 4, 0).unwrap();
        assert_eq!(w, Exact::ratio(1, 5));
        // m = 1 at n = 4, N = 5: (1/2)(4/5)(1/4) + (1/2)(1/5).
        let w: Exact = w_approx(5, 4, 1).unwrap();
        assert_eq!(w, Exact::ratio(1, 5));
        let k = count_threshold_k::<f64>(50, 29).unwrap();
        let w: f64 = w_approx(50, 29, k as u64).unwrap();
        assert!(w <= 29.0 * k as f64 / (50.0 * (k as f64 + 1.0)));
    }

    #[test]
    fn fifty_objects_differences() {
        let g = solve_game::<f64>(50).unwrap();
        let s = solve_near_optimal::<f64>(50).unwrap();
        let (pre_same, diffs) = compare_strategies(&g, &s);
        assert!(pre_same);
        let hs: Vec<Vec<u32>> = diffs.iter().map(|d| d.history.clone()).collect();
        assert_eq!(hs, vec![vec![20, 24], vec![21, 24]]);
        assert!(diffs.iter().all(|d| d.optimal_accepts));
    }
}
