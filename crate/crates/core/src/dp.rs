//! Value recursion shared by the exact and the count-based responses.
//!
//! After Player 1 has accepted, Player 2's state at a decision point is a node
//! of a [`PostModel`]. From a node at moment `n` the next Player-2 candidate
//! arrives at `k` with probability
//! `p n/(k(k-1)) + (1-p) 2n(n-1)/(k(k-1)(k-2))`; if the model accepts it there
//! the contribution is the probability that it is the overall best,
//! `p n/(N(k-1)) + (1-p) n(n-1)/(N(k-1)(k-2))`.

use std::collections::HashMap;
use std::hash::Hash;

use crate::scalar::Scalar;

pub(crate) trait PostModel<T: Scalar> {
    type Node: Clone;
    type Key: Hash + Eq + Clone;

    fn key(&self, node: &Self::Node) -> Self::Key;
    fn posterior(&self, node: &Self::Node) -> T;
    /// Posterior (or its surrogate) of a candidate at `k` and whether it is accepted.
    fn step(&self, n: u32, node: &Self::Node, k: u32) -> (T, bool);
    fn child(&self, node: &Self::Node, k: u32, p_next: T) -> Self::Node;
}

pub(crate) type Memo<K, T> = HashMap<(u32, K), T>;

pub(crate) struct Engine<'a, T: Scalar, M: PostModel<T>> {
    n_objects: u32,
    model: &'a M,
    frozen: Option<&'a Memo<M::Key, T>>,
    pub(crate) memo: Memo<M::Key, T>,
}

impl<'a, T: Scalar, M: PostModel<T>> Engine<'a, T, M> {
    pub(crate) fn new(n_objects: u32, model: &'a M, frozen: Option<&'a Memo<M::Key, T>>) -> Self {
        Engine { n_objects, model, frozen, memo: HashMap::new() }
    }

    /// Value of continuing from `node` at moment `n` after rejecting there.
    pub(crate) fn value(&mut self, n: u32, node: &M::Node) -> T {
        let key = (n, self.model.key(node));
        if let Some(v) = self.frozen.and_then(|f| f.get(&key)) {
            return v.clone();
        }
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let big_n = self.n_objects as i64;
        let p = self.model.posterior(node);
        let q = T::one() - p.clone();
        let ni = n as i64;
        let mut total = T::zero();
        for k in n + 1..=self.n_objects {
            let ki = k as i64;
            let (p_next, accept) = self.model.step(n, node, k);
            if accept {
                let stop_best = T::ratio(ni, big_n * (ki - 1));
                let stop_second = T::ratio(ni * (ni - 1), big_n * (ki - 1) * (ki - 2));
                total = total + p.clone() * stop_best + q.clone() * stop_second;
            } else {
                let reach = p.clone() * T::ratio(ni, ki * (ki - 1))
                    + q.clone() * T::ratio(2 * ni * (ni - 1), ki * (ki - 1) * (ki - 2));
                if reach.is_zero() {
                    continue;
                }
                let child = self.model.child(node, k, p_next);
                total = total + reach * self.value(k, &child);
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// Values while Player 1 is still searching, given `v(k, 0)` for `k >= n*`.
pub(crate) struct PrePhase<T> {
    /// `v(n, -1)` for `0 <= n <= N`.
    pub v_searching: Vec<T>,
    /// First moment before `n*` at which Player 2 accepts a candidate; `n*` if none.
    pub n0: u32,
}

pub(crate) fn pre_phase<T: Scalar>(n_objects: u32, n_star: u32, v_no_candidate: &[T]) -> PrePhase<T> {
    let big_n = n_objects as i64;
    let len = n_objects as usize;
    let mut v = vec![T::zero(); len + 1];
    let edge = n_star.saturating_sub(1).max(1);
    for n in edge..=n_objects {
        let ni = n as i64;
        let mut total = T::zero();
        for k in n + 1..=n_objects {
            let ki = k as i64;
            total = total + T::ratio(ni, ki * (ki - 1)) * v_no_candidate[k as usize].clone();
        }
        v[n as usize] = total;
    }
    let v_edge = v[edge as usize].clone();
    for n in (1..edge).rev() {
        let ni = n as i64;
        let mut total = T::ratio(ni, edge as i64) * v_edge.clone();
        for k in n + 1..=edge {
            let ki = k as i64;
            let best = T::max_of(T::ratio(ki, big_n), v[k as usize].clone());
            total = total + T::ratio(ni, ki * (ki - 1)) * best;
        }
        v[n as usize] = total;
    }
    v[0] = T::max_of(T::ratio(1, big_n), v[1].clone());

    // Smallest n with 1 >= N v(n*-1,-1)/(n*-1) + Σ_{k=n+1}^{n*-1} 1/(k-1).
    let base = T::int(big_n) * v_edge / T::int(edge as i64);
    let mut n0 = n_star;
    let mut tail = T::zero();
    let mut candidates = Vec::new();
    for n in (1..=edge).rev() {
        if n < edge {
            tail = tail + T::ratio(1, n as i64);
        }
        candidates.push((n, base.clone() + tail.clone()));
    }
    for (n, lhs) in candidates.into_iter().rev() {
        if T::one() >= lhs {
            n0 = n;
            break;
        }
    }
    PrePhase { v_searching: v, n0 }
}
