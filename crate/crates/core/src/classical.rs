//! Player 1's classical secretary problem.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, invalid, Result};
use crate::scalar::Scalar;

/// Which candidate process a gap distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapKernel {
    /// Next object of relative rank 1.
    Rank1,
    /// Next object of relative rank 1 or 2.
    Rank2,
}

/// `s[n] = Σ_{k=n+1}^{N} 1/(k-1)` for `1 <= n <= N`; `s[0]` is unused and zero.
pub fn harmonic_tails<T: Scalar>(n_objects: u32) -> Vec<T> {
    let n_objects = n_objects as usize;
    let mut s = vec![T::zero(); n_objects + 1];
    for n in (1..n_objects).rev() {
        s[n] = s[n + 1].clone() + T::ratio(1, n as i64);
    }
    s
}

/// `Σ_{k=n+1}^{N} 1/(k-1)` for `1 <= n <= N`.
pub fn tail_harmonic<T: Scalar>(n_objects: u32, n: u32) -> T {
    (n..n_objects).fold(T::zero(), |acc, j| acc + T::ratio(1, j as i64))
}

/// `Σ_{k=n+1}^{N} 1/((k-1)(k-2))` for `2 <= n <= N`, summed by telescoping.
pub fn tail_pair<T: Scalar>(n_objects: u32, n: u32) -> T {
    debug_assert!(n >= 2 && n <= n_objects);
    T::ratio(1, n as i64 - 1) - T::ratio(1, n_objects as i64 - 1)
}

/// Classical secretary solution for `N` objects.
#[derive(Debug, Clone, PartialEq)]
pub struct P1Solution<T: Scalar = f64> {
    pub n_objects: u32,
    /// First moment from which a relative-rank-1 object is accepted.
    pub threshold: u32,
    /// `u[n]`: optimal success probability after rejecting the first `n` objects.
    pub u: Vec<T>,
    z_start: u32,
    z: Vec<T>,
}

impl<T: Scalar> P1Solution<T> {
    pub fn value(&self) -> &T {
        &self.u[0]
    }

    /// Reward `z_n` of accepting the next candidate after moment `n`, stored for `n* - 1 <= n <= N`.
    pub fn z(&self, n: u32) -> Option<&T> {
        n.checked_sub(self.z_start).and_then(|i| self.z.get(i as usize))
    }

    pub fn z_range(&self) -> std::ops::RangeInclusive<u32> {
        self.z_start..=self.n_objects
    }
}

pub fn solve_p1<T: Scalar>(n_objects: u32) -> Result<P1Solution<T>> {
    if n_objects == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let big_n = n_objects as i64;
    let len = n_objects as usize;
    let mut u = vec![T::zero(); len + 1];
    for n in (0..len).rev() {
        let next = u[n + 1].clone();
        let stop = T::ratio(n as i64 + 1, big_n);
        let m = n as i64 + 1;
        u[n] = T::max_of(stop, next.clone()) / T::int(m) + next * T::ratio(n as i64, m);
    }
    let threshold = (1..=n_objects).find(|&n| T::ratio(n as i64, big_n) >= u[n as usize]).unwrap_or(n_objects);
    let tails = harmonic_tails::<T>(n_objects);
    let z_start = threshold - 1;
    let z = (z_start..=n_objects).map(|n| z_from_tail(n_objects, n, &tails)).collect();
    Ok(P1Solution { n_objects, threshold, u, z_start, z })
}

fn z_from_tail<T: Scalar>(n_objects: u32, n: u32, tails: &[T]) -> T {
    if n == 0 {
        T::ratio(1, n_objects as i64)
    } else {
        T::ratio(n as i64, n_objects as i64) * tails[n as usize].clone()
    }
}

/// Threshold `n*` alone, without the full table.
pub fn p1_threshold(n_objects: u32) -> Result<u32> {
    if n_objects == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let mut s = 0.0;
    for n in (1..=n_objects).rev() {
        if n < n_objects {
            s += 1.0 / n as f64;
        }
        if s > 1.0 {
            return Ok(n + 1);
        }
    }
    Ok(1)
}

/// Probability `z_n` of winning by accepting the next candidate after moment `n`.
///
/// `z_0 = 1/N`: the first object is always a candidate.
pub fn stopping_reward_z<T: Scalar>(n_objects: u32, n: u32) -> Result<T> {
    if n >= n_objects {
        return Err(invalid(format!("z_n needs n < N, got n = {n}, N = {n_objects}")));
    }
    if n == 0 {
        return Ok(T::ratio(1, n_objects as i64));
    }
    Ok(T::ratio(n as i64, n_objects as i64) * tail_harmonic(n_objects, n))
}

/// Probability `y_n` of winning by accepting the next relative-rank-1 or 2 object
/// after moment `n`, when the best object so far is known to be gone.
pub fn stopping_reward_y<T: Scalar>(n_objects: u32, n: u32) -> Result<T> {
    if n >= n_objects {
        return Err(invalid(format!("y_n needs n < N, got n = {n}, N = {n_objects}")));
    }
    if n < 2 {
        return Ok(T::zero());
    }
    let n_i = n as i64;
    Ok(T::ratio(n_i * (n_i - 1), n_objects as i64) * tail_pair(n_objects, n))
}

/// Probability that the next object of the given kind after moment `n` appears at
/// moment `k`; `k = N + 1` is the mass of "never".
pub fn candidate_gap_probability<T: Scalar>(n_objects: u32, n: u32, k: u32, kernel: GapKernel) -> Result<T> {
    let min_n = match kernel {
        GapKernel::Rank1 => 1,
        GapKernel::Rank2 => 2,
    };
    check_range("n", n as i64, min_n, n_objects as i64)?;
    check_range("k", k as i64, n as i64 + 1, n_objects as i64 + 1)?;
    let (n, k, big_n) = (n as i64, k as i64, n_objects as i64);
    Ok(match (kernel, k == big_n + 1) {
        (GapKernel::Rank1, false) => T::ratio(n, k * (k - 1)),
        (GapKernel::Rank1, true) => T::ratio(n, big_n),
        (GapKernel::Rank2, false) => T::ratio(2 * n * (n - 1), k * (k - 1) * (k - 2)),
        (GapKernel::Rank2, true) => T::ratio(n * (n - 1), big_n * (big_n - 1)),
    })
}

/// Limits `z(t) = -t ln t` and `y(t) = t(1-t)` of `z_n`, `y_n` at `n = tN`.
pub fn asymptotic_z_y(t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("t must lie in (0, 1], got {t}")));
    }
    Ok((-t * t.ln(), t * (1.0 - t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn four_objects_exact() {
        let s = solve_p1::<Exact>(4).unwrap();
        assert_eq!(s.threshold, 2);
        assert_eq!(s.u[3], Exact::ratio(1, 4));
        assert_eq!(s.u[2], Exact::ratio(5, 12));
        assert_eq!(s.u[1], Exact::ratio(11, 24));
        assert_eq!(s.u[0], Exact::ratio(11, 24));
        assert_eq!(s.z(1).unwrap(), s.value());
    }

    #[test]
    fn single_object() {
        let s = solve_p1::<Exact>(1).unwrap();
        assert_eq!(s.threshold, 1);
        assert_eq!(*s.value(), Exact::ratio(1, 1));
        assert_eq!(s.z(0).unwrap(), s.value());
    }

    #[test]
    fn fifty_objects() {
        let s = solve_p1::<f64>(50).unwrap();
        assert_eq!(s.threshold, 19);
        assert!((s.u[0] - 0.374275).abs() < 5e-7);
        assert!((s.z(18).unwrap() - s.u[0]).abs() < 1e-15);
        assert_eq!(p1_threshold(50).unwrap(), 19);
    }

    #[test]
    fn z_examples() {
        let z: f64 = stopping_reward_z(50, 18).unwrap();
        assert!((z - 0.374275).abs() < 5e-7);
        assert_eq!(stopping_reward_z::<Exact>(9, 8).unwrap(), Exact::ratio(1, 9));
        let z20: f64 = stopping_reward_z(20, 7).unwrap();
        assert!((z20 - 0.3842).abs() < 5e-5);
        assert!(stopping_reward_z::<f64>(5, 5).is_err());
    }

    #[test]
    fn tail_pair_matches_direct_sum() {
        for big_n in 3..30u32 {
            for n in 2..=big_n {
                let direct = (n + 1..=big_n)
                    .fold(Exact::ratio(0, 1), |acc, k| acc + Exact::ratio(1, (k as i64 - 1) * (k as i64 - 2)));
                assert_eq!(tail_pair::<Exact>(big_n, n), direct);
            }
        }
    }

    #[test]
    fn gap_examples() {
        let p: Exact = candidate_gap_probability(4, 2, 3, GapKernel::Rank1).unwrap();
        assert_eq!(p, Exact::ratio(1, 3));
        let total = (4..=7).fold(Exact::ratio(0, 1), |acc, k| {
            acc + candidate_gap_probability::<Exact>(7, 3, k, GapKernel::Rank1).unwrap()
        });
        assert_eq!(total, Exact::ratio(4, 7));
        let total = (5..=10).fold(Exact::ratio(0, 1), |acc, k| {
            acc + candidate_gap_probability::<Exact>(9, 4, k, GapKernel::Rank2).unwrap()
        });
        assert_eq!(total, Exact::ratio(1, 1));
        assert!(candidate_gap_probability::<f64>(9, 1, 3, GapKernel::Rank2).is_err());
        assert!(candidate_gap_probability::<f64>(9, 4, 4, GapKernel::Rank1).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        assert_eq!(asymptotic_z_y(1.0).unwrap(), (0.0, 0.0));
        let (z, _) = asymptotic_z_y((-1.0f64).exp()).unwrap();
        assert!((z - 0.367879).abs() < 5e-7);
        assert_eq!(asymptotic_z_y(0.5).unwrap().1, 0.25);
        assert!(asymptotic_z_y(0.0).is_err());
    }
}
