//! Numeric back ends for the finite-N solvers.
//!
//! Every finite-N routine is generic over [`Scalar`], so the same code runs in
//! `f64` for large games and in exact rationals for small ones.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive};

/// Exact rational arithmetic.
pub type Exact = BigRational;

pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Key used to memoise value-function evaluations at a fixed moment.
    type MemoKey: Hash + Eq + Clone + Debug + Send + Sync;

    fn ratio(num: i64, den: i64) -> Self;

    fn int(v: i64) -> Self {
        Self::ratio(v, 1)
    }

    fn as_f64(&self) -> f64;

    fn ceil_u64(&self) -> u64;

    /// Exact backends key on the value, floating ones on the candidate history
    /// that produced it.
    fn memo_key(&self, history: &[u32]) -> Self::MemoKey;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    type MemoKey = Vec<u32>;

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn ceil_u64(&self) -> u64 {
        self.ceil().max(0.0) as u64
    }

    fn memo_key(&self, history: &[u32]) -> Vec<u32> {
        history.to_vec()
    }
}

impl Scalar for BigRational {
    type MemoKey = BigRational;

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn as_f64(&self) -> f64 {
        // Scale down huge numerators and denominators together before converting.
        let (n, d) = (self.numer(), self.denom());
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
            _ => {
                let shift = n.bits().max(d.bits()).saturating_sub(1000);
                let a = (n >> shift).to_f64().unwrap_or(0.0);
                let b = (d >> shift).to_f64().unwrap_or(1.0);
                a / b
            }
        }
    }

    fn ceil_u64(&self) -> u64 {
        if self.is_negative() {
            return 0;
        }
        self.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
    }

    fn memo_key(&self, _history: &[u32]) -> BigRational {
        self.clone()
    }
}

pub(crate) fn is_unit_interval<T: Scalar>(p: &T) -> bool {
    *p >= T::zero() && *p <= T::one()
}

/// Render an exact value as `num/den`.
pub fn fraction_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ceil_and_conversion() {
        let x = Exact::ratio(7, 3);
        assert_eq!(x.ceil_u64(), 3);
        assert_eq!(Exact::ratio(6, 3).ceil_u64(), 2);
        assert!((x.as_f64() - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(fraction_string(&Exact::ratio(10, 4)), "5/2");
    }

    #[test]
    fn huge_rational_converts() {
        let big = BigInt::from(3) * BigInt::from(10).pow(400);
        let x = BigRational::new(big.clone(), big * BigInt::from(4));
        assert!((x.as_f64() - 0.25).abs() < 1e-15);
    }
}
