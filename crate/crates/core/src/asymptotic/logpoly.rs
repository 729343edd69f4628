//! Finite sums `Σ c t^a ln^b t` with closed-form antiderivatives.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogPoly {
    /// `(power, log power) -> coefficient`
    terms: BTreeMap<(i32, u32), f64>,
}

impl LogPoly {
    pub fn zero() -> Self {
        LogPoly::default()
    }

    pub fn constant(c: f64) -> Self {
        LogPoly::term(c, 0, 0)
    }

    /// `c t^power ln^log_power t`
    pub fn term(c: f64, power: i32, log_power: u32) -> Self {
        let mut p = LogPoly::zero();
        p.add_term(c, power, log_power);
        p
    }

    fn add_term(&mut self, c: f64, power: i32, log_power: u32) {
        if c == 0.0 {
            return;
        }
        *self.terms.entry((power, log_power)).or_insert(0.0) += c;
    }

    pub fn coefficient(&self, power: i32, log_power: u32) -> f64 {
        self.terms.get(&(power, log_power)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, f64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn plus(&self, other: &LogPoly) -> LogPoly {
        let mut out = self.clone();
        for (a, b, c) in other.terms() {
            out.add_term(c, a, b);
        }
        out
    }

    pub fn minus(&self, other: &LogPoly) -> LogPoly {
        self.plus(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> LogPoly {
        let mut out = LogPoly::zero();
        for (a, b, c) in self.terms() {
            out.add_term(c * k, a, b);
        }
        out
    }

    /// Multiply by `t^power`.
    pub fn shift(&self, power: i32) -> LogPoly {
        let mut out = LogPoly::zero();
        for (a, b, c) in self.terms() {
            out.add_term(c, a + power, b);
        }
        out
    }

    pub fn times(&self, other: &LogPoly) -> LogPoly {
        let mut out = LogPoly::zero();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in other.terms() {
                out.add_term(c1 * c2, a1 + a2, b1 + b2);
            }
        }
        out
    }

    pub fn eval(&self, t: f64) -> f64 {
        let l = t.ln();
        self.terms().map(|(a, b, c)| c * t.powi(a) * l.powi(b as i32)).sum()
    }

    /// An antiderivative, from `∫ s^j ln^b s ds`:
    /// `ln^{b+1} s / (b+1)` for `j = -1`, otherwise
    /// `s^{j+1} Σ_i (-1)^i b!/(b-i)! ln^{b-i} s / (j+1)^{i+1}`.
    pub fn antiderivative(&self) -> LogPoly {
        let mut out = LogPoly::zero();
        for (j, b, c) in self.terms() {
            if j == -1 {
                out.add_term(c / (b as f64 + 1.0), 0, b + 1);
                continue;
            }
            let alpha = (j + 1) as f64;
            let mut falling = 1.0;
            for i in 0..=b {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(c * sign * falling / alpha.powi(i as i32 + 1), j + 1, b - i);
                falling *= (b - i) as f64;
            }
        }
        out
    }

    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(hi) - f.eval(lo)
    }
}

/// Function given by one [`LogPoly`] per interval `[b_j, b_{j+1})`, the last one closed.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseValue {
    breakpoints: Vec<f64>,
    pieces: Vec<LogPoly>,
}

impl PiecewiseValue {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<LogPoly>) -> Self {
        assert_eq!(breakpoints.len(), pieces.len() + 1);
        assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        PiecewiseValue { breakpoints, pieces }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[LogPoly] {
        &self.pieces
    }

    pub fn piece_index(&self, t: f64) -> Option<usize> {
        let last = *self.breakpoints.last()?;
        if t < self.breakpoints[0] || t > last {
            return None;
        }
        if t == last {
            return Some(self.pieces.len() - 1);
        }
        Some(self.breakpoints.partition_point(|&b| b <= t) - 1)
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        self.piece_index(t).map(|j| self.pieces[j].eval(t))
    }

    /// Largest jump between neighbouring pieces at an interior breakpoint.
    pub fn continuity_gap(&self) -> f64 {
        (1..self.pieces.len())
            .map(|j| {
                let b = self.breakpoints[j];
                (self.pieces[j - 1].eval(b) - self.pieces[j].eval(b)).abs()
            })
            .fold(0.0, f64::max)
    }
}
