//! Upper bound from a game in which Player 2 learns the relative rank of each
//! rejected candidate after `e^-1`.

use serde::{Deserialize, Serialize};

use super::logpoly::{LogPoly, PiecewiseValue};
use super::thresholds::{inv_e, solve_threshold_t};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl UpperConstants {
    /// Closed forms in terms of `t_1`.
    pub fn closed_form(t1: f64) -> Self {
        UpperConstants {
            c1: 1.0 - t1 - 0.5 * t1 * t1,
            c2: t1 + t1 * t1 + t1.powi(3) / 3.0 - 1.0,
            c3: (3.0 * t1 * t1 + 2.0 * t1.powi(3) - 5.0) / 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBound {
    pub t1: f64,
    pub constants: UpperConstants,
    /// Earliest acceptance time, which is also the bound on Player 2's value.
    pub t0: f64,
    /// `u(t, 2)` on `[e^-1, 1]`: value after rejecting a candidate known to be second best so far.
    pub after_second: PiecewiseValue,
    /// `u(t, -1)` on `[e^-1, 1]`.
    pub searching: PiecewiseValue,
}

impl UpperBound {
    /// `u(t, -1)` on `[0, 1]`.
    pub fn value_searching(&self, t: f64) -> Option<f64> {
        if t >= inv_e() {
            return self.searching.eval(t);
        }
        if t < 0.0 {
            return None;
        }
        let c3 = self.constants.c3;
        Some(if t < self.t0 { self.t0 } else { c3 * t - t * t.ln() })
    }
}

pub fn upper_bound() -> Result<UpperBound> {
    let t1 = solve_threshold_t(1)?;
    let e_inv = inv_e();
    let bp = vec![e_inv, t1, 1.0];

    // On [t1, 1] the next candidate is taken: y(t) = t(1 - t).
    let top = LogPoly::term(1.0, 1, 0).plus(&LogPoly::term(-1.0, 2, 0));
    // Below t1: c1 t + t ln^2 t / 2, with c1 fixed by continuity at t1.
    let c1 = top.eval(t1) / t1 - t1.ln().powi(2) / 2.0;
    let low = LogPoly::term(c1, 1, 0).plus(&LogPoly::term(0.5, 1, 2));
    let after_second = PiecewiseValue::new(bp.clone(), vec![low, top]);

    // u(t,-1) = t ∫_t^1 u(s,2)/s^2 ds.
    let searching = PiecewiseValue::new(bp.clone(), tail_times_t(&after_second, -2));
    let c2 = searching.pieces()[0].coefficient(1, 0);
    let c3 = std::f64::consts::E * searching.eval(e_inv).unwrap() - 1.0;
    Ok(UpperBound { t1, constants: UpperConstants { c1, c2, c3 }, t0: (c3 - 1.0).exp(), after_second, searching })
}

/// Pieces of `t ∫_t^1 f(s) s^power ds` over the partition of `f`.
pub(crate) fn tail_times_t(f: &PiecewiseValue, power: i32) -> Vec<LogPoly> {
    let bp = f.breakpoints();
    let anti: Vec<LogPoly> = f.pieces().iter().map(|p| p.shift(power).antiderivative()).collect();
    let count = anti.len();
    (0..count)
        .map(|j| {
            let mut c = anti[j].eval(bp[j + 1]);
            for i in j + 1..count {
                c += anti[i].eval(bp[i + 1]) - anti[i].eval(bp[i]);
            }
            LogPoly::constant(c).minus(&anti[j]).shift(1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::quadrature::integrate;

    #[test]
    fn constants_match_closed_forms() {
        let ub = upper_bound().unwrap();
        let cf = UpperConstants::closed_form(ub.t1);
        assert!((ub.constants.c1 - cf.c1).abs() < 1e-12);
        assert!((ub.constants.c2 - cf.c2).abs() < 1e-12);
        assert!((ub.constants.c3 - cf.c3).abs() < 1e-12);
        assert!((cf.c1 - 0.272031).abs() < 5e-7);
        assert!((cf.c2 + 0.050398).abs() < 5e-7);
        assert!((cf.c3 + 0.611700).abs() < 5e-7);
        assert!((ub.t0 - 0.199548).abs() < 5e-7);
    }

    #[test]
    fn searching_value_on_top_interval() {
        let ub = upper_bound().unwrap();
        for i in 0..=20 {
            let t = ub.t1 + (1.0 - ub.t1) * i as f64 / 20.0;
            let want = t * (t - 1.0 - t.ln());
            assert!((ub.searching.eval(t).unwrap() - want).abs() < 1e-13);
        }
        let c = &ub.constants;
        let t = 0.45;
        let want = c.c2 * t - c.c1 * t * t.ln() - t * t.ln().powi(3) / 6.0;
        assert!((ub.searching.eval(t).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn second_best_value_solves_its_integral_equation() {
        let ub = upper_bound().unwrap();
        let u2 = |s: f64| ub.after_second.eval(s).unwrap();
        for &t in &[0.37, 0.42, 0.5, 0.56] {
            let cont = integrate(|s| t * t * (-s * s.ln() + u2(s)) / s.powi(3), t, ub.t1, 1e-12);
            let stop = t * t * (1.0 / ub.t1 - 1.0);
            assert!((cont + stop - u2(t)).abs() < 1e-9, "t = {t}");
        }
        assert!(ub.after_second.continuity_gap() < 1e-12);
        assert!(ub.searching.continuity_gap() < 1e-12);
    }
}
