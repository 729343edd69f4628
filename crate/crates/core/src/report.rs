//! Serializable reports and the reproduction tables.
//!
//! Builders take an output precision and store numbers already rounded
//! (half-to-even on the exact binary value), so JSON and CSV renderings agree.
//! CSV column order is the field order of each row type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::asymptotic::{AsymptoticModel, AsymptoticThresholds};
use crate::classical::p1_threshold;
use crate::error::{check_range, Result};
use crate::exact::{solve_game, GameSolution};
use crate::near_optimal::NearOptimalSolution;
use crate::oracle::enumerate::enumerate_exact;
use crate::oracle::rules::DecisionRule;
use crate::oracle::simulate::SimOutcome;
use crate::posterior::{posterior_from_history, CandidateHistory};
use crate::scalar::{fraction_string, Exact};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRECISION: u32 = 6;
pub const MAX_PRECISION: u32 = 17;

/// Decimal string of `x` with `precision` places, ties to even.
pub fn round_exact(x: &Exact, precision: u32) -> String {
    let scale = BigInt::from(10u32).pow(precision);
    let scaled = x.abs() * Exact::from_integer(scale.clone());
    let mut q = scaled.floor().to_integer();
    let frac = scaled - Exact::from_integer(q.clone());
    let half = Exact::new(BigInt::from(1), BigInt::from(2));
    if frac > half || (frac == half && q.is_odd()) {
        q += 1;
    }
    let (int, rem) = q.div_rem(&scale);
    let sign = if x.is_negative() && !(int.is_zero() && rem.is_zero()) { "-" } else { "" };
    if precision == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", rem.to_string(), width = precision as usize)
    }
}

/// [`round_exact`] applied to the exact value of a double.
pub fn format_fixed(x: f64, precision: u32) -> String {
    match Exact::from_float(x) {
        Some(r) => round_exact(&r, precision),
        None => x.to_string(),
    }
}

/// `x` rounded to `precision` places.
pub fn round_f64(x: f64, precision: u32) -> f64 {
    format_fixed(x, precision).parse().unwrap_or(x)
}

fn check_precision(precision: u32) -> Result<()> {
    check_range("precision", precision as i64, 0, MAX_PRECISION as i64)
}

/// One CSV cell per field.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn cells(&self, precision: u32) -> Vec<String>;
}

fn num(x: f64, precision: u32) -> String {
    format_fixed(x, precision)
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

pub fn render_csv<R: CsvRow>(rows: &[R], precision: u32) -> String {
    let mut out = R::HEADER.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.cells(precision).join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QRow {
    pub n: u32,
    pub q: f64,
}

impl CsvRow for QRow {
    const HEADER: &'static [&'static str] = &["n", "q"];
    fn cells(&self, p: u32) -> Vec<String> {
        vec![self.n.to_string(), num(self.q, p)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameReport {
    pub schema_version: u32,
    pub n: u32,
    pub n_star: u32,
    pub n0: u32,
    pub n1: Option<u32>,
    pub u1: f64,
    pub u2: f64,
    /// `v(n*-1, -1)`.
    pub v_before_threshold: f64,
    pub m0: u32,
    pub q_table: Vec<QRow>,
    pub strategy_summary: Vec<String>,
}

impl GameReport {
    pub fn new(g: &GameSolution<f64>, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let r = |x: f64| round_f64(x, precision);
        Ok(GameReport {
            schema_version: SCHEMA_VERSION,
            n: g.n_objects,
            n_star: g.n_star,
            n0: g.n0,
            n1: g.n1,
            u1: r(g.u1),
            u2: r(g.u2),
            v_before_threshold: r(g.v_searching(g.n_star - 1).copied().unwrap_or(0.0)),
            m0: g.m0,
            q_table: q_rows(g, precision),
            strategy_summary: g.strategy_summary.render(),
        })
    }
}

pub fn q_rows(g: &GameSolution<f64>, precision: u32) -> Vec<QRow> {
    g.q_table.entries().map(|(n, q)| QRow { n, q: round_f64(*q, precision) }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexThreshold {
    pub m: u32,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearOptimalReport {
    pub schema_version: u32,
    pub n: u32,
    pub n_star: u32,
    pub m0: u32,
    pub n_m: Vec<IndexThreshold>,
    pub n0_a: u32,
    pub value: f64,
    /// `v^a(n*-1, -1)`.
    pub v_before_threshold: f64,
}

impl NearOptimalReport {
    pub fn new(s: &NearOptimalSolution<f64>, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let n_m = (1..=s.m0).map(|m| IndexThreshold { m, n: s.n_m[m as usize] }).collect();
        Ok(NearOptimalReport {
            schema_version: SCHEMA_VERSION,
            n: s.n_objects,
            n_star: s.n_star,
            m0: s.m0,
            n_m,
            n0_a: s.n0_a,
            value: round_f64(s.value, precision),
            v_before_threshold: round_f64(s.v_searching(s.n_star - 1).copied().unwrap_or(0.0), precision),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumRow {
    pub n: u32,
    pub n_star: u32,
    pub u1: f64,
    pub n0: u32,
    pub n1: Option<u32>,
    pub u2: f64,
    pub u1_exact: String,
    pub u2_exact: String,
}

impl CsvRow for EquilibriumRow {
    const HEADER: &'static [&'static str] = &["n", "n_star", "u1", "n0", "n1", "u2", "u1_exact", "u2_exact"];
    fn cells(&self, p: u32) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.n_star.to_string(),
            num(self.u1, p),
            self.n0.to_string(),
            opt(&self.n1),
            num(self.u2, p),
            self.u1_exact.clone(),
            self.u2_exact.clone(),
        ]
    }
}

/// Sizes listed in the equilibrium table.
pub const EQUILIBRIUM_SIZES: [u32; 9] = [3, 4, 5, 6, 7, 8, 9, 10, 20];

pub fn equilibrium_row(n: u32, precision: u32) -> Result<EquilibriumRow> {
    check_precision(precision)?;
    let g = solve_game::<Exact>(n)?;
    Ok(EquilibriumRow {
        n,
        n_star: g.n_star,
        u1: round_exact(&g.u1, precision).parse().unwrap_or(f64::NAN),
        n0: g.n0,
        n1: g.n1,
        u2: round_exact(&g.u2, precision).parse().unwrap_or(f64::NAN),
        u1_exact: fraction_string(&g.u1),
        u2_exact: fraction_string(&g.u2),
    })
}

pub fn equilibrium_table(precision: u32) -> Result<Vec<EquilibriumRow>> {
    EQUILIBRIUM_SIZES.iter().map(|&n| equilibrium_row(n, precision)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorRow {
    pub mu1: u32,
    pub mu2: u32,
    pub p: f64,
}

impl CsvRow for PosteriorRow {
    const HEADER: &'static [&'static str] = &["mu1", "mu2", "p"];
    fn cells(&self, p: u32) -> Vec<String> {
        vec![self.mu1.to_string(), self.mu2.to_string(), num(self.p, p)]
    }
}

/// Posterior of the second candidate after `n*` for `n* < μ1 < μ2 <= n* + width + 1`.
pub fn posterior_table(n_objects: u32, width: u32, precision: u32) -> Result<Vec<PosteriorRow>> {
    check_precision(precision)?;
    let n_star = p1_threshold(n_objects)?;
    let last = (n_star + width + 1).min(n_objects);
    let mut rows = Vec::new();
    for mu1 in n_star + 1..last {
        for mu2 in mu1 + 1..=last {
            let h = CandidateHistory::new(vec![mu1, mu2], n_star)?;
            let p: Exact = posterior_from_history(&h);
            rows.push(PosteriorRow { mu1, mu2, p: round_exact(&p, precision).parse().unwrap_or(f64::NAN) });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedStrategyRow {
    pub strategy: String,
    /// Player 2 accepts the first candidate whose moment is at least this.
    pub from: Option<u32>,
    pub u1: f64,
    pub u2: f64,
    pub u1_exact: String,
    pub u2_exact: String,
}

impl CsvRow for FixedStrategyRow {
    const HEADER: &'static [&'static str] = &["strategy", "from", "u1", "u2", "u1_exact", "u2_exact"];
    fn cells(&self, p: u32) -> Vec<String> {
        vec![
            self.strategy.clone(),
            opt(&self.from),
            num(self.u1, p),
            num(self.u2, p),
            self.u1_exact.clone(),
            self.u2_exact.clone(),
        ]
    }
}

/// Exhaustive evaluation of Player 2's three fixed strategies (first object,
/// any candidate after `n*`, last moment only) and, for `N >= 3`, the optimal one.
pub fn fixed_strategy_table(n_objects: u32, precision: u32) -> Result<Vec<FixedStrategyRow>> {
    check_precision(precision)?;
    let n_star = p1_threshold(n_objects)?;
    let p1 = DecisionRule::<Exact>::p1_threshold(n_star);
    let mut rows = Vec::new();
    let fixed = [("pi1", 1), ("pi2", n_star + 1), ("pi3", n_objects)];
    let mut push = |name: &str, from: Option<u32>, rule: DecisionRule<Exact>| -> Result<()> {
        let out = enumerate_exact(n_objects, &p1, &rule)?;
        rows.push(FixedStrategyRow {
            strategy: name.to_string(),
            from,
            u1: round_exact(&out.u1(), precision).parse().unwrap_or(f64::NAN),
            u2: round_exact(&out.u2(), precision).parse().unwrap_or(f64::NAN),
            u1_exact: out.u1_string(),
            u2_exact: out.u2_string(),
        });
        Ok(())
    };
    for (name, from) in fixed {
        push(name, Some(from), DecisionRule::p2_from_moment(n_star, from))?;
    }
    if n_objects >= crate::exact::MIN_GAME_N {
        let g = solve_game::<Exact>(n_objects)?;
        push("optimal", None, DecisionRule::p2_optimal(&g))?;
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    /// `None` for the limit `m -> infinity`.
    pub m: Option<u64>,
    pub t: f64,
}

impl CsvRow for ThresholdRow {
    const HEADER: &'static [&'static str] = &["m", "t"];
    fn cells(&self, p: u32) -> Vec<String> {
        let m = self.m.map(|m| m.to_string()).unwrap_or_else(|| "inf".to_string());
        vec![m, num(self.t, p)]
    }
}

pub fn threshold_table(precision: u32) -> Result<Vec<ThresholdRow>> {
    check_precision(precision)?;
    let th = AsymptoticThresholds::table()?;
    let mut rows: Vec<ThresholdRow> =
        th.t.iter().map(|(&m, &t)| ThresholdRow { m: Some(m), t: round_f64(t, precision) }).collect();
    rows.push(ThresholdRow { m: None, t: round_f64(crate::asymptotic::thresholds::inv_e(), precision) });
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub k: u32,
    pub truncation_bound: f64,
    pub lower_bound: f64,
}

impl CsvRow for BoundRow {
    const HEADER: &'static [&'static str] = &["k", "truncation_bound", "lower_bound"];
    fn cells(&self, p: u32) -> Vec<String> {
        vec![self.k.to_string(), format!("{:.*e}", 3, self.truncation_bound), num(self.lower_bound, p)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperReport {
    pub t1: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub t0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub schema_version: u32,
    pub upper: UpperReport,
    pub memory_bounds: Vec<BoundRow>,
    /// `[v^k(0,-1), t0u]` for the largest `k` computed.
    pub interval: [f64; 2],
}

impl AsymptoticReport {
    pub fn new(model: &AsymptoticModel, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let r = |x: f64| round_f64(x, precision);
        let c = &model.upper_constants;
        let memory_bounds: Vec<BoundRow> = model
            .memory_bounds
            .iter()
            .map(|b| BoundRow {
                k: b.k,
                // Relative rounding: these are tiny.
                truncation_bound: format!("{:.*e}", 3, b.truncation_bound).parse().unwrap_or(b.truncation_bound),
                lower_bound: r(b.lower_bound),
            })
            .collect();
        let lower = memory_bounds.last().map(|b| b.lower_bound).unwrap_or(0.0);
        Ok(AsymptoticReport {
            schema_version: SCHEMA_VERSION,
            upper: UpperReport { t1: r(model.t1), c1: r(c.c1), c2: r(c.c2), c3: r(c.c3), t0: r(model.upper_bound) },
            memory_bounds,
            interval: [lower, r(model.upper_bound)],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub n: u32,
    pub strategy: String,
    pub trials: u64,
    pub seed: u64,
    pub rng_scheme: &'static str,
    pub p1_estimate: f64,
    pub p1_std_error: f64,
    pub p2_estimate: f64,
    pub p2_std_error: f64,
    pub p1_successes: u64,
    pub p2_successes: u64,
}

impl SimulationReport {
    pub fn new(n: u32, strategy: &str, out: &SimOutcome, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        let r = |x: f64| round_f64(x, precision);
        Ok(SimulationReport {
            schema_version: SCHEMA_VERSION,
            n,
            strategy: strategy.to_string(),
            trials: out.player1.trials,
            seed: out.player1.seed,
            rng_scheme: crate::rng::RNG_SCHEME,
            p1_estimate: r(out.player1.estimate),
            p1_std_error: r(out.player1.std_error),
            p2_estimate: r(out.player2.estimate),
            p2_std_error: r(out.player2.std_error),
            p1_successes: out.player1.successes,
            p2_successes: out.player2.successes,
        })
    }
}

impl CsvRow for SimulationReport {
    const HEADER: &'static [&'static str] =
        &["n", "strategy", "trials", "seed", "p1_estimate", "p1_std_error", "p2_estimate", "p2_std_error"];
    fn cells(&self, p: u32) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.strategy.clone(),
            self.trials.to_string(),
            self.seed.to_string(),
            num(self.p1_estimate, p),
            num(self.p1_std_error, p),
            num(self.p2_estimate, p),
            num(self.p2_std_error, p),
        ]
    }
}

/// A titled list of rows, the JSON form of every `tables` target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table<R> {
    pub schema_version: u32,
    pub table: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub rows: Vec<R>,
}

impl<R> Table<R> {
    pub fn new(table: &'static str, n: Option<u32>, rows: Vec<R>) -> Self {
        Table { schema_version: SCHEMA_VERSION, table, n, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_even() {
        assert_eq!(format_fixed(0.125, 2), "0.12");
        assert_eq!(format_fixed(0.375, 2), "0.38");
        assert_eq!(format_fixed(-0.125, 2), "-0.12");
        assert_eq!(format_fixed(-0.0001, 2), "0.00");
        assert_eq!(format_fixed(2.5, 0), "2");
        assert_eq!(format_fixed(1.0 / 3.0, 6), "0.333333");
        assert_eq!(round_exact(&Exact::new(BigInt::from(4), BigInt::from(15)), 4), "0.2667");
    }

    #[test]
    fn posterior_rows() {
        let rows = posterior_table(50, 4, 4).unwrap();
        assert_eq!(rows.len(), 10);
        let find = |a, b| rows.iter().find(|r| r.mu1 == a && r.mu2 == b).unwrap().p;
        assert_eq!(find(20, 24), 0.6833);
        assert_eq!(find(21, 22), 0.6667);
    }

    #[test]
    fn csv_shape() {
        let rows = vec![QRow { n: 20, q: 0.8993 }];
        assert_eq!(render_csv(&rows, 4), "n,q\n20,0.8993\n");
    }
}
