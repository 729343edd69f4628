//! A-priori description of Player 2's optimal response.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::QTable;
use crate::posterior::posterior_step;
use crate::scalar::Scalar;

/// Largest number of reachable histories expanded per candidate index.
pub const MAX_EXPANDED_HISTORIES: usize = 20_000;
/// Largest number of accepting histories listed verbatim in a clause.
const MAX_LISTED_HISTORIES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyClause {
    /// Take the very first object.
    AcceptFirstObject,
    /// Accept a candidate at moments `from..=to`, all before `n*`.
    Early { from: u32, to: u32 },
    /// Reject everything before `n*`.
    NoneEarly { n_star: u32 },
    /// The `index`-th candidate after `n*` is accepted at moments `>= from`, and at
    /// the listed earlier moments for the listed earlier-candidate histories.
    Index { index: u32, from: u32, always: bool, conditional: Vec<ConditionalAcceptance> },
    /// Fall back to comparing the posterior with `q_n`.
    Online { index: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalAcceptance {
    pub moment: u32,
    /// Moments of the earlier candidates after `n*` for which the candidate is accepted.
    pub accepting_prefixes: Vec<Vec<u32>>,
    /// When the accepting prefixes are exactly the reachable ones with first moment below this bound.
    pub first_before: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub n_star: u32,
    pub clauses: Vec<StrategyClause>,
}

fn ordinal(m: u32) -> String {
    const WORDS: [&str; 10] =
        ["first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth"];
    match WORDS.get(m as usize - 1) {
        Some(w) => w.to_string(),
        None => {
            let suffix = match (m % 10, m % 100) {
                (1, r) if r != 11 => "st",
                (2, r) if r != 12 => "nd",
                (3, r) if r != 13 => "rd",
                _ => "th",
            };
            format!("{m}{suffix}")
        }
    }
}

impl StrategyClause {
    pub fn render(&self, n_star: u32) -> String {
        match self {
            StrategyClause::AcceptFirstObject => "always accept the first object".to_string(),
            StrategyClause::Early { from, to } if from == to => {
                format!("accept a candidate if n = {from}")
            }
            StrategyClause::Early { from, to } => format!("accept a candidate if {from} <= n <= {to}"),
            StrategyClause::NoneEarly { n_star } => {
                format!("reject every object before moment {n_star}")
            }
            StrategyClause::Index { index, from, always, conditional } => {
                let who = format!("the {} candidate seen after moment {n_star}", ordinal(*index));
                if *always {
                    return format!("always accept {who}");
                }
                if conditional.is_empty() {
                    return format!("accept {who} if and only if n >= {from}");
                }
                let mut text = format!("accept {who} if n >= {from}");
                for c in conditional {
                    text.push_str(&format!(" or n = {} and {}", c.moment, c.describe(n_star)));
                }
                text
            }
            StrategyClause::Online { index } => format!(
                "accept the {} or any later candidate seen after moment {n_star} if and only if its posterior is at least q_n",
                ordinal(*index)
            ),
        }
    }
}

impl ConditionalAcceptance {
    fn describe(&self, n_star: u32) -> String {
        if let Some(bound) = self.first_before {
            return format!("the first candidate seen after moment {n_star} was seen before moment {bound}");
        }
        if self.accepting_prefixes.len() > MAX_LISTED_HISTORIES {
            return format!("the posterior is at least q_{}", self.moment);
        }
        let listed: Vec<String> = self
            .accepting_prefixes
            .iter()
            .map(|h| {
                let parts: Vec<String> = h.iter().map(|m| m.to_string()).collect();
                format!("({})", parts.join(", "))
            })
            .collect();
        format!("the earlier candidates appeared at moments {}", listed.join(" or "))
    }
}

impl StrategySummary {
    pub fn render(&self) -> Vec<String> {
        self.clauses.iter().map(|c| c.render(self.n_star)).collect()
    }
}

/// Candidate moments paired with Player 2's decision, grouped by the current moment.
type ByMoment = BTreeMap<u32, Vec<(Vec<u32>, bool)>>;

/// Histories of `index - 1` rejected candidates followed by a candidate at each moment.
/// Returns `None` when there are too many to expand.
fn histories_by_moment<T: Scalar>(q: &QTable<T>, index: u32) -> Option<ByMoment> {
    let mut out = ByMoment::new();
    let mut count = 0usize;
    let mut stack: Vec<(Vec<u32>, T)> = (q.n_star + 1..=q.n_objects).map(|k| (vec![k], T::ratio(1, 2))).collect();
    while let Some((h, p)) = stack.pop() {
        let n = *h.last().unwrap();
        let accepted = q.accepts(n, &p);
        if h.len() as u32 == index {
            count += 1;
            if count > MAX_EXPANDED_HISTORIES {
                return None;
            }
            let prefix = h[..h.len() - 1].to_vec();
            out.entry(n).or_default().push((prefix, accepted));
        } else if !accepted {
            for k in n + 1..=q.n_objects {
                let mut next = h.clone();
                next.push(k);
                stack.push((next, posterior_step(n, k, &p)));
            }
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    Some(out)
}

fn index_clause<T: Scalar>(q: &QTable<T>, index: u32) -> Option<StrategyClause> {
    let by_moment = histories_by_moment(q, index)?;
    let n_star = q.n_star;
    let mut from = q.n_objects + 1;
    for (&n, hs) in by_moment.iter().rev() {
        if hs.iter().all(|(_, a)| *a) {
            from = n;
        } else {
            break;
        }
    }
    let mut conditional = Vec::new();
    for (&n, hs) in by_moment.range(..from) {
        let accepting: Vec<Vec<u32>> = hs.iter().filter(|(_, a)| *a).map(|(h, _)| h.clone()).collect();
        if accepting.is_empty() {
            continue;
        }
        let first_before = if index == 2 {
            let bound = accepting.iter().map(|h| h[0]).max().unwrap() + 1;
            let exact = hs.iter().all(|(h, a)| *a == (h[0] < bound));
            exact.then_some(bound)
        } else {
            None
        };
        conditional.push(ConditionalAcceptance { moment: n, accepting_prefixes: accepting, first_before });
    }
    let always = from <= n_star + index && conditional.is_empty();
    Some(StrategyClause::Index { index, from, always, conditional })
}

pub(crate) fn summarize<T: Scalar>(n_objects: u32, n_star: u32, n0: u32, m0: u32, q: &QTable<T>) -> StrategySummary {
    let mut clauses = Vec::new();
    if n0 <= 1 {
        clauses.push(StrategyClause::AcceptFirstObject);
        return StrategySummary { n_star, clauses };
    }
    if n0 < n_star {
        clauses.push(StrategyClause::Early { from: n0, to: n_star - 1 });
    } else {
        clauses.push(StrategyClause::NoneEarly { n_star });
    }
    for index in 1..=m0.min(n_objects - n_star) {
        match index_clause(q, index) {
            Some(c) => {
                let done = matches!(c, StrategyClause::Index { always: true, .. });
                clauses.push(c);
                if done {
                    break;
                }
            }
            None => {
                clauses.push(StrategyClause::Online { index });
                break;
            }
        }
    }
    StrategySummary { n_star, clauses }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordinals() {
        assert_eq!(ordinal(1), "first");
        assert_eq!(ordinal(10), "tenth");
        assert_eq!(ordinal(11), "11th");
        assert_eq!(ordinal(22), "22nd");
        assert_eq!(ordinal(103), "103rd");
    }

    #[test]
    fn fifty_object_summary() {
        let g = crate::exact::solve_game::<f64>(50).unwrap();
        let text = g.strategy_summary.render();
        assert_eq!(
            text,
            vec![
                "accept a candidate if 11 <= n <= 18",
                "accept the first candidate seen after moment 19 if and only if n >= 29",
                "accept the second candidate seen after moment 19 if n >= 25 or n = 24 and the first candidate seen after moment 19 was seen before moment 22",
                "accept the third candidate seen after moment 19 if and only if n >= 23",
                "always accept the fourth candidate seen after moment 19",
            ]
        );
    }
}
