//! Stopping rules seen from one player's own observations.

use crate::exact::GameSolution;
use crate::near_optimal::NearOptimalSolution;
use crate::posterior::posterior_step;
use crate::scalar::Scalar;

/// What a player learns at each step of its own stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    /// 1-based position in the player's stream.
    pub index: u32,
    /// Rank among the objects the player has seen so far.
    pub relative_rank: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl From<bool> for Decision {
    fn from(accept: bool) -> Self {
        if accept {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }
}

/// Player 2's reading of a candidate at stream index `index` when Player 1 uses
/// threshold `n_star`: the original moment and whether Player 1 has accepted.
pub fn infer_moment(n_star: u32, index: u32) -> (u32, bool) {
    if index < n_star {
        (index, false)
    } else {
        (index + 1, true)
    }
}

#[derive(Debug, Clone)]
pub struct OptimalResponse<T: Scalar> {
    pub n_star: u32,
    pub n0: u32,
    /// `q[n]` for `n* < n <= N`; other entries unused.
    q: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct CountResponse {
    pub n_star: u32,
    pub n0: u32,
    pub m0: u32,
    pub n_m: Vec<u32>,
}

#[derive(Debug, Clone)]
pub enum DecisionRule<T: Scalar = f64> {
    /// Accept the first relative-rank-1 object at or after moment `n_star`.
    P1Threshold {
        n_star: u32,
    },
    /// Player 2: accept the first candidate whose inferred original moment is at least `from`.
    P2FromMoment {
        n_star: u32,
        from: u32,
    },
    P2Optimal(OptimalResponse<T>),
    P2NearOptimal(CountResponse),
    /// Never accept; used to observe every decision point.
    Never,
}

/// Per-run memory of a rule.
#[derive(Debug, Clone, Default)]
pub struct RuleState<T> {
    pub count: u32,
    pub last_moment: u32,
    pub posterior: Option<T>,
}

impl<T: Scalar> DecisionRule<T> {
    pub fn p1_threshold(n_star: u32) -> Self {
        DecisionRule::P1Threshold { n_star }
    }

    /// The fixed Player-2 strategies of the four-object example: accept the first
    /// object, the first candidate after `n*`, or only at the last moment.
    pub fn p2_from_moment(n_star: u32, from: u32) -> Self {
        DecisionRule::P2FromMoment { n_star, from }
    }

    pub fn p2_optimal(game: &GameSolution<T>) -> Self {
        let mut q = vec![T::one(); game.n_objects as usize + 1];
        for (n, v) in game.q_table.entries() {
            q[n as usize] = v.clone();
        }
        DecisionRule::P2Optimal(OptimalResponse { n_star: game.n_star, n0: game.n0, q })
    }

    pub fn p2_near_optimal(near: &NearOptimalSolution<T>) -> Self {
        DecisionRule::P2NearOptimal(CountResponse {
            n_star: near.n_star,
            n0: near.n0_a,
            m0: near.m0,
            n_m: near.n_m.clone(),
        })
    }

    pub fn start(&self) -> RuleState<T> {
        RuleState { count: 0, last_moment: 0, posterior: None }
    }

    pub fn decide(&self, state: &mut RuleState<T>, obs: Observation) -> Decision {
        if obs.relative_rank != 1 {
            return Decision::Reject;
        }
        match self {
            DecisionRule::P1Threshold { n_star } => (obs.index >= *n_star).into(),
            DecisionRule::P2FromMoment { n_star, from } => {
                let (moment, _) = infer_moment(*n_star, obs.index);
                (moment >= *from).into()
            }
            DecisionRule::P2Optimal(r) => {
                let (moment, p1_done) = infer_moment(r.n_star, obs.index);
                if !p1_done {
                    return (moment >= r.n0).into();
                }
                let p = match state.posterior.take() {
                    None => T::ratio(1, 2),
                    Some(prev) => posterior_step(state.last_moment, moment, &prev),
                };
                let accept = p >= r.q[moment as usize];
                state.count += 1;
                state.last_moment = moment;
                state.posterior = Some(p);
                accept.into()
            }
            DecisionRule::P2NearOptimal(r) => {
                let (moment, p1_done) = infer_moment(r.n_star, obs.index);
                if !p1_done {
                    return (moment >= r.n0).into();
                }
                state.count += 1;
                state.last_moment = moment;
                let m = state.count;
                (m >= r.m0 || moment >= r.n_m[m as usize]).into()
            }
            DecisionRule::Never => Decision::Reject,
        }
    }
}
