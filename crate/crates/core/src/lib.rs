//! Solvers for a two-player secretary game with priority.
//!
//! Player 1 observes a random permutation of `N` ranked objects and plays the
//! classical secretary rule. Player 2 observes the same sequence with Player 1's
//! choice removed, so after Player 1 accepts Player 2 can no longer tell whether a
//! new best-so-far object beats the one taken. This crate computes:
//!
//! * Player 1's rule and value ([`classical`]);
//! * Player 2's posterior that a candidate is the best so far ([`posterior`]);
//! * Player 2's optimal response and value ([`exact`]) and a count-based
//!   approximation ([`near_optimal`]);
//! * large-`N` thresholds and bounds on Player 2's value ([`asymptotic`]);
//! * exhaustive and Monte Carlo evaluation of any pair of rules ([`oracle`]).
//!
//! Finite-`N` routines are generic over [`Scalar`], implemented for `f64` and
//! exact rationals ([`Exact`]).

pub mod asymptotic;
pub mod classical;
mod dp;
pub mod error;
pub mod exact;
pub mod near_optimal;
pub mod oracle;
pub mod parallel;
pub mod posterior;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod sequence;
pub mod strategy;

pub use error::{Result, StackError};
pub use exact::{solve_game, GameSolution, QTable};
pub use near_optimal::{solve_near_optimal, NearOptimalSolution};
pub use oracle::rules::DecisionRule;
pub use parallel::Execution;
pub use scalar::{Exact, Scalar};
