//! Analysis of the lowest unique positive integer (LUPI) game.
//!
//! `n` players each pick an integer in `1..=n`; whoever holds the smallest
//! integer picked by exactly one player wins one unit, otherwise nobody wins.
//!
//! * [`oracle`]: exact expected payoffs by enumeration;
//! * [`model`]: the closed-form deviator payoff, its gradient and the
//!   geometric approximate strategy;
//! * [`solver`]: symmetric equilibria by damped Newton iteration;
//! * [`analysis`]: best responses and equilibrium verification;
//! * [`montecarlo`]: seeded simulation.
//!
//! The enumeration and simulation kernels run on rayon when the `parallel`
//! feature is enabled (the default); see [`Execution`].

pub mod analysis;
pub mod error;
mod exec;
pub mod game;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod solver;

pub use analysis::{
    best_response, best_response_under, indifference_spread, verify_profile, verify_profile_under,
    BestResponse, PlayerCheck, VerificationReport, DEFAULT_EPSILON,
};
pub use error::{LupiError, Result};
pub use exec::Execution;
pub use game::{adjudicate, GameSpec, MixedStrategy, PayoffVector, PureOutcome, StrategyProfile};
pub use model::{
    approx_payoff, geometric_strategy, paper_gradient, paper_payoff, paper_pure_values, zeng_baseline,
    ResidualVector,
};
pub use montecarlo::{simulate, simulate_with, SimulationStats};
pub use oracle::{
    brute_force_profile_payoffs, brute_force_pure_values, exact_profile_payoffs, exact_profile_payoffs_with,
    exact_pure_vs_mixed, pure_choice_values,
};
pub use solver::{
    solve_exact_symmetric, solve_paper_symmetric, solve_symmetric, Model, SolveResult, SolverOptions,
};
