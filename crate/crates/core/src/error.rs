use thiserror::Error;

/// Errors raised while building or evaluating games, strategies and profiles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LupiError {
    #[error("player count must be at least 2, got {0}")]
    TooFewPlayers(usize),

    #[error("strategy is empty")]
    EmptyStrategy,

    #[error("probability at index {index} is {value}, expected a finite value in [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, which is not within 1e-9 of 1")]
    NotNormalized { sum: f64 },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("pick {pick} is outside the range [1, {n}]")]
    PickOutOfRange { pick: usize, n: usize },

    #[error("expected {expected} opponent strategies, got {got}")]
    OpponentCount { expected: usize, got: usize },

    #[error("player count {n} is outside the supported range [{min}, {max}]")]
    UnsupportedPlayerCount { n: usize, min: usize, max: usize },

    #[error("the closed-form model needs every opponent of player {player} to share one strategy")]
    HeterogeneousOpponents { player: usize },

    #[error("the geometric-strategy payoff formula holds for n >= 3, got {0}")]
    ApproxPayoffDomain(usize),

    #[error("simulation needs at least one round")]
    ZeroRounds,

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
}

pub type Result<T, E = LupiError> = std::result::Result<T, E>;
