//! Game definition: player count, strategies, profiles and the adjudication rule.
//!
//! Picks are the integers `1..=n` themselves. Players are indexed from 0.

use serde::{Deserialize, Serialize};

use crate::error::{LupiError, Result};

/// Strategies whose probabilities sum to within this distance of 1 are
/// accepted and renormalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A LUPI game with `n` players, each choosing an integer in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GameSpec {
    n: usize,
}

impl GameSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(LupiError::TooFewPlayers(n));
        }
        Ok(Self { n })
    }

    /// Number of players, which is also the largest admissible pick.
    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    /// Number of opponents facing any single player.
    #[inline]
    pub fn opponents(self) -> usize {
        self.n - 1
    }

    pub(crate) fn check_strategy(self, s: &MixedStrategy) -> Result<()> {
        if s.len() != self.n {
            return Err(LupiError::LengthMismatch { expected: self.n, got: s.len() });
        }
        Ok(())
    }

    pub(crate) fn check_opponents(self, others: &[MixedStrategy]) -> Result<()> {
        if others.len() != self.opponents() {
            return Err(LupiError::OpponentCount { expected: self.opponents(), got: others.len() });
        }
        others.iter().try_for_each(|s| self.check_strategy(s))
    }

    pub(crate) fn check_pick(self, pick: usize) -> Result<()> {
        if pick == 0 || pick > self.n {
            return Err(LupiError::PickOutOfRange { pick, n: self.n });
        }
        Ok(())
    }
}

impl TryFrom<usize> for GameSpec {
    type Error = LupiError;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<GameSpec> for usize {
    fn from(spec: GameSpec) -> usize {
        spec.n
    }
}

/// Probability distribution over the picks `1..=len`.
///
/// Entry `i` is the probability of choosing `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    /// Validates and renormalizes a probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(LupiError::EmptyStrategy);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(LupiError::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(LupiError::NotNormalized { sum });
        }
        let probs = if sum == 1.0 { probs } else { probs.into_iter().map(|p| p / sum).collect() };
        Ok(Self { probs })
    }

    /// The pure strategy that always picks `pick`.
    pub fn pure(n: usize, pick: usize) -> Result<Self> {
        GameSpec::new(n)?.check_pick(pick)?;
        let mut probs = vec![0.0; n];
        probs[pick - 1] = 1.0;
        Ok(Self { probs })
    }

    /// Uniform play over `1..=n`.
    pub fn uniform(n: usize) -> Result<Self> {
        GameSpec::new(n)?;
        Ok(Self { probs: vec![1.0 / n as f64; n] })
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of choosing `pick` (1-based).
    #[inline]
    pub fn prob(&self, pick: usize) -> f64 {
        self.probs[pick - 1]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Picks played with positive probability.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&k| self.prob(k) > 0.0).collect()
    }

    /// Expected value of per-pick payoffs under this strategy.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = LupiError;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Vec<f64> {
        s.probs
    }
}

/// One mixed strategy per player.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    spec: GameSpec,
    strategies: Vec<MixedStrategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Result<Self> {
        let spec = GameSpec::new(strategies.len())?;
        for s in &strategies {
            spec.check_strategy(s)?;
        }
        Ok(Self { spec, strategies })
    }

    /// Every player uses `strategy`.
    pub fn symmetric(strategy: MixedStrategy) -> Result<Self> {
        let n = strategy.len();
        Self::new(vec![strategy; n])
    }

    #[inline]
    pub fn spec(&self) -> GameSpec {
        self.spec
    }

    #[inline]
    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.strategies
    }

    #[inline]
    pub fn strategy(&self, player: usize) -> &MixedStrategy {
        &self.strategies[player]
    }

    /// Strategies of everyone except `player`, in player order.
    pub fn others(&self, player: usize) -> Vec<MixedStrategy> {
        self.strategies.iter().enumerate().filter(|&(i, _)| i != player).map(|(_, s)| s.clone()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.strategies.windows(2).all(|w| w[0] == w[1])
    }
}

/// A single realized round: one pick per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureOutcome {
    picks: Vec<usize>,
}

impl PureOutcome {
    pub fn new(picks: Vec<usize>) -> Result<Self> {
        let spec = GameSpec::new(picks.len())?;
        for &pick in &picks {
            spec.check_pick(pick)?;
        }
        Ok(Self { picks })
    }

    #[inline]
    pub fn picks(&self) -> &[usize] {
        &self.picks
    }
}

/// Expected payoff of each player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PayoffVector {
    values: Vec<f64>,
}

impl PayoffVector {
    pub(crate) fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Probability that the round produces a winner.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Index of the player holding the lowest pick chosen by exactly one player,
/// or `None` when every chosen integer is shared.
pub fn adjudicate(outcome: &PureOutcome) -> Option<usize> {
    winner_of(outcome.picks(), &mut vec![0u32; outcome.picks().len()])
}

/// Adjudication over raw picks. `counts` must have length `n` and is
/// overwritten.
pub(crate) fn winner_of(picks: &[usize], counts: &mut [u32]) -> Option<usize> {
    counts.fill(0);
    for &p in picks {
        counts[p - 1] += 1;
    }
    let lowest = counts.iter().position(|&c| c == 1)? + 1;
    picks.iter().position(|&p| p == lowest)
}
