//! Best responses and equilibrium verification.
//!
//! Expected payoff is linear in a player's own mixed strategy, so the best
//! response value is always attained at a pure choice and verification never
//! needs to search the simplex.

use serde::{Deserialize, Serialize};

use crate::error::{LupiError, Result};
use crate::game::{GameSpec, MixedStrategy, PayoffVector, StrategyProfile};
use crate::model::closed_form_values;
use crate::oracle::pure_choice_values;
use crate::solver::Model;

pub const DEFAULT_EPSILON: f64 = 1e-9;
/// Pure choices within this distance of the maximum are all best responses.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    /// Win probability of each pure choice `1..=n`.
    pub values: Vec<f64>,
    /// Every maximizing pick, ascending.
    pub argmax: Vec<usize>,
    pub value: f64,
}

impl BestResponse {
    fn from_values(values: Vec<f64>) -> Self {
        let value = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let argmax = (1..=values.len()).filter(|&k| values[k - 1] >= value - TIE_TOLERANCE).collect();
        Self { values, argmax, value }
    }
}

/// Exact best response against `others`.
pub fn best_response(spec: GameSpec, others: &[MixedStrategy]) -> Result<BestResponse> {
    best_response_under(spec, others, Model::Exact)
}

/// Best response under either payoff model. The closed-form model needs all
/// opponents on one strategy.
pub fn best_response_under(spec: GameSpec, others: &[MixedStrategy], model: Model) -> Result<BestResponse> {
    Ok(BestResponse::from_values(deviator_values(spec, others, model, 0)?))
}

fn deviator_values(
    spec: GameSpec,
    others: &[MixedStrategy],
    model: Model,
    player: usize,
) -> Result<Vec<f64>> {
    match model {
        Model::Exact => pure_choice_values(spec, others),
        Model::Paper => {
            spec.check_opponents(others)?;
            if others.windows(2).any(|w| w[0] != w[1]) {
                return Err(LupiError::HeterogeneousOpponents { player });
            }
            Ok(closed_form_values(spec.n(), others[0].probs()))
        }
    }
}

/// Max minus min of a deviator's pure-choice payoffs when all `n - 1`
/// opponents play `common`.
pub fn indifference_spread(spec: GameSpec, common: &MixedStrategy, model: Model) -> Result<f64> {
    spec.check_strategy(common)?;
    let others = vec![common.clone(); spec.opponents()];
    let v = deviator_values(spec, &others, model, 0)?;
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(max - min)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerCheck {
    pub player: usize,
    pub payoff: f64,
    pub best_response_value: f64,
    /// `best_response_value - payoff`.
    pub gain: f64,
    pub best_responses: Vec<usize>,
    /// Picks outside the player's support that match the current payoff
    /// within epsilon.
    pub indifferent_deviations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: Model,
    pub profile: Vec<MixedStrategy>,
    pub payoffs: PayoffVector,
    pub players: Vec<PlayerCheck>,
    pub max_gain: f64,
    pub is_nash: bool,
    /// Some player has a zero-gain deviation outside their support.
    pub weak: bool,
    pub payoff_sum: f64,
    /// Payoff sum equals one within epsilon, so nobody can gain without
    /// someone else losing.
    pub is_payoff_sum_maximal: bool,
    pub epsilon: f64,
}

/// Checks `profile` against every unilateral pure deviation using exact
/// payoffs.
pub fn verify_profile(profile: &StrategyProfile, epsilon: f64) -> Result<VerificationReport> {
    verify_profile_under(profile, epsilon, Model::Exact)
}

pub fn verify_profile_under(
    profile: &StrategyProfile,
    epsilon: f64,
    model: Model,
) -> Result<VerificationReport> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(LupiError::InvalidEpsilon(epsilon));
    }
    let spec = profile.spec();
    let mut players = Vec::with_capacity(spec.n());
    for player in 0..spec.n() {
        let own = profile.strategy(player);
        let values = deviator_values(spec, &profile.others(player), model, player)?;
        let payoff = own.expectation(&values);
        let br = BestResponse::from_values(values);
        let indifferent_deviations = (1..=spec.n())
            .filter(|&k| own.prob(k) == 0.0 && (br.values[k - 1] - payoff).abs() <= epsilon)
            .collect();
        players.push(PlayerCheck {
            player,
            payoff,
            best_response_value: br.value,
            gain: br.value - payoff,
            best_responses: br.argmax,
            indifferent_deviations,
        });
    }
    let payoffs = PayoffVector::from_values(players.iter().map(|p| p.payoff).collect());
    let payoff_sum = payoffs.sum();
    let max_gain = players.iter().map(|p| p.gain).fold(f64::NEG_INFINITY, f64::max);
    let is_nash = max_gain <= epsilon;
    Ok(VerificationReport {
        model,
        profile: profile.strategies().to_vec(),
        payoffs,
        weak: is_nash && players.iter().any(|p| !p.indifferent_deviations.is_empty()),
        players,
        max_gain,
        is_nash,
        payoff_sum,
        is_payoff_sum_maximal: (payoff_sum - 1.0).abs() <= epsilon,
        epsilon,
    })
}
