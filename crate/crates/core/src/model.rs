//! Closed-form payoff model for a deviator facing opponents who share one
//! strategy, the geometric approximate strategy, and the rational-player
//! baseline.
//!
//! The deviator's win probability for pick `i` is taken as
//!
//! ```text
//! v_1 = (1 - p_1)^(n-1)
//! v_i = (1 - p_1 - ... - p_i)^(n-1) + p_1^(n-1) + ... + p_(i-1)^(n-1)    1 < i < n
//! v_n = p_1^(n-1) + ... + p_(n-1)^(n-1)
//! ```
//!
//! with `p_n` and the deviator's last entry eliminated through normalization.
//! For `n = 3` these are exact. From `n = 4` on they omit winning opponent
//! configurations (for example opponents on `{1, 1, 3}` against a deviator on
//! `2`); [`crate::oracle`] gives the exact values.

use serde::{Deserialize, Serialize};

use crate::error::{LupiError, Result};
use crate::game::{GameSpec, MixedStrategy};

/// Derivatives of the deviator's payoff with respect to their first `n - 1`
/// probabilities. They depend only on the opponents' strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResidualVector {
    values: Vec<f64>,
}

impl ResidualVector {
    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_norm(&self) -> f64 {
        max_norm(&self.values)
    }
}

pub(crate) fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Closed-form win probability of each pure choice. Reads only `p[..n-1]`.
pub(crate) fn closed_form_values(n: usize, p: &[f64]) -> Vec<f64> {
    let m = (n - 1) as i32;
    let mut values = Vec::with_capacity(n);
    let mut cumulative = p[0];
    let mut lower_powers = 0.0;
    values.push((1.0 - p[0]).powi(m));
    for i in 1..n - 1 {
        cumulative += p[i];
        lower_powers += p[i - 1].powi(m);
        values.push((1.0 - cumulative).powi(m) + lower_powers);
    }
    let all_powers: f64 = p[..n - 1].iter().map(|x| x.powi(m)).sum();
    values.push(all_powers);
    values
}

pub(crate) fn closed_form_gradient(n: usize, p: &[f64]) -> Vec<f64> {
    let v = closed_form_values(n, p);
    let last = v[n - 1];
    v[..n - 1].iter().map(|x| x - last).collect()
}

/// Closed-form win probability of each pure choice `1..=n`.
pub fn paper_pure_values(spec: GameSpec, opponents_common: &MixedStrategy) -> Result<Vec<f64>> {
    spec.check_strategy(opponents_common)?;
    Ok(closed_form_values(spec.n(), opponents_common.probs()))
}

/// Deviator's expected winnings under the closed-form model.
pub fn paper_payoff(spec: GameSpec, mine: &MixedStrategy, opponents_common: &MixedStrategy) -> Result<f64> {
    spec.check_strategy(mine)?;
    let v = paper_pure_values(spec, opponents_common)?;
    let n = spec.n();
    let head = &mine.probs()[..n - 1];
    let last_weight = 1.0 - head.iter().sum::<f64>();
    Ok(head.iter().zip(&v).map(|(w, x)| w * x).sum::<f64>() + last_weight * v[n - 1])
}

/// `d payoff / d pi_i` for `i = 1..n-1`, with `pi_n = 1 - sum` substituted.
pub fn paper_gradient(spec: GameSpec, opponents_common: &MixedStrategy) -> Result<ResidualVector> {
    spec.check_strategy(opponents_common)?;
    Ok(ResidualVector { values: closed_form_gradient(spec.n(), opponents_common.probs()) })
}

/// `1/2, 1/4, ..., 1/2^(n-1), 1/2^(n-1)`.
pub fn geometric_strategy(spec: GameSpec) -> MixedStrategy {
    let n = spec.n();
    let mut probs: Vec<f64> = (1..n).map(|i| 0.5f64.powi(i as i32)).collect();
    probs.push(probs[n - 2]);
    MixedStrategy::new(probs).expect("geometric weights sum to one")
}

/// Per-player payoff when everyone plays [`geometric_strategy`], from the
/// closed-form double sum.
pub fn approx_payoff(spec: GameSpec) -> Result<f64> {
    let n = spec.n();
    if n < 3 {
        return Err(LupiError::ApproxPayoffDomain(n));
    }
    let m = (n - 1) as i32;
    let inner = |k: usize| -> f64 { (1..=k).map(|j| 0.5f64.powi(j as i32).powi(m)).sum() };
    let outer: f64 = (1..n).map(|k| 0.5f64.powi(k as i32) * inner(k)).sum();
    Ok(outer + 0.5f64.powi(m) * inner(n - 1))
}

/// Rational-player payoff `1/2^(n-1)` of the prior simplified analysis.
pub fn zeng_baseline(spec: GameSpec) -> f64 {
    0.5f64.powi(spec.n() as i32 - 1)
}
