//! Seeded simulation of independent rounds.
//!
//! Rounds are split into chunks of [`CHUNK_ROUNDS`]. Each player in each chunk
//! draws from its own ChaCha8 stream: the key comes from the master seed
//! (`ChaCha8Rng::seed_from_u64(seed)`) and the stream id is
//! `chunk * n + player`. Results therefore depend only on
//! `(profile, rounds, seed)`, not on thread count or execution mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LupiError, Result};
use crate::exec::Execution;
use crate::game::{winner_of, MixedStrategy, StrategyProfile};

pub const CHUNK_ROUNDS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationStats {
    pub rounds: u64,
    pub seed: u64,
    pub wins: Vec<u64>,
    pub payoffs: Vec<f64>,
    /// `sqrt(f (1 - f) / rounds)` per player.
    pub std_errors: Vec<f64>,
    pub no_winner_rounds: u64,
}

/// Inverse-CDF sampler over a strategy's cumulative probabilities.
///
/// Pick `k` owns the half-open interval `[F(k-1), F(k))`, so a draw landing
/// exactly on a boundary goes to the higher pick.
#[derive(Debug, Clone)]
pub struct PickSampler {
    cumulative: Vec<f64>,
    fallback: usize,
}

impl PickSampler {
    pub fn new(strategy: &MixedStrategy) -> Self {
        let cumulative = strategy
            .probs()
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let fallback = *strategy.support().last().expect("a strategy has positive mass somewhere");
        Self { cumulative, fallback }
    }

    /// Pick for a uniform draw `u` in `[0, 1)`.
    #[inline]
    pub fn pick(&self, u: f64) -> usize {
        self.cumulative.iter().position(|&c| u < c).map_or(self.fallback, |i| i + 1)
    }
}

pub fn simulate(profile: &StrategyProfile, rounds: u64, seed: u64) -> Result<SimulationStats> {
    simulate_with(profile, rounds, seed, Execution::default())
}

pub fn simulate_with(
    profile: &StrategyProfile,
    rounds: u64,
    seed: u64,
    exec: Execution,
) -> Result<SimulationStats> {
    if rounds == 0 {
        return Err(LupiError::ZeroRounds);
    }
    let n = profile.spec().n();
    let samplers: Vec<PickSampler> = profile.strategies().iter().map(PickSampler::new).collect();
    let chunks = rounds.div_ceil(CHUNK_ROUNDS) as usize;

    let parts = exec.map_indexed(chunks, |chunk| {
        let first = chunk as u64 * CHUNK_ROUNDS;
        let len = CHUNK_ROUNDS.min(rounds - first);
        let mut rngs: Vec<ChaCha8Rng> = (0..n)
            .map(|player| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk as u64 * n as u64 + player as u64);
                rng
            })
            .collect();
        let mut wins = vec![0u64; n + 1];
        let mut picks = vec![0usize; n];
        let mut counts = vec![0u32; n];
        for _ in 0..len {
            for ((pick, rng), sampler) in picks.iter_mut().zip(&mut rngs).zip(&samplers) {
                *pick = sampler.pick(rng.random::<f64>());
            }
            // slot n counts rounds without a winner
            wins[winner_of(&picks, &mut counts).unwrap_or(n)] += 1;
        }
        wins
    });

    let mut wins = vec![0u64; n + 1];
    for part in parts {
        wins.iter_mut().zip(part).for_each(|(a, b)| *a += b);
    }
    let no_winner_rounds = wins.pop().expect("n + 1 slots");
    let payoffs: Vec<f64> = wins.iter().map(|&w| w as f64 / rounds as f64).collect();
    let std_errors = payoffs.iter().map(|f| (f * (1.0 - f) / rounds as f64).sqrt()).collect();
    Ok(SimulationStats { rounds, seed, wins, payoffs, std_errors, no_winner_rounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strat(p: &[f64]) -> MixedStrategy {
        MixedStrategy::new(p.to_vec()).unwrap()
    }

    #[test]
    fn boundary_draw_selects_higher_pick() {
        let s = PickSampler::new(&strat(&[0.5, 0.25, 0.25]));
        assert_eq!(s.pick(0.0), 1);
        assert_eq!(s.pick(0.4999), 1);
        assert_eq!(s.pick(0.5), 2);
        assert_eq!(s.pick(0.75), 3);
        assert_eq!(s.pick(0.9999999), 3);
    }

    #[test]
    fn zero_mass_picks_are_never_drawn() {
        let s = PickSampler::new(&strat(&[0.0, 1.0, 0.0]));
        assert_eq!(s.pick(0.0), 2);
        assert_eq!(s.pick(0.999), 2);
        let s = PickSampler::new(&strat(&[0.5, 0.5, 0.0]));
        assert_eq!(s.pick(0.5), 2);
    }

    #[test]
    fn all_on_one_never_produces_a_winner() {
        let p = StrategyProfile::symmetric(MixedStrategy::pure(4, 1).unwrap()).unwrap();
        let st = simulate(&p, 1000, 3).unwrap();
        assert_eq!(st.wins, vec![0; 4]);
        assert_eq!(st.no_winner_rounds, 1000);
    }

    #[test]
    fn zero_rounds_rejected() {
        let p = StrategyProfile::symmetric(MixedStrategy::uniform(3).unwrap()).unwrap();
        assert_eq!(simulate(&p, 0, 0), Err(LupiError::ZeroRounds));
    }

    #[test]
    fn modes_agree_across_chunk_boundaries() {
        let p = StrategyProfile::symmetric(MixedStrategy::uniform(3).unwrap()).unwrap();
        let rounds = 3 * CHUNK_ROUNDS + 17;
        let a = simulate_with(&p, rounds, 11, Execution::Sequential).unwrap();
        let b = simulate_with(&p, rounds, 11, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.wins.iter().sum::<u64>() + a.no_winner_rounds, rounds);
    }
}
