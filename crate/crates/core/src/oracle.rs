//! Exact expected payoffs by enumeration.
//!
//! A player picking `k` wins exactly when no opponent picks `k` and every
//! integer below `k` is picked by a number of opponents other than one. Three
//! routes compute the resulting probabilities:
//!
//! * identical opponents: enumerate count vectors `(c_1..c_n)` of the `n - 1`
//!   opponent picks, weighted by multinomial coefficients;
//! * heterogeneous opponents: a dynamic program over states recording, per
//!   integer, whether it was picked 0, 1 or at least 2 times;
//! * brute force over all `n^n` outcomes through [`adjudicate`](crate::adjudicate),
//!   kept as a slow cross-check for small `n`.

use crate::error::Result;
use crate::exec::{sum_in_order, Execution};
use crate::game::{winner_of, GameSpec, MixedStrategy, PayoffVector, StrategyProfile};

/// Exact probability that a player choosing `my_pick` wins against `others`.
pub fn exact_pure_vs_mixed(spec: GameSpec, my_pick: usize, others: &[MixedStrategy]) -> Result<f64> {
    spec.check_pick(my_pick)?;
    Ok(pure_choice_values(spec, others)?[my_pick - 1])
}

/// Exact win probability of every pure choice `1..=n` against `others`.
pub fn pure_choice_values(spec: GameSpec, others: &[MixedStrategy]) -> Result<Vec<f64>> {
    pure_choice_values_with(spec, others, Execution::default())
}

pub fn pure_choice_values_with(
    spec: GameSpec,
    others: &[MixedStrategy],
    exec: Execution,
) -> Result<Vec<f64>> {
    spec.check_opponents(others)?;
    if others.windows(2).all(|w| w[0] == w[1]) {
        Ok(identical_opponent_values(spec.n(), others[0].probs(), exec))
    } else {
        let rows: Vec<&[f64]> = others.iter().map(MixedStrategy::probs).collect();
        Ok(capped_count_values(spec.n(), &rows, exec))
    }
}

/// Each player's exact expected payoff under the product distribution.
pub fn exact_profile_payoffs(profile: &StrategyProfile) -> PayoffVector {
    exact_profile_payoffs_with(profile, Execution::default())
}

pub fn exact_profile_payoffs_with(profile: &StrategyProfile, exec: Execution) -> PayoffVector {
    let spec = profile.spec();
    let values = exec.map_indexed(spec.n(), |player| {
        let others = profile.others(player);
        let pure =
            pure_choice_values_with(spec, &others, exec).expect("profile rows are validated on construction");
        profile.strategy(player).expectation(&pure)
    });
    PayoffVector::from_values(values)
}

/// Payoffs by summing over all `n^n` pure outcomes. Slow; meant for `n <= 6`.
pub fn brute_force_profile_payoffs(profile: &StrategyProfile) -> PayoffVector {
    brute_force_profile_payoffs_with(profile, Execution::default())
}

pub fn brute_force_profile_payoffs_with(profile: &StrategyProfile, exec: Execution) -> PayoffVector {
    let n = profile.spec().n();
    let rows: Vec<&[f64]> = profile.strategies().iter().map(MixedStrategy::probs).collect();
    // One piece per pick of player 0.
    let parts = exec.map_indexed(n, |first| {
        let mut acc = vec![0.0; n];
        let p0 = rows[0][first];
        if p0 == 0.0 {
            return acc;
        }
        let mut picks = vec![1; n];
        picks[0] = first + 1;
        let mut counts = vec![0u32; n];
        for_each_assignment(&mut picks[1..], n, &mut |tail| {
            let prob = tail.iter().enumerate().fold(p0, |w, (i, &k)| w * rows[i + 1][k - 1]);
            if prob == 0.0 {
                return;
            }
            let mut all = Vec::with_capacity(n);
            all.push(first + 1);
            all.extend_from_slice(tail);
            if let Some(w) = winner_of(&all, &mut counts) {
                acc[w] += prob;
            }
        });
        acc
    });
    PayoffVector::from_values(sum_in_order(parts, n))
}

/// Win probability of each pure choice by enumerating all `n^(n-1)` opponent
/// outcomes through the adjudication rule.
pub fn brute_force_pure_values(spec: GameSpec, others: &[MixedStrategy]) -> Result<Vec<f64>> {
    spec.check_opponents(others)?;
    let n = spec.n();
    let mut values = vec![0.0; n];
    let mut tail = vec![1; n - 1];
    let mut counts = vec![0u32; n];
    for mine in 1..=n {
        let mut total = 0.0;
        for_each_assignment(&mut tail, n, &mut |tail| {
            let prob: f64 = tail.iter().zip(others).map(|(&k, s)| s.prob(k)).product();
            let mut all = vec![mine];
            all.extend_from_slice(tail);
            if winner_of(&all, &mut counts) == Some(0) {
                total += prob;
            }
        });
        values[mine - 1] = total;
    }
    Ok(values)
}

/// Visits every assignment of `1..=n` to `slots` in lexicographic order.
fn for_each_assignment(slots: &mut [usize], n: usize, visit: &mut dyn FnMut(&[usize])) {
    slots.fill(1);
    loop {
        visit(slots);
        let mut i = slots.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if slots[i] < n {
                slots[i] += 1;
                slots[i + 1..].fill(1);
                break;
            }
        }
    }
}

/// Adds `weight` to every pure choice that wins against opponent pick counts
/// `counts`.
#[inline]
fn credit_counts(counts: &[usize], weight: f64, values: &mut [f64]) {
    for (k, &c) in counts.iter().enumerate() {
        match c {
            0 => values[k] += weight,
            1 => break,
            _ => {}
        }
    }
}

/// Pure-choice win probabilities against `n - 1` opponents who all play `p`.
///
/// `p` is any real vector of length `n`; nothing requires it to lie on the
/// simplex, which lets the solver difference across the boundary.
pub(crate) fn identical_opponent_values(n: usize, p: &[f64], exec: Execution) -> Vec<f64> {
    let m = n - 1;
    // scaled[i][c] = p_i^c / c!
    let scaled: Vec<Vec<f64>> = p
        .iter()
        .map(|&pi| {
            let mut row = Vec::with_capacity(m + 1);
            let mut term = 1.0;
            row.push(term);
            for c in 1..=m {
                term *= pi / c as f64;
                row.push(term);
            }
            row
        })
        .collect();
    let m_factorial = (1..=m).fold(1.0, |f, k| f * k as f64);

    let parts = exec.map_indexed(m + 1, |c0| {
        let mut values = vec![0.0; n];
        let mut counts = vec![0usize; n];
        counts[0] = c0;
        let weight = m_factorial * scaled[0][c0];
        if weight != 0.0 {
            descend(1, m - c0, weight, &scaled, &mut counts, &mut values);
        }
        values
    });
    sum_in_order(parts, n)
}

fn descend(
    bin: usize,
    remaining: usize,
    weight: f64,
    scaled: &[Vec<f64>],
    counts: &mut [usize],
    values: &mut [f64],
) {
    let last = counts.len() - 1;
    if bin == last {
        counts[bin] = remaining;
        let w = weight * scaled[bin][remaining];
        if w != 0.0 {
            credit_counts(counts, w, values);
        }
        return;
    }
    for c in 0..=remaining {
        counts[bin] = c;
        let w = weight * scaled[bin][c];
        if w != 0.0 {
            descend(bin + 1, remaining - c, w, scaled, counts, values);
        }
    }
    counts[bin] = 0;
}

const STATE_CHUNK: usize = 4096;

/// Pure-choice win probabilities against opponents with individual strategies.
///
/// State `s` encodes, in base 3, for each integer whether it has been picked
/// 0, 1 or at least 2 times by the opponents processed so far.
pub(crate) fn capped_count_values(n: usize, others: &[&[f64]], exec: Execution) -> Vec<f64> {
    let pow3: Vec<usize> = (0..n)
        .scan(1usize, |acc, _| {
            let v = *acc;
            *acc *= 3;
            Some(v)
        })
        .collect();
    let states = pow3[n - 1] * 3;
    let mut cur = vec![0.0; states];
    let mut next = vec![0.0; states];
    cur[0] = 1.0;

    // Picking k moves the digit for k from 0 to 1 or from 1 to 2, and leaves 2
    // at 2. Along axis k the state array is a run of blocks of three slabs
    // (digit 0, 1, 2), each slab `3^k` long.
    for q in others {
        next.fill(0.0);
        for (k, &qk) in q.iter().enumerate() {
            if qk == 0.0 {
                continue;
            }
            let slab = pow3[k];
            exec.zip_blocks(&mut next, &cur, 3 * slab, |out, src| {
                let (_, out) = out.split_at_mut(slab);
                let (out1, out2) = out.split_at_mut(slab);
                let (src0, src) = src.split_at(slab);
                let (src1, src2) = src.split_at(slab);
                for j in 0..slab {
                    out1[j] += qk * src0[j];
                    out2[j] += qk * (src1[j] + src2[j]);
                }
            });
        }
        std::mem::swap(&mut cur, &mut next);
    }

    let chunks = states.div_ceil(STATE_CHUNK);
    let cur = &cur;
    let parts = exec.map_indexed(chunks, |c| {
        let mut values = vec![0.0; n];
        let start = c * STATE_CHUNK;
        let end = (start + STATE_CHUNK).min(states);
        for (s, &w) in cur[start..end].iter().enumerate().map(|(i, w)| (start + i, w)) {
            if w == 0.0 {
                continue;
            }
            let mut t = s;
            for v in values.iter_mut() {
                match t % 3 {
                    0 => *v += w,
                    1 => break,
                    _ => {}
                }
                t /= 3;
            }
        }
        values
    });
    sum_in_order(parts, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strat(p: &[f64]) -> MixedStrategy {
        MixedStrategy::new(p.to_vec()).unwrap()
    }

    #[test]
    fn lone_three_against_half_half() {
        let spec = GameSpec::new(3).unwrap();
        let others = vec![strat(&[0.5, 0.5, 0.0]); 2];
        assert_eq!(exact_pure_vs_mixed(spec, 3, &others).unwrap(), 0.5);
    }

    #[test]
    fn lone_three_against_three_half_half() {
        let spec = GameSpec::new(4).unwrap();
        let others = vec![strat(&[0.5, 0.5, 0.0, 0.0]); 3];
        assert_eq!(exact_pure_vs_mixed(spec, 3, &others).unwrap(), 0.25);
    }

    #[test]
    fn pick_two_counts_mixed_configurations() {
        // 7/9 from enumerating all 4^3 opponent outcomes by hand-checked rule.
        let spec = GameSpec::new(4).unwrap();
        let others = vec![strat(&[2.0 / 3.0, 0.0, 1.0 / 3.0, 0.0]); 3];
        let v = exact_pure_vs_mixed(spec, 2, &others).unwrap();
        assert!((v - 7.0 / 9.0).abs() < 1e-12, "{v}");
        let brute = brute_force_pure_values(spec, &others).unwrap();
        assert!((brute[1] - 7.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn identical_and_dp_routes_agree() {
        let n = 5;
        let p = [0.3, 0.25, 0.2, 0.15, 0.1];
        let a = identical_opponent_values(n, &p, Execution::Sequential);
        let rows = vec![&p[..]; n - 1];
        let b = capped_count_values(n, &rows, Execution::Sequential);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = GameSpec::new(3).unwrap();
        let others = vec![strat(&[0.5, 0.5, 0.0]); 2];
        assert!(exact_pure_vs_mixed(spec, 0, &others).is_err());
        assert!(exact_pure_vs_mixed(spec, 4, &others).is_err());
        assert!(exact_pure_vs_mixed(spec, 1, &others[..1]).is_err());
        let wrong_len = vec![strat(&[0.5, 0.5]); 2];
        assert!(exact_pure_vs_mixed(spec, 1, &wrong_len).is_err());
    }

    #[test]
    fn asymmetric_profiles_from_the_n3_and_n4_arguments() {
        let p3 = StrategyProfile::new(vec![
            strat(&[0.0, 0.0, 1.0]),
            strat(&[0.5, 0.5, 0.0]),
            strat(&[0.5, 0.5, 0.0]),
        ])
        .unwrap();
        assert_eq!(exact_profile_payoffs(&p3).values(), &[0.5, 0.25, 0.25]);

        let mut rows = vec![strat(&[0.0, 0.0, 1.0, 0.0])];
        rows.extend(vec![strat(&[0.5, 0.5, 0.0, 0.0]); 3]);
        let p4 = StrategyProfile::new(rows).unwrap();
        assert_eq!(exact_profile_payoffs(&p4).values(), &[0.25; 4]);
    }

    #[test]
    fn everyone_on_one_never_wins() {
        for n in 2..=7 {
            let p = StrategyProfile::symmetric(MixedStrategy::pure(n, 1).unwrap()).unwrap();
            assert!(exact_profile_payoffs(&p).values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn two_players_win_only_by_differing() {
        // n=2: the lower of two distinct picks wins; equal picks tie at zero.
        let p = StrategyProfile::new(vec![strat(&[0.3, 0.7]), strat(&[0.6, 0.4])]).unwrap();
        let v = exact_profile_payoffs(&p);
        assert!((v.values()[0] - 0.3 * 0.4).abs() < 1e-15);
        assert!((v.values()[1] - 0.6 * 0.7).abs() < 1e-15);
    }

    #[test]
    fn sequential_and_parallel_are_bit_identical() {
        let p = StrategyProfile::new(vec![
            strat(&[0.4, 0.3, 0.2, 0.1, 0.0]),
            strat(&[0.1, 0.2, 0.3, 0.2, 0.2]),
            strat(&[0.2, 0.2, 0.2, 0.2, 0.2]),
            strat(&[0.5, 0.25, 0.125, 0.0625, 0.0625]),
            strat(&[0.0, 0.5, 0.5, 0.0, 0.0]),
        ])
        .unwrap();
        assert_eq!(
            exact_profile_payoffs_with(&p, Execution::Sequential),
            exact_profile_payoffs_with(&p, Execution::Parallel)
        );
        assert_eq!(
            brute_force_profile_payoffs_with(&p, Execution::Sequential),
            brute_force_profile_payoffs_with(&p, Execution::Parallel)
        );
        let q = [0.3, 0.25, 0.2, 0.15, 0.1];
        assert_eq!(
            identical_opponent_values(5, &q, Execution::Sequential),
            identical_opponent_values(5, &q, Execution::Parallel)
        );
    }
}
