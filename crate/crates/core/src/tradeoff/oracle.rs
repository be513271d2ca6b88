//! Exhaustive grid search over small row-stochastic matrices.
//!
//! Deliberately evaluates each candidate through the ensemble-level functions
//! ([`apply_channel`], [`holevo_information`], [`channel_mutual_information`]) rather than the
//! optimizer's evaluator, so the two can be checked against each other.

use crate::ensemble::{apply_channel, channel_mutual_information, holevo_information, CQEnsemble, ClassicalChannel};
use crate::error::{Error, Result};

/// Largest number of candidate channels the oracle will enumerate.
pub const ORACLE_CANDIDATE_LIMIT: u128 = 10_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of grid channels for `rows` inputs, `cols` outputs and `1/grid_step` quanta per row.
pub fn oracle_candidate_count(rows: usize, cols: usize, grid_step: f64) -> Result<u128> {
    let quanta = quanta(grid_step)?;
    let per_row = binomial(quanta as u128 + cols as u128 - 1, cols as u128 - 1);
    Ok(per_row.checked_pow(rows as u32).unwrap_or(u128::MAX))
}

fn quanta(grid_step: f64) -> Result<usize> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::Domain(format!("grid step {grid_step} outside (0, 1]")));
    }
    Ok((1.0 / grid_step).round() as usize)
}

/// All compositions of `total` into `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Best `I(Y;B)` over grid channels with `I(Y;X) ≤ rate`, with the achieving channel.
pub fn brute_force_oracle_with_channel(
    ens: &CQEnsemble,
    rate: f64,
    y_size: usize,
    grid_step: f64,
) -> Result<(f64, ClassicalChannel)> {
    if y_size == 0 {
        return Err(Error::Domain("output alphabet must be nonempty".into()));
    }
    let nx = ens.labels();
    let count = oracle_candidate_count(nx, y_size, grid_step)?;
    if count > ORACLE_CANDIDATE_LIMIT {
        return Err(Error::Guard(format!(
            "{count} candidate channels exceed the limit of {ORACLE_CANDIDATE_LIMIT}"
        )));
    }
    let m = quanta(grid_step)?;
    let rows: Vec<Vec<f64>> = compositions(m, y_size)
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / m as f64).collect())
        .collect();

    let mut best = (0.0, ClassicalChannel::constant(nx, y_size));
    let mut idx = vec![0usize; nx];
    loop {
        let w = ClassicalChannel::new(idx.iter().map(|&i| rows[i].clone()).collect())?;
        let i_yx = channel_mutual_information(ens.probs(), &w)?;
        if i_yx <= rate + 1e-12 {
            let i_yb = holevo_information(&apply_channel(ens, &w)?)?;
            if i_yb > best.0 {
                best = (i_yb, w);
            }
        }
        // Odometer over row choices.
        let mut k = 0;
        loop {
            if k == nx {
                return Ok(best);
            }
            idx[k] += 1;
            if idx[k] < rows.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Best `I(Y;B)` over grid channels with `I(Y;X) ≤ rate`.
pub fn brute_force_oracle(ens: &CQEnsemble, rate: f64, y_size: usize, grid_step: f64) -> Result<f64> {
    brute_force_oracle_with_channel(ens, rate, y_size, grid_step).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{DensityMatrix, ProbabilityDistribution};

    fn orthogonal_pair() -> CQEnsemble {
        CQEnsemble::new(
            ProbabilityDistribution::uniform(2),
            vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn counts_and_guard() {
        assert_eq!(oracle_candidate_count(2, 2, 0.01).unwrap(), 101 * 101);
        assert_eq!(compositions(3, 3).len(), 10);
        let big = crate::closed_forms::bb84_ensemble(0.3).unwrap();
        match brute_force_oracle(&big, 1.0, 6, 0.01) {
            Err(Error::Guard(msg)) => assert!(msg.contains("candidate")),
            other => panic!("expected guard refusal, got {other:?}"),
        }
        assert!(brute_force_oracle(&big, 1.0, 2, 0.0).is_err());
    }

    #[test]
    fn orthogonal_pair_values() {
        let ens = orthogonal_pair();
        assert!((brute_force_oracle(&ens, 1.0, 2, 0.01).unwrap() - 1.0).abs() < 0.01);
        assert_eq!(brute_force_oracle(&ens, 0.0, 2, 0.01).unwrap(), 0.0);
        let half = brute_force_oracle(&ens, 0.5, 2, 0.01).unwrap();
        assert!((half - 0.5).abs() < 0.01 && half <= 0.5 + 1e-12);
    }
}
