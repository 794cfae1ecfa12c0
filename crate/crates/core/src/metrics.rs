//! Window averaging, the fairness measure, and replicate aggregation.

use crate::dynamics::RunResult;
use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::scalar::Real;

/// Arithmetic mean of frequency vectors. Empty input yields zeros.
pub fn mean_frequencies<T: Real>(rows: &[[T; 4]]) -> [T; 4] {
    let mut acc = [T::zero(); 4];
    for row in rows {
        for (a, &v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    if rows.is_empty() {
        return acc;
    }
    let n = T::count(rows.len());
    acc.map(|v| v / n)
}

/// Mean over the final `window` entries of a trajectory.
pub fn window_average<T: Real>(trajectory: &[[T; 4]], window: usize) -> Result<[T; 4]> {
    if window == 0 || trajectory.len() < window {
        return Err(Error::param(format!(
            "trajectory of length {} is shorter than window {window}",
            trajectory.len()
        )));
    }
    Ok(mean_frequencies(&trajectory[trajectory.len() - window..]))
}

/// Share of fair proposers (HH + HL).
#[inline]
pub fn fairness<T: Real>(freqs: &[T; 4]) -> T {
    freqs[Strategy::HH.index()] + freqs[Strategy::HL.index()]
}

#[inline]
pub fn unfair_share<T: Real>(freqs: &[T; 4]) -> T {
    T::one() - fairness(freqs)
}

/// Cross-replicate summary with standard errors of the mean.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate<T> {
    pub mean_fairness: T,
    pub se_fairness: T,
    pub mean_cost: T,
    pub se_cost: T,
    pub mean_freqs: [T; 4],
    pub replicate_count: usize,
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`; zero
/// for a single value or identical values).
pub fn mean_se<T: Real>(values: &[T]) -> (T, T) {
    let n = values.len();
    if n > 0 && values.iter().all(|&v| v == values[0]) {
        return (values[0], T::zero());
    }
    let nt = T::count(n);
    let mean = values.iter().copied().sum::<T>() / nt;
    if n < 2 {
        return (mean, T::zero());
    }
    let ss: T = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let sd = (ss / T::count(n - 1)).sqrt();
    (mean, sd / nt.sqrt())
}

/// Aggregates `(window frequencies, total cost)` pairs.
pub fn aggregate_values<T: Real>(runs: &[([T; 4], T)]) -> Result<Aggregate<T>> {
    if runs.is_empty() {
        return Err(Error::param("cannot aggregate zero replicates"));
    }
    let fair: Vec<T> = runs.iter().map(|(f, _)| fairness(f)).collect();
    let cost: Vec<T> = runs.iter().map(|&(_, c)| c).collect();
    let freqs: Vec<[T; 4]> = runs.iter().map(|&(f, _)| f).collect();
    let (mean_fairness, se_fairness) = mean_se(&fair);
    let (mean_cost, se_cost) = mean_se(&cost);
    Ok(Aggregate {
        mean_fairness,
        se_fairness,
        mean_cost,
        se_cost,
        mean_freqs: mean_frequencies(&freqs),
        replicate_count: runs.len(),
    })
}

pub fn aggregate<T: Real>(results: &[RunResult<T>]) -> Result<Aggregate<T>> {
    let pairs: Vec<([T; 4], T)> = results
        .iter()
        .map(|r| (r.window_freq, r.total_cost))
        .collect();
    aggregate_values(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_of_constant_trajectory() {
        let t = vec![[0.1, 0.2, 0.3, 0.4]; 10];
        assert_eq!(window_average(&t, 5).unwrap(), [0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn window_of_alternating_trajectory() {
        let t: Vec<[f64; 4]> = (0..20)
            .map(|i| {
                if i % 2 == 0 {
                    [1.0, 0.0, 0.0, 0.0]
                } else {
                    [0.0, 1.0, 0.0, 0.0]
                }
            })
            .collect();
        assert_eq!(window_average(&t, 8).unwrap(), [0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn window_longer_than_trajectory() {
        let t = vec![[0.25; 4]; 3];
        assert!(window_average(&t, 4).is_err());
        assert!(window_average(&t, 0).is_err());
    }

    #[test]
    fn fairness_examples() {
        assert_eq!(fairness(&[0.25, 0.25, 0.25, 0.25]), 0.5);
        assert_eq!(fairness(&[1.0, 0.0, 0.0, 0.0]), 1.0);
        assert!((fairness(&[0.1f64, 0.2, 0.3, 0.4]) - 0.3).abs() < 1e-15);
        let f = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(fairness(&f) + unfair_share(&f), 1.0);
    }

    #[test]
    fn single_replicate() {
        let a = aggregate_values(&[([0.3, 0.2, 0.1, 0.4], 12.5)]).unwrap();
        assert_eq!(a.mean_fairness, 0.5);
        assert_eq!(a.se_fairness, 0.0);
        assert_eq!(a.mean_cost, 12.5);
        assert_eq!(a.se_cost, 0.0);
        assert_eq!(a.replicate_count, 1);
    }

    #[test]
    fn two_replicates_standard_error() {
        // sample sd = sqrt(0.02), se = sd / sqrt(2) = 0.1
        let a =
            aggregate_values::<f64>(&[([0.4, 0.0, 0.6, 0.0], 0.0), ([0.6, 0.0, 0.4, 0.0], 0.0)])
                .unwrap();
        assert!((a.mean_fairness - 0.5).abs() < 1e-15);
        assert!((a.se_fairness - 0.1).abs() < 1e-15);
    }

    #[test]
    fn identical_replicates_have_zero_se() {
        let runs = vec![([0.7, 0.1, 0.1, 0.1], 3.0); 20];
        let a = aggregate_values(&runs).unwrap();
        assert_eq!(a.se_fairness, 0.0);
        assert_eq!(a.se_cost, 0.0);
        assert_eq!(a.replicate_count, 20);
    }

    #[test]
    fn empty_is_error() {
        assert!(aggregate_values::<f64>(&[]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn permutation_invariant(
                runs in proptest::collection::vec(
                    ((0.0f64..1.0, 0.0f64..1.0), 0.0f64..1e5), 1..30),
                rot in 0usize..30,
            ) {
                let rows: Vec<([f64; 4], f64)> = runs
                    .iter()
                    .map(|&((a, b), c)| ([a / 2.0, b / 2.0, (1.0 - a) / 2.0, (1.0 - b) / 2.0], c))
                    .collect();
                let base = aggregate_values(&rows).unwrap();
                let mut shuffled = rows.clone();
                let k = rot % shuffled.len();
                shuffled.rotate_left(k);
                shuffled.reverse();
                let other = aggregate_values(&shuffled).unwrap();
                prop_assert!((base.mean_fairness - other.mean_fairness).abs() < 1e-12);
                prop_assert!((base.se_fairness - other.se_fairness).abs() < 1e-12);
                prop_assert!((base.mean_cost - other.mean_cost).abs() < 1e-12 * base.mean_cost.max(1.0));
                prop_assert!((0.0..=1.0 + 1e-12).contains(&base.mean_fairness));
            }
        }
    }
}
