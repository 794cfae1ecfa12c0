use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Network;

/// Per-node centrality values and the ascending rank order.
///
/// `order` lists node indices from least to most influential; equal values
/// are ordered by node index.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityRanking<T> {
    pub values: Vec<T>,
    pub order: Vec<usize>,
}

impl<T: Real> CentralityRanking<T> {
    pub fn from_values(values: Vec<T>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        CentralityRanking { values, order }
    }

    /// The `count` most influential nodes, most influential first.
    pub fn top(&self, count: usize) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().rev().take(count).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Degree centrality `k_i / (n - 1)`.
pub fn degree_centrality<T: Real>(net: &Network) -> Result<CentralityRanking<T>> {
    let n = net.node_count();
    if n < 2 {
        return Err(Error::param("degree centrality needs at least two nodes"));
    }
    let denom = T::count(n - 1);
    let values = (0..n).map(|i| T::count(net.degree(i)) / denom).collect();
    Ok(CentralityRanking::from_values(values))
}

/// Converged principal eigenpair.
#[derive(Clone, Debug)]
pub struct EigenSolution<T> {
    pub ranking: CentralityRanking<T>,
    /// Rayleigh-quotient estimate of the leading adjacency eigenvalue.
    pub eigenvalue: T,
    /// `max_i |(A x)_i - lambda x_i|`.
    pub residual: T,
    pub iterations: usize,
}

/// Eigenvector centrality by power iteration.
///
/// Iterates `x <- (A + I) x` from the uniform positive vector, normalising to
/// unit Euclidean length each step; the identity shift leaves eigenvectors
/// unchanged and makes bipartite graphs converge. Stops once successive
/// iterates differ by less than `tol` in max-norm.
pub fn eigenvector_centrality<T: Real>(
    net: &Network,
    tol: T,
    max_iter: usize,
) -> Result<EigenSolution<T>> {
    let n = net.node_count();
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::param("tolerance must be positive"));
    }
    if n == 1 {
        return Ok(EigenSolution {
            ranking: CentralityRanking::from_values(vec![T::one()]),
            eigenvalue: T::zero(),
            residual: T::zero(),
            iterations: 0,
        });
    }
    if !net.is_connected() {
        return Err(Error::param(
            "eigenvector centrality requires a connected network",
        ));
    }

    let mut x = vec![T::one() / T::count(n).sqrt(); n];
    let mut next = vec![T::zero(); n];
    let mut delta = T::infinity();
    for iter in 1..=max_iter {
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = x[i] + net.neighbors(i).iter().map(|&j| x[j as usize]).sum::<T>();
        }
        let norm = next.iter().map(|&v| v * v).sum::<T>().sqrt();
        delta = T::zero();
        for (old, new) in x.iter_mut().zip(next.iter()) {
            let v = *new / norm;
            delta = delta.max((v - *old).abs());
            *old = v;
        }
        if delta < tol {
            let (eigenvalue, residual) = rayleigh(net, &x);
            return Ok(EigenSolution {
                ranking: CentralityRanking::from_values(x),
                eigenvalue,
                residual,
                iterations: iter,
            });
        }
    }
    Err(Error::Convergence {
        iterations: max_iter,
        residual: delta.to_f64().unwrap_or(f64::NAN),
    })
}

fn rayleigh<T: Real>(net: &Network, x: &[T]) -> (T, T) {
    let ax: Vec<T> = (0..x.len())
        .map(|i| net.neighbors(i).iter().map(|&j| x[j as usize]).sum())
        .collect();
    let num: T = ax.iter().zip(x).map(|(&a, &b)| a * b).sum();
    let den: T = x.iter().map(|&v| v * v).sum();
    let lambda = num / den;
    let residual = ax
        .iter()
        .zip(x)
        .map(|(&a, &b)| (a - lambda * b).abs())
        .fold(T::zero(), T::max);
    (lambda, residual)
}
