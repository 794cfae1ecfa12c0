//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use fairnet::game::Strategy;
use fairnet::Network;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Role-averaged payoff computed from first principles: the row player
/// proposes its offer to the column player and responds to the column
/// player's offer, each with probability one half.
pub fn brute_force_payoff(row: Strategy, col: Strategy, l: f64, h: f64) -> f64 {
    let level = |high: bool| if high { h } else { l };
    let (p_row, q_row) = (level(row.offers_high()), level(row.demands_high()));
    let (p_col, q_col) = (level(col.offers_high()), level(col.demands_high()));
    let as_proposer = if p_row >= q_col { 1.0 - p_row } else { 0.0 };
    let as_responder = if p_col >= q_row { p_col } else { 0.0 };
    0.5 * as_proposer + 0.5 * as_responder
}

/// Random connected graph: a random labelled tree plus extra edges with
/// probability `p`.
pub fn random_connected_graph(rng: &mut Xoshiro256PlusPlus, n: usize, p: f64) -> Network {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p && !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    Network::from_edges(n, &edges).unwrap()
}

/// Principal eigenvector of the adjacency matrix from a dense symmetric
/// eigendecomposition, non-negative and L2-normalised.
pub fn dense_principal_eigenvector(net: &Network) -> (f64, Vec<f64>) {
    let n = net.node_count();
    let a = DMatrix::from_fn(n, n, |i, j| if net.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::new(a);
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x: &(usize, &f64), y| x.1.total_cmp(y.1))
        .unwrap();
    let col = eig.eigenvectors.column(k);
    let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = col.norm();
    (lambda, col.iter().map(|v| sign * v / norm).collect())
}

/// O(n^2) dominance check: indices of non-dominated points, sorted by
/// first coordinate then index.
pub fn brute_force_front(points: &[(f64, f64)]) -> Vec<usize> {
    let dominates =
        |a: (f64, f64), b: (f64, f64)| a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1);
    let mut idx: Vec<usize> = (0..points.len())
        .filter(|&i| !points.iter().any(|&q| dominates(q, points[i])))
        .collect();
    idx.sort_by(|&a, &b| points[a].0.total_cmp(&points[b].0).then(a.cmp(&b)));
    idx
}

pub fn l2_normalised(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}
