//! Scale-free network generation (BA and DMS), centralities, statistics and
//! edge-list I/O.

mod centrality;
mod edgelist;
mod stats;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub use centrality::{degree_centrality, eigenvector_centrality, CentralityRanking, EigenSolution};
pub use edgelist::{load_edgelist, read_edgelist_file, save_edgelist, write_edgelist_file};
pub use stats::{
    fit_power_law_exponent, global_clustering, network_stats, triangle_count, NetworkStats,
    DEFAULT_XMIN,
};

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Neighbour lists are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Network {
    /// Builds a network from an undirected edge list. Each edge must appear
    /// exactly once (in either orientation).
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::param("network must have at least one node"));
        }
        if node_count > u32::MAX as usize {
            return Err(Error::param("network too large"));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::param(format!(
                    "edge ({a}, {b}) out of range for {node_count} nodes"
                )));
            }
            if a == b {
                return Err(Error::param(format!("self-loop at node {a}")));
            }
            adjacency[a].push(b as u32);
            adjacency[b].push(a as u32);
        }
        Self::from_adjacency(adjacency)
    }

    fn from_adjacency(mut adjacency: Vec<Vec<u32>>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        let total: usize = adjacency.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        offsets.push(0);
        for (i, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::param(format!("duplicate edge ({i}, {})", w[0])));
            }
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Ok(Network { offsets, neighbors })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                let v = v as usize;
                if !seen[v] {
                    seen[v] = true;
                    visited += 1;
                    stack.push(v);
                }
            }
        }
        visited == n
    }

    /// Checks symmetry, absence of self-loops and duplicates, and the
    /// degree-sum identity. Holds for every constructed network.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.node_count();
        for i in 0..n {
            let nb = self.neighbors(i);
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::param(format!(
                        "node {i}: adjacency not strictly sorted"
                    )));
                }
            }
            for &j in nb {
                let j = j as usize;
                if j == i {
                    return Err(Error::param(format!("self-loop at node {i}")));
                }
                if j >= n || !self.has_edge(j, i) {
                    return Err(Error::param(format!("edge ({i}, {j}) not symmetric")));
                }
            }
        }
        let degree_sum: usize = (0..n).map(|i| self.degree(i)).sum();
        if degree_sum != 2 * self.edge_count() {
            return Err(Error::param("degree sum is not twice the edge count"));
        }
        Ok(())
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        Self::from_edges(n, &edges).expect("complete graph is valid")
    }

    /// Star with node 0 at the centre.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|j| (0, j)).collect();
        Self::from_edges(n, &edges).expect("star graph is valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|j| (j - 1, j)).collect();
        Self::from_edges(n, &edges).expect("path graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|j| (j - 1, j)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges).expect("cycle graph is valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ba,
    Dms,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Ba => "ba",
            Model::Dms => "dms",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ba" => Ok(Model::Ba),
            "dms" => Ok(Model::Dms),
            other => Err(Error::param(format!("unknown network model `{other}`"))),
        }
    }
}

/// Growth parameters.
///
/// `m` is the number of links each new node creates, so the mean degree
/// tends to `2m` for both models. `m0` is the size of the fully connected BA
/// seed core; DMS always grows from a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub model: Model,
    pub n: usize,
    pub m: usize,
    pub m0: usize,
    pub seed: u64,
}

/// Size of the triangle that seeds DMS growth.
pub const DMS_CORE: usize = 3;

impl GenParams {
    pub fn ba(n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            model: Model::Ba,
            n,
            m,
            m0: m + 1,
            seed,
        }
    }

    pub fn dms(n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            model: Model::Dms,
            n,
            m,
            m0: DMS_CORE,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            Model::Ba => {
                if self.m < 1 {
                    return Err(Error::param("BA requires m >= 1"));
                }
                if self.m0 < self.m {
                    return Err(Error::param(format!(
                        "BA requires m0 >= m (m0={}, m={})",
                        self.m0, self.m
                    )));
                }
                if self.m0 < 2 {
                    return Err(Error::param("BA requires m0 >= 2"));
                }
                if self.n < self.m0 {
                    return Err(Error::param(format!(
                        "BA requires n >= m0 (n={}, m0={})",
                        self.n, self.m0
                    )));
                }
            }
            Model::Dms => {
                if self.m < 2 {
                    return Err(Error::param(format!("DMS requires m >= 2 (m={})", self.m)));
                }
                if self.n < DMS_CORE {
                    return Err(Error::param(format!(
                        "DMS requires n >= {DMS_CORE} (n={})",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn generate(params: &GenParams) -> Result<Network> {
    match params.model {
        Model::Ba => generate_ba(params),
        Model::Dms => generate_dms(params),
    }
}

/// Barabási–Albert preferential attachment.
///
/// Starts from a complete graph on `m0` nodes; every later node links to `m`
/// distinct existing nodes drawn with probability proportional to degree
/// (draw-and-reject on repeats).
pub fn generate_ba(params: &GenParams) -> Result<Network> {
    if params.model != Model::Ba {
        return Err(Error::param("generate_ba called with a non-BA model"));
    }
    params.validate()?;
    let GenParams { n, m, m0, seed, .. } = *params;
    let mut rng = rng_from_seed(seed);
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    // one entry per edge endpoint; uniform draws are degree-proportional
    let mut endpoints: Vec<u32> = Vec::with_capacity(m0 * (m0 - 1) + 2 * m * (n - m0));

    for i in 0..m0 {
        for j in (i + 1)..m0 {
            adjacency[i].push(j as u32);
            adjacency[j].push(i as u32);
            endpoints.push(i as u32);
            endpoints.push(j as u32);
        }
    }

    let mut targets: Vec<u32> = Vec::with_capacity(m);
    for new in m0..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            adjacency[new].push(t);
            adjacency[t as usize].push(new as u32);
            endpoints.push(t);
            endpoints.push(new as u32);
        }
    }
    Network::from_adjacency(adjacency)
}

/// Upper bound on redraws when a chosen edge would repeat an endpoint.
const DMS_MAX_RETRIES: usize = 64;

/// Dorogovtsev–Mendes–Samukhin growth.
///
/// Starting from a triangle, each new node picks uniformly random existing
/// edges and links to both of their endpoints until it has `m` distinct
/// neighbours (the last edge contributes one endpoint when `m` is odd).
/// Edges whose endpoints collide with already chosen neighbours are redrawn;
/// if the graph cannot supply `m` distinct endpoints the node links to all
/// distinct endpoints it found.
pub fn generate_dms(params: &GenParams) -> Result<Network> {
    if params.model != Model::Dms {
        return Err(Error::param("generate_dms called with a non-DMS model"));
    }
    params.validate()?;
    let GenParams { n, m, seed, .. } = *params;
    let mut rng = rng_from_seed(seed);
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(DMS_CORE + m * n);
    for (a, b) in [(0u32, 1u32), (0, 2), (1, 2)] {
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
        edges.push((a, b));
    }

    let mut targets: Vec<u32> = Vec::with_capacity(m);
    let mut used_edges: HashSet<usize> = HashSet::with_capacity(m);
    for new in DMS_CORE..n {
        targets.clear();
        used_edges.clear();
        // every existing node is an endpoint of some edge, so `new` (= node count)
        // bounds the number of distinct endpoints available
        let want = m.min(new);
        while targets.len() < want && used_edges.len() < edges.len() {
            let room = want - targets.len();
            let mut picked = None;
            for _ in 0..DMS_MAX_RETRIES {
                let e = rng.random_range(0..edges.len());
                if used_edges.contains(&e) {
                    continue;
                }
                let (a, b) = edges[e];
                let fresh = !targets.contains(&a) && !targets.contains(&b);
                if fresh {
                    picked = Some(e);
                    break;
                }
            }
            let e = match picked {
                Some(e) => e,
                // no collision-free edge found: accept a partially new one
                None => match (0..edges.len()).find(|e| {
                    !used_edges.contains(e)
                        && (!targets.contains(&edges[*e].0) || !targets.contains(&edges[*e].1))
                }) {
                    Some(e) => e,
                    None => break,
                },
            };
            used_edges.insert(e);
            let (a, b) = edges[e];
            let mut fresh: Vec<u32> = [a, b]
                .into_iter()
                .filter(|x| !targets.contains(x))
                .collect();
            if fresh.len() > room {
                // odd remainder: keep one endpoint chosen at random
                let keep = rng.random_range(0..fresh.len());
                fresh = vec![fresh[keep]];
            }
            targets.extend(fresh);
        }
        for &t in &targets {
            adjacency[new].push(t);
            adjacency[t as usize].push(new as u32);
            edges.push((t, new as u32));
        }
    }
    Network::from_adjacency(adjacency)
}
