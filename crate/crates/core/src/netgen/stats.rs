use std::collections::BTreeMap;

use super::Network;

/// Default lower cutoff for the power-law fit.
pub const DEFAULT_XMIN: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub mean_degree: f64,
    /// `3 * triangles / connected triples`; zero when there are no triples.
    pub global_clustering: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
    /// Discrete maximum-likelihood power-law exponent over degrees `>= xmin`;
    /// `NaN` when fewer than two degrees qualify.
    pub fitted_exponent: f64,
    pub xmin: usize,
}

pub fn network_stats(net: &Network, xmin: usize) -> NetworkStats {
    let degrees = net.degrees();
    let mut degree_histogram = BTreeMap::new();
    for &k in &degrees {
        *degree_histogram.entry(k).or_insert(0) += 1;
    }
    NetworkStats {
        node_count: net.node_count(),
        edge_count: net.edge_count(),
        mean_degree: 2.0 * net.edge_count() as f64 / net.node_count() as f64,
        global_clustering: global_clustering(net),
        degree_histogram,
        fitted_exponent: fit_power_law_exponent(&degrees, xmin),
        xmin,
    }
}

/// Number of triangles, each counted once.
pub fn triangle_count(net: &Network) -> u64 {
    let mut total = 0u64;
    for u in 0..net.node_count() {
        let nu = net.neighbors(u);
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            let nv = net.neighbors(v as usize);
            // common neighbours w > v of the sorted lists
            let (mut a, mut b) = (0, 0);
            while a < nu.len() && b < nv.len() {
                match nu[a].cmp(&nv[b]) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[a] > v {
                            total += 1;
                        }
                        a += 1;
                        b += 1;
                    }
                }
            }
        }
    }
    total
}

pub fn global_clustering(net: &Network) -> f64 {
    let triples: u64 = (0..net.node_count())
        .map(|i| {
            let k = net.degree(i) as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        return 0.0;
    }
    3.0 * triangle_count(net) as f64 / triples as f64
}

/// Maximises the discrete power-law log-likelihood
/// `-gamma * sum(ln k) - n * ln zeta(gamma, xmin)` over `gamma` in `(1, 10]`.
pub fn fit_power_law_exponent(degrees: &[usize], xmin: usize) -> f64 {
    let xmin = xmin.max(1);
    let tail: Vec<f64> = degrees
        .iter()
        .filter(|&&k| k >= xmin)
        .map(|&k| k as f64)
        .collect();
    if tail.len() < 2 {
        return f64::NAN;
    }
    let n = tail.len() as f64;
    let sum_ln: f64 = tail.iter().map(|k| k.ln()).sum();
    let q = xmin as f64;
    let neg_ll = |gamma: f64| gamma * sum_ln + n * hurwitz_zeta(gamma, q).ln();
    golden_section_min(neg_ll, 1.0 + 1e-6, 10.0, 1e-10)
}

/// `sum_{k >= 0} (k + q)^{-s}` for `s > 1`, `q > 0`: direct sum then an
/// Euler–Maclaurin tail.
fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const DIRECT: usize = 32;
    let mut sum = 0.0;
    for k in 0..DIRECT {
        sum += (k as f64 + q).powf(-s);
    }
    let a = DIRECT as f64 + q;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // Bernoulli corrections B_{2j} / (2j)!
    const COEFFS: [f64; 4] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];
    let mut rising = s; // s (s+1) ... (s+2j-2)
    let mut power = a.powf(-s - 1.0);
    for (j, c) in COEFFS.iter().enumerate() {
        sum += c * rising * power;
        let base = s + (2 * j + 1) as f64;
        rising *= base * (base + 1.0);
        power /= a * a;
    }
    sum
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}
