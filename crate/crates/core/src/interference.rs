//! Institutional interference: which nodes receive the endowment `theta` in a
//! given generation, under population-, neighbourhood- or influence-based
//! triggers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::netgen::{degree_centrality, eigenvector_centrality, CentralityRanking, Network};
use crate::scalar::Real;

/// Strategies an investor considers worth supporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TargetSet {
    /// HH and HL: everyone who proposes fairly.
    FairProposers,
    /// HH and LH: everyone who rejects unfair offers.
    FairResponders,
    /// HH only.
    Strict,
}

impl TargetSet {
    pub const ALL: [TargetSet; 3] = [
        TargetSet::FairProposers,
        TargetSet::FairResponders,
        TargetSet::Strict,
    ];

    #[inline]
    pub fn contains(self, s: Strategy) -> bool {
        match self {
            TargetSet::FairProposers => s.offers_high(),
            TargetSet::FairResponders => s.demands_high(),
            TargetSet::Strict => s == Strategy::HH,
        }
    }

    /// Membership indexed by [`Strategy::index`].
    pub fn mask(self) -> [bool; 4] {
        Strategy::ALL.map(|s| self.contains(s))
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetSet::FairProposers => "hh+hl",
            TargetSet::FairResponders => "hh+lh",
            TargetSet::Strict => "hh",
        }
    }
}

impl fmt::Display for TargetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetSet {
    type Err = Error;

    /// Accepts `hh`, `hh,hl` and `hh,lh` (case-insensitive, in any order,
    /// separated by `,`, `+` or whitespace).
    fn from_str(s: &str) -> Result<Self> {
        let mut codes: Vec<Strategy> = s
            .split(|c: char| c == ',' || c == '+' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()
            .map_err(|_| Error::param(format!("invalid target `{s}`")))?;
        codes.sort();
        match codes.as_slice() {
            [Strategy::HH] => Ok(TargetSet::Strict),
            [Strategy::HH, Strategy::HL] => Ok(TargetSet::FairProposers),
            [Strategy::HH, Strategy::LH] => Ok(TargetSet::FairResponders),
            _ => Err(Error::param(format!(
                "invalid target `{s}` (expected hh, hh,hl or hh,lh)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Scheme {
    /// Invest in every target-playing node while their population share is at most `p_f`.
    Pop,
    /// Invest in a target-playing node while the share of its neighbours that also play
    /// the target is at most `n_f`.
    Neb,
    /// Invest in target-playing nodes among the top `i_f` fraction by degree centrality.
    NiDeg,
    /// As [`Scheme::NiDeg`], ranked by eigenvector centrality.
    NiEig,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Pop, Scheme::Neb, Scheme::NiDeg, Scheme::NiEig];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Pop => "pop",
            Scheme::Neb => "neb",
            Scheme::NiDeg => "ni-deg",
            Scheme::NiEig => "ni-eig",
        }
    }

    pub fn is_influence_based(self) -> bool {
        matches!(self, Scheme::NiDeg | Scheme::NiEig)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "pop" => Ok(Scheme::Pop),
            "neb" => Ok(Scheme::Neb),
            "ni-deg" => Ok(Scheme::NiDeg),
            "ni-eig" => Ok(Scheme::NiEig),
            other => Err(Error::param(format!("unknown scheme `{other}`"))),
        }
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl From<$ty> for String {
            fn from(v: $ty) -> String {
                v.name().to_string()
            }
        }

        impl TryFrom<String> for $ty {
            type Error = Error;

            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }
    };
}

string_serde!(TargetSet);
string_serde!(Scheme);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferenceConfig<T> {
    pub scheme: Scheme,
    pub target: TargetSet,
    /// `p_f`, `n_f` or `i_f` depending on the scheme.
    pub threshold: T,
    pub theta: T,
}

impl<T: Real> InterferenceConfig<T> {
    /// `theta = 0` is accepted here: it is trajectory-equivalent to no
    /// interference and useful as a control.
    pub fn new(scheme: Scheme, target: TargetSet, threshold: T, theta: T) -> Result<Self> {
        if !(threshold >= T::zero() && threshold <= T::one()) {
            return Err(Error::param(format!(
                "threshold must lie in [0, 1] (got {threshold:?})"
            )));
        }
        if theta < T::zero() || !theta.is_finite() {
            return Err(Error::param(format!(
                "theta must be finite and non-negative (got {theta:?})"
            )));
        }
        Ok(InterferenceConfig {
            scheme,
            target,
            threshold,
            theta,
        })
    }
}

/// Nodes endowed in one generation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvestmentDecision {
    pub invested: Vec<usize>,
}

impl InvestmentDecision {
    pub fn len(&self) -> usize {
        self.invested.len()
    }

    pub fn is_empty(&self) -> bool {
        self.invested.is_empty()
    }

    pub fn cost_delta<T: Real>(&self, theta: T) -> T {
        theta * T::count(self.invested.len())
    }
}

#[inline]
pub fn eligible(strategy: Strategy, target: TargetSet) -> bool {
    target.contains(strategy)
}

/// Population-based trigger: all-or-nothing on the global target share.
pub fn decide_pop<T: Real>(
    strategies: &[Strategy],
    target: TargetSet,
    p_f: T,
) -> InvestmentDecision {
    let mut out = InvestmentDecision::default();
    decide_pop_into(strategies, target.mask(), p_f, &mut out.invested);
    out
}

fn decide_pop_into<T: Real>(
    strategies: &[Strategy],
    mask: [bool; 4],
    p_f: T,
    out: &mut Vec<usize>,
) {
    out.clear();
    if strategies.is_empty() {
        return;
    }
    let matching = strategies.iter().filter(|s| mask[s.index()]).count();
    let share = T::count(matching) / T::count(strategies.len());
    if share <= p_f {
        out.extend(
            strategies
                .iter()
                .enumerate()
                .filter(|(_, s)| mask[s.index()])
                .map(|(i, _)| i),
        );
    }
}

/// Neighbourhood-based trigger, decided per node. A node without neighbours
/// has a target share of zero.
pub fn decide_neb<T: Real>(
    strategies: &[Strategy],
    net: &Network,
    target: TargetSet,
    n_f: T,
) -> InvestmentDecision {
    let mut out = InvestmentDecision::default();
    decide_neb_into(strategies, net, target.mask(), n_f, &mut out.invested);
    out
}

fn decide_neb_into<T: Real>(
    strategies: &[Strategy],
    net: &Network,
    mask: [bool; 4],
    n_f: T,
    out: &mut Vec<usize>,
) {
    out.clear();
    for (i, s) in strategies.iter().enumerate() {
        if !mask[s.index()] {
            continue;
        }
        let nb = net.neighbors(i);
        let matching = nb
            .iter()
            .filter(|&&j| mask[strategies[j as usize].index()])
            .count();
        let share = if nb.is_empty() {
            T::zero()
        } else {
            T::count(matching) / T::count(nb.len())
        };
        if share <= n_f {
            out.push(i);
        }
    }
}

/// Number of influence-based candidates, `ceil(i_f * N)`.
pub fn influence_candidate_count<T: Real>(i_f: T, node_count: usize) -> usize {
    let raw = i_f * T::count(node_count);
    // absorb representation error such as 0.1 * 30 = 3.0000000000000004
    let slack = T::lit(1e-9);
    let c = (raw - slack).ceil().max(T::zero());
    c.to_usize().unwrap_or(node_count).min(node_count)
}

/// Influence-based trigger over a static ranking: the `ceil(i_f * N)` most
/// influential nodes are candidates, and candidates playing a target
/// strategy are endowed.
pub fn decide_ni<T: Real>(
    strategies: &[Strategy],
    ranking: &CentralityRanking<T>,
    target: TargetSet,
    i_f: T,
) -> InvestmentDecision {
    let count = influence_candidate_count(i_f, ranking.len());
    let mut invested: Vec<usize> = ranking
        .top(count)
        .filter(|&i| target.contains(strategies[i]))
        .collect();
    invested.sort_unstable();
    InvestmentDecision { invested }
}

/// Adds `theta` to every invested node's fitness and returns the number of
/// endowments made.
pub fn apply<T: Real>(decision: &InvestmentDecision, theta: T, fitness: &mut [T]) -> usize {
    for &i in &decision.invested {
        fitness[i] += theta;
    }
    decision.invested.len()
}

/// Tolerance and iteration cap used when ranking by eigenvector centrality.
pub const EIGEN_TOL: f64 = 1e-12;
pub const EIGEN_MAX_ITER: usize = 1_000_000;

/// A configured scheme bound to one network, ready to decide each generation.
///
/// Influence rankings are static, so the candidate list is computed once.
#[derive(Clone, Debug)]
pub struct Interferer<T> {
    config: InterferenceConfig<T>,
    mask: [bool; 4],
    /// Ascending node indices of influence candidates (NI schemes only).
    candidates: Vec<usize>,
}

impl<T: Real> Interferer<T> {
    pub fn new(config: InterferenceConfig<T>, net: &Network) -> Result<Self> {
        let ranking = match config.scheme {
            Scheme::NiDeg => Some(degree_centrality(net)?),
            Scheme::NiEig => {
                Some(eigenvector_centrality(net, T::lit(EIGEN_TOL), EIGEN_MAX_ITER)?.ranking)
            }
            _ => None,
        };
        Ok(Self::with_ranking(config, ranking.as_ref()))
    }

    /// Uses a precomputed ranking for NI schemes (ignored otherwise).
    ///
    /// # Panics
    /// If the scheme is influence-based and no ranking is supplied.
    pub fn with_ranking(
        config: InterferenceConfig<T>,
        ranking: Option<&CentralityRanking<T>>,
    ) -> Self {
        let candidates = if config.scheme.is_influence_based() {
            let ranking = ranking.expect("influence-based scheme needs a centrality ranking");
            let count = influence_candidate_count(config.threshold, ranking.len());
            let mut c: Vec<usize> = ranking.top(count).collect();
            c.sort_unstable();
            c
        } else {
            Vec::new()
        };
        Interferer {
            config,
            mask: config.target.mask(),
            candidates,
        }
    }

    pub fn config(&self) -> &InterferenceConfig<T> {
        &self.config
    }

    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    /// Fills `out` with this generation's invested nodes (ascending).
    pub fn decide_into(&self, strategies: &[Strategy], net: &Network, out: &mut Vec<usize>) {
        match self.config.scheme {
            Scheme::Pop => decide_pop_into(strategies, self.mask, self.config.threshold, out),
            Scheme::Neb => decide_neb_into(strategies, net, self.mask, self.config.threshold, out),
            Scheme::NiDeg | Scheme::NiEig => {
                out.clear();
                out.extend(
                    self.candidates
                        .iter()
                        .copied()
                        .filter(|&i| self.mask[strategies[i].index()]),
                );
            }
        }
    }

    pub fn decide(&self, strategies: &[Strategy], net: &Network) -> InvestmentDecision {
        let mut invested = Vec::new();
        self.decide_into(strategies, net, &mut invested);
        InvestmentDecision { invested }
    }
}
