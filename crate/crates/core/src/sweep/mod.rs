//! Parameter sweeps over seeded networks and replicates, plus the
//! post-processing that turns them into Pareto fronts and optimum tables.

mod baseline;
mod best;
mod format;
mod io;
mod pareto;
mod spec;

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use crate::dynamics::Simulation;
use crate::error::{Error, Result};
use crate::interference::{InterferenceConfig, Interferer, Scheme, TargetSet};
use crate::metrics::{self, Aggregate};
use crate::netgen::{
    degree_centrality, eigenvector_centrality, generate, CentralityRanking, Model, Network,
};
use crate::rng::derive_seed;

pub use baseline::{baseline_scan, write_baseline_csv, BaselinePoint, BaselineScan};
pub use best::{best_per_fairness, write_best_csv, BestRow};
pub use format::{fmt_cost, fmt_sig};
pub use io::{
    metadata_header, read_summary_csv, write_aggregate_csv, write_results_csv, AGGREGATE_COLUMNS,
    RESULTS_COLUMNS,
};
pub use pareto::{pareto_front, pareto_front_by_group, write_pareto_csv, ParetoPoint};
pub use spec::{
    GameSection, GridPoint, GridSection, NetworkSection, SimSection, SweepSpec,
    DEFAULT_NI_THRESHOLDS, DEFAULT_THETAS, DEFAULT_THRESHOLDS,
};

/// Everything that identifies a grid point in output tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coordinates {
    pub model: Model,
    pub scheme: Option<Scheme>,
    pub target: Option<TargetSet>,
    pub threshold: f64,
    pub theta: f64,
    pub l: f64,
    pub h: f64,
    pub noise: f64,
    pub generations: usize,
    pub window: usize,
}

impl Coordinates {
    pub fn scheme_name(&self) -> &'static str {
        self.scheme.map_or("none", Scheme::name)
    }

    pub fn target_name(&self) -> &'static str {
        self.target.map_or("none", TargetSet::name)
    }
}

/// One replicate of one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateRow {
    pub network_seed: u64,
    pub replicate: usize,
    pub replicate_seed: u64,
    pub window_freq: [f64; 4],
    pub total_cost: f64,
    pub endowment_events: u64,
}

impl ReplicateRow {
    pub fn fairness(&self) -> f64 {
        metrics::fairness(&self.window_freq)
    }
}

/// Aggregate of one grid point across network seeds and replicates, with
/// the raw rows it was computed from (empty when read back from an
/// aggregate CSV).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub coords: Coordinates,
    pub aggregate: Aggregate<f64>,
    pub raw: Vec<ReplicateRow>,
}

impl SweepRecord {
    pub fn unfair_share(&self) -> f64 {
        1.0 - self.aggregate.mean_fairness
    }

    /// Recomputes the aggregate from the raw rows.
    pub fn recompute_aggregate(&self) -> Result<Aggregate<f64>> {
        let pairs: Vec<([f64; 4], f64)> = self
            .raw
            .iter()
            .map(|r| (r.window_freq, r.total_cost))
            .collect();
        metrics::aggregate_values(&pairs)
    }

    /// Structural checks every emitted record must pass.
    pub fn audit(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Parameter(format!("audit: {msg}")));
        let theta = self.coords.theta;
        for row in &self.raw {
            let sum: f64 = row.window_freq.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return fail(format!("frequencies sum to {sum}"));
            }
            if !(-1e-9..=1.0 + 1e-9).contains(&row.fairness()) {
                return fail(format!("fairness {} out of range", row.fairness()));
            }
            let expected = if self.coords.scheme.is_some() {
                theta * row.endowment_events as f64
            } else {
                0.0
            };
            if row.total_cost.to_bits() != expected.to_bits() {
                return fail(format!(
                    "cost {} != theta x events {expected}",
                    row.total_cost
                ));
            }
        }
        if !self.raw.is_empty() {
            let again = self.recompute_aggregate()?;
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
            let agg = &self.aggregate;
            if !(close(again.mean_fairness, agg.mean_fairness)
                && close(again.se_fairness, agg.se_fairness)
                && close(again.mean_cost, agg.mean_cost)
                && close(again.se_cost, agg.se_cost)
                && again.replicate_count == agg.replicate_count)
            {
                return fail("aggregate does not match raw rows".into());
            }
        }
        Ok(())
    }
}

/// A work unit that failed, with its coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitFailure {
    pub grid_index: usize,
    pub network_seed: u64,
    pub replicate: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    /// One record per grid point that had at least one successful replicate,
    /// in grid order.
    pub records: Vec<SweepRecord>,
    pub failures: Vec<UnitFailure>,
}

/// A generated network with the centrality rankings the grid needs.
pub struct PreparedNetwork {
    pub seed: u64,
    pub network: Network,
    pub degree: Option<CentralityRanking<f64>>,
    pub eigen: Option<std::result::Result<CentralityRanking<f64>, String>>,
}

fn prepare_network(
    spec: &SweepSpec,
    seed: u64,
    need_deg: bool,
    need_eig: bool,
) -> Result<PreparedNetwork> {
    let network = generate(&spec.gen_params(seed))?;
    let degree = if need_deg {
        Some(degree_centrality(&network)?)
    } else {
        None
    };
    let eigen = need_eig.then(|| {
        eigenvector_centrality(
            &network,
            crate::interference::EIGEN_TOL,
            crate::interference::EIGEN_MAX_ITER,
        )
        .map(|s| s.ranking)
        .map_err(|e| e.to_string())
    });
    Ok(PreparedNetwork {
        seed,
        network,
        degree,
        eigen,
    })
}

/// Runs `f` on a thread pool bounded to `jobs` workers (`0` = rayon default).
pub(crate) fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

/// Executes every grid point x network seed x replicate.
///
/// Output does not depend on scheduling: units are collected in a fixed
/// order and each replicate's RNG is seeded from
/// `(master seed, network seed, replicate index)`.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<SweepOutcome> {
    spec.validate()?;
    let game = spec.game_params()?;
    let points = spec.grid_points();
    let schemes: Vec<Scheme> = points
        .iter()
        .filter_map(|p| p.interference.map(|c| c.scheme))
        .collect();
    let need_deg = schemes.contains(&Scheme::NiDeg);
    let need_eig = schemes.contains(&Scheme::NiEig);

    with_pool(jobs, || {
        let networks: Vec<PreparedNetwork> = spec
            .network
            .seeds
            .par_iter()
            .map(|&seed| prepare_network(spec, seed, need_deg, need_eig))
            .collect::<Result<_>>()?;

        let units: Vec<(usize, usize, usize)> = (0..points.len())
            .flat_map(|g| {
                (0..networks.len())
                    .flat_map(move |n| (0..spec.sim.replicates).map(move |r| (g, n, r)))
            })
            .collect();

        let results: Vec<std::result::Result<ReplicateRow, UnitFailure>> = units
            .par_iter()
            .map(|&(g, n, r)| {
                let prepared = &networks[n];
                let replicate_seed = derive_seed(&[spec.seed, prepared.seed, r as u64]);
                let failure = |message: String| UnitFailure {
                    grid_index: g,
                    network_seed: prepared.seed,
                    replicate: r,
                    message,
                };
                let outcome = catch_unwind(AssertUnwindSafe(|| {
                    run_unit(
                        spec,
                        &game,
                        points[g].interference,
                        prepared,
                        replicate_seed,
                    )
                }));
                match outcome {
                    Ok(Ok((freq, cost, events))) => Ok(ReplicateRow {
                        network_seed: prepared.seed,
                        replicate: r,
                        replicate_seed,
                        window_freq: freq,
                        total_cost: cost,
                        endowment_events: events,
                    }),
                    Ok(Err(e)) => Err(failure(e.to_string())),
                    Err(p) => Err(failure(panic_message(p))),
                }
            })
            .collect();

        let mut outcome = SweepOutcome::default();
        let per_point = networks.len() * spec.sim.replicates;
        for (g, chunk) in results.chunks(per_point).enumerate() {
            let mut raw = Vec::with_capacity(per_point);
            for res in chunk {
                match res {
                    Ok(row) => raw.push(row.clone()),
                    Err(f) => outcome.failures.push(f.clone()),
                }
            }
            if raw.is_empty() {
                continue;
            }
            let pairs: Vec<([f64; 4], f64)> =
                raw.iter().map(|r| (r.window_freq, r.total_cost)).collect();
            outcome.records.push(SweepRecord {
                coords: coordinates(spec, points[g].interference.as_ref()),
                aggregate: metrics::aggregate_values(&pairs)?,
                raw,
            });
        }
        Ok(outcome)
    })?
}

fn run_unit(
    spec: &SweepSpec,
    game: &crate::game::GameParams<f64>,
    interference: Option<InterferenceConfig<f64>>,
    prepared: &PreparedNetwork,
    seed: u64,
) -> Result<([f64; 4], f64, u64)> {
    let interferer = match interference {
        None => None,
        Some(cfg) => {
            let ranking = match cfg.scheme {
                Scheme::NiDeg => prepared.degree.as_ref(),
                Scheme::NiEig => match prepared.eigen.as_ref() {
                    Some(Ok(r)) => Some(r),
                    Some(Err(msg)) => return Err(Error::Parameter(msg.clone())),
                    None => None,
                },
                _ => None,
            };
            Some(Interferer::with_ranking(cfg, ranking))
        }
    };
    let sim = Simulation::new(
        &prepared.network,
        game,
        interferer.as_ref(),
        spec.sim_config(seed),
    )?;
    let r = sim.run();
    Ok((r.window_freq, r.total_cost, r.endowment_events))
}

pub fn coordinates(spec: &SweepSpec, cfg: Option<&InterferenceConfig<f64>>) -> Coordinates {
    Coordinates {
        model: spec.network.model,
        scheme: cfg.map(|c| c.scheme),
        target: cfg.map(|c| c.target),
        threshold: cfg.map_or(0.0, |c| c.threshold),
        theta: cfg.map_or(0.0, |c| c.theta),
        l: spec.game.l,
        h: spec.game.h,
        noise: spec.sim.noise,
        generations: spec.sim.generations,
        window: spec.sim.window,
    }
}
