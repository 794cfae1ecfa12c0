//! Generational loop: payoff accumulation, endowments, Fermi imitation and
//! trajectory recording.

use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{GameParams, PayoffMatrix, Strategy};
use crate::interference::{InterferenceConfig, Interferer};
use crate::metrics;
use crate::netgen::Network;
use crate::rng::{rng_from_seed, SimRng};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// Every agent compares against one random neighbour using the scores of
    /// the current generation; all adoptions take effect together.
    #[default]
    Synchronous,
    /// `N` sequential single-agent updates, scores recomputed locally from
    /// the current strategies.
    Asynchronous,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig<T> {
    pub generations: usize,
    /// Trailing generations averaged into the result.
    pub window: usize,
    /// Imitation noise `K`.
    pub noise: T,
    pub seed: u64,
    pub update_mode: UpdateMode,
    /// Record frequencies for every generation, not only the window.
    pub record_full_trajectory: bool,
    /// Keep the per-generation number of endowments.
    pub log_decisions: bool,
}

impl<T: Real> SimConfig<T> {
    pub fn new(generations: usize, window: usize, seed: u64) -> Self {
        SimConfig {
            generations,
            window,
            noise: T::lit(0.1),
            seed,
            update_mode: UpdateMode::Synchronous,
            record_full_trajectory: false,
            log_decisions: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 || self.window == 0 {
            return Err(Error::param("generations and window must be positive"));
        }
        if self.window > self.generations {
            return Err(Error::param(format!(
                "window ({}) exceeds generations ({})",
                self.window, self.generations
            )));
        }
        if self.noise <= T::zero() || !self.noise.is_finite() {
            return Err(Error::param("noise K must be positive and finite"));
        }
        Ok(())
    }
}

impl<T: Real> Default for SimConfig<T> {
    fn default() -> Self {
        SimConfig::new(500_000, 25_000, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PopulationState<T> {
    pub strategies: Vec<Strategy>,
    /// Score of the current generation, rebuilt from zero every generation.
    pub fitness: Vec<T>,
    pub generation: usize,
}

impl<T: Real> PopulationState<T> {
    pub fn from_strategies(strategies: Vec<Strategy>) -> Self {
        let n = strategies.len();
        PopulationState {
            strategies,
            fitness: vec![T::zero(); n],
            generation: 0,
        }
    }

    pub fn counts(&self) -> [usize; 4] {
        strategy_counts(&self.strategies)
    }

    pub fn frequencies(&self) -> [T; 4] {
        let n = T::count(self.strategies.len());
        self.counts().map(|c| T::count(c) / n)
    }
}

pub fn strategy_counts(strategies: &[Strategy]) -> [usize; 4] {
    let mut c = [0usize; 4];
    for s in strategies {
        c[s.index()] += 1;
    }
    c
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult<T> {
    /// Strategy frequencies at the end of each recorded generation.
    pub freq_trajectory: Vec<[T; 4]>,
    /// Generation index of `freq_trajectory[0]`.
    pub trajectory_start: usize,
    pub window_freq: [T; 4],
    pub fairness: T,
    pub total_cost: T,
    pub endowment_events: u64,
    /// Endowments per generation, when requested.
    pub decision_log: Option<Vec<u32>>,
    pub final_strategies: Vec<Strategy>,
}

/// Each node independently uniform over the four strategies.
pub fn init_population<T: Real>(net: &Network, rng: &mut SimRng) -> PopulationState<T> {
    let strategies = (0..net.node_count())
        .map(|_| Strategy::from_index(rng.random_range(0..4)))
        .collect();
    PopulationState::from_strategies(strategies)
}

/// `fitness[i] = sum_j matrix[s_i, s_j]` over neighbours `j` of `i`.
pub fn compute_fitness<T: Real>(
    strategies: &[Strategy],
    net: &Network,
    matrix: &PayoffMatrix<T>,
    fitness: &mut [T],
) {
    let rows = matrix.rows();
    for (i, slot) in fitness.iter_mut().enumerate() {
        *slot = local_score(strategies, net, rows, i);
    }
}

#[inline]
fn local_score<T: Real>(strategies: &[Strategy], net: &Network, rows: &[[T; 4]; 4], i: usize) -> T {
    let row = &rows[strategies[i].index()];
    let mut acc = T::zero();
    for &j in net.neighbors(i) {
        acc += row[strategies[j as usize].index()];
    }
    acc
}

/// Probability that an agent with score `fa` adopts the strategy of one with
/// score `fb`: `1 / (1 + exp((fa - fb) / K))`.
///
/// Evaluated so that the exponential never overflows; results saturate
/// towards 0 or 1 for large score gaps.
#[inline]
pub fn fermi_probability<T: Real>(fa: T, fb: T, noise: T) -> T {
    let x = (fa - fb) / noise;
    if x >= T::zero() {
        let e = (-x).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + x.exp())
    }
}

/// One synchronous imitation sweep over `state`, reading `state.fitness`.
///
/// Agents without neighbours never change.
pub fn imitation_step<T: Real>(
    state: &mut PopulationState<T>,
    net: &Network,
    noise: T,
    rng: &mut SimRng,
    scratch: &mut Vec<Strategy>,
) {
    scratch.clear();
    scratch.extend_from_slice(&state.strategies);
    let old = &state.strategies;
    let fitness = &state.fitness;
    for (i, next) in scratch.iter_mut().enumerate() {
        let nb = net.neighbors(i);
        if nb.is_empty() {
            continue;
        }
        let j = nb[rng.random_range(0..nb.len())] as usize;
        if old[j] == old[i] {
            continue;
        }
        let p = fermi_probability(fitness[i], fitness[j], noise);
        if T::lit(rng.random::<f64>()) < p {
            *next = old[j];
        }
    }
    std::mem::swap(&mut state.strategies, scratch);
}

/// `N` random sequential updates. Scores are recomputed on demand from the
/// current strategies plus this generation's endowment `bonus`.
fn asynchronous_step<T: Real>(
    state: &mut PopulationState<T>,
    net: &Network,
    rows: &[[T; 4]; 4],
    bonus: &[T],
    noise: T,
    rng: &mut SimRng,
) {
    let n = state.strategies.len();
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let nb = net.neighbors(i);
        if nb.is_empty() {
            continue;
        }
        let j = nb[rng.random_range(0..nb.len())] as usize;
        if state.strategies[j] == state.strategies[i] {
            continue;
        }
        let fi = local_score(&state.strategies, net, rows, i) + bonus[i];
        let fj = local_score(&state.strategies, net, rows, j) + bonus[j];
        if T::lit(rng.random::<f64>()) < fermi_probability(fi, fj, noise) {
            state.strategies[i] = state.strategies[j];
        }
    }
}

/// A configured run over one network. Cheap to construct; the expensive
/// parts (network, centrality ranking inside the interferer) are shared by
/// reference.
pub struct Simulation<'a, T> {
    net: &'a Network,
    matrix: PayoffMatrix<T>,
    interferer: Option<&'a Interferer<T>>,
    config: SimConfig<T>,
}

impl<'a, T: Real> Simulation<'a, T> {
    pub fn new(
        net: &'a Network,
        game: &GameParams<T>,
        interferer: Option<&'a Interferer<T>>,
        config: SimConfig<T>,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Simulation {
            net,
            matrix: PayoffMatrix::new(game),
            interferer,
            config,
        })
    }

    /// Runs from a uniformly random initial population.
    pub fn run(&self) -> RunResult<T> {
        let mut rng = rng_from_seed(self.config.seed);
        let state = init_population(self.net, &mut rng);
        self.run_with(state, &mut rng)
    }

    /// Runs from a given initial population, seeding the dynamics from the config.
    pub fn run_from(&self, state: PopulationState<T>) -> Result<RunResult<T>> {
        if state.strategies.len() != self.net.node_count() {
            return Err(Error::param("initial state does not match network size"));
        }
        let mut rng = rng_from_seed(self.config.seed);
        Ok(self.run_with(state, &mut rng))
    }

    fn run_with(&self, mut state: PopulationState<T>, rng: &mut SimRng) -> RunResult<T> {
        let cfg = &self.config;
        let n = self.net.node_count();
        let rows = self.matrix.rows();
        let record_from = if cfg.record_full_trajectory {
            0
        } else {
            cfg.generations - cfg.window
        };
        let inv_n = T::one() / T::count(n);

        let mut trajectory = Vec::with_capacity(cfg.generations - record_from);
        let mut decision_log = cfg
            .log_decisions
            .then(|| Vec::with_capacity(cfg.generations));
        let mut invested: Vec<usize> = Vec::new();
        let mut scratch: Vec<Strategy> = Vec::with_capacity(n);
        let mut bonus = vec![T::zero(); n];
        let mut events: u64 = 0;
        let theta = self
            .interferer
            .map(|it| it.config().theta)
            .unwrap_or_else(T::zero);

        for generation in 0..cfg.generations {
            state.generation = generation;
            invested.clear();
            if let Some(it) = self.interferer {
                it.decide_into(&state.strategies, self.net, &mut invested);
            }
            events += invested.len() as u64;
            if let Some(log) = decision_log.as_mut() {
                log.push(invested.len() as u32);
            }

            match cfg.update_mode {
                UpdateMode::Synchronous => {
                    compute_fitness(
                        &state.strategies,
                        self.net,
                        &self.matrix,
                        &mut state.fitness,
                    );
                    for &i in &invested {
                        state.fitness[i] += theta;
                    }
                    imitation_step(&mut state, self.net, cfg.noise, rng, &mut scratch);
                }
                UpdateMode::Asynchronous => {
                    for &i in &invested {
                        bonus[i] = theta;
                    }
                    asynchronous_step(&mut state, self.net, rows, &bonus, cfg.noise, rng);
                    for &i in &invested {
                        bonus[i] = T::zero();
                    }
                }
            }

            if generation >= record_from {
                let counts = strategy_counts(&state.strategies);
                trajectory.push(counts.map(|c| T::count(c) * inv_n));
            }
        }

        let window_start = trajectory.len() - cfg.window;
        let window_freq = metrics::mean_frequencies(&trajectory[window_start..]);
        RunResult {
            freq_trajectory: trajectory,
            trajectory_start: record_from,
            window_freq,
            fairness: metrics::fairness(&window_freq),
            total_cost: theta * T::from_u64(events).expect("event count representable"),
            endowment_events: events,
            decision_log,
            final_strategies: state.strategies,
        }
    }
}

/// Convenience wrapper: builds the interferer (computing any centrality the
/// scheme needs) and runs from a random initial population.
pub fn run_simulation<T: Real>(
    net: &Network,
    game: &GameParams<T>,
    interference: Option<&InterferenceConfig<T>>,
    config: &SimConfig<T>,
) -> Result<RunResult<T>> {
    let interferer = interference
        .map(|cfg| Interferer::new(*cfg, net))
        .transpose()?;
    Ok(Simulation::new(net, game, interferer.as_ref(), *config)?.run())
}
