use serde::{Deserialize, Serialize};

use crate::dynamics::{SimConfig, UpdateMode};
use crate::error::{Error, Result};
use crate::game::GameParams;
use crate::interference::{InterferenceConfig, Scheme, TargetSet};
use crate::netgen::{GenParams, Model, DMS_CORE};

/// Endowment grid: `10^(1 + k/8)` truncated to two decimals, k = 0, 2..=7.
pub const DEFAULT_THETAS: [f64; 7] = [10.00, 17.78, 23.71, 31.62, 42.16, 56.23, 74.98];

/// Population/neighbourhood thresholds 0.1, 0.2, ..., 1.0.
pub const DEFAULT_THRESHOLDS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Influence thresholds: known good operating points plus a coarse log fill.
pub const DEFAULT_NI_THRESHOLDS: [f64; 12] = [
    0.001, 0.003, 0.004, 0.005, 0.007, 0.01, 0.017, 0.031, 0.1, 0.177, 0.316, 1.0,
];

/// A full sweep description, read from TOML.
///
/// ```toml
/// seed = 1
///
/// [network]
/// model = "ba"
/// n = 2000
/// m = 2
/// seeds = [1, 2, 3]
///
/// [game]
/// l = 0.1
/// h = 0.6
///
/// [sim]
/// generations = 500000
/// window = 25000
/// noise = 0.1
/// replicates = 20
///
/// [grid]
/// schemes = ["neb"]
/// targets = ["hh,lh"]
/// thresholds = [0.3, 0.7]
/// thetas = [10.0, 56.23]
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Master seed mixed into every replicate seed.
    pub seed: u64,
    pub network: NetworkSection,
    pub game: GameSection,
    pub sim: SimSection,
    pub grid: GridSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub model: Model,
    pub n: usize,
    pub m: usize,
    /// BA core size; defaults to `m + 1`.
    pub m0: Option<usize>,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameSection {
    pub l: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub generations: usize,
    pub window: usize,
    pub noise: f64,
    pub replicates: usize,
    pub asynchronous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub schemes: Vec<Scheme>,
    pub targets: Vec<TargetSet>,
    /// Thresholds for POP and NEB.
    pub thresholds: Vec<f64>,
    /// Thresholds for NI-deg and NI-eig.
    pub ni_thresholds: Vec<f64>,
    pub thetas: Vec<f64>,
    /// Also run the no-interference configuration once.
    pub include_baseline: bool,
}

impl Default for NetworkSection {
    fn default() -> Self {
        NetworkSection {
            model: Model::Ba,
            n: 2000,
            m: 2,
            m0: None,
            seeds: (1..=10).collect(),
        }
    }
}

impl Default for GameSection {
    fn default() -> Self {
        GameSection { l: 0.1, h: 0.6 }
    }
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            generations: 500_000,
            window: 25_000,
            noise: 0.1,
            replicates: 20,
            asynchronous: false,
        }
    }
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            schemes: Scheme::ALL.to_vec(),
            targets: TargetSet::ALL.to_vec(),
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            ni_thresholds: DEFAULT_NI_THRESHOLDS.to_vec(),
            thetas: DEFAULT_THETAS.to_vec(),
            include_baseline: false,
        }
    }
}

/// One interference configuration of the grid; `None` is the baseline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub interference: Option<InterferenceConfig<f64>>,
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep spec serialises")
    }

    pub fn gen_params(&self, seed: u64) -> GenParams {
        let net = &self.network;
        let m0 = match net.model {
            Model::Ba => net.m0.unwrap_or(net.m + 1),
            Model::Dms => DMS_CORE,
        };
        GenParams {
            model: net.model,
            n: net.n,
            m: net.m,
            m0,
            seed,
        }
    }

    pub fn game_params(&self) -> Result<GameParams<f64>> {
        GameParams::new(self.game.l, self.game.h)
    }

    /// Simulation config for one replicate; `seed` is the replicate seed.
    pub fn sim_config(&self, seed: u64) -> SimConfig<f64> {
        let mut cfg = SimConfig::new(self.sim.generations, self.sim.window, seed);
        cfg.noise = self.sim.noise;
        if self.sim.asynchronous {
            cfg.update_mode = UpdateMode::Asynchronous;
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.network.seeds.is_empty() {
            return Err(Error::Config("network.seeds must not be empty".into()));
        }
        if self.sim.replicates == 0 {
            return Err(Error::Config("sim.replicates must be positive".into()));
        }
        self.gen_params(0).validate()?;
        self.game_params()?;
        self.sim_config(0).validate()?;
        let g = &self.grid;
        for &t in g.thresholds.iter().chain(&g.ni_thresholds) {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Config(format!("threshold {t} outside [0, 1]")));
            }
        }
        for &theta in &g.thetas {
            if !(theta >= 0.0 && theta.is_finite()) {
                return Err(Error::Config(format!("theta {theta} must be non-negative")));
            }
        }
        if self.grid_points().is_empty() {
            return Err(Error::Config("the grid is empty".into()));
        }
        Ok(())
    }

    /// Expands the grid: baseline first (when requested), then
    /// scheme x target x threshold x theta in declaration order.
    pub fn grid_points(&self) -> Vec<GridPoint> {
        let g = &self.grid;
        let mut points = Vec::new();
        if g.include_baseline {
            points.push(GridPoint { interference: None });
        }
        for &scheme in &g.schemes {
            let thresholds = if scheme.is_influence_based() {
                &g.ni_thresholds
            } else {
                &g.thresholds
            };
            for &target in &g.targets {
                for &threshold in thresholds {
                    for &theta in &g.thetas {
                        if let Ok(cfg) = InterferenceConfig::new(scheme, target, threshold, theta) {
                            points.push(GridPoint {
                                interference: Some(cfg),
                            });
                        }
                    }
                }
            }
        }
        points
    }
}
