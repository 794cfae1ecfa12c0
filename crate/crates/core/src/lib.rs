//! Ultimatum Game dynamics on scale-free networks, with institutional
//! interference schemes and a sweep harness for cost/fairness trade-offs.
//!
//! The numeric core is generic over the scalar type. The game layer accepts
//! any [`Scalar`] (including exact rationals); everything that needs
//! transcendental functions requires a [`Real`]. The aliases at the crate root
//! pin the common `f64` instantiation used by the sweep and CLI layers.

pub mod dynamics;
pub mod error;
pub mod game;
pub mod interference;
pub mod metrics;
pub mod netgen;
pub mod rng;
pub mod scalar;
pub mod sweep;

pub use error::{Error, Result};
pub use game::{GameParams, PayoffMatrix, Strategy};
pub use interference::{InterferenceConfig, Scheme, TargetSet};
pub use netgen::{GenParams, Model, Network, NetworkStats};
pub use scalar::{Real, Scalar};

/// Exact rational scalar, usable with the payoff layer.
pub type Rational = num_rational::Ratio<i64>;

pub type GameParams64 = game::GameParams<f64>;
pub type PayoffMatrix64 = game::PayoffMatrix<f64>;
pub type PayoffMatrixExact = game::PayoffMatrix<Rational>;
pub type SimConfig64 = dynamics::SimConfig<f64>;
pub type RunResult64 = dynamics::RunResult<f64>;
pub type InterferenceConfig64 = interference::InterferenceConfig<f64>;
pub type CentralityRanking64 = netgen::CentralityRanking<f64>;
pub type Aggregate64 = metrics::Aggregate<f64>;

/// Crate version, echoed into output metadata headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
