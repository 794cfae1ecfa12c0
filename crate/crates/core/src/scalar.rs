use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Anything the payoff layer can be evaluated in: floats and exact rationals.
pub trait Scalar: Num + NumAssign + Copy + PartialOrd + Debug + Send + Sync + 'static {
    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl<T> Scalar for T where T: Num + NumAssign + Copy + PartialOrd + Debug + Send + Sync + 'static {}

/// Floating-point scalar for the simulation engine and centrality solvers.
pub trait Real: Scalar + Float + FromPrimitive + ToPrimitive + Sum {
    /// Lossy conversion from `f64`; used for user-facing constants and RNG draws.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl<T> Real for T where T: Scalar + Float + FromPrimitive + ToPrimitive + Sum {}
