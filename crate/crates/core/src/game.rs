//! The two-level Ultimatum Game: strategies, one-shot outcomes and the
//! role-averaged payoff matrix.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A strategy is an (offer, acceptance threshold) pair, each either low or high.
///
/// The first letter is the offer made as proposer, the second the minimum
/// offer accepted as responder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Strategy {
    HH = 0,
    HL = 1,
    LH = 2,
    LL = 3,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::HH, Strategy::HL, Strategy::LH, Strategy::LL];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Strategy {
        Self::ALL[i]
    }

    /// Offers the high amount when proposing.
    #[inline]
    pub fn offers_high(self) -> bool {
        matches!(self, Strategy::HH | Strategy::HL)
    }

    /// Rejects anything below the high amount when responding.
    #[inline]
    pub fn demands_high(self) -> bool {
        matches!(self, Strategy::HH | Strategy::LH)
    }

    pub fn offer<T: Scalar>(self, params: &GameParams<T>) -> T {
        if self.offers_high() {
            params.h
        } else {
            params.l
        }
    }

    pub fn threshold<T: Scalar>(self, params: &GameParams<T>) -> T {
        if self.demands_high() {
            params.h
        } else {
            params.l
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Strategy::HH => "HH",
            Strategy::HL => "HL",
            Strategy::LH => "LH",
            Strategy::LL => "LL",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HH" => Ok(Strategy::HH),
            "HL" => Ok(Strategy::HL),
            "LH" => Ok(Strategy::LH),
            "LL" => Ok(Strategy::LL),
            other => Err(Error::param(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Low and high split levels, `0 <= l < h <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameParams<T> {
    pub l: T,
    pub h: T,
}

impl<T: Scalar> GameParams<T> {
    pub fn new(l: T, h: T) -> Result<Self> {
        if !(T::zero() <= l && l < h && h <= T::one()) {
            return Err(Error::param(format!(
                "game parameters must satisfy 0 <= l < h <= 1 (got l={l:?}, h={h:?})"
            )));
        }
        Ok(GameParams { l, h })
    }
}

/// Payoffs of a single interaction, `(proposer, responder)`.
///
/// Offers at or above the responder's threshold are accepted.
pub fn one_shot_payoffs<T: Scalar>(
    proposer: Strategy,
    responder: Strategy,
    params: &GameParams<T>,
) -> (T, T) {
    let offer = proposer.offer(params);
    if offer >= responder.threshold(params) {
        (T::one() - offer, offer)
    } else {
        (T::zero(), T::zero())
    }
}

/// Expected payoff of `row` against `col` when each role is equally likely.
pub fn payoff_entry<T: Scalar>(row: Strategy, col: Strategy, params: &GameParams<T>) -> T {
    let (as_proposer, _) = one_shot_payoffs(row, col, params);
    let (_, as_responder) = one_shot_payoffs(col, row, params);
    (as_proposer + as_responder) * T::half()
}

/// Role-averaged payoff for the row player, indexed by [`Strategy::index`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PayoffMatrix<T> {
    entries: [[T; 4]; 4],
}

impl<T: Scalar> PayoffMatrix<T> {
    pub fn new(params: &GameParams<T>) -> Self {
        let mut entries = [[T::zero(); 4]; 4];
        for row in Strategy::ALL {
            for col in Strategy::ALL {
                entries[row.index()][col.index()] = payoff_entry(row, col, params);
            }
        }
        PayoffMatrix { entries }
    }

    #[inline]
    pub fn get(&self, row: Strategy, col: Strategy) -> T {
        self.entries[row.index()][col.index()]
    }

    #[inline]
    pub fn rows(&self) -> &[[T; 4]; 4] {
        &self.entries
    }
}
