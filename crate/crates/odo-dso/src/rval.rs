//! Exact rational lengths with an infinity sentinel.
//!
//! FT-tree certificates multiply integer path lengths by the rational
//! multiplicative stretch; keeping the arithmetic exact avoids any rounding
//! slack in the never-underestimate and upper-bound contracts.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RVal(Option<Ratio<u64>>);

impl RVal {
    pub const INFINITY: RVal = RVal(None);

    pub fn zero() -> Self {
        RVal(Some(Ratio::new_raw(0, 1)))
    }

    pub fn from_int(v: u64) -> Self {
        if v == u64::MAX {
            RVal(None)
        } else {
            RVal(Some(Ratio::from_integer(v)))
        }
    }

    pub fn from_ratio(r: Ratio<u64>) -> Self {
        RVal(Some(r))
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_none()
    }

    pub fn ratio(self) -> Option<Ratio<u64>> {
        self.0
    }

    pub fn add(self, other: RVal) -> RVal {
        match (self.0, other.0) {
            (Some(a), Some(b)) => RVal(Some(a + b)),
            _ => RVal(None),
        }
    }

    pub fn min(self, other: RVal) -> RVal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.0 {
            Some(r) => *r.numer() as f64 / *r.denom() as f64,
            None => f64::INFINITY,
        }
    }

    /// Smallest integer >= the value (u64::MAX for infinity).
    pub fn ceil_u64(self) -> u64 {
        match self.0 {
            Some(r) => r.numer().div_ceil(*r.denom()),
            None => u64::MAX,
        }
    }
}

impl PartialOrd for RVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}
