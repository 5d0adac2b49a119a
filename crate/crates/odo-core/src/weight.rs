//! Scalar weight abstraction.
//!
//! All graph machinery is generic over the edge-weight scalar. Two
//! instantiations are supported: `u64` for inputs whose weights fit a scaled
//! integer domain (the common case, exact arithmetic throughout), and `f64`
//! for inputs that do not. Comparisons on `f64` are exact — inputs are
//! restricted to representable values and no epsilon is applied.

use num_rational::Ratio;
use num_traits::Zero;
use serde::{de::DeserializeOwned, Serialize};
use std::fmt::{Debug, Display};
use std::ops::Add;

/// Edge-weight scalar for graphs and distances.
pub trait Weight:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Zero
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Sentinel for "no path".
    fn infinity() -> Self;

    fn is_infinite(self) -> bool;

    /// Addition that keeps the infinity sentinel absorbing.
    fn add_sat(self, other: Self) -> Self;

    /// Embeds a small count (hop counts, additive stretch terms).
    fn from_count(c: u64) -> Self;

    fn to_f64(self) -> f64;

    /// Exact test of `value <= alpha * base + beta`, with infinities handled
    /// (an infinite bound admits everything, an infinite value only an
    /// infinite bound).
    fn within_stretch(value: Self, alpha: Ratio<u64>, base: Self, beta: Self) -> bool;
}

impl Weight for u64 {
    fn infinity() -> Self {
        u64::MAX
    }

    fn is_infinite(self) -> bool {
        self == u64::MAX
    }

    fn add_sat(self, other: Self) -> Self {
        self.saturating_add(other)
    }

    fn from_count(c: u64) -> Self {
        c
    }

    fn to_f64(self) -> f64 {
        if self == u64::MAX {
            f64::INFINITY
        } else {
            self as f64
        }
    }

    fn within_stretch(value: Self, alpha: Ratio<u64>, base: Self, beta: Self) -> bool {
        if base.is_infinite() || beta.is_infinite() {
            return true;
        }
        if value.is_infinite() {
            return false;
        }
        // value <= alpha*base + beta  <=>  (value - beta)*den <= num*base
        let lhs = (value.saturating_sub(beta)) as u128 * (*alpha.denom()) as u128;
        let rhs = (*alpha.numer()) as u128 * base as u128;
        lhs <= rhs
    }
}

impl Weight for f64 {
    fn infinity() -> Self {
        f64::INFINITY
    }

    fn is_infinite(self) -> bool {
        self == f64::INFINITY
    }

    fn add_sat(self, other: Self) -> Self {
        self + other
    }

    fn from_count(c: u64) -> Self {
        c as f64
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn within_stretch(value: Self, alpha: Ratio<u64>, base: Self, beta: Self) -> bool {
        if base.is_infinite() || beta.is_infinite() {
            return true;
        }
        if value.is_infinite() {
            return false;
        }
        value <= (*alpha.numer() as f64) / (*alpha.denom() as f64) * base + beta
    }
}

/// Parses "0.5", "3", or "1/2" into an exact rational.
pub fn parse_ratio(s: &str) -> Option<Ratio<u64>> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().ok()?;
        let den: u64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        if frac.is_empty() {
            return Some(Ratio::from_integer(int));
        }
        let digits = frac.len() as u32;
        if digits > 18 {
            return None;
        }
        let frac_val: u64 = frac.parse().ok()?;
        let den = 10u64.checked_pow(digits)?;
        return Some(Ratio::from_integer(int) + Ratio::new(frac_val, den));
    }
    s.parse::<u64>().ok().map(Ratio::from_integer)
}

/// `ceil(num/den)` of a positive rational.
pub fn ratio_ceil(r: Ratio<u64>) -> u64 {
    let (n, d) = (*r.numer(), *r.denom());
    n.div_ceil(d)
}
