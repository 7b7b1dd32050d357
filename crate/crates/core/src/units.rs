//! Fixed-point quantities.
//!
//! Bandwidth is held in tenths of a Mbps and time in milliseconds, so every
//! constraint comparison is exact integer arithmetic.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Bandwidth in units of 0.1 Mbps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bandwidth(i64);

impl Bandwidth {
    pub const ZERO: Bandwidth = Bandwidth(0);

    pub const fn from_tenths(tenths: i64) -> Self {
        Bandwidth(tenths)
    }

    pub const fn from_mbps(mbps: i64) -> Self {
        Bandwidth(mbps * 10)
    }

    /// Converts a float Mbps value, failing unless it lies on the 0.1 Mbps grid.
    pub fn try_from_mbps_f64(mbps: f64) -> Option<Self> {
        if !mbps.is_finite() {
            return None;
        }
        let scaled = mbps * 10.0;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-6 || rounded.abs() > i64::MAX as f64 / 2.0 {
            return None;
        }
        Some(Bandwidth(rounded as i64))
    }

    pub const fn tenths(self) -> i64 {
        self.0
    }

    pub fn as_mbps(self) -> f64 {
        self.0 as f64 / 10.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn min(self, other: Self) -> Self {
        Bandwidth(self.0.min(other.0))
    }

    pub fn max(self, other: Self) -> Self {
        Bandwidth(self.0.max(other.0))
    }
}

impl Add for Bandwidth {
    type Output = Bandwidth;
    fn add(self, rhs: Self) -> Self {
        Bandwidth(self.0 + rhs.0)
    }
}

impl Sub for Bandwidth {
    type Output = Bandwidth;
    fn sub(self, rhs: Self) -> Self {
        Bandwidth(self.0 - rhs.0)
    }
}

impl Neg for Bandwidth {
    type Output = Bandwidth;
    fn neg(self) -> Self {
        Bandwidth(-self.0)
    }
}

impl AddAssign for Bandwidth {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Bandwidth {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 -= rhs.0;
    }
}

impl Sum for Bandwidth {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Bandwidth::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Bandwidth> for Bandwidth {
    fn sum<I: Iterator<Item = &'a Bandwidth>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

impl fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        f.pad(&format!("{}{}.{}", sign, abs / 10, abs % 10))
    }
}

impl FromStr for Bandwidth {
    type Err = ParseFixedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fixed(s, 1).map(Bandwidth)
    }
}

impl Serialize for Bandwidth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_mbps())
    }
}

impl<'de> Deserialize<'de> for Bandwidth {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let mbps = f64::deserialize(deserializer)?;
        Bandwidth::try_from_mbps_f64(mbps)
            .ok_or_else(|| serde::de::Error::custom(format!("{mbps} Mbps is not a multiple of 0.1 Mbps")))
    }
}

/// Simulation time in milliseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimTime(i64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);

    pub const fn from_millis(ms: i64) -> Self {
        SimTime(ms)
    }

    pub const fn from_secs(s: i64) -> Self {
        SimTime(s * 1000)
    }

    /// Rounds a float number of seconds to the nearest millisecond.
    pub fn from_secs_f64(secs: f64) -> Self {
        SimTime((secs * 1000.0).round() as i64)
    }

    pub const fn millis(self) -> i64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }
}

impl Add for SimTime {
    type Output = SimTime;
    fn add(self, rhs: Self) -> Self {
        SimTime(self.0 + rhs.0)
    }
}

impl Sub for SimTime {
    type Output = SimTime;
    fn sub(self, rhs: Self) -> Self {
        SimTime(self.0 - rhs.0)
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        f.pad(&format!("{}{}.{:03}", sign, abs / 1000, abs % 1000))
    }
}

impl FromStr for SimTime {
    type Err = ParseFixedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fixed(s, 3).map(SimTime)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid fixed-point decimal {input:?} (expected at most {digits} fractional digit(s))")]
pub struct ParseFixedError {
    input: String,
    digits: u32,
}

/// Parses a plain decimal (`123`, `-4.5`) into an integer scaled by
/// `10^digits`. More fractional digits than `digits` is an error.
fn parse_fixed(s: &str, digits: u32) -> Result<i64, ParseFixedError> {
    let err = || ParseFixedError {
        input: s.to_string(),
        digits,
    };
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
        || frac_part.len() > digits as usize
        || (body.contains('.') && frac_part.is_empty())
    {
        return Err(err());
    }
    let scale = 10i64.pow(digits);
    let int: i64 = int_part.parse().map_err(|_| err())?;
    let mut frac: i64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| err())?
    };
    frac *= 10i64.pow(digits - frac_part.len() as u32);
    let value = int
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(err)?;
    Ok(if negative { -value } else { value })
}
