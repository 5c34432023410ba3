//! Exact rational multipliers `m = num/den > 1`.
//!
//! Every comparison of the form `q < m*p` is carried out as `q*den < p*num`
//! in 128-bit arithmetic, so interval endpoints are never rounded.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Multiplier {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Multiplier {
    pub const TWO: Multiplier = Multiplier { num: 2, den: 1 };

    /// Builds `num/den` in lowest terms; rejects `m <= 1`.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("multiplier denominator is zero"));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g.max(1), den / g.max(1));
        if num <= den {
            return Err(Error::invalid(format!("multiplier must exceed 1, got {num}/{den}")));
        }
        Ok(Multiplier { num, den })
    }

    pub fn integer(m: u64) -> Result<Self> {
        Self::new(m, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_two(&self) -> bool {
        *self == Self::TWO
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(x / m)`.
    pub fn shrink_floor(&self, x: u64) -> u64 {
        ((x as u128 * self.den as u128) / self.num as u128) as u64
    }

    /// `floor(m * x)`, or an overflow error when it leaves `u64`.
    pub fn scale_floor(&self, x: u64) -> Result<u64> {
        let v = (x as u128 * self.num as u128) / self.den as u128;
        u64::try_from(v).map_err(|_| Error::Overflow(format!("{self}*{x}")))
    }

    /// `ceil(m * x)`.
    pub fn scale_ceil(&self, x: u64) -> Result<u64> {
        let v = (x as u128 * self.num as u128).div_ceil(self.den as u128);
        u64::try_from(v).map_err(|_| Error::Overflow(format!("{self}*{x}")))
    }

    /// Compares `q` with `m * p` exactly.
    pub fn cmp_scaled(&self, q: u64, p: u64) -> Ordering {
        (q as u128 * self.den as u128).cmp(&(p as u128 * self.num as u128))
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Multiplier {
    type Err = Error;

    /// Accepts `"NUM/DEN"` or a plain integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim().parse::<u64>().map_err(|_| Error::invalid(format!("cannot parse multiplier {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Self::integer(parse(s)?),
        }
    }
}

impl Serialize for Multiplier {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Multiplier {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
