//! Exact rationals in the unit interval.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `0 <= num <= den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational01 {
    num: u64,
    den: u64,
}

impl Rational01 {
    pub const ZERO: Rational01 = Rational01 { num: 0, den: 1 };
    pub const ONE: Rational01 = Rational01 { num: 1, den: 1 };

    /// Builds `num/den`, reducing it first.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if num > den {
            return Err(Error::InvalidInput(format!("{num}/{den} lies above 1")));
        }
        let g = num.gcd(&den);
        Ok(Rational01 { num: num / g, den: den / g })
    }

    /// Accepts `num/den` only when it is already in lowest terms.
    pub fn from_reduced(num: u64, den: u64) -> Result<Self> {
        let r = Self::new(num, den)?;
        if r.num != num || r.den != den {
            return Err(Error::InvalidInput(format!("{num}/{den} is not in lowest terms")));
        }
        Ok(r)
    }

    /// `k/n`, panicking on out-of-range input. Meant for chain constructors.
    pub fn ratio(k: u64, n: u64) -> Self {
        Self::new(k, n).expect("k/n must lie in [0,1]")
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    fn from_wide(num: u128, den: u128) -> Self {
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Rational01 {
            num: u64::try_from(num).expect("numerator overflow"),
            den: u64::try_from(den).expect("denominator overflow"),
        }
    }

    /// Truncated sum `min(x + y, 1)`.
    pub fn oplus(self, other: Self) -> Self {
        if self.den == other.den {
            let s = self.num + other.num;
            return if s >= self.den { Self::ONE } else { Self::from_wide(s as u128, self.den as u128) };
        }
        let den = self.den as u128 * other.den as u128;
        let num = self.num as u128 * other.den as u128 + other.num as u128 * self.den as u128;
        if num >= den {
            Self::ONE
        } else {
            Self::from_wide(num, den)
        }
    }

    /// Involution `1 - x`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Rational01 { num: self.den - self.num, den: self.den }
    }

    /// `max(x + y - 1, 0)`.
    pub fn odot(self, other: Self) -> Self {
        self.neg().oplus(other.neg()).neg()
    }

    pub fn join(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn meet(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    /// Exact product.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        Self::from_wide(self.num as u128 * other.num as u128, self.den as u128 * other.den as u128)
    }

    /// `x + y` when it stays in `[0,1]`.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        let den = self.den as u128 * other.den as u128;
        let num = self.num as u128 * other.den as u128 + other.num as u128 * self.den as u128;
        (num <= den).then(|| Self::from_wide(num, den))
    }

    /// `x - y` when `y <= x`.
    pub fn checked_sub(self, other: Self) -> Option<Self> {
        let den = self.den as u128 * other.den as u128;
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        (b <= a).then(|| Self::from_wide(a - b, den))
    }
}

impl Ord for Rational01 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational01 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized as the reduced pair `[num, den]`.
impl serde::Serialize for Rational01 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.num, self.den].serialize(s)
    }
}

impl fmt::Display for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational01 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot read `{s}` as a rational in [0,1]"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                Self::new(p, q)
            }
            None => Self::new(s.parse().map_err(|_| bad())?, 1),
        }
    }
}

/// The binary operations of the standard model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MvOp {
    Oplus,
    Odot,
    Join,
    Meet,
    Prod,
}

impl MvOp {
    pub fn apply(self, x: Rational01, y: Rational01) -> Rational01 {
        match self {
            MvOp::Oplus => x.oplus(y),
            MvOp::Odot => x.odot(y),
            MvOp::Join => x.join(y),
            MvOp::Meet => x.meet(y),
            MvOp::Prod => x.mul(y),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MvOp::Oplus => "⊕",
            MvOp::Odot => "⊙",
            MvOp::Join => "∨",
            MvOp::Meet => "∧",
            MvOp::Prod => "·",
        }
    }
}
