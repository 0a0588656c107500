//! Integers written as `d1` repeated `ell` times followed by `d2` repeated
//! `m` times.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcatPattern {
    pub d1: u8,
    pub d2: u8,
    pub ell: u32,
    pub m: u32,
}

impl ConcatPattern {
    pub fn new(d1: u8, d2: u8, ell: u32, m: u32) -> Result<Self> {
        let p = ConcatPattern { d1, d2, ell, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=9).contains(&self.d1) {
            return Err(Error::InvalidPattern(format!("leading digit {} not in 1..=9", self.d1)));
        }
        if self.d2 > 9 {
            return Err(Error::InvalidPattern(format!("digit {} not in 0..=9", self.d2)));
        }
        if self.d1 == self.d2 {
            return Err(Error::InvalidPattern(format!(
                "digits must differ (d1 = d2 = {})",
                self.d1
            )));
        }
        if self.ell == 0 || self.m == 0 {
            return Err(Error::InvalidPattern("block lengths must be at least 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for ConcatPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} {}^{}", self.d1, self.ell, self.d2, self.m)
    }
}

fn pow10(k: u32) -> BigInt {
    Pow::pow(BigInt::from(10u32), k)
}

/// `d · (10^k - 1) / 9`
pub fn repdigit_value(d: u8, k: u32) -> BigInt {
    assert!(d <= 9, "digit {d} out of range");
    BigInt::from(d) * (pow10(k) - 1) / 9
}

/// Value of the concatenation via the closed form
/// `(d1·10^(ell+m) - (d1 - d2)·10^m - d2) / 9`.
pub fn concat_value(p: &ConcatPattern) -> Result<BigInt> {
    p.validate()?;
    let d1 = BigInt::from(p.d1);
    let d2 = BigInt::from(p.d2);
    let ten_m = pow10(p.m);
    let num = &d1 * pow10(p.ell + p.m) - (&d1 - &d2) * &ten_m - &d2;
    Ok(num / 9)
}

/// The unique pattern whose value is `n`, if the decimal string of `n`
/// consists of exactly two maximal runs with a nonzero leading digit.
pub fn decompose(n: &BigInt) -> Option<ConcatPattern> {
    if n.is_negative() {
        return None;
    }
    let s = n.to_string();
    let bytes = s.as_bytes();
    let first = bytes[0];
    let split = bytes.iter().position(|&b| b != first)?;
    let second = bytes[split];
    if bytes[split..].iter().any(|&b| b != second) {
        return None;
    }
    ConcatPattern::new(
        first - b'0',
        second - b'0',
        split as u32,
        (bytes.len() - split) as u32,
    )
    .ok()
}
