use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Radii are only ever needed to a few significant bits.
const RAD_BITS: u64 = 62;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(256);

    pub const fn digits(d: u32) -> Self {
        Precision(d)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Binary working precision of midpoints.
    pub fn bits(self) -> u64 {
        (self.0 as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 8
    }

    pub fn doubled(self) -> Self {
        Precision(self.0.saturating_mul(2))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A certified real number: the true value lies in `[mid - rad, mid + rad]`.
///
/// Arithmetic rounds midpoints to the working precision and folds every
/// rounding error into the radius, so enclosures only ever grow outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: Precision,
}

fn rad_up(x: &Dyadic) -> Dyadic {
    x.round(RAD_BITS, Round::Ceil)
}

impl Ball {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: Precision) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        Ball {
            mid,
            rad: rad_up(&rad),
            prec,
        }
    }

    pub fn exact(mid: Dyadic, prec: Precision) -> Self {
        Ball {
            mid,
            rad: Dyadic::zero(),
            prec,
        }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: Precision) -> Self {
        Ball::exact(Dyadic::from_int(v), prec)
    }

    pub fn zero(prec: Precision) -> Self {
        Ball::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: Precision) -> Self {
        Ball::exact(Dyadic::one(), prec)
    }

    pub fn from_rational(r: &BigRational, prec: Precision) -> Self {
        let n = Ball::from_int(r.numer().clone(), prec);
        let d = Ball::from_int(r.denom().clone(), prec);
        n.div(&d).expect("rational denominators are nonzero")
    }

    /// Smallest ball containing both endpoints.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: Precision) -> Self {
        assert!(lo <= hi, "reversed endpoints");
        let sum = lo + hi;
        let mid = sum.shl(-1);
        let rad = (hi - lo).shl(-1);
        Ball::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        &self.mid - &self.rad
    }

    pub fn upper(&self) -> Dyadic {
        &self.mid + &self.rad
    }

    /// Upper bound on `|x|` over the enclosure.
    pub fn mag(&self) -> Dyadic {
        rad_up(&(&self.mid.abs() + &self.rad))
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lower().cmp_rational(r).is_le() && self.upper().cmp_rational(r).is_ge()
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &Ball) -> bool {
        self.upper() < other.lower()
    }

    /// Certified `self > other`.
    pub fn gt(&self, other: &Ball) -> bool {
        other.lt(self)
    }

    /// Certified `self < r`.
    pub fn lt_rational(&self, r: &BigRational) -> bool {
        self.upper().cmp_rational(r).is_lt()
    }

    /// Certified `self > r`.
    pub fn gt_rational(&self, r: &BigRational) -> bool {
        self.lower().cmp_rational(r).is_gt()
    }

    /// Certified `self <= r`.
    pub fn le_rational(&self, r: &BigRational) -> bool {
        self.upper().cmp_rational(r).is_le()
    }

    /// The common floor of every point in the enclosure, if there is one.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let lo = self.lower().floor();
        (lo == self.upper().floor()).then_some(lo)
    }

    pub fn with_precision(&self, prec: Precision) -> Ball {
        let mut b = self.clone();
        b.prec = prec;
        b.rounded()
    }

    /// Widen the radius by a nonnegative amount.
    pub fn inflate(&self, extra: &Dyadic) -> Ball {
        Ball::new(self.mid.clone(), &self.rad + extra, self.prec)
    }

    fn rounded(self) -> Ball {
        let (mid, err) = self.mid.round_with_error(self.prec.bits());
        let rad = if err.is_zero() {
            self.rad
        } else {
            rad_up(&(&self.rad + &err))
        };
        Ball {
            mid,
            rad,
            prec: self.prec,
        }
    }

    fn combine(mid: Dyadic, rad: Dyadic, prec: Precision) -> Ball {
        Ball {
            mid,
            rad: rad_up(&rad),
            prec,
        }
        .rounded()
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Ball {
        self * &Ball::from_int(k, self.prec)
    }

    /// `self · 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Ball {
        Ball {
            mid: self.mid.shl(k),
            rad: self.rad.shl(k),
            prec: self.prec,
        }
    }

    pub fn div(&self, other: &Ball) -> Result<Ball> {
        let prec = self.prec.max(other.prec);
        let den_lo = &other.mid.abs() - &other.rad;
        if !den_lo.is_positive() {
            return Err(Error::DivisionByZero);
        }
        let bits = prec.bits();
        let (q, q_up) = self.mid.div_bracket(&other.mid, bits);
        let trunc = &q_up - &q;
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            trunc
        } else {
            // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
            let qmag = rad_up(&q.abs().max(q_up.abs()));
            let num = rad_up(&(&self.rad + &(&qmag * &other.rad)));
            let den = den_lo.round(RAD_BITS, Round::Floor);
            let prop = num.div_round(&den, RAD_BITS, Round::Ceil);
            &prop + &trunc
        };
        Ok(Ball::combine(q, rad, prec))
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.prec).div(self)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// the reciprocal.
    pub fn powi(&self, n: i64) -> Result<Ball> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut result = Ball::one(self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Scientific-notation rendering of the lower endpoint, rounded down.
    pub fn lower_sci(&self, sig: u32) -> String {
        self.lower().to_sci(sig, Round::Floor)
    }

    /// Scientific-notation rendering of the upper endpoint, rounded up.
    pub fn upper_sci(&self, sig: u32) -> String {
        self.upper().to_sci(sig, Round::Ceil)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

impl<'a> Add<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        Ball::combine(
            &self.mid + &rhs.mid,
            &self.rad + &rhs.rad,
            self.prec.max(rhs.prec),
        )
    }
}

impl<'a> Sub<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        Ball::combine(
            &self.mid - &rhs.mid,
            &self.rad + &rhs.rad,
            self.prec.max(rhs.prec),
        )
    }
}

impl<'a> Mul<&'a Ball> for &'a Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        let prec = self.prec.max(rhs.prec);
        let mid = &self.mid * &rhs.mid;
        if self.rad.is_zero() && rhs.rad.is_zero() {
            return Ball::combine(mid, Dyadic::zero(), prec);
        }
        let am = rad_up(&self.mid.abs());
        let bm = rad_up(&rhs.mid.abs());
        let rad = &(&(&am * &rhs.rad) + &(&bm * &self.rad)) + &(&self.rad * &rhs.rad);
        Ball::combine(mid, rad, prec)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -&self
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20) as u32;
        write!(
            f,
            "[{} ± {}]",
            self.mid.to_sci(sig, Round::Floor),
            self.rad.to_sci(3, Round::Ceil)
        )
    }
}

/// Parse a decimal literal such as `0.0393724`, `-2.5`, `1.46e30` or
/// `6e47` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / 10;
    let scale = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Exact decimal constant as a rational. Panics on malformed literals, so
/// only use with literals written in the source.
pub fn decimal(s: &str) -> BigRational {
    parse_decimal(s).unwrap_or_else(|| panic!("malformed decimal literal {s:?}"))
}

/// Ball enclosing a decimal literal.
pub fn decimal_ball(s: &str, prec: Precision) -> Ball {
    Ball::from_rational(&decimal(s), prec)
}
