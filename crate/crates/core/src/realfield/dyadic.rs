//! Exact dyadic rationals `mant · 2^exp`.
//!
//! Every endpoint handled by the ball arithmetic is a dyadic, so comparisons
//! against integers and decimal constants are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
}

/// Exact value `mant · 2^exp`, kept normalised (odd mantissa, or zero with
/// exponent 0) so that structural equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the leading bit: `|x|` lies in `[2^(k-1), 2^k)`.
    /// Meaningless for zero.
    pub fn magnitude_exp(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `bits` significant bits in the given direction.
    pub fn round(&self, bits: u64, dir: Round) -> Self {
        let have = self.mant.bits();
        if have <= bits {
            return self.clone();
        }
        let s = have - bits;
        let mant = match dir {
            // BigInt >> rounds toward negative infinity.
            Round::Floor => &self.mant >> s,
            Round::Ceil => -((-&self.mant) >> s),
        };
        Dyadic::new(mant, self.exp + s as i64)
    }

    /// Round toward negative infinity to `bits` significant bits and return
    /// the (exact, nonnegative) rounding error alongside.
    pub fn round_with_error(&self, bits: u64) -> (Self, Self) {
        let r = self.round(bits, Round::Floor);
        let err = self - &r;
        (r, err)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Quotient of two dyadics rounded in the given direction to roughly
    /// `bits` significant bits. Exact whenever the quotient is a dyadic that
    /// fits. Panics on a zero divisor.
    pub fn div_round(&self, other: &Self, bits: u64, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let negative = self.is_negative() != other.is_negative();
        let num = self.mant.abs();
        let den = other.mant.abs();
        let shift = (bits as i64 + den.bits() as i64 - num.bits() as i64 + 2).max(0) as u64;
        let (q, r) = (num << shift).div_rem(&den);
        // magnitude rounding direction flips for negative quotients
        let round_up_mag = !r.is_zero()
            && match dir {
                Round::Ceil => !negative,
                Round::Floor => negative,
            };
        let q = if round_up_mag { q + 1u32 } else { q };
        let q = if negative { -q } else { q };
        Dyadic::new(q, self.exp - other.exp - shift as i64)
    }

    /// Floor and ceiling of the quotient at a common scale, from a single
    /// long division. Panics on a zero divisor.
    pub fn div_bracket(&self, other: &Self, bits: u64) -> (Self, Self) {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let shift = (bits as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0) as u64;
        let (q, r) = (&self.mant << shift).div_mod_floor(&other.mant);
        let exp = self.exp - other.exp - shift as i64;
        if r.is_zero() {
            let q = Dyadic::new(q, exp);
            (q.clone(), q)
        } else {
            let up = &q + 1u32;
            (Dyadic::new(q, exp), Dyadic::new(up, exp))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // denominators of BigRational are kept positive
        let (n, d) = (r.numer(), r.denom());
        if self.exp >= 0 {
            ((&self.mant << (self.exp as u64)) * d).cmp(n)
        } else {
            (&self.mant * d).cmp(&(n << ((-self.exp) as u64)))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits();
        let (m, e) = if b > 60 {
            (&self.mant >> (b - 60), self.exp + (b - 60) as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        scale_f64(m, e)
    }

    /// Scientific notation with `sig` significant digits, rounded in `dir`.
    pub fn to_sci(&self, sig: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let ten = BigInt::from(10u32);
        let lo = ten.pow(sig - 1);
        let hi = ten.pow(sig);
        let mut e10 = (self.magnitude_exp() as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let scaled = loop {
            let shift = sig as i64 - 1 - e10;
            let s = self.scaled_pow10(shift, dir);
            let a = s.abs();
            if a >= hi {
                e10 += 1;
            } else if a < lo {
                e10 -= 1;
            } else {
                break s;
            }
        };
        let digits = scaled.abs().to_string();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// `round(self · 10^k)` to an integer in direction `dir`.
    fn scaled_pow10(&self, k: i64, dir: Round) -> BigInt {
        let ten = BigInt::from(10u32);
        let (num, den) = if k >= 0 {
            (&self.mant * ten.pow(k as u32), BigInt::one())
        } else {
            (self.mant.clone(), ten.pow((-k) as u32))
        };
        let (num, den) = if self.exp >= 0 {
            (num << (self.exp as u64), den)
        } else {
            (num, den << ((-self.exp) as u64))
        };
        match dir {
            Round::Floor => num.div_floor(&den),
            Round::Ceil => -((-num).div_floor(&den)),
        }
    }
}

fn scale_f64(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        (self - other).mant.sign().cmp(&Sign::NoSign)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(20, Round::Floor))
    }
}
