use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use super::ball::{Ball, Precision};
use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Square roots taken before the atanh series; each halves the argument's
/// logarithm and roughly doubles the bits gained per term.
const LOG_SQRT_STEPS: i64 = 4;

/// Extra decimal digits carried internally by `ln`.
const LOG_GUARD_DIGITS: u32 = 20;

impl Ball {
    pub fn sqrt(&self) -> Result<Ball> {
        if self.lower().is_negative() {
            return Err(Error::Domain {
                op: "sqrt",
                detail: format!("enclosure {self} reaches below zero"),
            });
        }
        let prec = self.precision();
        if self.mid().is_zero() {
            // lower >= 0 forces an exact zero here
            return Ok(Ball::zero(prec));
        }
        let bits = prec.bits();
        let mant = self.mid().mantissa();
        let e = self.mid().exponent();
        let mut t = (2 * bits as i64 + 2 - mant.bits() as i64).max(0);
        if (e - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let scaled: BigInt = mant << (t as u64);
        let root = scaled.sqrt();
        let half = (e - t) / 2;
        let exact = &root * &root == scaled;
        let s = Dyadic::new(root, half);
        let mut rad = if exact { Dyadic::zero() } else { Dyadic::pow2(half) };
        if !self.rad().is_zero() {
            // |sqrt(x) - sqrt(m)| <= r / sqrt(m), and s <= sqrt(m)
            rad = &rad + &self.rad().div_round(&s, 64, Round::Ceil);
        }
        Ok(Ball::new(s, rad, prec).with_precision(prec))
    }

    pub fn ln(&self) -> Result<Ball> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::Domain {
                op: "ln",
                detail: format!("enclosure {self} is not strictly positive"),
            });
        }
        let prec = self.precision();
        let work = Precision::digits(prec.get() + LOG_GUARD_DIGITS);
        let center = ln_dyadic(self.mid(), work)?;
        let out = if self.rad().is_zero() {
            center
        } else {
            // mean value bound: |ln x - ln m| <= r / min(x)
            center.inflate(&self.rad().div_round(&lo, 64, Round::Ceil))
        };
        Ok(out.with_precision(prec))
    }

    /// Enclosure of the distance from `x` to the nearest integer.
    ///
    /// Fails when the radius is too large to identify the nearest integer, or
    /// when the enclosure reaches a half-integer.
    pub fn dist_to_nearest_int(&self) -> Result<Ball> {
        let quarter = Dyadic::pow2(-2);
        let half = Dyadic::pow2(-1);
        if *self.rad() >= quarter {
            return Err(Error::PrecisionExhausted(format!(
                "radius {} too large for nearest-integer distance",
                self.rad()
            )));
        }
        let n = (self.mid() + &half).floor();
        let d = (self.mid() - &Dyadic::from_int(n)).abs();
        let hi = &d + self.rad();
        if hi > half {
            return Err(Error::AmbiguousMidpoint);
        }
        let lo = &d - self.rad();
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        Ok(Ball::from_endpoints(&lo, &hi, self.precision()))
    }
}

/// `atanh(z) = z + z^3/3 + z^5/5 + ...` for `|z| <= 1/2`.
fn atanh_series(z: &Ball) -> Ball {
    let prec = z.precision();
    let z2 = z * z;
    debug_assert!(z2.mag() <= Dyadic::pow2(-2));
    let eps = Dyadic::pow2(-(prec.bits() as i64) - 4);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k: u64 = 1;
    loop {
        power = &power * &z2;
        let term = power
            .div(&Ball::from_int(2 * k + 1, prec))
            .expect("odd integer divisor");
        sum = &sum + &term;
        if power.mag() < eps {
            break;
        }
        k += 1;
    }
    // remaining terms are dominated by a geometric series with ratio <= 1/4
    let tail = (&power.mag() * &z2.mag()).shl(1);
    sum.inflate(&tail)
}

fn ln2_uncached(prec: Precision) -> Ball {
    let atanh_inv = |n: u32| {
        let z = Ball::one(prec)
            .div(&Ball::from_int(n, prec))
            .expect("nonzero");
        atanh_series(&z)
    };
    let a = atanh_inv(26).mul_int(18);
    let b = atanh_inv(4801).mul_int(2);
    let c = atanh_inv(8749).mul_int(8);
    &(&a - &b) + &c
}

/// Certified `ln 2`, memoised per precision.
pub fn ln2(prec: Precision) -> Ball {
    static CACHE: OnceLock<Mutex<HashMap<Precision, Ball>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("ln2 cache poisoned").get(&prec) {
        return b.clone();
    }
    let b = ln2_uncached(prec);
    cache
        .lock()
        .expect("ln2 cache poisoned")
        .insert(prec, b.clone());
    b
}

fn ln_dyadic(x: &Dyadic, work: Precision) -> Result<Ball> {
    if *x == Dyadic::one() {
        return Ok(Ball::zero(work));
    }
    let mut k = x.magnitude_exp();
    let mut y = x.shl(-k);
    if (&y * &y).shl(1) < Dyadic::one() {
        y = y.shl(1);
        k -= 1;
    }
    // y in [1/sqrt 2, sqrt 2)
    let one = Ball::one(work);
    let mut yb = Ball::exact(y, work);
    for _ in 0..LOG_SQRT_STEPS {
        yb = yb.sqrt()?;
    }
    let z = (&yb - &one).div(&(&yb + &one))?;
    let ln_y = atanh_series(&z).mul_pow2(1 + LOG_SQRT_STEPS);
    if k == 0 {
        Ok(ln_y)
    } else {
        Ok(&ln_y + &ln2(work).mul_int(k))
    }
}

/// `phi(x) = x^3 - x - 1`, exact on dyadics.
fn plastic_poly(x: &Dyadic) -> Dyadic {
    let x3 = &(x * x) * x;
    &(&x3 - x) - &Dyadic::one()
}

/// Certified enclosure of the real root of `x^3 - x - 1` with radius at most
/// `10^-digits`.
///
/// Newton's method supplies a candidate; the enclosure is certified by exact
/// sign evaluation of the cubic at both endpoints (it is increasing on
/// `[1.32, 1.33]`).
pub fn plastic_root(prec: Precision) -> Ball {
    assert!(prec.get() >= 2, "plastic_root needs at least two digits");
    let bits = prec.bits();
    let work = bits + 16;
    let mut x = Dyadic::from_int(13247).div_round(&Dyadic::from_int(10000), 64, Round::Floor);
    let stop = Dyadic::pow2(-(bits as i64) - 8);
    for _ in 0..200 {
        let f = plastic_poly(&x);
        let df = &(&(&x * &x) * &Dyadic::from_int(3)) - &Dyadic::one();
        let step = f.div_round(&df, work, Round::Floor);
        x = (&x - &step).round(work, Round::Floor);
        if step.abs() < stop {
            break;
        }
    }
    let mut delta = Dyadic::pow2(-(bits as i64));
    loop {
        let lo = &x - &delta;
        let hi = &x + &delta;
        if plastic_poly(&lo).is_negative() && plastic_poly(&hi).is_positive() {
            return Ball::new(x, delta, prec);
        }
        // only reached if Newton stopped short
        delta = delta.shl(1);
    }
}

/// Natural logarithm with the midpoint error bounded by `10^-digits`, plus
/// whatever radius the argument carries.
pub fn log_certified(x: &Ball, prec: Precision) -> Result<Ball> {
    x.with_precision(prec.max(x.precision())).ln()
}
