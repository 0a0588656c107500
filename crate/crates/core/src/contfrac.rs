//! Certified continued-fraction expansion and the convergent statistics
//! used by the reduction step.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::realfield::{Ball, Precision};

/// Partial quotients `a0; a1, a2, ...` with exact convergents `p_k / q_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<BigInt>,
    convergents: Vec<(BigInt, BigInt)>,
}

impl ContinuedFraction {
    fn empty() -> Self {
        ContinuedFraction {
            quotients: Vec::new(),
            convergents: Vec::new(),
        }
    }

    pub fn from_quotients(quotients: Vec<BigInt>) -> Result<Self> {
        let mut cf = ContinuedFraction::empty();
        for (i, a) in quotients.into_iter().enumerate() {
            if a.is_negative() || (i > 0 && a.is_zero()) {
                return Err(Error::Domain {
                    op: "continued fraction",
                    detail: format!("partial quotient a{i} = {a}"),
                });
            }
            cf.push(a);
        }
        Ok(cf)
    }

    /// Exact expansion of a nonnegative rational by the Euclidean algorithm.
    pub fn from_rational(x: &BigRational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::Domain {
                op: "continued fraction",
                detail: "negative values are not expanded".into(),
            });
        }
        let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
        let mut cf = ContinuedFraction::empty();
        while !den.is_zero() {
            let (a, r) = num.div_mod_floor(&den);
            cf.push(a);
            num = std::mem::replace(&mut den, r);
        }
        Ok(cf)
    }

    fn push(&mut self, a: BigInt) {
        let k = self.convergents.len();
        let (p, q) = match k {
            0 => (a.clone(), BigInt::one()),
            1 => {
                let (p0, _) = &self.convergents[0];
                (&a * p0 + 1, a.clone())
            }
            _ => {
                let (p1, q1) = &self.convergents[k - 1];
                let (p2, q2) = &self.convergents[k - 2];
                (&a * p1 + p2, &a * q1 + q2)
            }
        };
        self.quotients.push(a);
        self.convergents.push((p, q));
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    pub fn convergent(&self, k: usize) -> Option<&(BigInt, BigInt)> {
        self.convergents.get(k)
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Index of the first convergent whose denominator exceeds `bound`.
    pub fn first_index_above(&self, bound: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > bound)
    }

    /// `p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)` for every `k >= 1`.
    pub fn determinant_identity_holds(&self) -> bool {
        self.convergents.windows(2).enumerate().all(|(i, w)| {
            let k = i + 1;
            let (p0, q0) = &w[0];
            let (p1, q1) = &w[1];
            let det = p1 * q0 - p0 * q1;
            let expect = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            det == expect
        })
    }

    pub fn convergents_reduced(&self) -> bool {
        self.convergents.iter().all(|(p, q)| p.gcd(q).is_one())
    }
}

/// When to stop emitting quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    /// Exactly this many quotients (fewer if the value is a terminating
    /// rational).
    Count(usize),
    /// Up to and including the first convergent with `q > bound`, plus
    /// `lookahead` further quotients.
    DenominatorAbove { bound: BigInt, lookahead: usize },
}

impl Stop {
    fn satisfied(&self, cf: &ContinuedFraction) -> bool {
        match self {
            Stop::Count(n) => cf.len() >= *n,
            Stop::DenominatorAbove { bound, lookahead } => cf
                .first_index_above(bound)
                .is_some_and(|i| cf.len() > i + lookahead),
        }
    }
}

enum Attempt {
    Done(ContinuedFraction),
    NeedsPrecision,
}

fn expand_ball(x: Ball, stop: &Stop) -> Result<Attempt> {
    let mut cf = ContinuedFraction::empty();
    let mut x = x;
    loop {
        let Some(a) = x.floor_certified() else {
            return Ok(Attempt::NeedsPrecision);
        };
        if a.is_negative() {
            return Err(Error::Domain {
                op: "continued fraction",
                detail: "negative values are not expanded".into(),
            });
        }
        let frac = &x - &Ball::from_int(a.clone(), x.precision());
        cf.push(a);
        if stop.satisfied(&cf) {
            return Ok(Attempt::Done(cf));
        }
        if frac.is_exact() && frac.mid().is_zero() {
            // terminating rational
            return match stop {
                Stop::Count(_) => Ok(Attempt::Done(cf)),
                Stop::DenominatorAbove { bound, .. } => {
                    Err(Error::InsufficientExpansion(bound.clone()))
                }
            };
        }
        if !frac.is_positive() {
            return Ok(Attempt::NeedsPrecision);
        }
        x = match frac.recip() {
            Ok(r) => r,
            Err(Error::DivisionByZero) => return Ok(Attempt::NeedsPrecision),
            Err(e) => return Err(e),
        };
    }
}

/// Expand the real produced by `source` at increasing precision.
///
/// A quotient is accepted only when every point of the current remainder's
/// enclosure has the same floor. Otherwise the precision doubles and the
/// expansion restarts from scratch; exceeding `cap` is fatal.
///
/// Returns the expansion together with the precision that certified it.
pub fn expand<F>(source: F, stop: &Stop, start: Precision, cap: Precision) -> Result<(ContinuedFraction, Precision)>
where
    F: Fn(Precision) -> Result<Ball>,
{
    let mut prec = start;
    loop {
        if prec > cap {
            return Err(Error::PrecisionExhausted(format!(
                "continued fraction needs more than {cap} digits"
            )));
        }
        match expand_ball(source(prec)?, stop)? {
            Attempt::Done(cf) => return Ok((cf, prec)),
            Attempt::NeedsPrecision => prec = prec.doubled(),
        }
    }
}

/// `a(M)`: the largest of `a_0 .. a_N`, where `N` is the first index with
/// `q_N > M`.
pub fn a_max(cf: &ContinuedFraction, bound: &BigInt) -> Result<BigInt> {
    let n = cf
        .first_index_above(bound)
        .ok_or_else(|| Error::InsufficientExpansion(bound.clone()))?;
    Ok(cf.quotients[..=n]
        .iter()
        .max()
        .expect("nonempty prefix")
        .clone())
}

/// `1 / ((a(M) + 2) y^2)`, a lower bound on `|kappa - x/y|` valid for every
/// integer `x` and every `0 < y < M`.
pub fn legendre_lower_bound(cf: &ContinuedFraction, bound: &BigInt, y: &BigInt, prec: Precision) -> Result<Ball> {
    if !y.is_positive() || y >= bound {
        return Err(Error::HypothesisViolated(format!("need 0 < y < M, got y = {y}, M = {bound}")));
    }
    let a = a_max(cf, bound)?;
    let den = (a + 2u32) * y * y;
    Ball::one(prec).div(&Ball::from_int(den, prec))
}
