//! Reduction of huge exponent bounds: Dujella–Pethő, the Legendre fallback
//! for `mu = 0`, and the Gúzman Sánchez–Luca absolute bound.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::contfrac::{a_max, ContinuedFraction};
use crate::error::{Error, Result};
use crate::realfield::Ball;

/// Further convergents tried after the first `q > 6M` when epsilon is not
/// certified positive.
pub const MAX_RETRIES: usize = 10;

/// `0 < |m kappa - n + mu| < A B^(-k)` with `m <= M`.
#[derive(Clone, Debug)]
pub struct ReductionProblem {
    pub kappa: Ball,
    pub mu: Ball,
    pub m_bound: BigInt,
    pub a: Ball,
    pub b: Ball,
}

impl ReductionProblem {
    pub fn new(kappa: Ball, mu: Ball, m_bound: BigInt, a: Ball, b: Ball) -> Result<Self> {
        let p = ReductionProblem {
            kappa,
            mu,
            m_bound,
            a,
            b,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_positive() {
            return Err(Error::HypothesisViolated("A > 0 is not certified".into()));
        }
        if !self.b.gt(&Ball::one(self.b.precision())) {
            return Err(Error::HypothesisViolated("B > 1 is not certified".into()));
        }
        if self.m_bound <= BigInt::one() {
            return Err(Error::HypothesisViolated(format!("M = {} must exceed 1", self.m_bound)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DujellaPetho,
    Legendre,
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    /// 0-based index of the convergent used.
    pub q_index: usize,
    pub q_used: BigInt,
    /// Certified `||mu q|| - M ||kappa q||`; absent for the Legendre method.
    pub epsilon: Option<Ball>,
    /// The quantity whose strict lower integers bound `k`.
    pub exponent: Ball,
    /// Greatest integer strictly below `exponent`: every solution has
    /// `k <= k_bound`.
    pub k_bound: i64,
    pub method: Method,
}

/// Certified pieces of epsilon at one denominator.
#[derive(Clone, Debug)]
pub struct EpsilonParts {
    pub mu_q: Ball,
    pub kappa_q: Ball,
    pub epsilon: Ball,
}

/// `||mu q||`, `||kappa q||` and `||mu q|| - M ||kappa q||`. Only `kappa` and
/// `mu` carry radii; `q` and `M` are exact.
pub fn epsilon_parts(problem: &ReductionProblem, q: &BigInt) -> Result<EpsilonParts> {
    let prec = problem.kappa.precision();
    let qb = Ball::from_int(q.clone(), prec);
    let mu_q = (&problem.mu * &qb).dist_to_nearest_int()?;
    let kappa_q = (&problem.kappa * &qb).dist_to_nearest_int()?;
    let epsilon = &mu_q - &kappa_q.mul_int(problem.m_bound.clone());
    Ok(EpsilonParts {
        mu_q,
        kappa_q,
        epsilon,
    })
}

/// Greatest integer strictly below every point of `x`.
fn strict_floor(x: &Ball) -> Result<i64> {
    (x.upper().ceil() - 1u32)
        .to_i64()
        .ok_or_else(|| Error::Domain {
            op: "reduction",
            detail: format!("bound {x} does not fit in 64 bits"),
        })
}

/// One Dujella–Pethő attempt at convergent `index`. Returns `Ok(None)` when
/// epsilon is not certified positive there.
pub fn dujella_petho_at(problem: &ReductionProblem, cf: &ContinuedFraction, index: usize) -> Result<Option<ReductionOutcome>> {
    let (_, q) = cf
        .convergent(index)
        .ok_or_else(|| Error::InsufficientExpansion(problem.m_bound.clone() * 6))?;
    let parts = epsilon_parts(problem, q)?;
    if !parts.epsilon.is_positive() {
        return Ok(None);
    }
    let prec = problem.kappa.precision();
    let eps_lo = Ball::exact(parts.epsilon.lower(), prec);
    let arg = (&problem.a * &Ball::from_int(q.clone(), prec)).div(&eps_lo)?;
    let exponent = arg.ln()?.div(&problem.b.ln()?)?;
    Ok(Some(ReductionOutcome {
        q_index: index,
        q_used: q.clone(),
        k_bound: strict_floor(&exponent)?,
        exponent,
        epsilon: Some(parts.epsilon),
        method: Method::DujellaPetho,
    }))
}

/// Reduce with the first convergent `q > 6M`, advancing up to
/// [`MAX_RETRIES`] further convergents while epsilon is not certified
/// positive.
pub fn dujella_petho(problem: &ReductionProblem, cf: &ContinuedFraction) -> Result<ReductionOutcome> {
    problem.validate()?;
    let six_m = &problem.m_bound * 6;
    let start = cf
        .first_index_above(&six_m)
        .ok_or(Error::InsufficientExpansion(six_m))?;
    let last = (start + MAX_RETRIES).min(cf.len() - 1);
    for index in start..=last {
        if let Some(out) = dujella_petho_at(problem, cf, index)? {
            return Ok(out);
        }
    }
    Err(Error::EpsilonNotPositive {
        tried: last - start + 1,
    })
}

/// Bound `k` in `|kappa - x/y| < A' / (B^k y)` with `0 < y < M`, using
/// `1/((a(M)+2) y^2) <= |kappa - x/y|`: every solution has
/// `k < log((a(M)+2) A' M) / log B`.
pub fn legendre_reduce(cf: &ContinuedFraction, m_bound: &BigInt, a: &Ball, b: &Ball) -> Result<ReductionOutcome> {
    let index = cf
        .first_index_above(m_bound)
        .ok_or_else(|| Error::InsufficientExpansion(m_bound.clone()))?;
    let prec = a.precision();
    let am = a_max(cf, m_bound)?;
    let factor = Ball::from_int((am + 2u32) * m_bound, prec);
    let exponent = (&factor * a).ln()?.div(&b.ln()?)?;
    Ok(ReductionOutcome {
        q_index: index,
        q_used: cf.convergents()[index].1.clone(),
        epsilon: None,
        k_bound: strict_floor(&exponent)?,
        exponent,
        method: Method::Legendre,
    })
}

fn check_guzman_luca_hypothesis(r: u32, h: &Ball) -> Result<()> {
    let threshold = Ball::from_int(BigInt::from(4 * r * r).pow(r), h.precision());
    if h.gt(&threshold) {
        Ok(())
    } else if h.upper() <= threshold.lower() {
        Err(Error::HypothesisViolated(format!(
            "H = {} is not above (4r^2)^r = {}",
            h.upper_sci(6),
            threshold.lower_sci(6)
        )))
    } else {
        Err(Error::PrecisionExhausted("cannot separate H from (4r^2)^r".into()))
    }
}

/// If `L / (log L)^r < H` and `H > (4r^2)^r`, then `L < 2^r H (log H)^r`.
/// Returns that bound.
pub fn guzman_luca(r: u32, h: &Ball) -> Result<Ball> {
    assert!(r >= 1, "r must be at least 1");
    check_guzman_luca_hypothesis(r, h)?;
    let log_h = h.ln()?;
    Ok((h * &log_h.powi(r as i64)?).mul_pow2(r as i64))
}

/// Absolute bound for `n < H (1 + log n)^r`.
///
/// Substituting `L = e n` gives `L / (log L)^r < e H`, so the lemma applies
/// to `e H` and yields `n < 2^r H (1 + log H)^r`.
pub fn guzman_luca_shifted(r: u32, h: &Ball) -> Result<Ball> {
    assert!(r >= 1, "r must be at least 1");
    let prec = h.precision();
    let log_h = h.ln()?;
    let one = Ball::one(prec);
    // e H > (4r^2)^r  <=>  1 + log H > r log(4 r^2)
    let lhs = &one + &log_h;
    let rhs = Ball::from_int(4 * r * r, prec).ln()?.mul_int(r);
    if !lhs.gt(&rhs) {
        return Err(Error::HypothesisViolated(format!(
            "e H = e * {} is not above (4r^2)^r",
            h.upper_sci(6)
        )));
    }
    Ok((h * &lhs.powi(r as i64)?).mul_pow2(r as i64))
}
