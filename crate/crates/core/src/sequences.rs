//! Exact Perrin terms and certified checks of the Binet residual and the
//! growth envelope.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::realfield::{plastic_root, Ball, Precision};

/// A linear recurrence `X(n + order) = sum_i coefficients[i] · X(n + i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    coefficients: Vec<BigInt>,
    initial_terms: Vec<BigInt>,
}

impl RecurrenceSpec {
    /// `P(n+3) = P(n+1) + P(n)`, `P0 = 3`, `P1 = 0`, `P2 = 2`.
    pub fn perrin() -> Self {
        RecurrenceSpec {
            coefficients: vec![BigInt::one(), BigInt::one(), BigInt::zero()],
            initial_terms: vec![BigInt::from(3), BigInt::zero(), BigInt::from(2)],
        }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn initial_terms(&self) -> &[BigInt] {
        &self.initial_terms
    }

    /// Characteristic polynomial, highest degree first. For Perrin this is
    /// `x^3 - x - 1`, i.e. `[1, 0, -1, -1]`.
    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        let mut poly = vec![BigInt::one()];
        poly.extend(self.coefficients.iter().rev().map(|c| -c));
        poly
    }
}

/// Append-only table of exact terms.
///
/// Extension needs `&mut self`; once a prefix is filled the cache can be
/// shared immutably across threads and read with [`SequenceCache::get`] /
/// [`SequenceCache::terms`].
#[derive(Clone, Debug)]
pub struct SequenceCache {
    spec: RecurrenceSpec,
    terms: Vec<BigInt>,
}

impl SequenceCache {
    pub fn new(spec: RecurrenceSpec) -> Self {
        let terms = spec.initial_terms.clone();
        SequenceCache { spec, terms }
    }

    pub fn perrin() -> Self {
        SequenceCache::new(RecurrenceSpec::perrin())
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    /// Number of cached terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ensure indices `0..=n` are cached.
    pub fn extend_to(&mut self, n: usize) {
        let k = self.spec.order();
        while self.terms.len() <= n {
            let base = self.terms.len() - k;
            let next = self
                .spec
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| c * &self.terms[base + i])
                .fold(BigInt::zero(), |acc, x| acc + x);
            self.terms.push(next);
        }
    }

    /// Exact term `n`, extending the cache as needed.
    pub fn term(&mut self, n: usize) -> &BigInt {
        self.extend_to(n);
        &self.terms[n]
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.terms.get(n)
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }
}

/// The dominant root `alpha` of `x^3 - x - 1`, the common modulus
/// `|beta| = |gamma| = alpha^(-1/2)` of the complex pair, and `log alpha`.
#[derive(Clone, Debug)]
pub struct RootData {
    pub alpha: Ball,
    pub beta_modulus: Ball,
    pub log_alpha: Ball,
}

impl RootData {
    pub fn new(prec: Precision) -> Self {
        let alpha = plastic_root(prec);
        let beta_modulus = alpha
            .recip()
            .and_then(|r| r.sqrt())
            .expect("alpha is bounded away from zero");
        let log_alpha = alpha.ln().expect("alpha > 1");
        RootData {
            alpha,
            beta_modulus,
            log_alpha,
        }
    }

    pub fn precision(&self) -> Precision {
        self.alpha.precision()
    }

    /// `log 10 / log alpha`.
    pub fn tau(&self) -> Ball {
        let ln10 = Ball::from_int(10, self.precision()).ln().expect("10 > 0");
        ln10.div(&self.log_alpha).expect("log alpha > 0")
    }
}

/// Certified enclosure of `|P(n) - alpha^n|`, after checking that it lies
/// strictly below `3 alpha^(-n/2)`.
pub fn binet_residual(cache: &mut SequenceCache, roots: &RootData, n: usize) -> Result<Ball> {
    assert!(n >= 1, "the residual bound is stated for n >= 1");
    let prec = roots.precision();
    let p = Ball::from_int(cache.term(n).clone(), prec);
    let power = roots.alpha.powi(n as i64)?;
    let residual = (&p - &power).abs();
    let bound = roots.beta_modulus.powi(n as i64)?.mul_int(3);
    if residual.lt(&bound) {
        Ok(residual)
    } else if residual.gt(&bound) {
        Err(Error::HypothesisViolated(format!(
            "|P({n}) - alpha^{n}| exceeds 3 alpha^(-{n}/2)"
        )))
    } else {
        Err(Error::PrecisionExhausted(format!(
            "cannot separate Binet residual at n = {n} with {prec} digits"
        )))
    }
}

/// Certified check of `alpha^(n-2) <= P(n) <= alpha^(n+1)`.
pub fn growth_envelope_check(cache: &mut SequenceCache, roots: &RootData, n: usize) -> Result<bool> {
    assert!(n >= 2, "the envelope is stated for n >= 2");
    let prec = roots.precision();
    let p = Ball::from_int(cache.term(n).clone(), prec);
    let low = roots.alpha.powi(n as i64 - 2)?;
    let high = roots.alpha.powi(n as i64 + 1)?;
    let below = low.upper() <= p.lower();
    let above = p.upper() <= high.lower();
    if below && above {
        return Ok(true);
    }
    if low.gt(&p) || p.gt(&high) {
        return Ok(false);
    }
    Err(Error::PrecisionExhausted(format!(
        "cannot certify growth envelope at n = {n} with {prec} digits"
    )))
}
