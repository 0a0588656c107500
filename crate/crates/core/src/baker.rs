//! Heights, the Bugeaud–Mignotte–Siksek lower bound, and the chain of
//! initial bounds on `ell`, `n` and `ell + m`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realfield::{decimal, Ball, Precision};
use crate::reduction::{guzman_luca, guzman_luca_shifted};
use crate::sequences::RootData;

/// A certified logarithmic Weil height (or an upper bound for one).
#[derive(Clone, Debug)]
pub struct HeightValue {
    pub value: Ball,
    pub description: String,
}

/// `h(p/q) = log max(|p|, q)` for reduced `p/q`.
pub fn height_rational(p: &BigInt, q: &BigInt, prec: Precision) -> Result<HeightValue> {
    if !q.is_positive() || !p.gcd(q).is_one() {
        return Err(Error::NonReduced {
            p: p.clone(),
            q: q.clone(),
        });
    }
    let top = p.abs().max(q.clone());
    let value = if top.is_one() {
        Ball::zero(prec)
    } else {
        Ball::from_int(top, prec).ln()?
    };
    Ok(HeightValue {
        value,
        description: format!("h({p}/{q})"),
    })
}

/// `h(alpha) = log(alpha) / 3`: the minimal polynomial is monic and only
/// `alpha` lies outside the unit circle.
pub fn height_alpha(roots: &RootData) -> HeightValue {
    HeightValue {
        value: roots.log_alpha.div(&Ball::from_int(3, roots.precision())).expect("3 != 0"),
        description: "h(alpha)".into(),
    }
}

/// Upper bound `4 log 9 + ell log 10` on `h((d1 10^ell - (d1 - d2)) / 9)`.
pub fn height_eta1_step2(d1: u8, d2: u8, ell: u32, prec: Precision) -> Result<HeightValue> {
    check_digits(d1, d2, ell)?;
    let log9 = Ball::from_int(9, prec).ln()?;
    let log10 = Ball::from_int(10, prec).ln()?;
    Ok(HeightValue {
        value: &log9.mul_int(4) + &log10.mul_int(ell),
        description: format!("h(({d1}*10^{ell} - {})/9) bound", d1 as i32 - d2 as i32),
    })
}

fn check_digits(d1: u8, d2: u8, ell: u32) -> Result<()> {
    if !(1..=9).contains(&d1) || d2 > 9 || d1 == d2 || ell == 0 {
        return Err(Error::InvalidPattern(format!("d1 = {d1}, d2 = {d2}, ell = {ell}")));
    }
    Ok(())
}

/// `(d1 10^ell - (d1 - d2)) / 9` as an exact rational.
pub fn eta1_step2(d1: u8, d2: u8, ell: u32) -> BigRational {
    let num = BigInt::from(d1) * BigInt::from(10u32).pow(ell) - (i32::from(d1) - i32::from(d2));
    BigRational::new(num, BigInt::from(9))
}

/// Certified `log((d1 10^ell - (d1 - d2)) / 9)`.
pub fn log_eta1_step2(d1: u8, d2: u8, ell: u32, prec: Precision) -> Result<Ball> {
    check_digits(d1, d2, ell)?;
    let eta = eta1_step2(d1, d2, ell);
    Ball::from_int(eta.numer().clone(), prec)
        .div(&Ball::from_int(eta.denom().clone(), prec))?
        .ln()
}

/// Data of one application of the lower bound.
#[derive(Clone, Debug)]
pub struct LinearFormInstance {
    pub t: u32,
    pub d: u32,
    /// Any upper bound on the absolute values of the exponents.
    pub b_param: Ball,
    pub a: Vec<Ball>,
}

/// `1.4 · 30^(t+3) · t^4.5 · D^2 · (1 + log D) · A_1 ··· A_t`, the lower
/// bound without its `(1 + log B)` factor.
pub fn bms_coefficient(t: u32, d: u32, a: &[Ball]) -> Result<Ball> {
    assert!(t >= 1 && d >= 1 && a.len() == t as usize, "malformed instance");
    let prec = a[0].precision();
    let int = |v: u64| Ball::from_int(v, prec);
    let c = Ball::from_rational(&decimal("1.4"), prec);
    let thirty = int(30).powi(i64::from(t) + 3)?;
    let t_pow = &int(u64::from(t)).powi(4)? * &int(u64::from(t)).sqrt()?;
    let d_sq = int(u64::from(d) * u64::from(d));
    let one_log_d = &Ball::one(prec) + &int(u64::from(d)).ln()?;
    let mut out = &(&(&(&c * &thirty) * &t_pow) * &d_sq) * &one_log_d;
    for aj in a {
        out = &out * aj;
    }
    Ok(out)
}

impl LinearFormInstance {
    /// Certified right-hand side of `log |Gamma| > -(...)`.
    pub fn bms_lower_bound(&self) -> Result<Ball> {
        let one_log_b = &Ball::one(self.b_param.precision()) + &self.b_param.ln()?;
        Ok(-(&bms_coefficient(self.t, self.d, &self.a)? * &one_log_b))
    }
}

/// Which constants are carried from one link of the chain to the next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsMode {
    /// Carry the published constants after checking that each dominates
    /// the value computed from the previous link.
    #[default]
    Fidelity,
    /// Carry the computed values.
    Audit,
}

impl std::fmt::Display for ConstantsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstantsMode::Fidelity => "fidelity",
            ConstantsMode::Audit => "audit",
        })
    }
}

/// One constant of the chain.
#[derive(Clone, Debug)]
pub struct BoundLink {
    pub name: &'static str,
    pub meaning: &'static str,
    pub computed: Ball,
    pub published: BigRational,
    pub published_text: &'static str,
    pub carried: Ball,
}

impl BoundLink {
    fn new(mode: ConstantsMode, name: &'static str, meaning: &'static str, computed: Ball, published: &'static str) -> Result<Self> {
        let published_q = decimal(published);
        let dominated = computed.le_rational(&published_q);
        let carried = match mode {
            ConstantsMode::Fidelity => {
                if !dominated {
                    return Err(Error::EnvelopeViolated {
                        name,
                        published: published.into(),
                        computed: computed.upper_sci(8),
                    });
                }
                Ball::from_rational(&published_q, computed.precision())
            }
            ConstantsMode::Audit => computed.clone(),
        };
        Ok(BoundLink {
            name,
            meaning,
            computed,
            published: published_q,
            published_text: published,
            carried,
        })
    }

    pub fn dominated(&self) -> bool {
        self.computed.le_rational(&self.published)
    }
}

/// Step 1: `ell log 10 < C1 (1 + log n)`.
#[derive(Clone, Debug)]
pub struct Step1 {
    pub links: Vec<BoundLink>,
    pub c1: Ball,
}

pub fn step1_ell_bound(mode: ConstantsMode, roots: &RootData) -> Result<Step1> {
    let prec = roots.precision();
    let log10 = Ball::from_int(10, prec).ln()?;
    let a = [Ball::from_int(15, prec), roots.log_alpha.clone(), log10.mul_int(3)];
    let k1 = BoundLink::new(
        mode,
        "K1",
        "log|Gamma1| > -K1 (1 + log n)",
        bms_coefficient(3, 3, &a)?,
        "1.45e30",
    )?;
    // ell log 10 < log 46 + K1 (1 + log n) <= (K1 + log 46)(1 + log n)
    let log46 = Ball::from_int(46, prec).ln()?;
    let c1 = BoundLink::new(
        mode,
        "C1",
        "ell log 10 < C1 (1 + log n)",
        &k1.carried + &log46,
        "1.46e30",
    )?;
    Ok(Step1 {
        c1: c1.carried.clone(),
        links: vec![k1, c1],
    })
}

/// The full chain ending in absolute bounds on `n` and `ell + m`.
#[derive(Clone, Debug)]
pub struct InitialBounds {
    pub mode: ConstantsMode,
    pub links: Vec<BoundLink>,
    pub n_bound: Ball,
    pub ell_plus_m_bound: Ball,
}

impl InitialBounds {
    /// `M`: the integer bound on `ell + m` fed to the reductions.
    pub fn m_bound(&self) -> BigInt {
        self.ell_plus_m_bound.upper().ceil()
    }

    pub fn n_bound_int(&self) -> BigInt {
        self.n_bound.upper().ceil()
    }

    pub fn derive(mode: ConstantsMode, roots: &RootData) -> Result<Self> {
        let step1 = step1_ell_bound(mode, roots)?;
        step2_n_bound(mode, roots, step1)
    }
}

pub fn step2_n_bound(mode: ConstantsMode, roots: &RootData, step1: Step1) -> Result<InitialBounds> {
    let prec = roots.precision();
    let log9 = Ball::from_int(9, prec).ln()?;
    let log10 = Ball::from_int(10, prec).ln()?;
    let mut links = step1.links;

    // h(eta1) <= 4 log 9 + ell log 10 < (C1 + 4 log 9)(1 + log n); the same
    // expression dominates |log eta1| <= ell log 10 + 2 log 9 + 1/9.
    let h1 = BoundLink::new(
        mode,
        "H1",
        "max(h(eta1), |log eta1|) < H1 (1 + log n)",
        &step1.c1 + &log9.mul_int(4),
        "1.47e30",
    )?;
    let a1 = BoundLink::new(mode, "A1", "A1 = a1 (1 + log n)", h1.carried.mul_int(3), "4.41e30")?;
    let k2 = BoundLink::new(
        mode,
        "K2",
        "log|Gamma2| > -K2 (1 + log n) A1",
        bms_coefficient(3, 3, &[Ball::one(prec), roots.log_alpha.clone(), log10.mul_int(3)])?,
        "6e12",
    )?;
    let c2 = BoundLink::new(
        mode,
        "C2",
        "n log alpha < C2 (1 + log n)^2 + log 4",
        &k2.carried * &a1.carried,
        "3e43",
    )?;
    let log4 = Ball::from_int(4, prec).ln()?;
    let h = BoundLink::new(
        mode,
        "H",
        "n < H (1 + log n)^2",
        (&c2.carried + &log4).div(&roots.log_alpha)?,
        "1.10e44",
    )?;
    let n_computed = match mode {
        ConstantsMode::Fidelity => guzman_luca(2, &h.carried)?,
        ConstantsMode::Audit => guzman_luca_shifted(2, &h.carried)?,
    };
    let n = BoundLink::new(mode, "N", "n < N", n_computed, "4.6e48")?;
    // ell + m <= (n + 1) log alpha / log 10 + 1
    let lm_computed = &(&(&n.carried + &Ball::one(prec)) * &roots.log_alpha).div(&log10)? + &Ball::one(prec);
    let lm = BoundLink::new(mode, "LM", "ell + m < LM", lm_computed, "6.0e47")?;
    let n_bound = n.carried.clone();
    let ell_plus_m_bound = lm.carried.clone();
    links.extend([h1, a1, k2, c2, h, n, lm]);
    Ok(InitialBounds {
        mode,
        links,
        n_bound,
        ell_plus_m_bound,
    })
}

/// Admissible values of `ell + m` when `P(n)` has `ell + m` digits:
/// `(n - 2) log alpha / log 10 < ell + m <= (n + 1) log alpha / log 10 + 1`,
/// from `alpha^(n-2) <= P(n) < 10^(ell+m)` and
/// `10^(ell+m-1) <= P(n) <= alpha^(n+1)`.
pub fn digit_count_window(n: u64, roots: &RootData) -> Result<RangeInclusive<u64>> {
    assert!(n >= 2, "the window is stated for n >= 2");
    let prec = roots.precision();
    let log10 = Ball::from_int(10, prec).ln()?;
    let scaled = |k: u64| (&Ball::from_int(k, prec) * &roots.log_alpha).div(&log10);
    let lo_real = scaled(n - 2)?;
    let hi_real = &scaled(n + 1)? + &Ball::one(prec);
    let (Some(lo), Some(hi)) = (lo_real.floor_certified(), hi_real.floor_certified()) else {
        return Err(Error::PrecisionExhausted(format!("digit window at n = {n}")));
    };
    let lo = (lo + 1u32).to_u64().expect("small");
    let hi = hi.to_u64().expect("small");
    Ok(lo..=hi)
}
