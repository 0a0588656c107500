//! End-to-end replay: low-range search, initial bounds, both reduction
//! stages, and the certificate that closes the range `n > 500`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::baker::{log_eta1_step2, ConstantsMode, InitialBounds};
use crate::contfrac::{expand, ContinuedFraction, Stop};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::realfield::{Ball, Precision};
use crate::reduction::{dujella_petho, legendre_reduce, Method, ReductionOutcome, ReductionProblem, MAX_RETRIES};
use crate::search::{brute_search_with, verify_candidate, SolutionRecord};
use crate::sequences::{RootData, SequenceCache};

mod report;

pub use report::{emit_report, Format};

/// Upper end of the exhaustively searched range, and the hypothesis
/// `n > SEARCH_LIMIT` the reductions must contradict.
pub const SEARCH_LIMIT: usize = 500;

/// Minimum working precision accepted by [`run_pipeline`].
pub const MIN_PRECISION: Precision = Precision::digits(128);

/// Default hard cap on precision escalation.
pub const DEFAULT_MAX_PRECISION: Precision = Precision::digits(65536);

/// Escalation cap from `SOLVER_MAX_PRECISION`, if set and valid.
pub fn max_precision_from_env() -> Precision {
    std::env::var("SOLVER_MAX_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .map(Precision::digits)
        .unwrap_or(DEFAULT_MAX_PRECISION)
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialBoundsRecord {
    #[serde(with = "decimal_string")]
    pub n_bound: BigInt,
    #[serde(with = "decimal_string")]
    pub ell_plus_m_bound: BigInt,
}

/// One reduction instance as it appears in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub d1: u8,
    pub d2: Option<u8>,
    pub ell: Option<u32>,
    pub q_index: usize,
    #[serde(with = "decimal_string")]
    pub q_decimal: BigInt,
    /// Certified lower end of epsilon, rounded down to 15 significant
    /// digits; absent for the Legendre method.
    pub epsilon_lower: Option<String>,
    pub k_bound: i64,
    pub method: Method,
}

impl OutcomeRecord {
    fn new(d1: u8, d2: Option<u8>, ell: Option<u32>, out: &ReductionOutcome) -> Self {
        OutcomeRecord {
            d1,
            d2,
            ell,
            q_index: out.q_index,
            q_decimal: out.q_used.clone(),
            epsilon_lower: out.epsilon.as_ref().map(|e| e.lower_sci(15)),
            k_bound: out.k_bound,
            method: out.method,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub bound: i64,
    pub outcomes: Vec<OutcomeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub solution_set: Vec<SolutionRecord>,
    pub initial_bounds: InitialBoundsRecord,
    pub stage1: StageRecord,
    pub stage2: StageRecord,
    pub final_n_bound: i64,
    pub consistency: bool,
    pub precision_used: Precision,
    pub constants_mode: ConstantsMode,
}

/// Everything the reduction instances share: `tau`, its continued fraction
/// past `6M`, and `M` itself.
#[derive(Clone, Debug)]
pub struct ReductionContext {
    pub roots: RootData,
    pub tau: Ball,
    pub cf: ContinuedFraction,
    pub m_bound: BigInt,
}

impl ReductionContext {
    pub fn new(prec: Precision, m_bound: BigInt, cap: Precision) -> Result<Self> {
        let roots = RootData::new(prec);
        let tau = roots.tau();
        let stop = Stop::DenominatorAbove {
            bound: &m_bound * 6,
            lookahead: MAX_RETRIES,
        };
        let (cf, _) = expand(|p| Ok(RootData::new(p).tau()), &stop, prec, cap)?;
        Ok(ReductionContext {
            roots,
            tau,
            cf,
            m_bound,
        })
    }

    /// Context with `M` from the initial bounds in `mode`.
    pub fn from_bounds(prec: Precision, mode: ConstantsMode, cap: Precision) -> Result<(Self, InitialBounds)> {
        let bounds = InitialBounds::derive(mode, &RootData::new(prec)).map_err(|e| e.in_stage("initial bounds", mode.to_string()))?;
        let ctx = ReductionContext::new(prec, bounds.m_bound(), cap).map_err(|e| e.in_stage("expansion", "tau"))?;
        Ok((ctx, bounds))
    }

    pub fn precision(&self) -> Precision {
        self.tau.precision()
    }

    fn over_log_alpha(&self, x: &Ball) -> Result<Ball> {
        x.div(&self.roots.log_alpha)
    }

    /// `|(ell+m) tau - n + log(d1/9)/log alpha| < (92/log alpha) 10^(-ell)`.
    pub fn stage1_problem(&self, d1: u8) -> Result<ReductionProblem> {
        assert!((1..=8).contains(&d1), "stage 1 reduces d1 in 1..=8");
        let prec = self.precision();
        let ratio = Ball::from_rational(&BigRational::new(d1.into(), 9.into()), prec);
        ReductionProblem::new(
            self.tau.clone(),
            self.over_log_alpha(&ratio.ln()?)?,
            self.m_bound.clone(),
            self.over_log_alpha(&Ball::from_int(92, prec))?,
            Ball::from_int(10, prec),
        )
    }

    /// `|m tau - n + log(eta1)/log alpha| < (8/log alpha) alpha^(-n)`.
    pub fn stage2_problem(&self, d1: u8, d2: u8, ell: u32) -> Result<ReductionProblem> {
        let prec = self.precision();
        ReductionProblem::new(
            self.tau.clone(),
            self.over_log_alpha(&log_eta1_step2(d1, d2, ell, prec)?)?,
            self.m_bound.clone(),
            self.over_log_alpha(&Ball::from_int(8, prec))?,
            self.roots.alpha.clone(),
        )
    }

    pub fn stage1_instance(&self, d1: u8) -> Result<OutcomeRecord> {
        let prec = self.precision();
        let run = || -> Result<ReductionOutcome> {
            if d1 == 9 {
                // mu = 0: (ell + m, n) is a convergent pair
                let a = self.over_log_alpha(&Ball::from_int(92, prec))?;
                legendre_reduce(&self.cf, &self.m_bound, &a, &Ball::from_int(10, prec))
            } else {
                dujella_petho(&self.stage1_problem(d1)?, &self.cf)
            }
        };
        let out = run().map_err(|e| e.in_stage("stage 1", format!("d1={d1}")))?;
        Ok(OutcomeRecord::new(d1, None, None, &out))
    }

    pub fn stage2_instance(&self, d1: u8, d2: u8, ell: u32) -> Result<OutcomeRecord> {
        let run = || -> Result<ReductionOutcome> {
            if (d1, d2, ell) == (1, 0, 1) {
                // eta1 = 1, so mu = 0
                let a = self.over_log_alpha(&Ball::from_int(8, self.precision()))?;
                legendre_reduce(&self.cf, &self.m_bound, &a, &self.roots.alpha)
            } else {
                dujella_petho(&self.stage2_problem(d1, d2, ell)?, &self.cf)
            }
        };
        let out = run().map_err(|e| e.in_stage("stage 2", format!("d1={d1} d2={d2} ell={ell}")))?;
        Ok(OutcomeRecord::new(d1, Some(d2), Some(ell), &out))
    }
}

/// Stage 1 over `d1 = 1..=9`. The bound also covers `ell <= 1`, where the
/// reduction does not apply.
pub fn stage1_sweep(ctx: &ReductionContext, strategy: Strategy) -> Result<StageRecord> {
    let digits: Vec<u8> = (1..=9).collect();
    let outcomes = exec::try_map(strategy, &digits, |&d1| ctx.stage1_instance(d1))?;
    let bound = outcomes.iter().map(|o| o.k_bound).max().unwrap_or(0).max(1);
    Ok(StageRecord { bound, outcomes })
}

/// All `(d1, d2, ell)` with `1 <= ell <= ell_bound`, in lexicographic order.
pub fn stage2_instances(ell_bound: u32) -> Vec<(u8, u8, u32)> {
    let mut v = Vec::new();
    for d1 in 1..=9u8 {
        for d2 in (0..=9u8).filter(|&d| d != d1) {
            for ell in 1..=ell_bound {
                v.push((d1, d2, ell));
            }
        }
    }
    v
}

pub fn stage2_sweep(ctx: &ReductionContext, instances: &[(u8, u8, u32)], strategy: Strategy) -> Result<StageRecord> {
    let outcomes = exec::try_map(strategy, instances, |&(d1, d2, ell)| ctx.stage2_instance(d1, d2, ell))?;
    let bound = outcomes.iter().map(|o| o.k_bound).max().unwrap_or(0);
    Ok(StageRecord { bound, outcomes })
}

fn attempt(prec: Precision, mode: ConstantsMode, cap: Precision, strategy: Strategy) -> Result<Certificate> {
    let solution_set = brute_search_with(0, SEARCH_LIMIT, strategy);
    let (ctx, bounds) = ReductionContext::from_bounds(prec, mode, cap)?;
    let stage1 = stage1_sweep(&ctx, strategy)?;
    let ell_bound = u32::try_from(stage1.bound).map_err(|_| Error::Domain {
        op: "stage 1",
        detail: format!("ell bound {} out of range", stage1.bound),
    })?;
    let stage2 = stage2_sweep(&ctx, &stage2_instances(ell_bound), strategy)?;
    let final_n_bound = stage2.bound;

    // independent single-index replay of the search
    let mut cache = SequenceCache::perrin();
    let replay: Vec<SolutionRecord> = (0..=SEARCH_LIMIT).filter_map(|n| verify_candidate(&mut cache, n)).collect();
    let consistency = final_n_bound < SEARCH_LIMIT as i64 && replay == solution_set;

    Ok(Certificate {
        solution_set,
        initial_bounds: InitialBoundsRecord {
            n_bound: bounds.n_bound_int(),
            ell_plus_m_bound: bounds.m_bound(),
        },
        stage1,
        stage2,
        final_n_bound,
        consistency,
        precision_used: prec,
        constants_mode: mode,
    })
}

/// Run the full replay, doubling the precision (up to `cap`) whenever a
/// certification fails for lack of digits.
pub fn run_pipeline_with(prec: Precision, mode: ConstantsMode, cap: Precision, strategy: Strategy) -> Result<Certificate> {
    if prec < MIN_PRECISION {
        return Err(Error::Domain {
            op: "pipeline",
            detail: format!("precision {prec} is below the minimum {MIN_PRECISION}"),
        });
    }
    let mut prec = prec;
    loop {
        match attempt(prec, mode, cap, strategy) {
            Err(e) if e.wants_more_precision() && prec.doubled() <= cap => prec = prec.doubled(),
            other => return other,
        }
    }
}

pub fn run_pipeline(prec: Precision, mode: ConstantsMode) -> Result<Certificate> {
    run_pipeline_with(prec, mode, max_precision_from_env(), Strategy::default())
}
