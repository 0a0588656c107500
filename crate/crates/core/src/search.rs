//! Exhaustive scan of Perrin terms for two-run decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exec::{self, Strategy};
use crate::repdigits::{decompose, ConcatPattern};
use crate::sequences::SequenceCache;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: usize,
    #[serde(with = "crate::pipeline::decimal_string")]
    pub value: BigInt,
    pub pattern: ConcatPattern,
}

/// All `n` in `n_min..=n_max` with `P(n)` a concatenation of two distinct
/// repdigits, sorted by `n`.
pub fn brute_search(n_min: usize, n_max: usize) -> Vec<SolutionRecord> {
    brute_search_with(n_min, n_max, Strategy::default())
}

pub fn brute_search_with(n_min: usize, n_max: usize, strategy: Strategy) -> Vec<SolutionRecord> {
    assert!(n_min <= n_max, "empty range {n_min}..={n_max}");
    let mut cache = SequenceCache::perrin();
    cache.extend_to(n_max);
    let terms = &cache.terms()[n_min..=n_max];
    let hits = exec::map(strategy, terms, decompose);
    hits.into_iter()
        .zip(n_min..)
        .filter_map(|(p, n)| {
            p.map(|pattern| SolutionRecord {
                n,
                value: terms[n - n_min].clone(),
                pattern,
            })
        })
        .collect()
}

/// Single-index check.
pub fn verify_candidate(cache: &mut SequenceCache, n: usize) -> Option<SolutionRecord> {
    let value = cache.term(n).clone();
    decompose(&value).map(|pattern| SolutionRecord { n, value, pattern })
}

/// Terms in range that are repdigits with at least two digits. These are
/// outside the problem (`d1 = d2`) and only reported as a diagnostic.
pub fn excluded_repdigits(n_min: usize, n_max: usize) -> Vec<(usize, BigInt)> {
    let mut cache = SequenceCache::perrin();
    cache.extend_to(n_max);
    (n_min..=n_max)
        .filter_map(|n| {
            let v = &cache.terms()[n];
            let s = v.to_string();
            let b = s.as_bytes();
            (b.len() >= 2 && b.iter().all(|&c| c == b[0])).then(|| (n, v.clone()))
        })
        .collect()
}
