//! Seeded Monte Carlo estimation of success probabilities.
//!
//! Trial `i` draws everything from `split_seed(master_seed, i)`: sub-stream 0
//! shuffles the arrivals (Fisher–Yates), sub-stream 1 feeds the rule's
//! private randomness. Trials are independent of each other and of the
//! execution order, so the success count is identical for any number of
//! worker threads.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{make_family, FamilySpec};
use crate::poset::{width_and_chain_cover, Poset};
use crate::strategy::{stopping_time, RandomnessStream, StoppingRule};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

const SHUFFLE_STREAM: u64 = 0;
const RULE_STREAM: u64 = 1;

/// SplitMix64 finalizer applied to `master_seed + (index + 1) * golden gamma`.
pub fn split_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One run: shuffle, activate the rule, walk the arrivals; true when the
/// accepted element is maximal in `poset`.
pub fn run_trial(poset: &Poset, rule: &StoppingRule, trial_seed: u64) -> bool {
    let n = poset.len();
    if n == 0 {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut shuffle = RandomnessStream::with_stream(trial_seed, SHUFFLE_STREAM);
    order.shuffle(shuffle.rng());
    let mut private = RandomnessStream::with_stream(trial_seed, RULE_STREAM);
    let active = rule.activate(n, &mut private);
    let t = stopping_time(poset, &order, &active);
    poset.is_maximal(order[t - 1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessReport {
    pub poset: String,
    pub n: usize,
    pub k_max: usize,
    pub width: usize,
    pub rule: String,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl SuccessReport {
    /// Wilson half-width divided by the normal quantile.
    pub fn std_error(&self) -> f64 {
        wilson_std_error(self.successes, self.trials)
    }
}

/// 95% Wilson score interval for `successes / trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let (center, half) = wilson_parts(successes, trials, Z_95);
    let phat = successes as f64 / trials as f64;
    // the interval always contains phat; clamp away rounding at 0 and 1
    ((center - half).clamp(0.0, phat), (center + half).clamp(phat, 1.0))
}

pub fn wilson_std_error(successes: u64, trials: u64) -> f64 {
    wilson_parts(successes, trials, Z_95).1 / Z_95
}

fn wilson_parts(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let nf = trials as f64;
    let phat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    (center, half)
}

/// Labels and structure statistics attached to every report.
#[derive(Clone, Debug)]
pub struct PosetInfo {
    pub name: String,
    pub k_max: usize,
    pub width: usize,
}

impl PosetInfo {
    pub fn new(name: impl Into<String>, poset: &Poset) -> Self {
        PosetInfo {
            name: name.into(),
            k_max: poset.maximal_elements().len(),
            width: width_and_chain_cover(poset).0,
        }
    }
}

fn count_successes(poset: &Poset, rule: &StoppingRule, trials: u64, master_seed: u64) -> u64 {
    (0..trials)
        .into_par_iter()
        .map(|i| u64::from(run_trial(poset, rule, split_seed(master_seed, i))))
        .sum()
}

pub fn estimate_success(
    poset: &Poset,
    rule: &StoppingRule,
    trials: u64,
    master_seed: u64,
) -> Result<SuccessReport> {
    let info = PosetInfo::new(format!("poset(n={})", poset.len()), poset);
    estimate_success_labeled(poset, &info, rule, trials, master_seed, None)
}

/// Estimate with explicit labels, optionally on a dedicated pool of
/// `threads` workers.
pub fn estimate_success_labeled(
    poset: &Poset,
    info: &PosetInfo,
    rule: &StoppingRule,
    trials: u64,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<SuccessReport> {
    if trials == 0 {
        return Err(Error::Param("trials must be at least 1".into()));
    }
    if poset.is_empty() {
        return Err(Error::Param("cannot simulate an empty poset".into()));
    }
    let successes = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Param(format!("thread pool: {e}")))?
            .install(|| count_successes(poset, rule, trials, master_seed)),
        None => count_successes(poset, rule, trials, master_seed),
    };
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Ok(SuccessReport {
        poset: info.name.clone(),
        n: poset.len(),
        k_max: info.k_max,
        width: info.width,
        rule: rule.to_string(),
        trials,
        successes,
        estimate: successes as f64 / trials as f64,
        ci_low,
        ci_high,
        seed: master_seed,
    })
}

/// One report per `(family, rule)` cell, families outermost. Cell `i` runs
/// with seed `split_seed(master_seed, i)`, recorded in the report.
pub fn sweep(
    families: &[FamilySpec],
    rules: &[StoppingRule],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<SuccessReport>> {
    if families.is_empty() {
        return Err(Error::EmptyGrid("poset family grid"));
    }
    if rules.is_empty() {
        return Err(Error::EmptyGrid("rule grid"));
    }
    let mut reports = Vec::with_capacity(families.len() * rules.len());
    let mut cell = 0u64;
    for spec in families {
        let poset = make_family(spec)?;
        let info = PosetInfo::new(spec.to_string(), &poset);
        for rule in rules {
            let seed = split_seed(master_seed, cell);
            reports.push(estimate_success_labeled(&poset, &info, rule, trials, seed, None)?);
            cell += 1;
        }
    }
    Ok(reports)
}
