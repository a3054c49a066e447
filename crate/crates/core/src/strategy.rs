//! Stopping rules.
//!
//! A rule sees only the observed prefix: how many arrivals are maximal so
//! far and whether the current arrival is one of them. Randomized rules
//! draw from their own [`RandomnessStream`] when activated for a run, never
//! from the stream that shuffles the arrivals.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::poset::{Poset, PrefixState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Stop,
    Continue,
}

/// The part of an observed prefix a stopping rule may read.
pub trait Observation {
    /// Number of arrivals observed so far.
    fn observed(&self) -> usize;
    /// Number of maximal elements of the observed prefix.
    fn maximal_count(&self) -> usize;
    /// Whether the most recent arrival is maximal in the observed prefix.
    fn current_is_maximal(&self) -> bool;
}

impl Observation for PrefixState {
    fn observed(&self) -> usize {
        self.len()
    }

    fn maximal_count(&self) -> usize {
        self.maximal_arrivals().len()
    }

    fn current_is_maximal(&self) -> bool {
        !self.is_empty() && self.is_arrival_maximal(self.len() - 1)
    }
}

/// Seeded pseudo-random source; identical seeds give identical draws.
#[derive(Clone, Debug)]
pub struct RandomnessStream(ChaCha8Rng);

impl RandomnessStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent sub-stream `stream` of the generator keyed by `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomnessStream(rng)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.gen::<f64>()
    }

    pub(crate) fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}

/// Rule configuration. Activate it once per run to get an [`ActiveRule`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StoppingRule {
    /// Reject a Binomial(n, p) number of arrivals, then accept the first
    /// arrival that is maximal in a prefix with at most `k` maximal elements.
    TauK { k: usize, p: f64 },
    /// The same acceptance test after rejecting exactly `reject` arrivals.
    TauKFixed { k: usize, reject: usize },
    /// Classical secretary threshold: from arrival `r` on, accept the
    /// first arrival that is the unique maximum of the prefix.
    Threshold { r: usize },
}

impl StoppingRule {
    pub fn tau_k(k: usize, p: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Param("k must be at least 1".into()));
        }
        check_open_unit(p)?;
        Ok(StoppingRule::TauK { k, p })
    }

    pub fn tau_k_fixed(k: usize, reject: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Param("k must be at least 1".into()));
        }
        Ok(StoppingRule::TauKFixed { k, reject })
    }

    pub fn threshold(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Param("threshold r must be at least 1".into()));
        }
        Ok(StoppingRule::Threshold { r })
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, StoppingRule::TauK { .. })
    }

    /// Starts a run on `n` elements, drawing any private randomness from `rnd`.
    pub fn activate(&self, n: usize, rnd: &mut RandomnessStream) -> ActiveRule {
        match *self {
            StoppingRule::TauK { k, p } => ActiveRule {
                n,
                reject: binomial_inverse_cdf(n, p, rnd.uniform()),
                max_allowed: k,
            },
            _ => self.activate_deterministic(n).expect("deterministic rule"),
        }
    }

    /// Activation for rules without private randomness.
    pub fn activate_deterministic(&self, n: usize) -> Result<ActiveRule> {
        match *self {
            StoppingRule::TauK { .. } => Err(Error::RandomRule(self.to_string())),
            StoppingRule::TauKFixed { k, reject } => Ok(ActiveRule { n, reject, max_allowed: k }),
            StoppingRule::Threshold { r } => Ok(ActiveRule {
                n,
                reject: r - 1,
                max_allowed: 1,
            }),
        }
    }
}

impl fmt::Display for StoppingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StoppingRule::TauK { k, p } => write!(f, "tau_k(k={k},p={p})"),
            StoppingRule::TauKFixed { k, reject } => write!(f, "tau_k_fixed(k={k},x={reject})"),
            StoppingRule::Threshold { r } => write!(f, "threshold(r={r})"),
        }
    }
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Param(format!("p = {p} must lie strictly between 0 and 1")))
    }
}

/// `τ_k(p)` for a poset on `n` elements.
pub fn make_tau_k(n: usize, k: usize, p: f64) -> Result<StoppingRule> {
    if n == 0 {
        return Err(Error::Param("n must be at least 1".into()));
    }
    StoppingRule::tau_k(k, p)
}

/// Classical threshold rule; requires `1 <= r <= n`.
pub fn make_classical_threshold(n: usize, r: usize) -> Result<StoppingRule> {
    if r == 0 || r > n {
        return Err(Error::Param(format!("threshold r = {r} must lie in 1..={n}")));
    }
    StoppingRule::threshold(r)
}

/// A rule instance for one run, with its random draws already made.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActiveRule {
    n: usize,
    reject: usize,
    max_allowed: usize,
}

impl ActiveRule {
    /// Number of arrivals rejected unconditionally.
    pub fn rejected(&self) -> usize {
        self.reject
    }

    pub fn decide(&self, obs: &impl Observation) -> Decision {
        let t = obs.observed();
        if t >= self.n {
            return Decision::Stop;
        }
        if t <= self.reject {
            return Decision::Continue;
        }
        if obs.current_is_maximal() && obs.maximal_count() <= self.max_allowed {
            Decision::Stop
        } else {
            Decision::Continue
        }
    }
}

/// `min { x : P(Bin(n, p) <= x) >= delta }`.
///
/// The mass function is accumulated from `x = 0` in log space so that large
/// `n` does not underflow the running product.
pub fn binomial_inverse_cdf(n: usize, p: f64, delta: f64) -> usize {
    let log_ratio = (p / (1.0 - p)).ln();
    let mut log_pmf = n as f64 * (1.0 - p).ln();
    let mut cdf = 0.0;
    for x in 0..n {
        cdf += log_pmf.exp();
        if cdf >= delta {
            return x;
        }
        log_pmf += ((n - x) as f64 / (x + 1) as f64).ln() + log_ratio;
    }
    n
}

/// Incremental view of the arrivals seen so far on a known poset.
///
/// Maintains the observed set and the maximal elements of the prefix as
/// bitsets, so each arrival costs `O(n / 64)`.
#[derive(Clone, Debug)]
pub struct ArrivalTracker<'a> {
    poset: &'a Poset,
    observed: Bits,
    maximal: Bits,
    maximal_count: usize,
    count: usize,
    current_maximal: bool,
}

impl<'a> ArrivalTracker<'a> {
    pub fn new(poset: &'a Poset) -> Self {
        let n = poset.len();
        ArrivalTracker {
            poset,
            observed: Bits::new(n),
            maximal: Bits::new(n),
            maximal_count: 0,
            count: 0,
            current_maximal: false,
        }
    }

    pub fn push(&mut self, x: usize) {
        let is_max = !self.poset.up_set(x).intersects(&self.observed);
        self.observed.insert(x);
        self.maximal.difference_with(self.poset.down_set(x));
        if is_max {
            self.maximal.insert(x);
        }
        self.maximal_count = self.maximal.count();
        self.current_maximal = is_max;
        self.count += 1;
    }
}

impl Observation for ArrivalTracker<'_> {
    fn observed(&self) -> usize {
        self.count
    }

    fn maximal_count(&self) -> usize {
        self.maximal_count
    }

    fn current_is_maximal(&self) -> bool {
        self.current_maximal
    }
}

/// Runs an activated rule over `order`; returns the 1-based stopping time.
pub fn stopping_time(poset: &Poset, order: &[usize], rule: &ActiveRule) -> usize {
    let mut tracker = ArrivalTracker::new(poset);
    for (i, &x) in order.iter().enumerate() {
        tracker.push(x);
        if rule.decide(&tracker) == Decision::Stop {
            return i + 1;
        }
    }
    order.len()
}
