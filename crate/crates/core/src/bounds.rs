//! Closed-form success bounds, the negative-binomial series, `V_k(p)`, and
//! the independent-payoff comparison game used for the upper bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Terms below this magnitude end a series once its terms are decreasing.
pub const SERIES_TOLERANCE: f64 = 1e-15;
/// Hard cap on summed terms.
pub const SERIES_MAX_TERMS: usize = 1_000_000;

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::Param("k must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Param(format!("p = {p} must lie strictly between 0 and 1")))
    }
}

/// `p_k`: `1/e` for `k = 1`, otherwise `(1/k)^(1/(k-1))`.
pub fn p_star(k: usize) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    if k == 1 {
        (-1.0f64).exp()
    } else {
        (1.0 / k as f64).powf(1.0 / (k - 1) as f64)
    }
}

/// Lower bound for `τ_k(p)` on posets of width `k` with `k` maximal
/// elements: `p log(1/p)` for `k = 1`, `k/(k-1) p (1 - p^(k-1))` otherwise.
pub fn chain_lower_bound(k: usize, p: f64) -> Result<f64> {
    check_k(k)?;
    check_p(p)?;
    Ok(if k == 1 {
        -p * p.ln()
    } else {
        let k = k as f64;
        k / (k - 1.0) * p * (1.0 - p.powf(k - 1.0))
    })
}

/// Pieces of the bound for posets with `k` maximal elements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownMaxBound {
    /// `k p^k log(1/p)`.
    pub bound: f64,
    /// Success given exactly `k - 1` maxima are rejected: `p/(1-p) log(1/p)`.
    pub conditional: f64,
    /// Probability that exactly `k - 1` maxima are rejected: `k p^(k-1) (1-p)`.
    pub rejection_factor: f64,
}

pub fn known_max_lower_bound(k: usize, p: f64) -> Result<KnownMaxBound> {
    check_k(k)?;
    check_p(p)?;
    let log_inv = -p.ln();
    let kf = k as f64;
    Ok(KnownMaxBound {
        bound: kf * p.powi(k as i32) * log_inv,
        conditional: p / (1.0 - p) * log_inv,
        rejection_factor: kf * p.powi(k as i32 - 1) * (1.0 - p),
    })
}

/// `sum_{s=0}^{s_max} C(k+s-1, k-1) (1-p)^s`, which tends to `p^(-k)`.
pub fn nb_identity_partial_sum(k: usize, p: f64, s_max: usize) -> Result<f64> {
    check_k(k)?;
    check_p(p)?;
    let q = 1.0 - p;
    let mut term = 1.0;
    let mut sum = 0.0;
    for s in 0..=s_max {
        sum += term;
        term *= (k + s) as f64 / (s + 1) as f64 * q;
    }
    Ok(sum)
}

/// Series sum truncated adaptively: stops once terms are decreasing and
/// below [`SERIES_TOLERANCE`]. Returns the sum and the last index used.
pub fn nb_identity_sum(k: usize, p: f64) -> Result<(f64, usize)> {
    check_k(k)?;
    check_p(p)?;
    let q = 1.0 - p;
    let mut term = 1.0f64;
    let mut sum = 0.0;
    for s in 0..SERIES_MAX_TERMS {
        sum += term;
        let next = term * (k + s) as f64 / (s + 1) as f64 * q;
        if next < term && next < SERIES_TOLERANCE {
            return Ok((sum, s));
        }
        term = next;
    }
    Ok((sum, SERIES_MAX_TERMS - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VSeries {
    pub closed_form: f64,
    pub truncated_series: f64,
    pub terms: usize,
}

/// `V_k(p) = sum_{s>=1} (1/s) (1-p)^s C(k+s-2, k-1)` in closed form and by
/// direct summation.
pub fn v_series(k: usize, p: f64) -> Result<VSeries> {
    check_k(k)?;
    check_p(p)?;
    let closed_form = if k == 1 {
        -p.ln()
    } else {
        (p.powi(1 - k as i32) - 1.0) / (k - 1) as f64
    };
    let q = 1.0 - p;
    // c_s = C(k+s-2, k-1); c_1 = 1, c_{s+1} = c_s (k+s-1)/s
    let mut coeff_pow = q; // c_s q^s
    let mut sum = 0.0;
    let mut terms = 0;
    for s in 1..=SERIES_MAX_TERMS {
        let term = coeff_pow / s as f64;
        sum += term;
        terms = s;
        let next_coeff_pow = coeff_pow * (k + s - 1) as f64 / s as f64 * q;
        let next = next_coeff_pow / (s + 1) as f64;
        if next < term && next < SERIES_TOLERANCE {
            break;
        }
        coeff_pow = next_coeff_pow;
    }
    Ok(VSeries {
        closed_form,
        truncated_series: sum,
        terms,
    })
}

/// Parameters of the comparison game: `k` chains cut into `m` segments of
/// length `ell`, horizon `n = k * ell * m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YGameSpec {
    pub k: usize,
    pub ell: usize,
    pub m: usize,
}

impl YGameSpec {
    pub fn new(k: usize, ell: usize, m: usize) -> Result<Self> {
        if k == 0 || ell == 0 {
            return Err(Error::Spec("k and ell must be positive".into()));
        }
        if m < 3 {
            return Err(Error::Spec(format!("m = {m} must be at least 3")));
        }
        Ok(YGameSpec { k, ell, m })
    }

    pub fn horizon(&self) -> usize {
        self.k * self.ell * self.m
    }

    fn block(&self) -> usize {
        self.k * self.ell
    }

    /// Segment index `ceil(t / (k ell))` of step `t` (1-based).
    pub fn segment(&self, t: usize) -> usize {
        t.div_ceil(self.block())
    }

    /// Non-zero payoff of segment `s`: `(s + 1) / m`.
    pub fn segment_payoff(&self, s: usize) -> f64 {
        (s + 1) as f64 / self.m as f64
    }

    /// Probability of a non-zero payoff in segment `s`.
    pub fn segment_probability(&self, s: usize) -> f64 {
        if s >= 3 {
            1.0 / (self.ell * (s - 2)) as f64
        } else {
            1.0
        }
    }

    pub fn payoff(&self, t: usize) -> f64 {
        self.segment_payoff(self.segment(t))
    }

    pub fn probability(&self, t: usize) -> f64 {
        self.segment_probability(self.segment(t))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YGameSolution {
    pub spec: YGameSpec,
    /// `v[t - 1]` is the game value from step `t` on.
    pub v: Vec<f64>,
    /// Number of steps the optimal rule skips.
    pub skip: usize,
    /// `skip / (k ell)`.
    pub u_star: usize,
    pub value: f64,
}

/// Backward recursion for the game with independent payoffs.
///
/// `v(n) = p_n y_n`; `v(t) = p_t y_t + (1 - p_t) v(t+1)` when
/// `y_t >= v(t+1)`, else `v(t+1)`. The skip count is the last `t` with
/// `y_t < v(t+1)`.
pub fn y_game_solve(spec: &YGameSpec) -> Result<YGameSolution> {
    let spec = YGameSpec::new(spec.k, spec.ell, spec.m)?;
    let n = spec.horizon();
    let mut v = vec![0.0; n];
    v[n - 1] = spec.probability(n) * spec.payoff(n);
    let mut skip = 0;
    for t in (1..n).rev() {
        let (y, pt, next) = (spec.payoff(t), spec.probability(t), v[t]);
        if y >= next {
            v[t - 1] = pt * y + (1.0 - pt) * next;
        } else {
            v[t - 1] = next;
            if skip == 0 {
                skip = t;
            }
        }
    }
    Ok(YGameSolution {
        spec,
        value: v[0],
        u_star: skip / spec.block(),
        skip,
        v,
    })
}

/// Expected payoff of "skip the first `k ell u` steps, take the next
/// non-zero payoff", grouped by segment:
/// `sum_{u'=u}^{m-1} prod_{q=u+1}^{u'} (1-p(q))^{k ell} (1 - (1-p(u'+1))^{k ell}) y(u'+1)`.
pub fn y_game_threshold_value(spec: &YGameSpec, u: usize) -> Result<f64> {
    let spec = YGameSpec::new(spec.k, spec.ell, spec.m)?;
    if u >= spec.m {
        return Err(Error::Param(format!("u = {u} must be below m = {}", spec.m)));
    }
    let block = spec.block() as i32;
    let mut survive = 1.0;
    let mut total = 0.0;
    for seg in u + 1..=spec.m {
        let miss = (1.0 - spec.segment_probability(seg)).powi(block);
        total += survive * (1.0 - miss) * spec.segment_payoff(seg);
        survive *= miss;
    }
    Ok(total)
}
