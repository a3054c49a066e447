//! Exhaustive checks of the success guarantees on all small posets, and the
//! open-ended scan over posets with a given number of maximal elements.

use serde::{Deserialize, Serialize};

use crate::bounds::p_star;
use crate::error::Result;
use crate::exact::exact_success_tau;
use crate::poset::{enumerate_all_posets, width_and_chain_cover, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `τ_k(e^{-1/k})` with `k = |max P|` beats `1/e`.
    OneOverE,
    /// On width-`k` posets with `k` maxima, `τ_k(p_k)` beats `p_k`.
    PkWidthK,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::OneOverE => "one_over_e",
            CheckKind::PkWidthK => "p_k_width_k",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub poset: String,
    pub n: usize,
    pub k_max: usize,
    pub width: usize,
    pub check: CheckKind,
    pub p: f64,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Every poset class on `1..=max_n` elements with its maximal count and width.
pub fn small_posets(max_n: usize) -> Result<Vec<(Poset, usize, usize)>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for p in enumerate_all_posets(n)? {
            let k = p.maximal_elements().len();
            let w = width_and_chain_cover(&p).0;
            out.push((p, k, w));
        }
    }
    Ok(out)
}

pub fn verify_theorems(max_n: usize) -> Result<Vec<TheoremCheck>> {
    let mut rows = Vec::new();
    for (poset, k, width) in small_posets(max_n)? {
        let mut push = |check: CheckKind, p: f64, bound: f64| -> Result<()> {
            let value = exact_success_tau(&poset, k, p)?.value;
            rows.push(TheoremCheck {
                poset: poset.describe(),
                n: poset.len(),
                k_max: k,
                width,
                check,
                p,
                value,
                bound,
                pass: value > bound,
            });
            Ok(())
        };
        push(CheckKind::OneOverE, (-1.0 / k as f64).exp(), (-1.0f64).exp())?;
        if width == k {
            push(CheckKind::PkWidthK, p_star(k), p_star(k))?;
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub poset: String,
    pub n: usize,
    pub k_max: usize,
    pub width: usize,
    pub p: f64,
    pub value: f64,
    /// `value - p_k`.
    pub gap: f64,
}

/// `τ_k(p_k) - p_k` on every poset up to `max_n` elements, `k = |max P|`.
pub fn conjecture_scan(max_n: usize) -> Result<Vec<ConjectureRow>> {
    small_posets(max_n)?
        .into_iter()
        .map(|(poset, k, width)| {
            let p = p_star(k);
            let value = exact_success_tau(&poset, k, p)?.value;
            Ok(ConjectureRow {
                poset: poset.describe(),
                n: poset.len(),
                k_max: k,
                width,
                p,
                value,
                gap: value - p,
            })
        })
        .collect()
}

/// Row with the smallest gap, if any.
pub fn min_gap(rows: &[ConjectureRow]) -> Option<&ConjectureRow> {
    rows.iter().min_by(|a, b| a.gap.total_cmp(&b.gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_up_to_three() {
        let rows = verify_theorems(3).unwrap();
        // 1 + 2 + 5 posets, each with the 1/e check
        assert_eq!(rows.iter().filter(|r| r.check == CheckKind::OneOverE).count(), 8);
        assert!(rows.iter().all(|r| r.pass));
    }

    #[test]
    fn scan_covers_all_classes() {
        let rows = conjecture_scan(4).unwrap();
        assert_eq!(rows.len(), 1 + 2 + 5 + 16);
        assert!(min_gap(&rows).is_some());
    }
}
