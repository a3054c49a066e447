//! Helpers shared by the integration tests. Oracles here deliberately avoid
//! the library's own engines.

#![allow(dead_code)]

use poset_secretary::{induced_prefix, make_family, FamilySpec, Poset};
use proptest::prelude::*;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

pub fn binomial_pmf(n: usize, p: f64, x: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..x {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32)
}

/// Success of the deterministic "reject `x`, then accept the first arrival
/// maximal in a prefix with at most `k` maximal elements" rule, replayed
/// step by step from induced prefixes.
pub fn fixed_rule_succeeds(poset: &Poset, order: &[usize], k: usize, x: usize) -> bool {
    let n = order.len();
    for t in 1..=n {
        let prefix = induced_prefix(poset, order, t);
        let trigger = t > x
            && prefix.is_arrival_maximal(t - 1)
            && prefix.maximal_arrivals().len() <= k;
        if trigger || t == n {
            return poset.is_maximal(order[t - 1]);
        }
    }
    unreachable!()
}

/// Largest antichain by branch and bound over subsets.
pub fn max_antichain(poset: &Poset) -> Vec<usize> {
    fn go(p: &Poset, i: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() + (p.len() - i) <= best.len() {
            return;
        }
        if i == p.len() {
            *best = cur.clone();
            return;
        }
        if cur.iter().all(|&c| !p.comparable(c, i)) {
            cur.push(i);
            go(p, i + 1, cur, best);
            cur.pop();
        }
        go(p, i + 1, cur, best);
    }
    let mut best = Vec::new();
    go(poset, 0, &mut Vec::new(), &mut best);
    best
}

pub fn random_poset(n: usize, density: f64, seed: u64) -> Poset {
    make_family(&FamilySpec::Random { n, density, seed }).unwrap()
}

/// Random posets on `lo..=hi` elements across the density range.
pub fn arb_poset(lo: usize, hi: usize) -> impl Strategy<Value = Poset> {
    (lo..=hi, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, d, s)| random_poset(n, d, s))
}

/// Uniformly random arrival order for `n` elements.
pub fn arb_order(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}
