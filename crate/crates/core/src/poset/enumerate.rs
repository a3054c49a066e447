use std::collections::HashSet;

use super::Poset;
use crate::error::{Error, Result};

/// Largest size accepted by [`enumerate_all_posets`].
pub const MAX_ENUMERATION_SIZE: usize = 6;

/// One representative per isomorphism class of posets on `n` elements.
///
/// Every poset on `n` elements arises from one on `n - 1` elements by adding
/// a new maximal element whose down-set is an order ideal, so classes are
/// grown level by level and deduplicated by [`canonical_code`]. The returned
/// representatives are the canonical relabelings, sorted by code.
pub fn enumerate_all_posets(n: usize) -> Result<Vec<Poset>> {
    if n > MAX_ENUMERATION_SIZE {
        return Err(Error::Size {
            what: "poset enumeration",
            n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let mut level: Vec<Vec<Vec<bool>>> = vec![Vec::new()];
    for m in 0..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rel in &level {
            for ideal in order_ideals(rel) {
                let mut grown = vec![vec![false; m + 1]; m + 1];
                for (u, row) in rel.iter().enumerate() {
                    grown[u][..m].copy_from_slice(row);
                    grown[u][m] = ideal >> u & 1 == 1;
                }
                let (code, canon) = canonical_form(&grown);
                if seen.insert(code) {
                    next.push((code, canon));
                }
            }
        }
        next.sort_by_key(|(code, _)| *code);
        level = next.into_iter().map(|(_, rel)| rel).collect();
    }
    level
        .iter()
        .map(|rel| Poset::from_matrix(rel))
        .collect()
}

// Down-closed subsets of a closed relation, as bit masks.
fn order_ideals(rel: &[Vec<bool>]) -> Vec<u32> {
    let m = rel.len();
    (0u32..1 << m)
        .filter(|&mask| {
            (0..m).all(|v| {
                mask >> v & 1 == 0 || (0..m).all(|u| !rel[u][v] || mask >> u & 1 == 1)
            })
        })
        .collect()
}

/// Isomorphism-invariant code: the lexicographically smallest row-major
/// relation matrix over all relabelings, packed so that integer order
/// matches lexicographic order.
pub fn canonical_code(poset: &Poset) -> u64 {
    assert!(poset.len() <= 8, "canonical code supports at most 8 elements");
    canonical_form(&poset.relation_matrix()).0
}

fn canonical_form(rel: &[Vec<bool>]) -> (u64, Vec<Vec<bool>>) {
    let n = rel.len();
    let mut best = u64::MAX;
    let mut best_perm: Vec<usize> = (0..n).collect();
    for_each_permutation(n, |perm| {
        let code = code_under(rel, perm);
        if code < best {
            best = code;
            best_perm = perm.to_vec();
        }
    });
    let mut canon = vec![vec![false; n]; n];
    for u in 0..n {
        for v in 0..n {
            if rel[u][v] {
                canon[best_perm[u]][best_perm[v]] = true;
            }
        }
    }
    (best, canon)
}

fn code_under(rel: &[Vec<bool>], perm: &[usize]) -> u64 {
    let n = rel.len();
    let total = n * n;
    let mut code = 0u64;
    for u in 0..n {
        for v in 0..n {
            if rel[u][v] {
                let pos = perm[u] * n + perm[v];
                code |= 1 << (total - 1 - pos);
            }
        }
    }
    code
}

// Heap's algorithm.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
