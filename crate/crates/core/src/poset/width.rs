use super::Poset;

/// A partition of the elements into chains, each listed bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCover {
    pub chains: Vec<Vec<usize>>,
}

impl ChainCover {
    /// Checks that the chains are disjoint, cover `0..n`, and are increasing.
    pub fn is_valid_for(&self, poset: &Poset) -> bool {
        let mut seen = vec![false; poset.len()];
        for chain in &self.chains {
            for &x in chain {
                if x >= poset.len() || seen[x] {
                    return false;
                }
                seen[x] = true;
            }
            if chain.is_empty() || chain.windows(2).any(|w| !poset.less(w[0], w[1])) {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Width (largest antichain size) and a minimum chain cover.
///
/// The minimum chain partition of a transitively closed order equals
/// `n - M`, where `M` is a maximum matching of the split graph with an edge
/// `u -> v` for each `u ≺ v`. Matched edges become chain successor links.
pub fn width_and_chain_cover(poset: &Poset) -> (usize, ChainCover) {
    let n = poset.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut match_left: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut visited = vec![false; n];
        augment(poset, u, &mut visited, &mut match_left, &mut match_right);
    }

    let mut chains = Vec::new();
    for start in (0..n).filter(|&v| match_right[v].is_none()) {
        let mut chain = vec![start];
        let mut cur = start;
        while let Some(next) = match_left[cur] {
            chain.push(next);
            cur = next;
        }
        chains.push(chain);
    }
    (chains.len(), ChainCover { chains })
}

// Kuhn's augmenting path search from left vertex `u`.
fn augment(
    poset: &Poset,
    u: usize,
    visited: &mut [bool],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    for v in poset.up_set(u).iter() {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let free = match match_right[v] {
            None => true,
            Some(w) => augment(poset, w, visited, match_left, match_right),
        };
        if free {
            match_right[v] = Some(u);
            match_left[u] = Some(v);
            return true;
        }
    }
    false
}
