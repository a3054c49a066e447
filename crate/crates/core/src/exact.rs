//! Exact evaluation by enumeration, and the backward-induction optimum.
//!
//! All counts are exact integers; conversion to probabilities happens only
//! in the final ratios.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::strategy::{Decision, Observation, StoppingRule};

pub const MAX_RULE_ENUMERATION: usize = 9;
pub const MAX_TAU_ENUMERATION: usize = 8;
pub const MAX_BACKWARD_INDUCTION: usize = 9;

/// Comparison slack for floating ties in the backward induction.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMethod {
    RuleEnumeration,
    TauSubsetEnumeration,
    BackwardInduction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub value: f64,
    pub method: ExactMethod,
    /// Nodes, subsets or states visited.
    pub work: u64,
}

fn check_size(poset: &Poset, what: &'static str, max: usize) -> Result<()> {
    let n = poset.len();
    if n > max {
        return Err(Error::Size { what, n, max });
    }
    if n == 0 {
        return Err(Error::Param(format!("{what} needs a non-empty poset")));
    }
    Ok(())
}

fn factorials(n: usize) -> Vec<u64> {
    let mut f = vec![1u64; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as u64;
    }
    f
}

/// Bit-mask encoding of up-sets, down-sets and maxima for `n <= 32`.
struct Masks {
    n: usize,
    up: Vec<u32>,
    down: Vec<u32>,
    maximal: u32,
}

impl Masks {
    fn new(poset: &Poset) -> Self {
        let n = poset.len();
        let to_mask = |bits: &crate::bits::Bits| bits.iter().fold(0u32, |m, i| m | 1 << i);
        let up: Vec<u32> = (0..n).map(|u| to_mask(poset.up_set(u))).collect();
        let down = (0..n).map(|u| to_mask(poset.down_set(u))).collect();
        let maximal = (0..n).filter(|&u| up[u] == 0).fold(0, |m, u| m | 1 << u);
        Masks { n, up, down, maximal }
    }

    fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    fn maximal_count_of(&self, observed: u32) -> u32 {
        (0..self.n)
            .filter(|&y| observed >> y & 1 == 1 && self.up[y] & observed == 0)
            .count() as u32
    }
}

struct MaskObservation {
    t: usize,
    maximal_count: u32,
    current_maximal: bool,
}

impl Observation for MaskObservation {
    fn observed(&self) -> usize {
        self.t
    }
    fn maximal_count(&self) -> usize {
        self.maximal_count as usize
    }
    fn current_is_maximal(&self) -> bool {
        self.current_maximal
    }
}

/// Success probability of a deterministic rule, averaged over all `n!`
/// arrival orders. Orders sharing a prefix are explored once; a stop at
/// depth `t` accounts for all `(n - t)!` completions.
pub fn exact_success_rule(poset: &Poset, rule: &StoppingRule) -> Result<ExactResult> {
    check_size(poset, "rule enumeration", MAX_RULE_ENUMERATION)?;
    let active = rule.activate_deterministic(poset.len())?;
    let masks = Masks::new(poset);
    let fact = factorials(masks.n);

    struct Walk<'a> {
        masks: &'a Masks,
        fact: &'a [u64],
        decide: &'a dyn Fn(&MaskObservation) -> Decision,
        wins: u64,
        nodes: u64,
    }

    impl Walk<'_> {
        fn go(&mut self, observed: u32, maximal: u32, t: usize) {
            let n = self.masks.n;
            for x in 0..n {
                if observed >> x & 1 == 1 {
                    continue;
                }
                self.nodes += 1;
                let is_max = self.masks.up[x] & observed == 0;
                let mut next_max = maximal & !self.masks.down[x];
                if is_max {
                    next_max |= 1 << x;
                }
                let obs = MaskObservation {
                    t: t + 1,
                    maximal_count: next_max.count_ones(),
                    current_maximal: is_max,
                };
                if (self.decide)(&obs) == Decision::Stop {
                    if self.masks.maximal >> x & 1 == 1 {
                        self.wins += self.fact[n - t - 1];
                    }
                } else {
                    self.go(observed | 1 << x, next_max, t + 1);
                }
            }
        }
    }

    let decide = |o: &MaskObservation| active.decide(o);
    let mut walk = Walk {
        masks: &masks,
        fact: &fact,
        decide: &decide,
        wins: 0,
        nodes: 0,
    };
    walk.go(0, 0, 0);
    Ok(ExactResult {
        value: walk.wins as f64 / fact[masks.n] as f64,
        method: ExactMethod::RuleEnumeration,
        work: walk.nodes,
    })
}

/// Exact success probability of `τ_k(p)`.
///
/// The rejected set `S` contains each element independently with
/// probability `p` and the arrival order is a uniform order of `S` followed
/// by a uniform order of the rest. Once `S` is fixed, whether the rule fires
/// depends only on the observed set and the current arrival, so the
/// conditional success `f(S)` satisfies a recursion over observed sets:
/// `f(O) = mean over x ∉ O of [x maximal in P]` if the rule fires at `x` (or
/// `O ∪ {x}` is everything), and of `f(O ∪ {x})` otherwise.
pub fn exact_success_tau(poset: &Poset, k: usize, p: f64) -> Result<ExactResult> {
    check_size(poset, "tau_k subset enumeration", MAX_TAU_ENUMERATION)?;
    StoppingRule::tau_k(k, p)?;
    let f = tau_conditional_success(poset, k);
    let masks = Masks::new(poset);
    let n = masks.n;
    let full = masks.full();
    let mut value = 0.0;
    for s in 0..full {
        let size = s.count_ones() as i32;
        value += p.powi(size) * (1.0 - p).powi(n as i32 - size) * f[s as usize];
    }
    // everything rejected: the last arrival is accepted, uniformly random
    value += p.powi(n as i32) * masks.maximal.count_ones() as f64 / n as f64;
    Ok(ExactResult {
        value,
        method: ExactMethod::TauSubsetEnumeration,
        work: 1u64 << n,
    })
}

/// `f(S)` for every rejected set `S` (indexed by bit mask); the entry for the
/// full set is unused and left at zero.
pub fn tau_conditional_success(poset: &Poset, k: usize) -> Vec<f64> {
    let masks = Masks::new(poset);
    let n = masks.n;
    let full = masks.full();
    let max_count: Vec<u32> = (0..=full).map(|m| masks.maximal_count_of(m)).collect();
    let mut f = vec![0.0; full as usize + 1];
    // supersets have larger mask values, so a descending sweep sees them first
    for observed in (0..full).rev() {
        let mut total = 0.0;
        let mut remaining = 0;
        for x in (0..n).filter(|&x| observed >> x & 1 == 0) {
            remaining += 1;
            let next = observed | 1 << x;
            let fires = masks.up[x] & next == 0 && max_count[next as usize] as usize <= k;
            total += if fires || next == full {
                f64::from(masks.maximal >> x & 1)
            } else {
                f[next as usize]
            };
        }
        f[observed as usize] = total / remaining as f64;
    }
    f
}

/// One information state of the backward induction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateNode {
    /// Serialized prefix state, as produced by `PrefixState::serialize`.
    pub key: Vec<u8>,
    pub t: usize,
    /// Number of arrival orders passing through this state.
    pub weight: u64,
    /// Orders whose `t`-th arrival is maximal in the whole poset.
    pub win_weight: u64,
    pub z: f64,
    /// Expected value of continuing; `None` at the horizon.
    pub continuation: Option<f64>,
    /// Total weight of the successor states (equals `weight` below the horizon).
    pub child_weight: u64,
    pub gamma: f64,
}

impl StateNode {
    pub fn stop(&self) -> bool {
        self.continuation.is_none_or(|c| self.z + TIE_TOLERANCE >= c)
    }
}

/// Row of the exported optimal-rule table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub state_key: String,
    pub t: usize,
    pub z: f64,
    pub gamma: f64,
    pub stop: bool,
}

#[derive(Clone, Debug)]
pub struct OptimalSolution {
    pub result: ExactResult,
    /// All reachable states, ordered by `(t, key)`.
    pub nodes: Vec<StateNode>,
}

impl OptimalSolution {
    pub fn table(&self) -> Vec<TableEntry> {
        self.nodes
            .iter()
            .map(|node| TableEntry {
                state_key: hex::encode(&node.key),
                t: node.t,
                z: node.z,
                gamma: node.gamma,
                stop: node.stop(),
            })
            .collect()
    }

    /// Keys of the states where the optimal rule stops.
    pub fn stop_keys(&self) -> std::collections::HashSet<Vec<u8>> {
        self.nodes.iter().filter(|n| n.stop()).map(|n| n.key.clone()).collect()
    }
}

#[derive(Clone, Copy, Default)]
struct Agg {
    seqs: u64,
    wins: u64,
}

fn key_bytes(t: usize, bits: u128) -> Vec<u8> {
    let nbits = t * t.saturating_sub(1);
    let mut out = (t as u32).to_le_bytes().to_vec();
    out.extend_from_slice(&bits.to_le_bytes()[..nbits.div_ceil(8)]);
    out
}

// Groups all injective arrival sequences by their labelled prefix state.
fn state_levels(poset: &Poset) -> Vec<HashMap<u128, Agg>> {
    let n = poset.len();
    let mut levels: Vec<HashMap<u128, Agg>> = vec![HashMap::new(); n + 1];

    fn dfs(
        poset: &Poset,
        seq: &mut Vec<usize>,
        used: u32,
        key: u128,
        levels: &mut [HashMap<u128, Agg>],
    ) {
        let n = poset.len();
        let t = seq.len();
        let base = t * t.saturating_sub(1);
        for x in 0..n {
            if used >> x & 1 == 1 {
                continue;
            }
            let mut next = key;
            for (i, &y) in seq.iter().enumerate() {
                let pos = base + 2 * i;
                if poset.less(y, x) {
                    next |= 1 << pos;
                } else if poset.less(x, y) {
                    next |= 1 << (pos + 1);
                }
            }
            let agg = levels[t + 1].entry(next).or_default();
            agg.seqs += 1;
            if poset.is_maximal(x) {
                agg.wins += 1;
            }
            seq.push(x);
            dfs(poset, seq, used | 1 << x, next, levels);
            seq.pop();
        }
    }

    dfs(poset, &mut Vec::with_capacity(n), 0, 0, &mut levels);
    levels
}

fn parent_mask(t: usize) -> u128 {
    let bits = t * t.saturating_sub(1);
    if bits == 0 {
        0
    } else {
        (1u128 << bits) - 1
    }
}

/// Backward induction over the labelled prefix states.
///
/// `gamma = z` at the horizon and `gamma = max(z, E[gamma of successor])`
/// before it; the optimum is `E(gamma_1)` and the optimal rule stops at the
/// first state where `z` reaches the continuation value.
pub fn optimal_value(poset: &Poset) -> Result<OptimalSolution> {
    check_size(poset, "backward induction", MAX_BACKWARD_INDUCTION)?;
    let n = poset.len();
    let fact = factorials(n);
    let levels = state_levels(poset);

    let mut nodes_by_level: Vec<Vec<StateNode>> = vec![Vec::new(); n + 1];
    // (child weight sum, weighted gamma sum) per parent key
    let mut from_children: HashMap<u128, (u64, f64)> = HashMap::new();
    for t in (1..=n).rev() {
        let mut next_from_children = HashMap::new();
        let mut level: Vec<(u128, StateNode)> = levels[t]
            .iter()
            .map(|(&bits, agg)| {
                let weight = agg.seqs * fact[n - t];
                let win_weight = agg.wins * fact[n - t];
                let z = agg.wins as f64 / agg.seqs as f64;
                let (child_weight, continuation) = if t == n {
                    (0, None)
                } else {
                    let (w, g) = from_children.get(&bits).copied().unwrap_or((0, 0.0));
                    (w, Some(g / weight as f64))
                };
                let gamma = continuation.map_or(z, |c| z.max(c));
                let node = StateNode {
                    key: key_bytes(t, bits),
                    t,
                    weight,
                    win_weight,
                    z,
                    continuation,
                    child_weight,
                    gamma,
                };
                let entry: &mut (u64, f64) =
                    next_from_children.entry(bits & parent_mask(t - 1)).or_default();
                entry.0 += weight;
                entry.1 += weight as f64 * gamma;
                (bits, node)
            })
            .collect();
        level.sort_by(|a, b| a.1.key.cmp(&b.1.key));
        nodes_by_level[t] = level.into_iter().map(|(_, node)| node).collect();
        from_children = next_from_children;
    }

    let value = nodes_by_level[1]
        .iter()
        .map(|node| node.weight as f64 * node.gamma)
        .sum::<f64>()
        / fact[n] as f64;
    let nodes: Vec<StateNode> = nodes_by_level.into_iter().flatten().collect();
    Ok(OptimalSolution {
        result: ExactResult {
            value,
            method: ExactMethod::BackwardInduction,
            work: nodes.len() as u64,
        },
        nodes,
    })
}

/// Conditional probability that the current arrival is maximal in the whole
/// poset, for every reachable prefix state.
pub fn state_z_values(poset: &Poset) -> Result<BTreeMap<Vec<u8>, f64>> {
    check_size(poset, "state enumeration", MAX_BACKWARD_INDUCTION)?;
    let levels = state_levels(poset);
    Ok(levels
        .iter()
        .enumerate()
        .skip(1)
        .flat_map(|(t, level)| {
            level
                .iter()
                .map(move |(&bits, agg)| (key_bytes(t, bits), agg.wins as f64 / agg.seqs as f64))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_family, FamilySpec};
    use crate::poset::{induced_prefix, PrefixState};

    fn linear(n: usize) -> Poset {
        make_family(&FamilySpec::Linear { n }).unwrap()
    }

    fn antichain(n: usize) -> Poset {
        make_family(&FamilySpec::Antichain { n }).unwrap()
    }

    // Classical formula (r-1)/n * sum_{t=r}^{n} 1/(t-1), with 1/n at r = 1.
    fn classical(n: usize, r: usize) -> f64 {
        if r == 1 {
            return 1.0 / n as f64;
        }
        (r - 1) as f64 / n as f64 * (r..=n).map(|t| 1.0 / (t - 1) as f64).sum::<f64>()
    }

    #[test]
    fn classical_thresholds() {
        let v = exact_success_rule(&linear(3), &StoppingRule::threshold(2).unwrap()).unwrap();
        assert!((v.value - 0.5).abs() < 1e-12);
        let v = exact_success_rule(&linear(4), &StoppingRule::threshold(2).unwrap()).unwrap();
        assert!((v.value - 11.0 / 24.0).abs() < 1e-12);
        for n in 1..=7 {
            for r in 1..=n {
                let v = exact_success_rule(&linear(n), &StoppingRule::threshold(r).unwrap()).unwrap();
                assert!((v.value - classical(n, r)).abs() < 1e-12, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn antichain_always_wins() {
        for rule in [StoppingRule::threshold(2).unwrap(), StoppingRule::tau_k_fixed(1, 3).unwrap()] {
            assert_eq!(exact_success_rule(&antichain(5), &rule).unwrap().value, 1.0);
        }
        assert!((exact_success_tau(&antichain(2), 2, 0.3).unwrap().value - 1.0).abs() < 1e-12);
        assert!((optimal_value(&antichain(4)).unwrap().result.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_rule_rejected() {
        let rule = StoppingRule::tau_k(1, 0.5).unwrap();
        assert!(matches!(exact_success_rule(&linear(3), &rule), Err(Error::RandomRule(_))));
    }

    #[test]
    fn size_limits() {
        let rule = StoppingRule::threshold(1).unwrap();
        assert!(matches!(exact_success_rule(&linear(10), &rule), Err(Error::Size { .. })));
        assert!(matches!(exact_success_tau(&linear(9), 1, 0.5), Err(Error::Size { .. })));
        assert!(matches!(optimal_value(&linear(10)), Err(Error::Size { .. })));
        assert!(matches!(state_z_values(&linear(10)), Err(Error::Size { .. })));
    }

    #[test]
    fn two_chain_linear_tau_is_half() {
        for p in [0.1, 0.5, 0.9] {
            let v = exact_success_tau(&linear(2), 1, p).unwrap().value;
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn tau_param_error() {
        assert!(matches!(exact_success_tau(&linear(2), 1, 1.0), Err(Error::Param(_))));
    }

    #[test]
    fn optimal_small_linear() {
        assert!((optimal_value(&linear(2)).unwrap().result.value - 0.5).abs() < 1e-12);
        assert!((optimal_value(&linear(3)).unwrap().result.value - 0.5).abs() < 1e-12);
        assert!((optimal_value(&linear(1)).unwrap().result.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn node_invariants() {
        let p = make_family(&FamilySpec::Twins { levels: 3 }).unwrap();
        let sol = optimal_value(&p).unwrap();
        let n = p.len();
        let fact = factorials(n);
        for t in 1..=n {
            let total: u64 = sol.nodes.iter().filter(|s| s.t == t).map(|s| s.weight).sum();
            assert_eq!(total, fact[n], "depth {t}");
        }
        for node in &sol.nodes {
            assert!((0.0..=1.0).contains(&node.z));
            assert!(node.gamma + 1e-15 >= node.z);
            if let Some(c) = node.continuation {
                assert_eq!(node.child_weight, node.weight);
                assert!(node.gamma + 1e-15 >= c);
            }
        }
    }

    #[test]
    fn keys_match_prefix_serialization() {
        let p = Poset::from_relations(4, &[(0, 1), (2, 1), (3, 2)]).unwrap();
        let z = state_z_values(&p).unwrap();
        let order = [2, 0, 3, 1];
        for t in 1..=4 {
            let key = induced_prefix(&p, &order, t).serialize();
            assert!(z.contains_key(&key), "t={t}");
            PrefixState::deserialize(&key).unwrap();
        }
    }

    #[test]
    fn linear_z_is_t_over_n() {
        let n = 5;
        let z = state_z_values(&linear(n)).unwrap();
        for (key, value) in z {
            let s = PrefixState::deserialize(&key).unwrap();
            let t = s.len();
            let expect = if s.is_arrival_maximal(t - 1) { t as f64 / n as f64 } else { 0.0 };
            assert!((value - expect).abs() < 1e-12);
        }
    }
}
