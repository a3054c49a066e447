mod common;

use common::{arb_order, arb_poset};
use poset_secretary::strategy::{
    stopping_time, ActiveRule, Decision, Observation, RandomnessStream,
};
use poset_secretary::{induced_prefix, Poset, StoppingRule};
use proptest::prelude::*;

fn poset_and_order(lo: usize, hi: usize) -> impl Strategy<Value = (Poset, Vec<usize>)> {
    arb_poset(lo, hi).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), arb_order(n))
    })
}

fn fixed(k: usize, x: usize, n: usize) -> ActiveRule {
    StoppingRule::tau_k_fixed(k, x).unwrap().activate_deterministic(n).unwrap()
}

/// A poset with a unique maximum: `base` plus a new top element above it.
fn with_top(base: &Poset) -> Poset {
    let n = base.len();
    let mut rel = base.relations();
    rel.extend((0..n).map(|i| (i, n)));
    Poset::from_relations(n + 1, &rel).unwrap()
}

/// A linear extension of `p` as a chain poset on the same ids; ties in
/// down-set size are broken by `salt`.
fn linear_extension(p: &Poset, salt: u64) -> Poset {
    let mut ids: Vec<usize> = (0..p.len()).collect();
    ids.sort_by_key(|&i| {
        let mix = (i as u64 ^ salt).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        (p.down_set(i).count(), mix)
    });
    let rel: Vec<(usize, usize)> = ids.windows(2).map(|w| (w[0], w[1])).collect();
    Poset::from_relations(p.len(), &rel).unwrap()
}

proptest! {
    #[test]
    fn every_rule_stops_once_within_horizon(
        (p, order) in poset_and_order(1, 12), k in 1usize..4, seed in any::<u64>(), r in 1usize..12
    ) {
        let n = p.len();
        let mut rnd = RandomnessStream::new(seed);
        let rules = [
            StoppingRule::tau_k(k, 0.4).unwrap().activate(n, &mut rnd),
            StoppingRule::threshold(r.min(n)).unwrap().activate_deterministic(n).unwrap(),
        ];
        for rule in rules {
            let t = stopping_time(&p, &order, &rule);
            prop_assert!((1..=n).contains(&t));
            // The first stop signal replayed from induced prefixes is at t,
            // and the final prefix always signals stop.
            let first = (1..=n).find(|&s| rule.decide(&induced_prefix(&p, &order, s)) == Decision::Stop);
            prop_assert_eq!(first, Some(t));
            prop_assert_eq!(rule.decide(&induced_prefix(&p, &order, n)), Decision::Stop);
        }
    }

    #[test]
    fn same_seed_same_decisions((p, order) in poset_and_order(1, 12), seed in any::<u64>(), prob in 0.0f64..=1.0) {
        let n = p.len();
        let rule = StoppingRule::tau_k(2, prob).unwrap();
        let a = rule.activate(n, &mut RandomnessStream::new(seed));
        let b = rule.activate(n, &mut RandomnessStream::new(seed));
        prop_assert_eq!(a.rejected(), b.rejected());
        for t in 1..=n {
            let s = induced_prefix(&p, &order, t);
            prop_assert_eq!(a.decide(&s), b.decide(&s));
        }
    }

    #[test]
    fn decision_depends_only_on_summary(
        (p, oa) in poset_and_order(2, 9), (q, ob) in poset_and_order(2, 9),
        k in 1usize..4, x in 0usize..9
    ) {
        let n = p.len().max(q.len());
        let rule = fixed(k, x, n);
        for t in 1..=p.len().min(q.len()) {
            let a = induced_prefix(&p, &oa, t);
            let b = induced_prefix(&q, &ob, t);
            let summary = |s: &poset_secretary::PrefixState| (s.maximal_count(), s.current_is_maximal());
            if summary(&a) == summary(&b) {
                prop_assert_eq!(rule.decide(&a), rule.decide(&b));
            }
        }
    }

    #[test]
    fn linear_extension_coupling(
        base in arb_poset(1, 8), salt in any::<u64>(), order_seed in any::<u64>(), x in 0usize..10
    ) {
        let p = with_top(&base);
        let n = p.len();
        let l = linear_extension(&p, salt);
        for (u, v) in p.relations() {
            prop_assert!(l.less(u, v));
        }
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = order_seed | 1;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let rule = fixed(1, x.min(n), n);
        let win = |poset: &Poset| poset.is_maximal(order[stopping_time(poset, &order, &rule) - 1]);
        if !win(&p) {
            prop_assert!(!win(&l), "coupled run wins on the extension but not on the poset");
        }
    }
}
