mod common;

use common::{arb_order, arb_poset, max_antichain, random_poset};
use poset_secretary::poset::{parse_poset, width_and_chain_cover, write_poset};
use poset_secretary::{induced_prefix, make_family, FamilySpec, Poset, PrefixState};
use proptest::prelude::*;

fn assert_axioms(p: &Poset) {
    let m = p.relation_matrix();
    let n = p.len();
    for a in 0..n {
        assert!(!m[a][a], "reflexive at {a}");
        for b in 0..n {
            assert!(!(m[a][b] && m[b][a]), "antisymmetry fails on {a},{b}");
            for c in 0..n {
                if m[a][b] && m[b][c] {
                    assert!(m[a][c], "transitivity fails on {a},{b},{c}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn generated_posets_satisfy_order_axioms(p in arb_poset(1, 14)) {
        assert_axioms(&p);
    }

    #[test]
    fn parsed_posets_satisfy_order_axioms(p in arb_poset(1, 12)) {
        let text = write_poset(&p, Some("roundtrip"));
        let q = parse_poset(&text).unwrap();
        assert_axioms(&q);
        prop_assert_eq!(q.relation_matrix(), p.relation_matrix());
    }

    #[test]
    fn width_cover_and_antichain_agree(p in arb_poset(1, 20)) {
        let (width, cover) = width_and_chain_cover(&p);
        prop_assert!(cover.is_valid_for(&p));
        prop_assert_eq!(cover.chains.len(), width);
        let anti = max_antichain(&p);
        prop_assert_eq!(anti.len(), width);
    }

    #[test]
    fn full_prefix_reproduces_poset(
        (p, order) in arb_poset(1, 10).prop_flat_map(|p| { let n = p.len(); (Just(p), arb_order(n)) })
    ) {
        let n = p.len();
        let prefix = induced_prefix(&p, &order, n);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(prefix.less(i, j), p.less(order[i], order[j]));
            }
        }
        // Relabelling the prefix back by `order` gives the original relation.
        let back = prefix.to_poset();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(back.less(i, j), p.less(order[i], order[j]));
            }
        }
    }

    #[test]
    fn serialization_injective_for_equal_t(
        a in arb_poset(1, 7), b in arb_poset(1, 7), sa in any::<u64>(), sb in any::<u64>()
    ) {
        let t = a.len().min(b.len());
        let oa: Vec<usize> = shuffled(a.len(), sa);
        let ob: Vec<usize> = shuffled(b.len(), sb);
        let pa = induced_prefix(&a, &oa, t);
        let pb = induced_prefix(&b, &ob, t);
        let same_matrix = (0..t).all(|i| (0..t).all(|j| pa.less(i, j) == pb.less(i, j)));
        prop_assert_eq!(pa.serialize() == pb.serialize(), same_matrix);
        prop_assert_eq!(PrefixState::deserialize(&pa.serialize()).unwrap(), pa);
    }

    #[test]
    fn random_family_is_deterministic(n in 1usize..30, d in 0.0f64..=1.0, seed in any::<u64>()) {
        let a = random_poset(n, d, seed);
        let b = random_poset(n, d, seed);
        prop_assert_eq!(a.relation_matrix(), b.relation_matrix());
    }

    #[test]
    fn disjoint_chains_have_k_maxima_and_width_k(k in 1usize..8, x in 1usize..8) {
        let p = make_family(&FamilySpec::DisjointChains { k, x }).unwrap();
        prop_assert_eq!(p.maximal_elements().len(), k);
        prop_assert_eq!(width_and_chain_cover(&p).0, k);
    }
}

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    // Small LCG-driven Fisher-Yates, independent of the library's RNG use.
    let mut v: Vec<usize> = (0..n).collect();
    let mut s = seed | 1;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (s >> 33) as usize % (i + 1);
        v.swap(i, j);
    }
    v
}

#[test]
fn twins_antichains_have_at_most_two_elements() {
    for levels in 1..=7 {
        let p = make_family(&FamilySpec::Twins { levels }).unwrap();
        assert_eq!(max_antichain(&p).len(), 2.min(p.len()), "levels {levels}");
    }
}

#[test]
fn binary_tree_root_is_unique_maximum() {
    for depth in 1..=5 {
        let p = make_family(&FamilySpec::BinaryTree { depth }).unwrap();
        assert_eq!(p.maximal_elements(), vec![0]);
        assert_eq!(width_and_chain_cover(&p).0, 1 << (depth - 1));
    }
}
