//! Poset families: disjoint chains, linear orders, antichains, binary trees,
//! twins, and seeded random orders for fuzzing.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

const MAX_TREE_DEPTH: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `k` disjoint chains of `x` elements each. Chain `c` holds the ids
    /// `c*x .. c*x + x`, increasing upwards.
    DisjointChains { k: usize, x: usize },
    Linear { n: usize },
    Antichain { n: usize },
    /// Complete binary tree with the root as unique maximal element.
    BinaryTree { depth: usize },
    /// `levels` levels of two incomparable elements, each level entirely
    /// below the next.
    Twins { levels: usize },
    /// Closure of independent upper-triangular Bernoulli(`density`)
    /// relations under a seeded random relabeling.
    Random { n: usize, density: f64, seed: u64 },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::Spec(format!("{name} must be positive")))
            } else {
                Ok(())
            }
        };
        match *self {
            FamilySpec::DisjointChains { k, x } => {
                positive("k", k)?;
                positive("x", x)
            }
            FamilySpec::Linear { n } | FamilySpec::Antichain { n } => positive("n", n),
            FamilySpec::BinaryTree { depth } => {
                positive("depth", depth)?;
                if depth > MAX_TREE_DEPTH {
                    return Err(Error::Spec(format!("depth must be at most {MAX_TREE_DEPTH}")));
                }
                Ok(())
            }
            FamilySpec::Twins { levels } => positive("levels", levels),
            FamilySpec::Random { n, density, .. } => {
                positive("n", n)?;
                if !(0.0..=1.0).contains(&density) {
                    return Err(Error::Spec(format!("density {density} outside [0, 1]")));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::DisjointChains { k, x } => write!(f, "disjoint_chains(k={k},x={x})"),
            FamilySpec::Linear { n } => write!(f, "linear(n={n})"),
            FamilySpec::Antichain { n } => write!(f, "antichain(n={n})"),
            FamilySpec::BinaryTree { depth } => write!(f, "binary_tree(depth={depth})"),
            FamilySpec::Twins { levels } => write!(f, "twins(levels={levels})"),
            FamilySpec::Random { n, density, seed } => {
                write!(f, "random(n={n},density={density},seed={seed})")
            }
        }
    }
}

impl std::str::FromStr for FamilySpec {
    type Err = Error;

    /// Parses the descriptor form produced by `Display`, e.g.
    /// `disjoint_chains(k=3,x=5)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Spec(format!("cannot parse family descriptor {s:?}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let body = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let mut args = std::collections::HashMap::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            args.insert(key.trim(), value.trim());
        }
        let int = |key: &str| -> Result<usize> {
            args.get(key)
                .ok_or_else(|| Error::Spec(format!("missing parameter {key}")))?
                .parse()
                .map_err(|_| Error::Spec(format!("parameter {key} is not a count")))
        };
        let spec = match &s[..open] {
            "disjoint_chains" => FamilySpec::DisjointChains { k: int("k")?, x: int("x")? },
            "linear" => FamilySpec::Linear { n: int("n")? },
            "antichain" => FamilySpec::Antichain { n: int("n")? },
            "binary_tree" => FamilySpec::BinaryTree { depth: int("depth")? },
            "twins" => FamilySpec::Twins { levels: int("levels")? },
            "random" => FamilySpec::Random {
                n: int("n")?,
                density: args
                    .get("density")
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Spec("missing or bad density".into()))?,
                seed: args
                    .get("seed")
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Spec("missing or bad seed".into()))?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn make_family(spec: &FamilySpec) -> Result<Poset> {
    spec.validate()?;
    match *spec {
        FamilySpec::DisjointChains { k, x } => {
            let pairs: Vec<_> = (0..k)
                .flat_map(|c| (0..x - 1).map(move |i| (c * x + i, c * x + i + 1)))
                .collect();
            Poset::from_relations(k * x, &pairs)
        }
        FamilySpec::Linear { n } => make_family(&FamilySpec::DisjointChains { k: 1, x: n }),
        FamilySpec::Antichain { n } => Poset::from_relations(n, &[]),
        FamilySpec::BinaryTree { depth } => {
            let n = (1usize << depth) - 1;
            let pairs: Vec<_> = (1..n).map(|c| (c, (c - 1) / 2)).collect();
            Poset::from_relations(n, &pairs)
        }
        FamilySpec::Twins { levels } => {
            let pairs: Vec<_> = (0..levels - 1)
                .flat_map(|l| {
                    let lo = [2 * l, 2 * l + 1];
                    let hi = [2 * l + 2, 2 * l + 3];
                    lo.into_iter().flat_map(move |u| hi.into_iter().map(move |v| (u, v)))
                })
                .collect();
            Poset::from_relations(2 * levels, &pairs)
        }
        FamilySpec::Random { n, density, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(density) {
                        pairs.push((i, j));
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            Poset::from_relations(n, &pairs).map(|p| p.relabel(&perm))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::width_and_chain_cover;

    fn width(p: &Poset) -> usize {
        width_and_chain_cover(p).0
    }

    #[test]
    fn chains_of_length_one_are_an_antichain() {
        let p = make_family(&FamilySpec::DisjointChains { k: 2, x: 1 }).unwrap();
        assert_eq!(p, make_family(&FamilySpec::Antichain { n: 2 }).unwrap());
    }

    #[test]
    fn twins_shape() {
        let p = make_family(&FamilySpec::Twins { levels: 3 }).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.maximal_elements(), vec![4, 5]);
        assert_eq!(width(&p), 2);
        assert!(p.less(0, 5) && p.less(1, 4) && !p.comparable(2, 3));
    }

    #[test]
    fn binary_tree_shape() {
        let p = make_family(&FamilySpec::BinaryTree { depth: 3 }).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!(p.maximal_elements(), vec![0]);
        assert_eq!(width(&p), 4);
    }

    #[test]
    fn disjoint_chains_have_k_maxima_and_width_k() {
        for k in 1..5 {
            for x in 1..5 {
                let p = make_family(&FamilySpec::DisjointChains { k, x }).unwrap();
                assert_eq!(p.len(), k * x);
                assert_eq!(p.maximal_elements().len(), k);
                assert_eq!(width(&p), k);
            }
        }
    }

    #[test]
    fn linear_is_one_chain() {
        let p = make_family(&FamilySpec::Linear { n: 4 }).unwrap();
        assert_eq!(p.relations().len(), 6);
    }

    #[test]
    fn random_is_deterministic_in_seed() {
        let spec = FamilySpec::Random { n: 12, density: 0.3, seed: 7 };
        let a = make_family(&spec).unwrap();
        assert_eq!(a, make_family(&spec).unwrap());
        a.check_axioms().unwrap();
        let other = make_family(&FamilySpec::Random { n: 12, density: 0.3, seed: 8 }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(make_family(&FamilySpec::Linear { n: 0 }), Err(Error::Spec(_))));
        assert!(matches!(
            make_family(&FamilySpec::DisjointChains { k: 0, x: 3 }),
            Err(Error::Spec(_))
        ));
        assert!(matches!(
            make_family(&FamilySpec::Random { n: 3, density: 1.5, seed: 0 }),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn descriptors() {
        assert_eq!(FamilySpec::DisjointChains { k: 3, x: 5 }.to_string(), "disjoint_chains(k=3,x=5)");
        assert_eq!(FamilySpec::Twins { levels: 2 }.to_string(), "twins(levels=2)");
    }

    #[test]
    fn descriptor_roundtrip() {
        for spec in [
            FamilySpec::DisjointChains { k: 3, x: 5 },
            FamilySpec::Linear { n: 4 },
            FamilySpec::Antichain { n: 2 },
            FamilySpec::BinaryTree { depth: 3 },
            FamilySpec::Twins { levels: 4 },
            FamilySpec::Random { n: 9, density: 0.25, seed: 17 },
        ] {
            assert_eq!(spec.to_string().parse::<FamilySpec>().unwrap(), spec);
        }
        assert!("linear(n=0)".parse::<FamilySpec>().is_err());
        assert!("cube(n=3)".parse::<FamilySpec>().is_err());
        assert!("linear".parse::<FamilySpec>().is_err());
    }
}
