//! Finite strict partial orders.
//!
//! A [`Poset`] stores the full transitive closure of its order relation as
//! per-element up-sets and down-sets, so comparability and maximality are
//! constant-time lookups once the poset is built.

mod enumerate;
mod prefix;
mod text;
mod width;

pub use enumerate::{canonical_code, enumerate_all_posets, MAX_ENUMERATION_SIZE};
pub use prefix::{induced_prefix, PrefixState};
pub use text::{parse_poset, write_poset};
pub use width::{width_and_chain_cover, ChainCover};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// A strict partial order on the elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    /// `up[u]` holds every `v` with `u ≺ v`.
    up: Vec<Bits>,
    /// `down[v]` holds every `u` with `u ≺ v`.
    down: Vec<Bits>,
}

impl Poset {
    /// Builds the transitive closure of `pairs`, where `(u, v)` means `u ≺ v`.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut up = vec![Bits::new(n); n];
        for &(u, v) in pairs {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::ElementOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(Error::Cycle(u));
            }
            up[u].insert(v);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| up[x].contains(x)) {
            return Err(Error::Cycle(x));
        }
        Ok(Self::from_closed_up_sets(up))
    }

    /// Accepts an explicit relation matrix (`rel[u][v]` iff `u ≺ v`) and checks
    /// the three order axioms without closing it.
    pub fn from_matrix(rel: &[Vec<bool>]) -> Result<Self> {
        let n = rel.len();
        let mut up = vec![Bits::new(n); n];
        for (u, row) in rel.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Param(format!("row {u} has length {}, expected {n}", row.len())));
            }
            for (v, &r) in row.iter().enumerate() {
                if r {
                    up[u].insert(v);
                }
            }
        }
        let p = Self::from_closed_up_sets(up);
        p.check_axioms()?;
        Ok(p)
    }

    fn from_closed_up_sets(up: Vec<Bits>) -> Self {
        let n = up.len();
        let mut down = vec![Bits::new(n); n];
        for (u, row) in up.iter().enumerate() {
            for v in row.iter() {
                down[v].insert(u);
            }
        }
        Poset { n, up, down }
    }

    /// Verifies irreflexivity, antisymmetry and transitivity directly.
    pub fn check_axioms(&self) -> Result<()> {
        for u in 0..self.n {
            if self.less(u, u) {
                return Err(Error::Cycle(u));
            }
            for v in self.up[u].iter() {
                if self.less(v, u) {
                    return Err(Error::Cycle(u));
                }
                for w in self.up[v].iter() {
                    if !self.less(u, w) {
                        return Err(Error::Param(format!(
                            "relation is not transitive: {u} < {v} < {w}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `u ≺ v`.
    #[inline]
    pub fn less(&self, u: usize, v: usize) -> bool {
        self.up[u].contains(v)
    }

    #[inline]
    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.less(u, v) || self.less(v, u)
    }

    pub fn up_set(&self, u: usize) -> &Bits {
        &self.up[u]
    }

    pub fn down_set(&self, u: usize) -> &Bits {
        &self.down[u]
    }

    pub fn is_maximal(&self, u: usize) -> bool {
        self.up[u].none()
    }

    /// Elements with nothing above them, in increasing id order.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&u| self.is_maximal(u)).collect()
    }

    pub fn relation_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.less(u, v)).collect())
            .collect()
    }

    /// All pairs `(u, v)` with `u ≺ v`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.up[u].iter().map(move |v| (u, v)))
            .collect()
    }

    /// Covering pairs of the order (the Hasse diagram edges).
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        self.relations()
            .into_iter()
            .filter(|&(u, v)| !self.up[u].iter().any(|w| self.less(w, v)))
            .collect()
    }

    /// Relabels element `u` as `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.n);
        let mut up = vec![Bits::new(self.n); self.n];
        for (u, v) in self.relations() {
            up[perm[u]].insert(perm[v]);
        }
        Self::from_closed_up_sets(up)
    }

    /// Compact human-readable description listing the cover relations.
    pub fn describe(&self) -> String {
        let covers = self.cover_relations();
        let body = covers
            .iter()
            .map(|(u, v)| format!("{u}<{v}"))
            .collect::<Vec<_>>()
            .join(";");
        format!("poset(n={};{})", self.n, body)
    }
}
