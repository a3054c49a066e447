use super::Poset;
use crate::error::{Error, Result};

/// The labelled poset induced by the first `t` arrivals.
///
/// Arrival indices are 0-based here: `less(i, j)` means the `i`-th arrival
/// lies below the `j`-th arrival in the underlying order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixState {
    t: usize,
    rel: Vec<bool>,
}

/// Prefix of length `t` of the arrival order `order` on `poset`.
///
/// # Panics
/// Panics if `t` exceeds `order.len()` or `order` names an element outside
/// the poset.
pub fn induced_prefix(poset: &Poset, order: &[usize], t: usize) -> PrefixState {
    assert!(t <= order.len(), "prefix length {t} exceeds arrival sequence");
    let mut rel = vec![false; t * t];
    for i in 0..t {
        for j in 0..t {
            rel[i * t + j] = poset.less(order[i], order[j]);
        }
    }
    PrefixState { t, rel }
}

impl PrefixState {
    /// Builds a state from an explicit matrix, checking the order axioms.
    pub fn from_matrix(rel: &[Vec<bool>]) -> Result<Self> {
        let p = Poset::from_matrix(rel)?;
        let t = p.len();
        let mut flat = vec![false; t * t];
        for (u, v) in p.relations() {
            flat[u * t + v] = true;
        }
        Ok(PrefixState { t, rel: flat })
    }

    pub fn len(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0
    }

    #[inline]
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.t + j]
    }

    pub fn is_arrival_maximal(&self, i: usize) -> bool {
        (0..self.t).all(|j| !self.less(i, j))
    }

    /// Arrival indices that are maximal within the prefix.
    pub fn maximal_arrivals(&self) -> Vec<usize> {
        (0..self.t).filter(|&i| self.is_arrival_maximal(i)).collect()
    }

    pub fn to_poset(&self) -> Poset {
        let rows: Vec<Vec<bool>> = (0..self.t)
            .map(|i| (0..self.t).map(|j| self.less(i, j)).collect())
            .collect();
        Poset::from_matrix(&rows).expect("prefix of a poset is a poset")
    }

    /// Byte serialization used as a state key.
    ///
    /// Layout: `t` as little-endian `u32`, then two bits per arrival pair
    /// `(i, j)` with `i < j`, ordered by `j` then `i`. The low bit of a pair
    /// is `i ≺ j`, the high bit is `j ≺ i`. Bits are packed LSB first.
    /// Extending a prefix only appends bits, so a parent's bit string is a
    /// prefix of each child's.
    pub fn serialize(&self) -> Vec<u8> {
        let t = self.t;
        let nbits = t * t.saturating_sub(1);
        let mut out = Vec::with_capacity(4 + nbits.div_ceil(8));
        out.extend_from_slice(&(t as u32).to_le_bytes());
        let mut bytes = vec![0u8; nbits.div_ceil(8)];
        let mut pos = 0;
        #[allow(clippy::needless_range_loop)]
        for j in 1..t {
            for i in 0..j {
                if self.less(i, j) {
                    bytes[pos / 8] |= 1 << (pos % 8);
                }
                if self.less(j, i) {
                    bytes[(pos + 1) / 8] |= 1 << ((pos + 1) % 8);
                }
                pos += 2;
            }
        }
        out.extend_from_slice(&bytes);
        out
    }

    pub fn key_hex(&self) -> String {
        hex::encode(self.serialize())
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::Param(format!("bad state key: {msg}"));
        let head: [u8; 4] = bytes
            .get(..4)
            .and_then(|h| h.try_into().ok())
            .ok_or_else(|| bad("missing length"))?;
        let t = u32::from_le_bytes(head) as usize;
        let nbits = t * t.saturating_sub(1);
        let body = &bytes[4..];
        if body.len() != nbits.div_ceil(8) {
            return Err(bad("length mismatch"));
        }
        let bit = |pos: usize| body[pos / 8] >> (pos % 8) & 1 == 1;
        let mut rows = vec![vec![false; t]; t];
        let mut pos = 0;
        #[allow(clippy::needless_range_loop)]
        for j in 1..t {
            for i in 0..j {
                rows[i][j] = bit(pos);
                rows[j][i] = bit(pos + 1);
                pos += 2;
            }
        }
        Self::from_matrix(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Poset {
        Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_arrival() {
        let s = induced_prefix(&chain3(), &[1, 0, 2], 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s.maximal_arrivals(), vec![0]);
    }

    #[test]
    fn second_arrival_below_first() {
        let s = induced_prefix(&chain3(), &[2, 0, 1], 2);
        assert!(s.less(1, 0));
        assert!(!s.less(0, 1));
        assert_eq!(s.maximal_arrivals(), vec![0]);
    }

    #[test]
    fn two_chains_prefix() {
        // chains {0<1}, {2<3}; arrivals 0, 2, 1
        let p = Poset::from_relations(4, &[(0, 1), (2, 3)]).unwrap();
        let s = induced_prefix(&p, &[0, 2, 1, 3], 3);
        let mut rels = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if s.less(i, j) {
                    rels.push((i, j));
                }
            }
        }
        assert_eq!(rels, vec![(0, 2)]);
        assert_eq!(s.maximal_arrivals(), vec![1, 2]);
    }

    #[test]
    fn serialize_roundtrip_and_prefix_property() {
        let p = Poset::from_relations(5, &[(0, 1), (1, 2), (3, 2), (4, 0)]).unwrap();
        let order = [2, 4, 0, 3, 1];
        let full = induced_prefix(&p, &order, 5);
        let back = PrefixState::deserialize(&full.serialize()).unwrap();
        assert_eq!(back, full);
        let parent = induced_prefix(&p, &order, 4).serialize();
        let child = full.serialize();
        // bits of the parent (12 bits) reappear at the start of the child body
        for pos in 0..12 {
            let pb = parent[4 + pos / 8] >> (pos % 8) & 1;
            let cb = child[4 + pos / 8] >> (pos % 8) & 1;
            assert_eq!(pb, cb);
        }
    }

    #[test]
    fn empty_and_unit_keys_differ() {
        let p = chain3();
        assert_ne!(induced_prefix(&p, &[0, 1, 2], 0).serialize(), induced_prefix(&p, &[0, 1, 2], 1).serialize());
    }
}
