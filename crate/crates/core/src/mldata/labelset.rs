use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ArgumentError;

const WORD_BITS: usize = 64;

/// A subset of a `q`-label space, stored as a fixed-width bitset.
///
/// The label count is part of the value: two sets over different label
/// spaces never compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet {
    q: usize,
    words: Vec<u64>,
}

impl LabelSet {
    /// The empty set over `q` labels.
    pub fn empty(q: usize) -> Self {
        LabelSet { q, words: vec![0; q.div_ceil(WORD_BITS)] }
    }

    /// The full set `{0, .., q-1}`.
    pub fn full(q: usize) -> Self {
        let mut s = Self::empty(q);
        for i in 0..q {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I>(q: usize, indices: I) -> Result<Self, ArgumentError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(q);
        for i in indices {
            if i >= q {
                return Err(ArgumentError::new(format!("label index {i} out of range for {q} labels")));
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Number of labels in the label space.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Adds `label`. Panics if `label >= q`.
    pub fn insert(&mut self, label: usize) {
        assert!(label < self.q, "label {label} out of range ({})", self.q);
        self.words[label / WORD_BITS] |= 1 << (label % WORD_BITS);
    }

    pub fn remove(&mut self, label: usize) {
        if label < self.q {
            self.words[label / WORD_BITS] &= !(1 << (label % WORD_BITS));
        }
    }

    pub fn contains(&self, label: usize) -> bool {
        label < self.q && self.words[label / WORD_BITS] & (1 << (label % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.q).filter(move |&i| self.contains(i))
    }

    pub fn complement(&self) -> LabelSet {
        let mut out = LabelSet::full(self.q);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o &= !w;
        }
        out
    }

    fn zip_count(&self, other: &LabelSet, op: impl Fn(u64, u64) -> u64) -> usize {
        debug_assert_eq!(self.q, other.q);
        self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b).count_ones() as usize).sum()
    }

    /// `|self ∩ other|`
    pub fn intersection_len(&self, other: &LabelSet) -> usize {
        self.zip_count(other, |a, b| a & b)
    }

    /// `|self ∪ other|`
    pub fn union_len(&self, other: &LabelSet) -> usize {
        self.zip_count(other, |a, b| a | b)
    }

    /// `|self Δ other|`
    pub fn symmetric_difference_len(&self, other: &LabelSet) -> usize {
        self.zip_count(other, |a, b| a ^ b)
    }

    /// Applies a relabeling: label `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> LabelSet {
        let mut out = LabelSet::empty(self.q);
        for i in self.iter() {
            out.insert(perm[i]);
        }
        out
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelSet(q={}, ", self.q)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct LabelSetRepr {
    q: usize,
    labels: Vec<usize>,
}

impl Serialize for LabelSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LabelSetRepr { q: self.q, labels: self.iter().collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = LabelSetRepr::deserialize(deserializer)?;
        LabelSet::from_indices(repr.q, repr.labels).map_err(serde::de::Error::custom)
    }
}
