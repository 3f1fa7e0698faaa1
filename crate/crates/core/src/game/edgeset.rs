use std::fmt;

use crate::graph::EdgeIdx;

/// Boards are limited to this many edges so a free set fits one word.
pub const MAX_EDGES: usize = 128;

/// Bit set over edge indices `0..128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EdgeSet(pub u128);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    /// The set `{0, .., m - 1}`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_EDGES);
        if m == MAX_EDGES {
            EdgeSet(u128::MAX)
        } else {
            EdgeSet((1u128 << m) - 1)
        }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = EdgeIdx>) -> Self {
        let mut s = EdgeSet::EMPTY;
        for e in edges {
            s.insert(e);
        }
        s
    }

    #[inline]
    pub fn contains(self, e: EdgeIdx) -> bool {
        e < MAX_EDGES && self.0 >> e & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: EdgeIdx) {
        self.0 |= 1u128 << e;
    }

    #[inline]
    pub fn remove(&mut self, e: EdgeIdx) {
        self.0 &= !(1u128 << e);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn difference(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !other.0)
    }

    #[inline]
    pub fn intersect(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & other.0)
    }

    pub fn iter(self) -> EdgeSetIter {
        EdgeSetIter(self.0)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for EdgeSet {
    type Item = EdgeIdx;
    type IntoIter = EdgeSetIter;

    fn into_iter(self) -> EdgeSetIter {
        self.iter()
    }
}

pub struct EdgeSetIter(u128);

impl Iterator for EdgeSetIter {
    type Item = EdgeIdx;

    #[inline]
    fn next(&mut self) -> Option<EdgeIdx> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for EdgeSetIter {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = EdgeSet::from_edges([0, 5, 127]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(127) && !s.contains(1));
        s.remove(5);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 127]);
        assert_eq!(EdgeSet::full(128).len(), 128);
        assert_eq!(EdgeSet::full(3), EdgeSet::from_edges([0, 1, 2]));
        assert!(EdgeSet::from_edges([1]).is_subset(EdgeSet::full(3)));
    }
}
