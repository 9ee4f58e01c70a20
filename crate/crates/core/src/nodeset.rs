//! Node identifiers and bit-packed node sets.
//!
//! Nodes are 1-based. Node `i` occupies bit `i - 1` of a [`NodeSet`], so the
//! raw encoding of a set is exactly the set index used by the ASP exporter
//! (`2**(X-1) & C != 0`).

use std::fmt;
use std::str::FromStr;

/// Largest node count any graph may have (one bit per node in a `u64`).
pub const MAX_NODES: usize = 64;

/// A 1-based node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub(crate) fn bit(self) -> u64 {
        debug_assert!(self.0 >= 1 && self.0 <= MAX_NODES);
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

/// A set of nodes stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All nodes `1..=n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_NODES, "node count {n} exceeds {MAX_NODES}");
        if n == MAX_NODES {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: NodeId) -> Self {
        NodeSet(v.bit())
    }

    #[inline]
    pub fn contains(self, v: NodeId) -> bool {
        v.0 >= 1 && v.0 <= MAX_NODES && self.0 & v.bit() != 0
    }

    #[inline]
    pub fn insert(&mut self, v: NodeId) {
        self.0 |= v.bit();
    }

    #[inline]
    pub fn remove(&mut self, v: NodeId) {
        self.0 &= !v.bit();
    }

    #[inline]
    pub fn with(self, v: NodeId) -> Self {
        NodeSet(self.0 | v.bit())
    }

    #[inline]
    pub fn without(self, v: NodeId) -> Self {
        NodeSet(self.0 & !v.bit())
    }

    #[inline]
    pub fn union(self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Highest node index present, if any.
    pub fn max(self) -> Option<NodeId> {
        if self.0 == 0 {
            None
        } else {
            Some(NodeId(64 - self.0.leading_zeros() as usize))
        }
    }

    /// Lowest node index present, if any.
    pub fn min(self) -> Option<NodeId> {
        if self.0 == 0 {
            None
        } else {
            Some(NodeId(self.0.trailing_zeros() as usize + 1))
        }
    }

    /// Members in increasing index order.
    pub fn iter(self) -> NodeSetIter {
        NodeSetIter(self.0)
    }

    /// Every subset of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<T: IntoIterator<Item = NodeId>>(iter: T) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for NodeSet {
    fn from(nodes: [usize; N]) -> Self {
        nodes.into_iter().map(NodeId).collect()
    }
}

impl IntoIterator for NodeSet {
    type Item = NodeId;
    type IntoIter = NodeSetIter;

    fn into_iter(self) -> NodeSetIter {
        self.iter()
    }
}

pub struct NodeSetIter(u64);

impl Iterator for NodeSetIter {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(NodeId(tz + 1))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for NodeSetIter {}

/// Submask enumeration in increasing numeric order.
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        let cur = self.next?;
        // standard "next submask in increasing order" step
        self.next = if cur == self.mask {
            None
        } else {
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(NodeSet(cur))
    }
}

/// Formats as `{1,3,4}`.
impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid node set `{0}`")]
pub struct ParseNodeSetError(pub String);

/// Accepts `1,3,4`, `{1,3,4}`, `{}` or the empty string.
impl FromStr for NodeSet {
    type Err = ParseNodeSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(t);
        let mut set = NodeSet::EMPTY;
        for tok in t.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let i: usize = tok.parse().map_err(|_| ParseNodeSetError(s.to_string()))?;
            if i == 0 || i > MAX_NODES {
                return Err(ParseNodeSetError(s.to_string()));
            }
            set.insert(NodeId(i));
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_matches_set_index() {
        // {3} is set index 4, {1} is 1, {2} is 2
        assert_eq!(NodeSet::from([3]).bits(), 4);
        assert_eq!(NodeSet::from([1]).bits(), 1);
        assert_eq!(NodeSet::from([1, 2, 3]).bits(), 7);
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = NodeSet::from([2, 4, 5]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], NodeSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(NodeSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1,3".parse::<NodeSet>().unwrap(), NodeSet::from([1, 3]));
        assert_eq!("{}".parse::<NodeSet>().unwrap(), NodeSet::EMPTY);
        assert_eq!("".parse::<NodeSet>().unwrap(), NodeSet::EMPTY);
        assert_eq!(NodeSet::from([4, 1]).to_string(), "{1,4}");
        assert!("0".parse::<NodeSet>().is_err());
        assert!("a".parse::<NodeSet>().is_err());
    }

    #[test]
    fn min_max() {
        let s = NodeSet::from([3, 7]);
        assert_eq!(s.min(), Some(NodeId(3)));
        assert_eq!(s.max(), Some(NodeId(7)));
        assert_eq!(NodeSet::EMPTY.max(), None);
        assert_eq!(NodeSet::full(64).len(), 64);
    }
}
