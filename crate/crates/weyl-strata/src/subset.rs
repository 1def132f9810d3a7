//! Small subsets of diagram nodes as bitmasks.
//!
//! Every subset of simple roots that appears in the library (the J, K and T
//! parameters of the various indexings) lives inside a diagram of at most 16
//! nodes, so a u16 bitmask is enough. NodeSet is a transparent newtype so
//! that subsets are not confused with element ids or lengths.

use std::fmt;

/// A subset of diagram nodes, node i present iff bit i is set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeSet(pub u16);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    /// Full set on the first `rank` nodes.
    pub fn full(rank: usize) -> NodeSet {
        debug_assert!(rank <= 16);
        NodeSet(if rank == 16 { u16::MAX } else { (1u16 << rank) - 1 })
    }

    pub fn singleton(i: usize) -> NodeSet {
        NodeSet(1u16 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    /// Nodes in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, ascending as bitmasks (so EMPTY first and
    /// `self` last). Uses the standard subset-stepping trick: the successor
    /// of t within mask m is ((t | !m) + 1) & m.
    pub fn subsets(self) -> impl Iterator<Item = NodeSet> {
        let mask = self.0;
        let mut cur: Option<u16> = Some(0);
        std::iter::from_fn(move || {
            let t = cur?;
            cur = if t == mask {
                None
            } else {
                Some((t | !mask).wrapping_add(1) & mask)
            };
            Some(NodeSet(t))
        })
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> NodeSet {
        let mut s = NodeSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
