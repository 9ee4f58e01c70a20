//! Exhaustive enumeration of labeled graphs.
//!
//! Each unordered pair `i < j` (in lexicographic order) takes one of six
//! states: no arrow, `i -> j` or `j -> i`, times the presence of the
//! symmetric edge (a line in the alternative dialect, a biarrow in the
//! original one). A graph is a base-6 code over the pairs.

use crate::graph::{Dialect, MixedGraph};
use crate::nodeset::NodeId;

pub const PAIR_STATES: u64 = 6;

/// Unordered pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((NodeId(i), NodeId(j)));
        }
    }
    out
}

/// Number of codes for `n` nodes, or `None` on overflow.
pub fn code_count(n: usize) -> Option<u64> {
    let p = u32::try_from(n * n.saturating_sub(1) / 2).ok()?;
    PAIR_STATES.checked_pow(p)
}

/// Decodes a graph; may contain directed cycles.
pub fn decode(n: usize, pairs: &[(NodeId, NodeId)], mut code: u64, dialect: Dialect) -> MixedGraph {
    let mut g = MixedGraph::new(n);
    for &(a, b) in pairs {
        let state = code % PAIR_STATES;
        code /= PAIR_STATES;
        match state % 3 {
            1 => g.add_arrow(a, b).expect("valid pair"),
            2 => g.add_arrow(b, a).expect("valid pair"),
            _ => {}
        }
        if state >= 3 {
            match dialect {
                Dialect::Alternative => g.add_line(a, b).expect("valid pair"),
                Dialect::Original => g.add_biarrow(a, b).expect("valid pair"),
            }
        }
    }
    g
}

/// Every acyclic graph over `n` nodes in the given dialect, in code order.
pub fn all_graphs(n: usize, dialect: Dialect) -> impl Iterator<Item = MixedGraph> {
    let ps = pairs(n);
    let count = code_count(n).expect("enumeration size overflows u64");
    (0..count)
        .map(move |c| decode(n, &ps, c, dialect))
        .filter(MixedGraph::is_acyclic)
}

/// A uniformly random acyclic graph (rejection sampling over codes).
pub fn random_graph<R: rand::Rng + ?Sized>(n: usize, dialect: Dialect, rng: &mut R) -> MixedGraph {
    let ps = pairs(n);
    let count = code_count(n).expect("enumeration size overflows u64");
    loop {
        let g = decode(n, &ps, rng.random_range(0..count), dialect);
        if g.is_acyclic() {
            return g;
        }
    }
}
