//! Independence statements implied by the ordered local and pairwise Markov
//! properties, and by the block-recursive, local and pairwise properties of
//! AMP chain graphs.
//!
//! Generators return deduplicated statement sets in a fixed order. Any
//! statement with an empty side is dropped.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{GraphError, MixedGraph};
use crate::nodeset::{NodeId, NodeSet};
use crate::separation::{augmented_graph, extended_subgraph, SepError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MarkovError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separation(#[from] SepError),
    #[error("node {0} is not in the set")]
    NodeNotInSet(NodeId),
    #[error("ordering is not consistent with the graph")]
    InconsistentOrdering,
    #[error("graph is not an AMP chain graph")]
    NotAnAmpCg,
}

/// Intervention regime of a statement; `None` is observational.
pub type Regime = Option<NodeId>;

/// `x ⫫ y | z`, optionally under an intervention regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CiStatement {
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
    pub regime: Regime,
}

impl CiStatement {
    /// `None` when a side is empty or the sets overlap.
    pub fn new(x: NodeSet, y: NodeSet, z: NodeSet) -> Option<Self> {
        if x.is_empty() || y.is_empty() {
            return None;
        }
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return None;
        }
        Some(CiStatement {
            x,
            y,
            z,
            regime: None,
        })
    }
}

impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} _||_ {} | {}", self.x, self.y, self.z)?;
        if let Some(r) = self.regime {
            write!(f, " [do {r}]")?;
        }
        Ok(())
    }
}

/// A graph with a total order in which no node precedes one of its
/// ancestors.
#[derive(Debug, Clone)]
pub struct OrderedContext {
    graph: MixedGraph,
    ordering: Vec<NodeId>,
}

impl OrderedContext {
    pub fn new(graph: MixedGraph, ordering: Vec<NodeId>) -> Result<Self, MarkovError> {
        let n = graph.n();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in ordering.iter().enumerate() {
            graph.check_node(v)?;
            if pos[v.0 - 1] != usize::MAX {
                return Err(MarkovError::InconsistentOrdering);
            }
            pos[v.0 - 1] = i;
        }
        if ordering.len() != n {
            return Err(MarkovError::InconsistentOrdering);
        }
        if graph
            .arrows()
            .iter()
            .any(|&(t, h)| pos[t.0 - 1] > pos[h.0 - 1])
        {
            return Err(MarkovError::InconsistentOrdering);
        }
        Ok(OrderedContext { graph, ordering })
    }

    /// Uses the graph's lowest-index topological order.
    pub fn with_default_order(graph: MixedGraph) -> Result<Self, MarkovError> {
        let ordering = graph.consistent_ordering()?;
        Self::new(graph, ordering)
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }

    pub fn ordering(&self) -> &[NodeId] {
        &self.ordering
    }

    /// `(A, S)` for each node `A` and each ancestral `S ⊆ Pre(A)` with
    /// `A ∈ S`.
    fn ancestral_sets(&self) -> Vec<NodeSet> {
        let g = &self.graph;
        let mut out = BTreeSet::new();
        let mut pre = NodeSet::EMPTY;
        for &a in &self.ordering {
            pre.insert(a);
            for rest in pre.without(a).subsets() {
                let s = rest.with(a);
                if g.ancestors(s) == s {
                    out.insert(s);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// `Mb_{G[S]}(B) = Ch(B) ∪ Ne(B ∪ Ch(B)) ∪ Pa(B ∪ Ch(B) ∪ Ne(B ∪ Ch(B)))`
/// in the extended subgraph `G[S]`, without `B` itself.
pub fn markov_blanket(g: &MixedGraph, s: NodeSet, b: NodeId) -> Result<NodeSet, MarkovError> {
    g.check_node(b)?;
    g.check_set(s)?;
    if !s.contains(b) {
        return Err(MarkovError::NodeNotInSet(b));
    }
    let ext = extended_subgraph(g, s)?;
    Ok(blanket_in(&ext.graph, b))
}

fn blanket_in(h: &MixedGraph, b: NodeId) -> NodeSet {
    let bs = NodeSet::singleton(b);
    let ch = h.children_of(bs);
    let ne = h.neighbours_of(bs.union(ch));
    let pa = h.parents_of(bs.union(ch).union(ne));
    ch.union(ne).union(pa).without(b)
}

/// `B ⫫ S \ (B ∪ Mb) | Mb` for every `B ∈ S`, over the ancestral sets.
///
/// `Mb` may contain nodes that `G[S]` pulls in through lines from outside
/// `S`. `G[S]` omits the arrows into those nodes, so such a statement need
/// not be a separation of `G` (e.g. `3 -> 1 - 2` with `S = {2, 3}` yields
/// `2 ⫫ 3 | 1`). Statements from sets with `V(G[S]) = S` always are.
pub fn ordered_local_statements(ctx: &OrderedContext) -> Result<Vec<CiStatement>, MarkovError> {
    ctx.graph.require_alternative()?;
    let mut out = BTreeSet::new();
    for s in ctx.ancestral_sets() {
        let ext = extended_subgraph(&ctx.graph, s)?;
        for b in s {
            let mb = blanket_in(&ext.graph, b);
            let rest = s.without(b).difference(mb);
            if let Some(st) = CiStatement::new(NodeSet::singleton(b), rest, mb) {
                out.insert(st);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `B ⫫ C | V(G[S]) \ {B, C}` for each pair in `S` not adjacent in
/// `G[S]^a`, over the ancestral sets. The caveat of
/// [`ordered_local_statements`] applies here too.
pub fn ordered_pairwise_statements(
    ctx: &OrderedContext,
) -> Result<Vec<CiStatement>, MarkovError> {
    ctx.graph.require_alternative()?;
    let mut out = BTreeSet::new();
    for s in ctx.ancestral_sets() {
        let ext = extended_subgraph(&ctx.graph, s)?;
        let aug = augmented_graph(&ext.graph)?;
        for b in s {
            for c in s.iter().filter(|&c| c > b) {
                if aug.has_line(b, c) {
                    continue;
                }
                let z = ext.nodes.without(b).without(c);
                if let Some(st) = CiStatement::new(NodeSet::singleton(b), NodeSet::singleton(c), z) {
                    out.insert(st);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmpFlavor {
    /// C1* plus C2* (the latter as joint statements conditioned on `Pa(C)`).
    BlockRecursive,
    /// L1 plus L2*.
    Local,
    /// P1 plus P2*.
    Pairwise,
}

/// Statements of the AMP chain graph properties, per connectivity
/// component `C`.
pub fn amp_statements(g: &MixedGraph, flavor: AmpFlavor) -> Result<Vec<CiStatement>, MarkovError> {
    if !g.is_amp_cg() {
        return Err(MarkovError::NotAnAmpCg);
    }
    let mut out = BTreeSet::new();
    let mut emit = |x: NodeSet, y: NodeSet, z: NodeSet| {
        if let Some(st) = CiStatement::new(x, y, z) {
            out.insert(st);
        }
    };
    for c in g.connectivity_components() {
        let nd_c = g.non_semidescendants(c);
        match flavor {
            AmpFlavor::BlockRecursive => {
                // C1*: D ⫫ Nd(D) \ Pa(D) | Pa(D), D ⊆ C
                for d in c.subsets().skip(1) {
                    let pa = g.parents_of(d);
                    emit(d, g.non_semidescendants(d).difference(pa), pa);
                }
                // C2*: separations of G_C, conditioned additionally on Pa(C)
                let gc = g.induced_subgraph(c)?;
                let pa_c = g.parents_of(c);
                for x in c.subsets().skip(1) {
                    for y in c.difference(x).subsets().skip(1) {
                        if x.min() > y.min() {
                            continue;
                        }
                        for z in c.difference(x).difference(y).subsets() {
                            if !undirected_reach(&gc, x, z).is_disjoint(y) {
                                continue;
                            }
                            emit(x, y, z.union(pa_c));
                        }
                    }
                }
            }
            AmpFlavor::Local => {
                for a in c {
                    let ne = g.ne(a);
                    // L1
                    emit(
                        NodeSet::singleton(a),
                        c.without(a).difference(ne),
                        nd_c.union(ne),
                    );
                    // L2*
                    for s in c.without(a).subsets() {
                        let pa = g.parents_of(s.with(a));
                        emit(NodeSet::singleton(a), nd_c.difference(pa), s.union(pa));
                    }
                }
            }
            AmpFlavor::Pairwise => {
                for a in c {
                    // P1
                    for b in c.without(a).difference(g.ne(a)) {
                        emit(
                            NodeSet::singleton(a),
                            NodeSet::singleton(b),
                            nd_c.union(c).without(a).without(b),
                        );
                    }
                    // P2*
                    for s in c.without(a).subsets() {
                        let pa = g.parents_of(s.with(a));
                        for b in nd_c.difference(pa) {
                            emit(
                                NodeSet::singleton(a),
                                NodeSet::singleton(b),
                                s.union(nd_c).without(b),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn undirected_reach(h: &MixedGraph, from: NodeSet, avoid: NodeSet) -> NodeSet {
    let mut reached = from;
    let mut frontier = from;
    while !frontier.is_empty() {
        let next = h
            .neighbours_of(frontier)
            .difference(avoid)
            .difference(reached);
        reached = reached.union(next);
        frontier = next;
    }
    reached
}

/// Statements the oracle rejects, in input order.
pub fn verify_statements<'a>(
    stmts: impl IntoIterator<Item = &'a CiStatement>,
    mut oracle: impl FnMut(&CiStatement) -> bool,
) -> Vec<CiStatement> {
    stmts.into_iter().filter(|s| !oracle(s)).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::route_reachable;

    fn s<const N: usize>(a: [usize; N]) -> NodeSet {
        NodeSet::from(a)
    }

    fn st(x: NodeSet, y: NodeSet, z: NodeSet) -> CiStatement {
        CiStatement::new(x, y, z).unwrap()
    }

    fn graph_oracle(g: &MixedGraph) -> impl Fn(&CiStatement) -> bool + '_ {
        move |st| route_reachable(g, st.x, st.z).is_disjoint(st.y)
    }

    #[test]
    fn blanket_examples() {
        let g = MixedGraph::from_edges(2, &[(1, 2)], &[], &[]).unwrap();
        assert_eq!(markov_blanket(&g, s([1, 2]), NodeId(2)).unwrap(), s([1]));
        // A->B, B->D, B-D with A=1, B=2, D=3
        let g = MixedGraph::from_edges(3, &[(1, 2), (2, 3)], &[(2, 3)], &[]).unwrap();
        assert_eq!(markov_blanket(&g, s([1, 2, 3]), NodeId(2)).unwrap(), s([1, 3]));
        let e = MixedGraph::new(3);
        assert_eq!(markov_blanket(&e, s([1, 3]), NodeId(3)).unwrap(), NodeSet::EMPTY);
        assert_eq!(
            markov_blanket(&e, s([1]), NodeId(3)),
            Err(MarkovError::NodeNotInSet(NodeId(3)))
        );
    }

    #[test]
    fn local_examples() {
        let g = MixedGraph::from_edges(2, &[(1, 2)], &[], &[]).unwrap();
        let ctx = OrderedContext::with_default_order(g).unwrap();
        assert!(ordered_local_statements(&ctx).unwrap().is_empty());

        let ctx = OrderedContext::with_default_order(MixedGraph::new(2)).unwrap();
        let got = ordered_local_statements(&ctx).unwrap();
        assert_eq!(got, vec![st(s([1]), s([2]), NodeSet::EMPTY), st(s([2]), s([1]), NodeSet::EMPTY)]);

        let g = MixedGraph::from_edges(3, &[(1, 2), (2, 3)], &[(2, 3)], &[]).unwrap();
        let ctx = OrderedContext::with_default_order(g.clone()).unwrap();
        let stmts = ordered_local_statements(&ctx).unwrap();
        assert!(verify_statements(&stmts, graph_oracle(&g)).is_empty());
    }

    #[test]
    fn pairwise_examples() {
        let ctx = OrderedContext::with_default_order(MixedGraph::new(2)).unwrap();
        assert_eq!(
            ordered_pairwise_statements(&ctx).unwrap(),
            vec![st(s([1]), s([2]), NodeSet::EMPTY)]
        );
        // A->C<-B with A=1, B=2, C=3
        let g = MixedGraph::from_edges(3, &[(1, 3), (2, 3)], &[], &[]).unwrap();
        let ctx = OrderedContext::with_default_order(g).unwrap();
        assert_eq!(
            ordered_pairwise_statements(&ctx).unwrap(),
            vec![st(s([1]), s([2]), NodeSet::EMPTY)]
        );
    }

    #[test]
    fn inconsistent_ordering_rejected() {
        let g = MixedGraph::from_edges(2, &[(1, 2)], &[], &[]).unwrap();
        assert_eq!(
            OrderedContext::new(g.clone(), vec![NodeId(2), NodeId(1)]).err(),
            Some(MarkovError::InconsistentOrdering)
        );
        assert!(OrderedContext::new(g, vec![NodeId(1)]).is_err());
    }

    #[test]
    fn amp_examples() {
        let ug = MixedGraph::from_edges(3, &[], &[(1, 2), (2, 3)], &[]).unwrap();
        let local = amp_statements(&ug, AmpFlavor::Local).unwrap();
        assert!(local.contains(&st(s([1]), s([3]), s([2]))));

        let g = MixedGraph::from_edges(2, &[(1, 2)], &[], &[]).unwrap();
        assert!(amp_statements(&g, AmpFlavor::BlockRecursive).unwrap().is_empty());

        let e = MixedGraph::new(2);
        let block = amp_statements(&e, AmpFlavor::BlockRecursive).unwrap();
        assert!(block.contains(&st(s([1]), s([2]), NodeSet::EMPTY)));

        let not_cg = MixedGraph::from_edges(3, &[(1, 2), (2, 3)], &[(2, 3)], &[]).unwrap();
        assert_eq!(
            amp_statements(&not_cg, AmpFlavor::Local),
            Err(MarkovError::NotAnAmpCg)
        );
    }

    #[test]
    fn verify_reports_in_input_order() {
        let a = st(s([1]), s([2]), NodeSet::EMPTY);
        let b = st(s([2]), s([3]), NodeSet::EMPTY);
        let c = st(s([1]), s([3]), NodeSet::EMPTY);
        let failing = verify_statements(&[c, a, b], |x| *x == a);
        assert_eq!(failing, vec![c, b]);
        assert!(verify_statements(&[], |_| false).is_empty());
    }
}
