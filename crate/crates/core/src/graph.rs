//! Mixed graphs with directed, undirected and bidirected edges.
//!
//! One [`MixedGraph`] type covers both dialects. A graph with bidirected
//! edges is read as an original ADMG, a graph with undirected edges as an
//! alternative ADMG; graphs with neither are plain DAGs and belong to both.
//! Mixing undirected and bidirected edges is rejected by [`MixedGraph::validate`].

use crate::nodeset::{NodeId, NodeSet, MAX_NODES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("graph has {0} nodes, at most {max} supported", max = MAX_NODES)]
    TooManyNodes(usize),
    #[error("self edge at node {0}")]
    SelfEdge(NodeId),
    #[error("directed cycle {}", fmt_cycle(.0))]
    DirectedCycle(Vec<NodeId>),
    #[error("arrows in both directions between {0} and {1}")]
    DoubleArrow(NodeId, NodeId),
    #[error("graph mixes undirected and bidirected edges")]
    LineBiarrowMix,
    #[error("operation requires an alternative ADMG (no bidirected edges)")]
    UnsupportedDialect,
}

fn fmt_cycle(c: &[NodeId]) -> String {
    c.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// Directed plus undirected edges (AMP-style).
    Alternative,
    /// Directed plus bidirected edges (Richardson-style).
    Original,
}

/// Node relations. `An`, `De`, `SemiDe` and `Cc` include the input set itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Pa,
    Ch,
    Ne,
    An,
    De,
    /// Semidescendants: closure of `B -> A` and `B - A` steps.
    SemiDe,
    /// Non-semidescendants, `V \ SemiDe(X)`.
    Nd,
    Cc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Arrow,
    Line,
    Biarrow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    n: usize,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    lines: Vec<NodeSet>,
    biarrows: Vec<NodeSet>,
    labels: Option<Vec<String>>,
}

impl MixedGraph {
    /// Edgeless graph over `1..=n`.
    ///
    /// Panics if `n` exceeds [`MAX_NODES`]; use [`MixedGraph::try_new`] for
    /// untrusted sizes.
    pub fn new(n: usize) -> Self {
        Self::try_new(n).expect("node count")
    }

    pub fn try_new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        Ok(MixedGraph {
            n,
            parents: vec![NodeSet::EMPTY; n],
            children: vec![NodeSet::EMPTY; n],
            lines: vec![NodeSet::EMPTY; n],
            biarrows: vec![NodeSet::EMPTY; n],
            labels: None,
        })
    }

    /// Builds and validates a graph from edge lists given as 1-based pairs.
    pub fn from_edges(
        n: usize,
        arrows: &[(usize, usize)],
        lines: &[(usize, usize)],
        biarrows: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut g = Self::try_new(n)?;
        for &(t, h) in arrows {
            g.add_arrow(NodeId(t), NodeId(h))?;
        }
        for &(a, b) in lines {
            g.add_line(NodeId(a), NodeId(b))?;
        }
        for &(a, b) in biarrows {
            g.add_biarrow(NodeId(a), NodeId(b))?;
        }
        g.validate()?;
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v.0 - 1].clone(),
            None => v.to_string(),
        }
    }

    /// Attaches display labels; `labels.len()` must equal `n`.
    pub fn set_labels(&mut self, labels: Option<Vec<String>>) {
        if let Some(l) = &labels {
            assert_eq!(l.len(), self.n, "one label per node");
        }
        self.labels = labels;
    }

    pub fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v.0 == 0 || v.0 > self.n {
            Err(GraphError::NodeOutOfRange {
                node: v.0,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_set(&self, s: NodeSet) -> Result<(), GraphError> {
        match s.max() {
            Some(v) if v.0 > self.n => Err(GraphError::NodeOutOfRange {
                node: v.0,
                n: self.n,
            }),
            _ => Ok(()),
        }
    }

    fn check_pair(&self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Err(GraphError::SelfEdge(a));
        }
        Ok(())
    }

    pub fn add_arrow(&mut self, tail: NodeId, head: NodeId) -> Result<(), GraphError> {
        self.check_pair(tail, head)?;
        self.children[tail.0 - 1].insert(head);
        self.parents[head.0 - 1].insert(tail);
        Ok(())
    }

    pub fn add_line(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        self.check_pair(a, b)?;
        self.lines[a.0 - 1].insert(b);
        self.lines[b.0 - 1].insert(a);
        Ok(())
    }

    pub fn add_biarrow(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        self.check_pair(a, b)?;
        self.biarrows[a.0 - 1].insert(b);
        self.biarrows[b.0 - 1].insert(a);
        Ok(())
    }

    pub fn add_edge(&mut self, kind: EdgeKind, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        match kind {
            EdgeKind::Arrow => self.add_arrow(a, b),
            EdgeKind::Line => self.add_line(a, b),
            EdgeKind::Biarrow => self.add_biarrow(a, b),
        }
    }

    pub fn remove_arrow(&mut self, tail: NodeId, head: NodeId) {
        self.children[tail.0 - 1].remove(head);
        self.parents[head.0 - 1].remove(tail);
    }

    pub fn remove_line(&mut self, a: NodeId, b: NodeId) {
        self.lines[a.0 - 1].remove(b);
        self.lines[b.0 - 1].remove(a);
    }

    pub fn remove_biarrow(&mut self, a: NodeId, b: NodeId) {
        self.biarrows[a.0 - 1].remove(b);
        self.biarrows[b.0 - 1].remove(a);
    }

    #[inline]
    pub fn has_arrow(&self, tail: NodeId, head: NodeId) -> bool {
        self.children[tail.0 - 1].contains(head)
    }

    #[inline]
    pub fn has_line(&self, a: NodeId, b: NodeId) -> bool {
        self.lines[a.0 - 1].contains(b)
    }

    #[inline]
    pub fn has_biarrow(&self, a: NodeId, b: NodeId) -> bool {
        self.biarrows[a.0 - 1].contains(b)
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency(a).contains(b)
    }

    /// Every node sharing at least one edge with `v`.
    #[inline]
    pub fn adjacency(&self, v: NodeId) -> NodeSet {
        let i = v.0 - 1;
        self.parents[i]
            .union(self.children[i])
            .union(self.lines[i])
            .union(self.biarrows[i])
    }

    #[inline]
    pub fn pa(&self, v: NodeId) -> NodeSet {
        self.parents[v.0 - 1]
    }

    #[inline]
    pub fn ch(&self, v: NodeId) -> NodeSet {
        self.children[v.0 - 1]
    }

    #[inline]
    pub fn ne(&self, v: NodeId) -> NodeSet {
        self.lines[v.0 - 1]
    }

    #[inline]
    pub fn sp(&self, v: NodeId) -> NodeSet {
        self.biarrows[v.0 - 1]
    }

    /// Arrows as `(tail, head)` sorted by tail then head.
    pub fn arrows(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes()
            .iter()
            .flat_map(|t| self.ch(t).iter().map(move |h| (t, h)))
            .collect()
    }

    /// Undirected edges as `(min, max)`, sorted.
    pub fn line_pairs(&self) -> Vec<(NodeId, NodeId)> {
        sym_pairs(&self.lines)
    }

    /// Bidirected edges as `(min, max)`, sorted.
    pub fn biarrow_pairs(&self) -> Vec<(NodeId, NodeId)> {
        sym_pairs(&self.biarrows)
    }

    pub fn has_lines(&self) -> bool {
        self.lines.iter().any(|s| !s.is_empty())
    }

    pub fn has_biarrows(&self) -> bool {
        self.biarrows.iter().any(|s| !s.is_empty())
    }

    pub fn edge_count(&self) -> usize {
        let arrows: usize = self.children.iter().map(|s| s.len()).sum();
        let lines: usize = self.lines.iter().map(|s| s.len()).sum::<usize>() / 2;
        let bi: usize = self.biarrows.iter().map(|s| s.len()).sum::<usize>() / 2;
        arrows + lines + bi
    }

    /// `Original` iff the graph has bidirected edges.
    pub fn dialect(&self) -> Dialect {
        if self.has_biarrows() {
            Dialect::Original
        } else {
            Dialect::Alternative
        }
    }

    pub fn require_alternative(&self) -> Result<(), GraphError> {
        if self.has_biarrows() {
            Err(GraphError::UnsupportedDialect)
        } else {
            Ok(())
        }
    }

    /// Checks the structural invariants: antisymmetric arrows, no directed
    /// cycle, and no mixture of undirected and bidirected edges.
    pub fn validate(&self) -> Result<(), GraphError> {
        for v in self.nodes() {
            if self.adjacency(v).contains(v) {
                return Err(GraphError::SelfEdge(v));
            }
            let both = self.ch(v).intersection(self.pa(v));
            if let Some(w) = both.min() {
                let (a, b) = if v < w { (v, w) } else { (w, v) };
                return Err(GraphError::DoubleArrow(a, b));
            }
        }
        if self.has_lines() && self.has_biarrows() {
            return Err(GraphError::LineBiarrowMix);
        }
        if let Some(cycle) = self.find_directed_cycle() {
            return Err(GraphError::DirectedCycle(cycle));
        }
        Ok(())
    }

    /// True iff the arrows contain no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    fn find_directed_cycle(&self) -> Option<Vec<NodeId>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut color = vec![0u8; self.n];
        let mut stack: Vec<NodeId> = Vec::new();
        fn dfs(
            g: &MixedGraph,
            v: NodeId,
            color: &mut [u8],
            stack: &mut Vec<NodeId>,
        ) -> Option<Vec<NodeId>> {
            color[v.0 - 1] = 1;
            stack.push(v);
            for w in g.ch(v) {
                match color[w.0 - 1] {
                    0 => {
                        if let Some(c) = dfs(g, w, color, stack) {
                            return Some(c);
                        }
                    }
                    1 => {
                        let start = stack.iter().position(|&u| u == w).unwrap();
                        let mut cycle = stack[start..].to_vec();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    _ => {}
                }
            }
            stack.pop();
            color[v.0 - 1] = 2;
            None
        }
        for v in self.nodes() {
            if color[v.0 - 1] == 0 {
                if let Some(c) = dfs(self, v, &mut color, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut remaining = self.nodes();
        let mut placed = NodeSet::EMPTY;
        let mut order = Vec::with_capacity(self.n);
        while !remaining.is_empty() {
            // lowest-index node whose parents are all placed
            let next = remaining.iter().find(|&v| self.pa(v).is_subset(placed))?;
            order.push(next);
            placed.insert(next);
            remaining.remove(next);
        }
        Some(order)
    }

    /// A total order where every arrow points forward, ties broken by
    /// lowest index.
    pub fn consistent_ordering(&self) -> Result<Vec<NodeId>, GraphError> {
        self.topological_order().ok_or_else(|| {
            GraphError::DirectedCycle(self.find_directed_cycle().unwrap_or_default())
        })
    }

    pub fn relation(&self, kind: Relation, x: NodeSet) -> Result<NodeSet, GraphError> {
        self.check_set(x)?;
        Ok(match kind {
            Relation::Pa => self.parents_of(x),
            Relation::Ch => self.children_of(x),
            Relation::Ne => self.neighbours_of(x),
            Relation::An => self.ancestors(x),
            Relation::De => self.descendants(x),
            Relation::SemiDe => self.semidescendants(x),
            Relation::Nd => self.non_semidescendants(x),
            Relation::Cc => self.component_of(x),
        })
    }

    fn union_over(&self, x: NodeSet, f: impl Fn(NodeId) -> NodeSet) -> NodeSet {
        x.iter().fold(NodeSet::EMPTY, |acc, v| acc.union(f(v)))
    }

    fn closure(&self, x: NodeSet, step: impl Fn(NodeId) -> NodeSet) -> NodeSet {
        let mut reached = x;
        let mut frontier = x;
        while !frontier.is_empty() {
            let next = self.union_over(frontier, &step).difference(reached);
            reached = reached.union(next);
            frontier = next;
        }
        reached
    }

    pub fn parents_of(&self, x: NodeSet) -> NodeSet {
        self.union_over(x, |v| self.pa(v))
    }

    pub fn children_of(&self, x: NodeSet) -> NodeSet {
        self.union_over(x, |v| self.ch(v))
    }

    pub fn neighbours_of(&self, x: NodeSet) -> NodeSet {
        self.union_over(x, |v| self.ne(v))
    }

    pub fn ancestors(&self, x: NodeSet) -> NodeSet {
        self.closure(x, |v| self.pa(v))
    }

    pub fn descendants(&self, x: NodeSet) -> NodeSet {
        self.closure(x, |v| self.ch(v))
    }

    pub fn semidescendants(&self, x: NodeSet) -> NodeSet {
        self.closure(x, |v| self.ch(v).union(self.ne(v)))
    }

    pub fn non_semidescendants(&self, x: NodeSet) -> NodeSet {
        self.nodes().difference(self.semidescendants(x))
    }

    pub fn component_of(&self, x: NodeSet) -> NodeSet {
        self.closure(x, |v| self.ne(v))
    }

    /// Connectivity components over undirected edges, ordered by their
    /// lowest node.
    pub fn connectivity_components(&self) -> Vec<NodeSet> {
        let mut left = self.nodes();
        let mut out = Vec::new();
        while let Some(v) = left.min() {
            let c = self.component_of(NodeSet::singleton(v));
            out.push(c);
            left = left.difference(c);
        }
        out
    }

    /// Keeps the edges with both endpoints in `x`. Node ids are unchanged.
    pub fn induced_subgraph(&self, x: NodeSet) -> Result<MixedGraph, GraphError> {
        self.check_set(x)?;
        let mut g = self.clone();
        for i in 0..self.n {
            let v = NodeId(i + 1);
            if x.contains(v) {
                g.parents[i] = g.parents[i].intersection(x);
                g.children[i] = g.children[i].intersection(x);
                g.lines[i] = g.lines[i].intersection(x);
                g.biarrows[i] = g.biarrows[i].intersection(x);
            } else {
                g.parents[i] = NodeSet::EMPTY;
                g.children[i] = NodeSet::EMPTY;
                g.lines[i] = NodeSet::EMPTY;
                g.biarrows[i] = NodeSet::EMPTY;
            }
        }
        Ok(g)
    }

    /// The same node set with only the undirected edges.
    pub fn undirected_skeleton(&self) -> MixedGraph {
        let mut g = MixedGraph::new(self.n);
        g.lines = self.lines.clone();
        g.labels = self.labels.clone();
        g
    }

    /// Edge union of two graphs over the same node count.
    pub fn union(&self, other: &MixedGraph) -> MixedGraph {
        assert_eq!(self.n, other.n);
        let zip = |a: &[NodeSet], b: &[NodeSet]| -> Vec<NodeSet> {
            a.iter().zip(b).map(|(x, y)| x.union(*y)).collect()
        };
        MixedGraph {
            n: self.n,
            parents: zip(&self.parents, &other.parents),
            children: zip(&self.children, &other.children),
            lines: zip(&self.lines, &other.lines),
            biarrows: zip(&self.biarrows, &other.biarrows),
            labels: self.labels.clone(),
        }
    }

    /// Same edges over `m >= n` nodes; new nodes are isolated and unlabeled.
    pub fn extend_nodes(&self, m: usize) -> Result<MixedGraph, GraphError> {
        assert!(m >= self.n);
        let mut g = MixedGraph::try_new(m)?;
        g.parents[..self.n].copy_from_slice(&self.parents);
        g.children[..self.n].copy_from_slice(&self.children);
        g.lines[..self.n].copy_from_slice(&self.lines);
        g.biarrows[..self.n].copy_from_slice(&self.biarrows);
        if let Some(l) = &self.labels {
            let mut l = l.clone();
            l.extend((self.n + 1..=m).map(|i| i.to_string()));
            g.labels = Some(l);
        }
        Ok(g)
    }

    /// AMP chain graph test: single edges only and no semidirected cycle.
    pub fn is_amp_cg(&self) -> bool {
        if self.has_biarrows() {
            return false;
        }
        for v in self.nodes() {
            let directed = self.pa(v).union(self.ch(v));
            if !directed.is_disjoint(self.ne(v)) {
                return false;
            }
        }
        // a semidirected cycle exists iff some arrow t -> h has t reachable
        // from h by forward arrow/line steps
        self.arrows()
            .into_iter()
            .all(|(t, h)| !self.semidescendants(NodeSet::singleton(h)).contains(t))
    }
}

fn sym_pairs(adj: &[NodeSet]) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for (i, s) in adj.iter().enumerate() {
        let a = NodeId(i + 1);
        for b in s.iter().filter(|&b| b > a) {
            out.push((a, b));
        }
    }
    out
}
