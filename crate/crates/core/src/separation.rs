//! Separation in alternative (and original) ADMGs.
//!
//! Four criteria are provided:
//!
//! 1. path-based, with colliders in `An(Z)` and the undirected escape clause
//!    for non-colliders (`A - C - B` with `Pa(C) \ Z` non-empty);
//! 2. route-based, with colliders in `Z` and non-colliders outside `Z`;
//! 3. reachability in the augmented extended subgraph `G[X ∪ Y ∪ Z]^a`;
//! 4. the same on the marginal extended subgraph `(G[X ∪ Y ∪ Z]^m)^a`.
//!
//! Criterion 2 runs as a reachability fixpoint over [`WalkState`]s (at most
//! `3n` states) and is the engine used everywhere else in the crate. It also
//! understands bidirected edges. The other criteria are exponential or
//! quadratic constructions kept for cross-checking.

use std::collections::VecDeque;

use crate::graph::{GraphError, MixedGraph};
use crate::nodeset::{NodeId, NodeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SepError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed query: {0}")]
    MalformedQuery(&'static str),
}

/// `X ⊥ Y | Z` with `X`, `Y` non-empty and all three pairwise disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeparationQuery {
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
}

impl SeparationQuery {
    pub fn new(x: NodeSet, y: NodeSet, z: NodeSet) -> Result<Self, SepError> {
        if x.is_empty() || y.is_empty() {
            return Err(SepError::MalformedQuery("x and y must be non-empty"));
        }
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return Err(SepError::MalformedQuery("x, y and z must be disjoint"));
        }
        Ok(SeparationQuery { x, y, z })
    }

    pub fn pair(x: NodeId, y: NodeId, z: NodeSet) -> Result<Self, SepError> {
        Self::new(NodeSet::singleton(x), NodeSet::singleton(y), z)
    }

    fn check(&self, g: &MixedGraph) -> Result<(), SepError> {
        g.check_set(self.x.union(self.y).union(self.z))?;
        Ok(())
    }

    pub fn swapped(self) -> Self {
        SeparationQuery {
            x: self.y,
            y: self.x,
            z: self.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Path = 1,
    Route = 2,
    Augmented = 3,
    MarginalAugmented = 4,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::Path,
        Criterion::Route,
        Criterion::Augmented,
        Criterion::MarginalAugmented,
    ];

    pub fn from_number(k: u8) -> Option<Criterion> {
        Self::ALL.get((k as usize).checked_sub(1)?).copied()
    }
}

/// How a walk arrived at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndMark {
    /// Via an undirected edge.
    Line,
    /// Via an arrow (or bidirected edge) pointing into the node.
    Head,
    /// Against an arrow, leaving the node at the arrow's tail.
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkState {
    pub node: NodeId,
    pub end_mark: EndMark,
}

#[derive(Default)]
struct Visited {
    line: NodeSet,
    head: NodeSet,
    tail: NodeSet,
}

impl Visited {
    fn slot(&mut self, m: EndMark) -> &mut NodeSet {
        match m {
            EndMark::Line => &mut self.line,
            EndMark::Head => &mut self.head,
            EndMark::Tail => &mut self.tail,
        }
    }
}

/// Every node reachable from `sources` by a criterion-2 connecting route
/// given `z`, excluding nodes in `z`. Sources inside `z` are ignored.
///
/// Transitions at an intermediate node `v` (arrival mark -> next edge):
/// outside `z`, a line or tail arrival may continue along a line or out of
/// an arrow, a tail arrival may also go against an arrow or along a
/// biarrow, and a head arrival may only continue out of an arrow. Inside `z`
/// (colliders), a head arrival may continue along a line, a biarrow or
/// against an arrow, and a line arrival may go against an arrow.
pub fn route_reachable(g: &MixedGraph, sources: NodeSet, z: NodeSet) -> NodeSet {
    let mut seen = Visited::default();
    let mut queue: VecDeque<WalkState> = VecDeque::new();
    let push = |seen: &mut Visited, queue: &mut VecDeque<WalkState>, targets: NodeSet, m| {
        let slot = seen.slot(m);
        let fresh = targets.difference(*slot);
        *slot = slot.union(fresh);
        queue.extend(fresh.iter().map(|node| WalkState { node, end_mark: m }));
    };

    for x in sources.difference(z) {
        push(&mut seen, &mut queue, g.ne(x), EndMark::Line);
        push(&mut seen, &mut queue, g.ch(x), EndMark::Head);
        push(&mut seen, &mut queue, g.pa(x), EndMark::Tail);
        push(&mut seen, &mut queue, g.sp(x), EndMark::Head);
    }

    while let Some(WalkState { node: v, end_mark }) = queue.pop_front() {
        if z.contains(v) {
            match end_mark {
                EndMark::Head => {
                    push(&mut seen, &mut queue, g.ne(v), EndMark::Line);
                    push(&mut seen, &mut queue, g.pa(v), EndMark::Tail);
                    push(&mut seen, &mut queue, g.sp(v), EndMark::Head);
                }
                EndMark::Line => push(&mut seen, &mut queue, g.pa(v), EndMark::Tail),
                EndMark::Tail => {}
            }
        } else {
            match end_mark {
                EndMark::Line => {
                    push(&mut seen, &mut queue, g.ne(v), EndMark::Line);
                    push(&mut seen, &mut queue, g.ch(v), EndMark::Head);
                }
                EndMark::Tail => {
                    push(&mut seen, &mut queue, g.ne(v), EndMark::Line);
                    push(&mut seen, &mut queue, g.ch(v), EndMark::Head);
                    push(&mut seen, &mut queue, g.pa(v), EndMark::Tail);
                    push(&mut seen, &mut queue, g.sp(v), EndMark::Head);
                }
                EndMark::Head => push(&mut seen, &mut queue, g.ch(v), EndMark::Head),
            }
        }
    }
    seen.line.union(seen.head).union(seen.tail).difference(z)
}

/// Criterion 2: is there a connecting route between `q.x` and `q.y`?
pub fn connects_route(g: &MixedGraph, q: &SeparationQuery) -> Result<bool, SepError> {
    q.check(g)?;
    Ok(!route_reachable(g, q.x, q.z).is_disjoint(q.y))
}

/// Criterion 1 by exhaustive simple-path enumeration. Intended as an
/// oracle on small graphs.
pub fn connects_path(g: &MixedGraph, q: &SeparationQuery) -> Result<bool, SepError> {
    q.check(g)?;
    g.require_alternative()?;
    Ok(path_search(g, q, q.z))
}

/// Per-node conditions for criterion 1, with `blocked` standing in for `Z`.
struct PathRules {
    blocked: NodeSet,
    collider_ok: NodeSet,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Line,
    /// Arrow from the previous node into the next one.
    Forward,
    /// Arrow from the next node into the previous one.
    Backward,
}

fn path_search(g: &MixedGraph, q: &SeparationQuery, blocked: NodeSet) -> bool {
    let rules = PathRules {
        blocked,
        collider_ok: g.ancestors(blocked),
    };
    q.x.iter().any(|x| {
        let mut visited = NodeSet::singleton(x);
        extend_path(g, &rules, q.y, x, None, &mut visited)
    })
}

fn steps_between(g: &MixedGraph, a: NodeId, b: NodeId) -> impl Iterator<Item = Step> {
    let mut v = Vec::with_capacity(3);
    if g.has_line(a, b) {
        v.push(Step::Line);
    }
    if g.has_arrow(a, b) {
        v.push(Step::Forward);
    }
    if g.has_arrow(b, a) {
        v.push(Step::Backward);
    }
    v.into_iter()
}

fn extend_path(
    g: &MixedGraph,
    rules: &PathRules,
    targets: NodeSet,
    cur: NodeId,
    arrived: Option<Step>,
    visited: &mut NodeSet,
) -> bool {
    for next in g.adjacency(cur).difference(*visited) {
        for step in steps_between(g, cur, next) {
            if let Some(inc) = arrived {
                if !interior_ok(g, rules, cur, inc, step) {
                    continue;
                }
            }
            if targets.contains(next) {
                return true;
            }
            visited.insert(next);
            let found = extend_path(g, rules, targets, next, Some(step), visited);
            visited.remove(next);
            if found {
                return true;
            }
        }
    }
    false
}

fn interior_ok(g: &MixedGraph, rules: &PathRules, c: NodeId, inc: Step, out: Step) -> bool {
    let arrive_head = inc == Step::Forward;
    let arrive_line = inc == Step::Line;
    let leave_head = out == Step::Backward;
    let leave_line = out == Step::Line;
    let collider = (arrive_head && (leave_head || leave_line)) || (leave_head && arrive_line);
    if collider {
        rules.collider_ok.contains(c)
    } else if !rules.blocked.contains(c) {
        true
    } else {
        arrive_line && leave_line && !g.pa(c).is_subset(rules.blocked)
    }
}

/// An extended subgraph together with its node set `An(X) ∪ Cc(An(X))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedSubgraph {
    pub graph: MixedGraph,
    pub nodes: NodeSet,
}

/// `G[X] = G_{An(X)} ∪ (G^u)_{Cc(An(X))}`.
pub fn extended_subgraph(g: &MixedGraph, x: NodeSet) -> Result<ExtendedSubgraph, SepError> {
    g.check_set(x)?;
    g.require_alternative()?;
    let an = g.ancestors(x);
    let cc = g.component_of(an);
    let graph = g
        .induced_subgraph(an)?
        .union(&g.undirected_skeleton().induced_subgraph(cc)?);
    Ok(ExtendedSubgraph {
        graph,
        nodes: an.union(cc),
    })
}

/// `G[X]^m = G_{An(X)} ∪ ((G^u)_{Cc(An(X))})^{An(X)}`, over `An(X)`.
pub fn marginal_extended_subgraph(
    g: &MixedGraph,
    x: NodeSet,
) -> Result<ExtendedSubgraph, SepError> {
    g.check_set(x)?;
    g.require_alternative()?;
    let an = g.ancestors(x);
    let cc = g.component_of(an);
    let undirected = g.undirected_skeleton().induced_subgraph(cc)?;
    let graph = g
        .induced_subgraph(an)?
        .union(&marginal_graph(&undirected, an)?);
    Ok(ExtendedSubgraph { graph, nodes: an })
}

/// The undirected graph joining every collider-connected pair: adjacent
/// pairs, `A -> C <-o B` and `A -> C - D <- B`.
pub fn augmented_graph(g: &MixedGraph) -> Result<MixedGraph, SepError> {
    g.require_alternative()?;
    let n = g.n();
    let mut adj: Vec<NodeSet> = g.nodes().iter().map(|v| g.adjacency(v)).collect();
    let mut join = |a: NodeSet, b: NodeSet| {
        for u in a {
            adj[u.0 - 1] = adj[u.0 - 1].union(b.without(u));
        }
        for u in b {
            adj[u.0 - 1] = adj[u.0 - 1].union(a.without(u));
        }
    };
    for c in g.nodes() {
        // A -> C with C <- B or C - B
        join(g.pa(c), g.pa(c).union(g.ne(c)));
        for d in g.ne(c).iter().filter(|&d| d > c) {
            join(g.pa(c), g.pa(d));
        }
    }
    let mut out = MixedGraph::new(n);
    out.set_labels(g.labels().map(|l| l.to_vec()));
    for a in g.nodes() {
        for b in adj[a.0 - 1].iter().filter(|&b| b > a) {
            out.add_line(a, b)?;
        }
    }
    Ok(out)
}

/// `H^X` for an undirected `h`: `A - B` whenever `h` joins them directly or
/// through a path whose interior avoids `x`.
pub fn marginal_graph(h: &MixedGraph, x: NodeSet) -> Result<MixedGraph, SepError> {
    h.check_set(x)?;
    let mut out = MixedGraph::new(h.n());
    out.set_labels(h.labels().map(|l| l.to_vec()));
    for a in x {
        // walk through nodes outside x
        let mut reached = NodeSet::EMPTY;
        let mut frontier = h.ne(a);
        let mut through = NodeSet::EMPTY;
        while !frontier.is_empty() {
            reached = reached.union(frontier);
            let expand = frontier.difference(x).difference(through);
            through = through.union(expand);
            frontier = expand
                .iter()
                .fold(NodeSet::EMPTY, |acc, v| acc.union(h.ne(v)))
                .difference(reached);
        }
        for b in reached.intersection(x).without(a) {
            out.add_line(a, b)?;
        }
    }
    Ok(out)
}

/// Undirected reachability from `x` that never enters `z`.
fn undirected_connects(h: &MixedGraph, x: NodeSet, y: NodeSet, z: NodeSet) -> bool {
    let start = x.difference(z);
    let mut reached = start;
    let mut frontier = start;
    while !frontier.is_empty() {
        let next = frontier
            .iter()
            .fold(NodeSet::EMPTY, |acc, v| acc.union(h.ne(v)))
            .difference(z)
            .difference(reached);
        reached = reached.union(next);
        frontier = next;
    }
    !reached.is_disjoint(y)
}

pub fn separated(
    g: &MixedGraph,
    q: &SeparationQuery,
    criterion: Criterion,
) -> Result<bool, SepError> {
    q.check(g)?;
    let all = q.x.union(q.y).union(q.z);
    let connected = match criterion {
        Criterion::Route => connects_route(g, q)?,
        Criterion::Path => connects_path(g, q)?,
        Criterion::Augmented => {
            let ext = extended_subgraph(g, all)?;
            undirected_connects(&augmented_graph(&ext.graph)?, q.x, q.y, q.z)
        }
        Criterion::MarginalAugmented => {
            let ext = marginal_extended_subgraph(g, all)?;
            undirected_connects(&augmented_graph(&ext.graph)?, q.x, q.y, q.z)
        }
    };
    Ok(!connected)
}

/// Criterion 1 where nodes determined by the conditioning set behave as if
/// conditioned on: non-colliders must avoid `det(Z)` (escape clause checked
/// against `det(Z)`), and colliders must lie in `An(det(Z))`.
pub fn separated_with_determinism(
    g: &MixedGraph,
    q: &SeparationQuery,
    det: impl Fn(NodeSet) -> NodeSet,
) -> Result<bool, SepError> {
    q.check(g)?;
    g.require_alternative()?;
    let dz = det(q.z);
    debug_assert!(q.z.is_subset(dz), "closure must be extensive");
    g.check_set(dz)?;
    Ok(!path_search(g, q, dz))
}
