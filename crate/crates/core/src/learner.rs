//! Exact structure learning from weighted (in)dependence constraints.
//!
//! Every graph over `n` nodes in the searched dialects is scored. A graph is
//! infeasible when some `dep` pair is separated in the relevant regime
//! graph; otherwise its score is the total weight of the `indep` pairs it
//! connects plus one penalty per edge. All minimisers are returned.
//!
//! [`export_asp`] writes the equivalent answer set program for an external
//! solver.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::docalc::intervene;
use crate::enumerate::{code_count, decode, pairs};
use crate::format::model_line;
use crate::graph::{Dialect, EdgeKind, GraphError, MixedGraph};
use crate::nodeset::{NodeId, NodeSet};
use crate::separation::route_reachable;

pub const DEFAULT_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error("{n} nodes exceeds the cap of {cap}")]
    ProblemTooLarge { n: usize, cap: usize },
    #[error("no graph satisfies every dependence and prior")]
    NoFeasibleModel,
    #[error("invalid constraint {0}: {1}")]
    InvalidConstraint(Constraint, &'static str),
    #[error("{0:?} edge {1}-{2} is both forbidden and required")]
    InconsistentPriors(EdgeKind, NodeId, NodeId),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(&'static str),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintKind {
    Dep,
    Indep,
}

/// `x` and `y` (in)dependent given `cond` under `regime` (`None` is
/// observational), with penalty `weight`. The regime node may coincide
/// with `x` or `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub x: NodeId,
    pub y: NodeId,
    pub cond: NodeSet,
    pub regime: Option<NodeId>,
    pub weight: u64,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ConstraintKind::Dep => "dep",
            ConstraintKind::Indep => "indep",
        };
        write!(
            f,
            "{kind}({},{},{},{},{})",
            self.x,
            self.y,
            self.cond.bits(),
            self.regime.map_or(0, |r| r.0),
            self.weight
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DialectChoice {
    Alternative,
    Original,
    Both,
}

impl DialectChoice {
    fn includes(self, d: Dialect) -> bool {
        matches!(
            (self, d),
            (DialectChoice::Both, _)
                | (DialectChoice::Alternative, Dialect::Alternative)
                | (DialectChoice::Original, Dialect::Original)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Penalties {
    pub line: u64,
    pub arrow: u64,
    pub biarrow: u64,
}

impl Default for Penalties {
    fn default() -> Self {
        Penalties {
            line: 1,
            arrow: 1,
            biarrow: 1,
        }
    }
}

/// An edge named by kind and endpoints; symmetric kinds ignore the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeSpec {
    pub kind: EdgeKind,
    pub a: NodeId,
    pub b: NodeId,
}

impl EdgeSpec {
    fn normalized(self) -> EdgeSpec {
        match self.kind {
            EdgeKind::Arrow => self,
            _ if self.a <= self.b => self,
            _ => EdgeSpec {
                a: self.b,
                b: self.a,
                ..self
            },
        }
    }

    fn present(&self, g: &MixedGraph) -> bool {
        match self.kind {
            EdgeKind::Arrow => g.has_arrow(self.a, self.b),
            EdgeKind::Line => g.has_line(self.a, self.b),
            EdgeKind::Biarrow => g.has_biarrow(self.a, self.b),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Priors {
    pub forbidden: Vec<EdgeSpec>,
    pub required: Vec<EdgeSpec>,
    /// Total order; an arrow from a later node to an earlier one is
    /// forbidden.
    pub order: Option<Vec<NodeId>>,
}

impl Priors {
    pub fn admits(&self, g: &MixedGraph) -> bool {
        if self.forbidden.iter().any(|e| e.present(g)) {
            return false;
        }
        if !self.required.iter().all(|e| e.present(g)) {
            return false;
        }
        match &self.order {
            None => true,
            Some(order) => {
                let mut rank = vec![0; g.n() + 1];
                for (i, v) in order.iter().enumerate() {
                    rank[v.0] = i;
                }
                g.arrows().iter().all(|&(t, h)| rank[t.0] < rank[h.0])
            }
        }
    }

    /// Arrows ruled out by the ordering, as `(later, earlier)` pairs.
    fn order_violations(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        if let Some(order) = &self.order {
            for (i, &early) in order.iter().enumerate() {
                for &late in &order[i + 1..] {
                    out.push((late, early));
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnProblem {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub dialects: DialectChoice,
    pub penalties: Penalties,
    pub priors: Priors,
    pub max_n: usize,
}

impl LearnProblem {
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Self {
        LearnProblem {
            n,
            constraints,
            dialects: DialectChoice::Alternative,
            penalties: Penalties::default(),
            priors: Priors::default(),
            max_n: DEFAULT_MAX_N,
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        if self.n > self.max_n {
            return Err(LearnError::ProblemTooLarge {
                n: self.n,
                cap: self.max_n,
            });
        }
        let all = NodeSet::full(self.n);
        let in_range = |v: NodeId| v.0 >= 1 && v.0 <= self.n;
        for c in &self.constraints {
            if !in_range(c.x) || !in_range(c.y) || !c.cond.is_subset(all) {
                return Err(LearnError::InvalidConstraint(*c, "node out of range"));
            }
            if c.regime.is_some_and(|r| !in_range(r)) {
                return Err(LearnError::InvalidConstraint(*c, "regime out of range"));
            }
            if c.x == c.y {
                return Err(LearnError::InvalidConstraint(*c, "x equals y"));
            }
            if c.cond.contains(c.x) || c.cond.contains(c.y) {
                return Err(LearnError::InvalidConstraint(*c, "x or y in the conditioning set"));
            }
        }
        let edges = self.priors.forbidden.iter().chain(&self.priors.required);
        for e in edges {
            if !in_range(e.a) || !in_range(e.b) || e.a == e.b {
                return Err(GraphError::NodeOutOfRange {
                    node: e.a.0.max(e.b.0),
                    n: self.n,
                }
                .into());
            }
        }
        for f in &self.priors.forbidden {
            if self
                .priors
                .required
                .iter()
                .any(|r| r.normalized() == f.normalized())
            {
                let f = f.normalized();
                return Err(LearnError::InconsistentPriors(f.kind, f.a, f.b));
            }
        }
        if let Some(order) = &self.priors.order {
            let set: NodeSet = order.iter().copied().collect();
            if order.len() != self.n || set != all {
                return Err(LearnError::InvalidOrdering("must list every node once"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Score {
    Feasible(u64),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnResult {
    pub optimal_score: u64,
    /// Sorted by [`model_line`].
    pub models: Vec<MixedGraph>,
}

/// The graph after intervening on `i`.
pub fn regime_graph(g: &MixedGraph, i: NodeId) -> Result<MixedGraph, GraphError> {
    g.check_node(i)?;
    intervene(g, NodeSet::singleton(i)).map_err(|e| match e {
        crate::docalc::DocalcError::Graph(e) => e,
        other => unreachable!("intervene on a valid node: {other}"),
    })
}

pub fn score(g: &MixedGraph, p: &LearnProblem) -> Score {
    let mut regimes: BTreeMap<NodeId, MixedGraph> = BTreeMap::new();
    let mut connected = |c: &Constraint| {
        let h = match c.regime {
            None => g,
            Some(i) => &*regimes
                .entry(i)
                .or_insert_with(|| regime_graph(g, i).expect("regime node in range")),
        };
        route_reachable(h, NodeSet::singleton(c.x), c.cond).contains(c.y)
    };
    // deps first so infeasible graphs exit early
    for c in p.constraints.iter().filter(|c| c.kind == ConstraintKind::Dep) {
        if !connected(c) {
            return Score::Infeasible;
        }
    }
    let mut total = 0;
    for c in p.constraints.iter().filter(|c| c.kind == ConstraintKind::Indep) {
        if connected(c) {
            total += c.weight;
        }
    }
    total += p.penalties.line * g.line_pairs().len() as u64;
    total += p.penalties.arrow * g.arrows().len() as u64;
    total += p.penalties.biarrow * g.biarrow_pairs().len() as u64;
    Score::Feasible(total)
}

fn candidate(p: &LearnProblem, ps: &[(NodeId, NodeId)], d: Dialect, code: u64) -> Option<MixedGraph> {
    let g = decode(p.n, ps, code, d);
    // a graph with no symmetric edge is already produced by the
    // alternative pass
    if d == Dialect::Original && p.dialects == DialectChoice::Both && !g.has_biarrows() {
        return None;
    }
    (g.is_acyclic() && p.priors.admits(&g)).then_some(g)
}

#[derive(Default)]
struct Best {
    score: Option<u64>,
    models: Vec<MixedGraph>,
}

impl Best {
    fn offer(mut self, s: u64, g: MixedGraph) -> Self {
        match self.score {
            Some(b) if s > b => {}
            Some(b) if s == b => self.models.push(g),
            _ => {
                self.score = Some(s);
                self.models = vec![g];
            }
        }
        self
    }

    fn merge(mut self, other: Best) -> Self {
        match (self.score, other.score) {
            (_, None) => self,
            (None, _) => other,
            (Some(a), Some(b)) if a < b => self,
            (Some(a), Some(b)) if a > b => other,
            _ => {
                self.models.extend(other.models);
                self
            }
        }
    }
}

pub fn learn(p: &LearnProblem) -> Result<LearnResult, LearnError> {
    p.validate()?;
    let ps = pairs(p.n);
    let count = code_count(p.n).ok_or(LearnError::ProblemTooLarge {
        n: p.n,
        cap: p.max_n,
    })?;
    let mut best = Best::default();
    for d in [Dialect::Alternative, Dialect::Original] {
        if !p.dialects.includes(d) {
            continue;
        }
        let step = |acc: Best, code: u64| match candidate(p, &ps, d, code) {
            Some(g) => match score(&g, p) {
                Score::Feasible(s) => acc.offer(s, g),
                Score::Infeasible => acc,
            },
            None => acc,
        };
        #[cfg(feature = "parallel")]
        let found = (0..count)
            .into_par_iter()
            .fold(Best::default, step)
            .reduce(Best::default, Best::merge);
        #[cfg(not(feature = "parallel"))]
        let found = (0..count).fold(Best::default(), step);
        best = best.merge(found);
    }
    let optimal_score = best.score.ok_or(LearnError::NoFeasibleModel)?;
    let mut keyed: Vec<(String, MixedGraph)> =
        best.models.into_iter().map(|g| (model_line(&g), g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(LearnResult {
        optimal_score,
        models: keyed.into_iter().map(|(_, g)| g).collect(),
    })
}

const PROGRAM: &str = "\
node(X) :- nodes(N), X=1..N.

{ line(X,Y,0) } :- node(X), node(Y), X != Y.
{ arrow(X,Y,0) } :- node(X), node(Y), X != Y.
line(X,Y,I) :- line(X,I,0), line(I,Y,0), node(I), X != Y, I > 0.
arrow(X,Y,I) :- arrow(X,Y,0), node(I), Y != I, I > 0.
line(X,Y,I) :- line(Y,X,I).
:- arrow(X,Y,I), arrow(Y,X,I).

ancestor(X,Y) :- arrow(X,Y,0).
ancestor(X,Y) :- ancestor(X,Z), ancestor(Z,Y).
:- ancestor(X,Y), arrow(Y,X,0).

inside_set(X,C) :- node(X), set(C), 2**(X-1) & C != 0.
outside_set(X,C) :- node(X), set(C), 2**(X-1) & C == 0.


end_line(X,Y,C,I) :- line(X,Y,I), outside_set(X,C).
end_head(X,Y,C,I) :- arrow(X,Y,I), outside_set(X,C).
end_tail(X,Y,C,I) :- arrow(Y,X,I), outside_set(X,C).

end_line(X,Y,C,I) :- end_line(X,Z,C,I), line(Z,Y,I), outside_set(Z,C).
end_line(X,Y,C,I) :- end_tail(X,Z,C,I), line(Z,Y,I), outside_set(Z,C).
end_head(X,Y,C,I) :- end_line(X,Z,C,I), arrow(Z,Y,I), outside_set(Z,C).
end_head(X,Y,C,I) :- end_head(X,Z,C,I), arrow(Z,Y,I), outside_set(Z,C).
end_head(X,Y,C,I) :- end_tail(X,Z,C,I), arrow(Z,Y,I), outside_set(Z,C).
end_tail(X,Y,C,I) :- end_tail(X,Z,C,I), arrow(Y,Z,I), outside_set(Z,C).

end_line(X,Y,C,I) :- end_head(X,Z,C,I), line(Z,Y,I), inside_set(Z,C).
end_tail(X,Y,C,I) :- end_line(X,Z,C,I), arrow(Y,Z,I), inside_set(Z,C).
end_tail(X,Y,C,I) :- end_head(X,Z,C,I), arrow(Y,Z,I), inside_set(Z,C).

con(X,Y,C,I) :- end_line(X,Y,C,I), X != Y, outside_set(Y,C).
con(X,Y,C,I) :- end_head(X,Y,C,I), X != Y, outside_set(Y,C).
con(X,Y,C,I) :- end_tail(X,Y,C,I), X != Y, outside_set(Y,C).
con(X,Y,C,I) :- con(Y,X,C,I).

:- dep(X,Y,C,I,W), not con(X,Y,C,I).

:~ indep(X,Y,C,I,W), con(X,Y,C,I). [W,X,Y,C,I]

:~ line(X,Y,0), X < Y. [{LINE},X,Y,1]
:~ arrow(X,Y,0). [{ARROW},X,Y,2]

#show. #show line(X,Y) : line(X,Y,0), X < Y. #show arrow(X,Y) : arrow(X,Y,0).
";

const BIARROW_PROGRAM: &str = "\
{ biarrow(X,Y,0) } :- node(X), node(Y), X != Y.
:- biarrow(X,Y,0), line(Z,W,0).
biarrow(X,Y,I) :- biarrow(X,Y,0), node(I), X != I, Y != I, I > 0.
biarrow(X,Y,I) :- biarrow(Y,X,I).

end_head(X,Y,C,I) :- biarrow(X,Y,I), outside_set(X,C).
end_head(X,Y,C,I) :- end_tail(X,Z,C,I), biarrow(Z,Y,I), outside_set(Z,C).
end_head(X,Y,C,I) :- end_head(X,Z,C,I), biarrow(Z,Y,I), inside_set(Z,C).

:~ biarrow(X,Y,0), X < Y. [{BIARROW},X,Y,3]

#show biarrow(X,Y) : biarrow(X,Y,0), X < Y.
";

fn edge_atom(e: &EdgeSpec) -> String {
    let e = e.normalized();
    let name = match e.kind {
        EdgeKind::Arrow => "arrow",
        EdgeKind::Line => "line",
        EdgeKind::Biarrow => "biarrow",
    };
    format!("{name}({},{},0)", e.a, e.b)
}

/// The answer set program for `p`: the learning rules, the biarrow
/// extension when the original dialect is searched, prior constraints,
/// then the `nodes`, `set` and (in)dependence atoms.
pub fn export_asp(p: &LearnProblem) -> String {
    let mut out = PROGRAM
        .replace("{LINE}", &p.penalties.line.to_string())
        .replace("{ARROW}", &p.penalties.arrow.to_string());
    if p.dialects.includes(Dialect::Original) {
        out.push('\n');
        out.push_str(&BIARROW_PROGRAM.replace("{BIARROW}", &p.penalties.biarrow.to_string()));
    }
    if p.dialects == DialectChoice::Original {
        out.push_str(":- line(X,Y,0).\n");
    }
    let violations = p.priors.order_violations();
    if !violations.is_empty() || !p.priors.forbidden.is_empty() || !p.priors.required.is_empty() {
        out.push('\n');
    }
    for (t, h) in violations {
        let _ = writeln!(out, ":- arrow({t},{h},0).");
    }
    for e in &p.priors.forbidden {
        let _ = writeln!(out, ":- {}.", edge_atom(e));
    }
    for e in &p.priors.required {
        let _ = writeln!(out, ":- not {}.", edge_atom(e));
    }
    let _ = write!(out, "\nnodes({}).\nset(0..{}).\n\n", p.n, (1u64 << p.n) - 1);
    for c in &p.constraints {
        let _ = writeln!(out, "{c}.");
    }
    out
}

fn parse_node(tok: &str, n: usize, line: usize) -> Result<NodeId, LearnError> {
    match tok.parse::<usize>() {
        Ok(v) if v >= 1 && v <= n => Ok(NodeId(v)),
        _ => Err(LearnError::Parse {
            line,
            msg: format!("bad node `{tok}`"),
        }),
    }
}

fn parse_kind(tok: &str, line: usize) -> Result<EdgeKind, LearnError> {
    match tok {
        "arrow" => Ok(EdgeKind::Arrow),
        "line" => Ok(EdgeKind::Line),
        "biarrow" => Ok(EdgeKind::Biarrow),
        _ => Err(LearnError::Parse {
            line,
            msg: format!("unknown edge kind `{tok}`"),
        }),
    }
}

/// Parses a constraint file:
///
/// ```text
/// nodes 3
/// dep 1 2 {} 0 1          # x y cond regime weight; regime 0 = observational
/// indep 2 3 {1} 3 1
/// order 1 2 3
/// forbid arrow 2 1
/// require line 1 2
/// penalty biarrow 2
/// ```
pub fn parse_constraints(text: &str) -> Result<LearnProblem, LearnError> {
    let mut p: Option<LearnProblem> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |msg: String| LearnError::Parse { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks[0] == "nodes" {
            if p.is_some() {
                return Err(bad("duplicate `nodes` line".into()));
            }
            let n = toks
                .get(1)
                .and_then(|t| t.parse().ok())
                .filter(|_| toks.len() == 2)
                .ok_or_else(|| bad("expected `nodes <n>`".into()))?;
            p = Some(LearnProblem::new(n, Vec::new()));
            continue;
        }
        let p = p.as_mut().ok_or_else(|| bad("missing `nodes <n>` line".into()))?;
        let n = p.n;
        match toks[0] {
            kw @ ("dep" | "indep") => {
                if toks.len() != 6 {
                    return Err(bad(format!("expected `{kw} <x> <y> {{set}} <regime> <w>`")));
                }
                let x = parse_node(toks[1], n, line)?;
                let y = parse_node(toks[2], n, line)?;
                let inner = toks[3]
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| bad(format!("expected a braced set, got `{}`", toks[3])))?;
                let mut cond = NodeSet::EMPTY;
                for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    cond.insert(parse_node(t, n, line)?);
                }
                let regime = match toks[4] {
                    "0" => None,
                    t => Some(parse_node(t, n, line)?),
                };
                let weight = toks[5]
                    .parse::<u64>()
                    .map_err(|_| bad(format!("weight must be a non-negative integer, got `{}`", toks[5])))?;
                let kind = if kw == "dep" {
                    ConstraintKind::Dep
                } else {
                    ConstraintKind::Indep
                };
                p.constraints.push(Constraint {
                    kind,
                    x,
                    y,
                    cond,
                    regime,
                    weight,
                });
            }
            "order" => {
                let order = toks[1..]
                    .iter()
                    .map(|t| parse_node(t, n, line))
                    .collect::<Result<Vec<_>, _>>()?;
                p.priors.order = Some(order);
            }
            kw @ ("forbid" | "require") => {
                if toks.len() != 4 {
                    return Err(bad(format!("expected `{kw} <kind> <i> <j>`")));
                }
                let e = EdgeSpec {
                    kind: parse_kind(toks[1], line)?,
                    a: parse_node(toks[2], n, line)?,
                    b: parse_node(toks[3], n, line)?,
                };
                if kw == "forbid" {
                    p.priors.forbidden.push(e);
                } else {
                    p.priors.required.push(e);
                }
            }
            "penalty" => {
                if toks.len() != 3 {
                    return Err(bad("expected `penalty <kind> <w>`".into()));
                }
                let w = toks[2]
                    .parse::<u64>()
                    .map_err(|_| bad(format!("penalty must be a non-negative integer, got `{}`", toks[2])))?;
                match parse_kind(toks[1], line)? {
                    EdgeKind::Arrow => p.penalties.arrow = w,
                    EdgeKind::Line => p.penalties.line = w,
                    EdgeKind::Biarrow => p.penalties.biarrow = w,
                }
            }
            other => return Err(bad(format!("unknown keyword `{other}`"))),
        }
    }
    let p = p.ok_or(LearnError::Parse {
        line: 0,
        msg: "missing `nodes <n>` line".into(),
    })?;
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn observational() -> Vec<Constraint> {
        let dep = |x, y, c: u64| Constraint {
            kind: ConstraintKind::Dep,
            x: NodeId(x),
            y: NodeId(y),
            cond: NodeSet::from_bits(c),
            regime: None,
            weight: 1,
        };
        vec![
            dep(1, 2, 0),
            dep(1, 2, 4),
            dep(2, 3, 0),
            dep(2, 3, 1),
            dep(1, 3, 0),
            dep(1, 3, 2),
        ]
    }

    #[test]
    fn regime_graph_examples() {
        let g = MixedGraph::from_edges(3, &[(1, 2)], &[(2, 3)], &[]).unwrap();
        let h = regime_graph(&g, NodeId(3)).unwrap();
        assert_eq!(h, MixedGraph::from_edges(3, &[(1, 2)], &[], &[]).unwrap());
        let g = MixedGraph::from_edges(3, &[(1, 2)], &[(1, 3), (2, 3)], &[]).unwrap();
        let h = regime_graph(&g, NodeId(3)).unwrap();
        assert_eq!(h, MixedGraph::from_edges(3, &[(1, 2)], &[(1, 2)], &[]).unwrap());
        let g = MixedGraph::from_edges(4, &[(1, 2)], &[(2, 3)], &[]).unwrap();
        assert_eq!(regime_graph(&g, NodeId(4)).unwrap(), g);
    }

    #[test]
    fn score_examples() {
        let p = LearnProblem::new(3, observational());
        assert_eq!(score(&MixedGraph::new(3), &p), Score::Infeasible);
        let ug = MixedGraph::from_edges(3, &[], &[(1, 2), (1, 3), (2, 3)], &[]).unwrap();
        assert_eq!(score(&ug, &p), Score::Feasible(3));
    }

    #[test]
    fn observational_models() {
        let r = learn(&LearnProblem::new(3, observational())).unwrap();
        assert_eq!(r.optimal_score, 3);
        assert_eq!(r.models.len(), 37);
        let lines: Vec<String> = r.models.iter().map(model_line).collect();
        assert!(lines.contains(&"line(1,2) line(2,3) arrow(1,2)".to_string()));
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn ordering_prior_excludes_backward_arrows() {
        let mut p = LearnProblem::new(3, observational());
        p.priors.order = Some(vec![NodeId(1), NodeId(2), NodeId(3)]);
        let r = learn(&p).unwrap();
        for g in &r.models {
            assert!(g.arrows().iter().all(|(t, h)| t < h));
        }
        assert!(export_asp(&p).contains(":- arrow(2,1,0).\n:- arrow(3,1,0).\n:- arrow(3,2,0).\n"));
    }

    #[test]
    fn errors() {
        let mut p = LearnProblem::new(6, vec![]);
        assert!(matches!(learn(&p), Err(LearnError::ProblemTooLarge { .. })));
        p.n = 2;
        p.constraints = vec![Constraint {
            kind: ConstraintKind::Dep,
            x: NodeId(1),
            y: NodeId(2),
            cond: NodeSet::EMPTY,
            regime: None,
            weight: 1,
        }];
        p.priors.forbidden = vec![
            EdgeSpec { kind: EdgeKind::Arrow, a: NodeId(1), b: NodeId(2) },
            EdgeSpec { kind: EdgeKind::Arrow, a: NodeId(2), b: NodeId(1) },
            EdgeSpec { kind: EdgeKind::Line, a: NodeId(2), b: NodeId(1) },
        ];
        assert_eq!(learn(&p), Err(LearnError::NoFeasibleModel));
        p.priors.required = vec![EdgeSpec { kind: EdgeKind::Line, a: NodeId(1), b: NodeId(2) }];
        assert!(matches!(learn(&p), Err(LearnError::InconsistentPriors(..))));
    }

    #[test]
    fn parses_constraint_files() {
        let text = "nodes 3\ndep 1 2 {} 0 1\nindep 2 3 {1} 3 2\norder 1 2 3\nforbid arrow 2 1\nrequire line 1 2\npenalty biarrow 2\n";
        let p = parse_constraints(text).unwrap();
        assert_eq!(p.constraints.len(), 2);
        assert_eq!(p.constraints[1].to_string(), "indep(2,3,1,3,2)");
        assert_eq!(p.penalties.biarrow, 2);
        assert_eq!(p.priors.required.len(), 1);
        assert!(parse_constraints("nodes 3\ndep 1 2 {} 0 0.5\n").is_err());
        assert!(parse_constraints("nodes 3\ndep 1 1 {} 0 1\n").is_err());
        assert!(parse_constraints("nodes 3\ndep 1 2 {2} 0 1\n").is_err());
        assert!(parse_constraints("dep 1 2 {} 0 1\n").is_err());
        assert!(parse_constraints("nodes 3\norder 1 2\n").is_err());
    }

    #[test]
    fn export_is_stable() {
        let p = LearnProblem::new(3, observational());
        let a = export_asp(&p);
        assert_eq!(a, export_asp(&p));
        assert!(a.contains("nodes(3).\nset(0..7).\n"));
        assert!(a.contains("dep(1,2,0,0,1).\ndep(1,2,4,0,1).\n"));
        assert!(a.contains(":~ line(X,Y,0), X < Y. [1,X,Y,1]"));
        assert!(!a.contains("biarrow"));
        let empty = export_asp(&LearnProblem::new(3, vec![]));
        assert!(!empty.contains("dep(") || !empty.contains("dep(1"));
    }
}
