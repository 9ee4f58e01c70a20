//! Interventions and do-calculus rule premises.
//!
//! `intervene` performs the graph surgery for `do(X)`. In the alternative
//! dialect it deletes arrows into `X`, joins every pair outside `X` that a
//! line path through `X` connects, and then drops the lines touching `X`.
//! In the original dialect it deletes arrows into `X` and biarrows at `X`.
//!
//! `rule_applicable` checks the separation premise of one of the three
//! rules, adding a regime node `F_A -> A` for each `A` in the rule's
//! intervened set `z`.

use std::collections::BTreeMap;
use std::fmt;

use crate::format::{parse_node_set, ParseError};
use crate::graph::{Dialect, GraphError, MixedGraph};
use crate::nodeset::{NodeId, NodeSet};
use crate::separation::{marginal_graph, route_reachable, SepError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocalcError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separation(#[from] SepError),
    #[error("x, y, z and w must be pairwise disjoint")]
    OverlappingSets,
    #[error("rule must be 1, 2 or 3, got {0}")]
    UnknownRule(u8),
    #[error("script line {line}: {msg}")]
    MalformedScript { line: usize, msg: String },
}

/// A graph with one extra node `F_A -> A` for each designated `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeGraph {
    pub base: MixedGraph,
    pub regime_nodes: BTreeMap<NodeId, NodeId>,
}

impl RegimeGraph {
    /// Regime nodes are numbered `n+1, n+2, ...` in increasing order of the
    /// node they point to.
    pub fn new(g: &MixedGraph, designated: NodeSet) -> Result<Self, GraphError> {
        g.check_set(designated)?;
        let n = g.n();
        let mut base = g.extend_nodes(n + designated.len())?;
        let mut regime_nodes = BTreeMap::new();
        for (k, a) in designated.iter().enumerate() {
            let f = NodeId(n + 1 + k);
            base.add_arrow(f, a)?;
            regime_nodes.insert(a, f);
        }
        if let Some(mut labels) = g.labels().map(<[String]>::to_vec) {
            labels.extend(designated.iter().map(|a| format!("F_{}", g.label(a))));
            base.set_labels(Some(labels));
        }
        Ok(RegimeGraph { base, regime_nodes })
    }

    pub fn regime_set(&self) -> NodeSet {
        self.regime_nodes.values().copied().collect()
    }
}

pub fn intervene(g: &MixedGraph, x: NodeSet) -> Result<MixedGraph, DocalcError> {
    g.check_set(x)?;
    let mut out = g.clone();
    for v in x {
        for p in g.pa(v) {
            out.remove_arrow(p, v);
        }
    }
    match g.dialect() {
        Dialect::Original => {
            for v in x {
                for s in g.sp(v) {
                    out.remove_biarrow(v, s);
                }
            }
        }
        Dialect::Alternative => {
            for (a, b) in g.line_pairs() {
                out.remove_line(a, b);
            }
            let bridged = marginal_graph(&g.undirected_skeleton(), g.nodes().difference(x))?;
            for (a, b) in bridged.line_pairs() {
                out.add_line(a, b)?;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Insertion/deletion of observations.
    One = 1,
    /// Action/observation exchange.
    Two = 2,
    /// Insertion/deletion of actions.
    Three = 3,
}

impl Rule {
    pub fn from_number(k: u8) -> Result<Rule, DocalcError> {
        match k {
            1 => Ok(Rule::One),
            2 => Ok(Rule::Two),
            3 => Ok(Rule::Three),
            k => Err(DocalcError::UnknownRule(k)),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

/// The sets of one rule application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleStep {
    pub rule: Rule,
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
    pub w: NodeSet,
}

/// Rule 1: `y ⫫ z | x ∪ w`; rule 2: `y ⫫ F_z | x ∪ w ∪ z`; rule 3:
/// `y ⫫ F_z | x ∪ w`; each in the graph intervened on `x`. Empty `y` or
/// `z` makes the premise hold trivially.
pub fn rule_applicable(
    g: &MixedGraph,
    rule: Rule,
    x: NodeSet,
    y: NodeSet,
    z: NodeSet,
    w: NodeSet,
) -> Result<bool, DocalcError> {
    for s in [x, y, z, w] {
        g.check_set(s)?;
    }
    let sets = [x, y, z, w];
    for i in 0..4 {
        for j in i + 1..4 {
            if !sets[i].is_disjoint(sets[j]) {
                return Err(DocalcError::OverlappingSets);
            }
        }
    }
    if y.is_empty() || z.is_empty() {
        return Ok(true);
    }
    let (h, target, cond) = match rule {
        Rule::One => (intervene(g, x)?, z, x.union(w)),
        Rule::Two | Rule::Three => {
            let rg = RegimeGraph::new(g, z)?;
            let cond = if rule == Rule::Two {
                x.union(w).union(z)
            } else {
                x.union(w)
            };
            (intervene(&rg.base, x)?, rg.regime_set(), cond)
        }
    };
    Ok(route_reachable(&h, y, cond).is_disjoint(target))
}

pub fn step_applicable(g: &MixedGraph, step: &RuleStep) -> Result<bool, DocalcError> {
    rule_applicable(g, step.rule, step.x, step.y, step.z, step.w)
}

/// Parses `rule <k> x=<set> y=<set> z=<set> w=<set>` lines; omitted sets
/// are empty, `#` starts a comment.
pub fn parse_script(g: &MixedGraph, text: &str) -> Result<Vec<RuleStep>, DocalcError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |msg: String| DocalcError::MalformedScript { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        if toks.next() != Some("rule") {
            return Err(bad("expected `rule <k> ...`".into()));
        }
        let k: u8 = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("missing rule number".into()))?;
        let rule = Rule::from_number(k).map_err(|e| bad(e.to_string()))?;
        let mut step = RuleStep {
            rule,
            x: NodeSet::EMPTY,
            y: NodeSet::EMPTY,
            z: NodeSet::EMPTY,
            w: NodeSet::EMPTY,
        };
        let mut seen = Vec::new();
        for t in toks {
            let (key, val) = t
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=set, got `{t}`")))?;
            if seen.contains(&key) {
                return Err(bad(format!("`{key}` given twice")));
            }
            seen.push(key);
            let set = parse_node_set(g, val).map_err(|e: ParseError| bad(e.to_string()))?;
            match key {
                "x" => step.x = set,
                "y" => step.y = set,
                "z" => step.z = set,
                "w" => step.w = set,
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        steps.push(step);
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationReport {
    /// Premise outcome of each step, up to and including the first failure.
    pub outcomes: Vec<bool>,
    /// Zero-based index of the first step whose premise fails.
    pub first_failure: Option<usize>,
}

impl DerivationReport {
    pub fn success(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn check_derivation(g: &MixedGraph, script: &[RuleStep]) -> Result<DerivationReport, DocalcError> {
    let mut outcomes = Vec::new();
    for (i, step) in script.iter().enumerate() {
        let ok = step_applicable(g, step)?;
        outcomes.push(ok);
        if !ok {
            return Ok(DerivationReport {
                outcomes,
                first_failure: Some(i),
            });
        }
    }
    Ok(DerivationReport {
        outcomes,
        first_failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_graph;

    fn alt() -> MixedGraph {
        parse_graph("nodes 3 A B C\narrow A B\nline A C\nline B C\n").unwrap()
    }

    fn orig() -> MixedGraph {
        parse_graph("nodes 3 A B C\narrow A B\nbiarrow A B\nbiarrow A C\nbiarrow B C\n").unwrap()
    }

    fn s<const N: usize>(a: [usize; N]) -> NodeSet {
        NodeSet::from(a)
    }

    const E: NodeSet = NodeSet::EMPTY;

    #[test]
    fn intervene_examples() {
        let g = alt();
        let h = intervene(&g, s([1])).unwrap();
        assert_eq!(h.arrows(), vec![(NodeId(1), NodeId(2))]);
        assert_eq!(h.line_pairs(), vec![(NodeId(2), NodeId(3))]);
        assert_eq!(intervene(&g, E).unwrap(), g);
        let chain = MixedGraph::from_edges(3, &[], &[(1, 2), (2, 3)], &[]).unwrap();
        let h = intervene(&chain, s([2])).unwrap();
        assert_eq!(h.line_pairs(), vec![(NodeId(1), NodeId(3))]);
    }

    #[test]
    fn intervene_original() {
        let h = intervene(&orig(), s([2])).unwrap();
        assert!(h.arrows().is_empty());
        assert_eq!(h.biarrow_pairs(), vec![(NodeId(1), NodeId(3))]);
    }

    #[test]
    fn regime_nodes_follow_designated_order() {
        let rg = RegimeGraph::new(&alt(), s([1, 3])).unwrap();
        assert_eq!(rg.base.n(), 5);
        assert_eq!(rg.regime_nodes[&NodeId(1)], NodeId(4));
        assert_eq!(rg.regime_nodes[&NodeId(3)], NodeId(5));
        assert_eq!(rg.base.label(NodeId(5)), "F_C");
        assert_eq!(rg.base.ch(NodeId(4)), s([1]));
    }

    #[test]
    fn selection_bias_example() {
        let g = alt();
        assert!(rule_applicable(&g, Rule::Three, E, s([3]), s([1]), E).unwrap());
        assert!(rule_applicable(&g, Rule::Two, E, s([2]), s([1]), s([3])).unwrap());
        let o = orig();
        assert!(rule_applicable(&o, Rule::Three, E, s([3]), s([1]), E).unwrap());
        assert!(!rule_applicable(&o, Rule::Two, E, s([2]), s([1]), s([3])).unwrap());
    }

    #[test]
    fn rule_one_and_errors() {
        let g = alt();
        // B and C adjacent
        assert!(!rule_applicable(&g, Rule::One, E, s([2]), s([3]), E).unwrap());
        assert!(rule_applicable(&g, Rule::One, E, E, s([3]), E).unwrap());
        assert_eq!(
            rule_applicable(&g, Rule::One, s([1]), s([1]), s([3]), E),
            Err(DocalcError::OverlappingSets)
        );
    }

    #[test]
    fn derivation_scripts() {
        let script = "# p(B | do(A))\nrule 3 y=C z=A\nrule 2 y=B z=A w=C\n";
        let steps = parse_script(&alt(), script).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(check_derivation(&alt(), &steps).unwrap().success());
        let r = check_derivation(&orig(), &steps).unwrap();
        assert_eq!(r.first_failure, Some(1));
        assert_eq!(r.outcomes, vec![true, false]);
        assert!(check_derivation(&alt(), &[]).unwrap().success());
        assert!(matches!(
            parse_script(&alt(), "rule 4 y=A"),
            Err(DocalcError::MalformedScript { line: 1, .. })
        ));
        assert!(parse_script(&alt(), "rule 1 q=A").is_err());
        assert!(parse_script(&alt(), "rule 1 y=A y=B").is_err());
        assert!(parse_script(&alt(), "rule 1 y=Q").is_err());
    }
}
