//! Line-oriented graph text format.
//!
//! ```text
//! # comment
//! nodes 4 A B C D      # labels are optional
//! arrow A B
//! line B D
//! biarrow 1 3          # numeric ids when no labels are in use
//! ```
//!
//! Labels that are not declared on the `nodes` line get the next free index
//! in first-appearance order. Numeric tokens and labels cannot be mixed in
//! one file. The serializer writes `nodes`, then arrows sorted by
//! `(tail, head)`, then lines and biarrows sorted by `(min, max)`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::graph::{EdgeKind, GraphError, MixedGraph};
use crate::nodeset::{NodeId, NodeSet, MAX_NODES};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `nodes <n>` header")]
    MissingHeader,
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("invalid graph: {0}")]
    Invalid(#[from] GraphError),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

struct Namer {
    n: usize,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    numeric_seen: bool,
}

impl Namer {
    fn resolve(&mut self, tok: &str, line: usize) -> Result<NodeId, ParseError> {
        if let Ok(i) = tok.parse::<usize>() {
            if !self.labels.is_empty() {
                return Err(syntax(line, "numeric node ids cannot be mixed with labels"));
            }
            self.numeric_seen = true;
            if i == 0 || i > self.n {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::NodeOutOfRange { node: i, n: self.n },
                });
            }
            return Ok(NodeId(i));
        }
        if self.numeric_seen {
            return Err(syntax(line, "labels cannot be mixed with numeric node ids"));
        }
        if let Some(&i) = self.index.get(tok) {
            return Ok(NodeId(i));
        }
        if self.labels.len() >= self.n {
            return Err(syntax(
                line,
                format!("label `{tok}` exceeds the declared {} nodes", self.n),
            ));
        }
        self.labels.push(tok.to_string());
        self.index.insert(tok.to_string(), self.labels.len());
        Ok(NodeId(self.labels.len()))
    }
}

pub fn parse_graph(text: &str) -> Result<MixedGraph, ParseError> {
    let mut graph: Option<MixedGraph> = None;
    let mut namer: Option<Namer> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "nodes" => {
                if graph.is_some() {
                    return Err(syntax(line, "duplicate `nodes` header"));
                }
                let n: usize = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax(line, "expected `nodes <n>`"))?;
                if n > MAX_NODES {
                    return Err(ParseError::Graph {
                        line,
                        source: GraphError::TooManyNodes(n),
                    });
                }
                let mut nm = Namer {
                    n,
                    labels: Vec::new(),
                    index: HashMap::new(),
                    numeric_seen: false,
                };
                let declared = &toks[2..];
                if !declared.is_empty() {
                    if declared.len() != n {
                        return Err(syntax(line, format!("expected {n} labels")));
                    }
                    for l in declared {
                        if l.parse::<usize>().is_ok() {
                            return Err(syntax(line, "labels must not be numeric"));
                        }
                        if nm.index.contains_key(*l) {
                            return Err(syntax(line, format!("duplicate label `{l}`")));
                        }
                        nm.resolve(l, line)?;
                    }
                }
                graph = Some(MixedGraph::new(n));
                namer = Some(nm);
            }
            kw @ ("arrow" | "line" | "biarrow") => {
                let (g, nm) = match (graph.as_mut(), namer.as_mut()) {
                    (Some(g), Some(nm)) => (g, nm),
                    _ => return Err(ParseError::MissingHeader),
                };
                if toks.len() != 3 {
                    return Err(syntax(line, format!("expected `{kw} <i> <j>`")));
                }
                let a = nm.resolve(toks[1], line)?;
                let b = nm.resolve(toks[2], line)?;
                let kind = match kw {
                    "arrow" => EdgeKind::Arrow,
                    "line" => EdgeKind::Line,
                    _ => EdgeKind::Biarrow,
                };
                g.add_edge(kind, a, b)
                    .map_err(|source| ParseError::Graph { line, source })?;
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let mut g = graph.ok_or(ParseError::MissingHeader)?;
    let nm = namer.expect("namer set with graph");
    if !nm.labels.is_empty() {
        let mut labels = nm.labels;
        let mut next = labels.len() + 1;
        while labels.len() < nm.n {
            // fill unnamed nodes with numeric labels not already taken
            while nm.index.contains_key(&next.to_string()) {
                next += 1;
            }
            labels.push(next.to_string());
            next += 1;
        }
        g.set_labels(Some(labels));
    }
    g.validate()?;
    Ok(g)
}

pub fn serialize_graph(g: &MixedGraph) -> String {
    let mut out = String::new();
    match g.labels() {
        Some(l) => {
            let _ = writeln!(out, "nodes {} {}", g.n(), l.join(" "));
        }
        None => {
            let _ = writeln!(out, "nodes {}", g.n());
        }
    }
    for (t, h) in g.arrows() {
        let _ = writeln!(out, "arrow {} {}", g.label(t), g.label(h));
    }
    for (a, b) in g.line_pairs() {
        let _ = writeln!(out, "line {} {}", g.label(a), g.label(b));
    }
    for (a, b) in g.biarrow_pairs() {
        let _ = writeln!(out, "biarrow {} {}", g.label(a), g.label(b));
    }
    out
}

/// One-line model form used by the learner, e.g.
/// `line(1,2) line(2,3) arrow(1,2)`. Lines come first, then biarrows, then
/// arrows; an edgeless graph prints as `empty`.
pub fn model_line(g: &MixedGraph) -> String {
    let mut parts = Vec::new();
    for (a, b) in g.line_pairs() {
        parts.push(format!("line({a},{b})"));
    }
    for (a, b) in g.biarrow_pairs() {
        parts.push(format!("biarrow({a},{b})"));
    }
    for (t, h) in g.arrows() {
        parts.push(format!("arrow({t},{h})"));
    }
    if parts.is_empty() {
        "empty".to_string()
    } else {
        parts.join(" ")
    }
}

/// Resolves one node token against `g`: a label when the graph has labels,
/// otherwise a 1-based index.
pub fn resolve_node(g: &MixedGraph, tok: &str) -> Result<NodeId, ParseError> {
    let tok = tok.trim();
    if let Some(labels) = g.labels() {
        if let Some(i) = labels.iter().position(|l| l == tok) {
            return Ok(NodeId(i + 1));
        }
    }
    match tok.parse::<usize>() {
        Ok(i) if i >= 1 && i <= g.n() => Ok(NodeId(i)),
        _ => Err(ParseError::UnknownNode(tok.to_string())),
    }
}

/// Parses a comma-separated node list (labels or indices); `{}` and the
/// empty string give the empty set.
pub fn parse_node_set(g: &MixedGraph, s: &str) -> Result<NodeSet, ParseError> {
    let t = s.trim();
    let t = t
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(t);
    let mut out = NodeSet::EMPTY;
    for tok in t.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        out.insert(resolve_node(g, tok)?);
    }
    Ok(out)
}

/// Formats a node set using the graph's labels.
pub fn format_node_set(g: &MixedGraph, s: NodeSet) -> String {
    let inner: Vec<String> = s.iter().map(|v| g.label(v)).collect();
    format!("{{{}}}", inner.join(","))
}
