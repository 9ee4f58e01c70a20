//! JSON-in, JSON-out bindings for the browser demo in `www/`.
//!
//! Every function returns a JSON object; failures come back as
//! `{"error": "..."}` rather than as exceptions.

use admg_core::docalc::intervene;
use admg_core::format::{format_node_set, model_line, parse_graph, parse_node_set, serialize_graph};
use admg_core::learner::{learn, parse_constraints, DialectChoice, LearnProblem};
use admg_core::separation::{separated, Criterion, SeparationQuery};
use admg_core::MixedGraph;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest learning problem the page accepts; bigger ones take too long
/// for an interactive tab.
pub const MAX_LEARN_NODES: usize = 4;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn edges(g: &MixedGraph) -> Value {
    let pairs = |v: Vec<(admg_core::NodeId, admg_core::NodeId)>| -> Vec<[usize; 2]> {
        v.into_iter().map(|(a, b)| [a.0, b.0]).collect()
    };
    json!({
        "n": g.n(),
        "labels": g.nodes().iter().map(|v| g.label(v)).collect::<Vec<_>>(),
        "arrows": pairs(g.arrows()),
        "lines": pairs(g.line_pairs()),
        "biarrows": pairs(g.biarrow_pairs()),
        "text": serialize_graph(g),
    })
}

/// Parses a graph and returns its node labels and edge lists.
#[wasm_bindgen]
pub fn describe(graph: &str) -> String {
    respond(parse_graph(graph).map(|g| edges(&g)).map_err(|e| e.to_string()))
}

/// `x ⊥ y | z` under criterion 1-4; sets are comma-separated labels.
#[wasm_bindgen]
pub fn separation(graph: &str, x: &str, y: &str, z: &str, criterion: u8) -> String {
    respond((|| {
        let g = parse_graph(graph).map_err(|e| e.to_string())?;
        let set = |s: &str| parse_node_set(&g, s).map_err(|e| e.to_string());
        let q = SeparationQuery::new(set(x)?, set(y)?, set(z)?).map_err(|e| e.to_string())?;
        let c = Criterion::from_number(criterion).ok_or("criterion must be 1-4")?;
        let sep = separated(&g, &q, c).map_err(|e| e.to_string())?;
        Ok(json!({
            "separated": sep,
            "query": format!(
                "{} ⊥ {} | {}",
                format_node_set(&g, q.x),
                format_node_set(&g, q.y),
                format_node_set(&g, q.z)
            ),
        }))
    })())
}

/// The graph after intervening on `x`.
#[wasm_bindgen]
pub fn intervention(graph: &str, x: &str) -> String {
    respond((|| {
        let g = parse_graph(graph).map_err(|e| e.to_string())?;
        let xs = parse_node_set(&g, x).map_err(|e| e.to_string())?;
        let h = intervene(&g, xs).map_err(|e| e.to_string())?;
        Ok(edges(&h))
    })())
}

/// Optimal models for a constraint file; `dialect` is `alt`, `orig` or
/// `both`.
#[wasm_bindgen]
pub fn learn_models(constraints: &str, dialect: &str) -> String {
    respond((|| {
        let mut p: LearnProblem = parse_constraints(constraints).map_err(|e| e.to_string())?;
        if p.n > MAX_LEARN_NODES {
            return Err(format!("the demo learns graphs of at most {MAX_LEARN_NODES} nodes"));
        }
        p.dialects = match dialect {
            "alt" => DialectChoice::Alternative,
            "orig" => DialectChoice::Original,
            "both" => DialectChoice::Both,
            other => return Err(format!("unknown dialect `{other}`")),
        };
        let r = learn(&p).map_err(|e| e.to_string())?;
        Ok(json!({
            "optimal_score": r.optimal_score,
            "models": r.models.iter().map(model_line).collect::<Vec<_>>(),
            "graphs": r.models.iter().map(edges).collect::<Vec<_>>(),
        }))
    })())
}
