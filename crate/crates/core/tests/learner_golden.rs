use std::collections::HashSet;

use admg_core::enumerate::all_graphs;
use admg_core::format::model_line;
use admg_core::learner::*;
use admg_core::{Dialect, NodeId, NodeSet};
use rand::seq::IndexedRandom;
use rand::SeedableRng;

fn load(name: &str) -> LearnProblem {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_constraints(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn lines(r: &LearnResult) -> Vec<String> {
    r.models.iter().map(model_line).collect()
}

#[test]
fn observational_golden() {
    let r = learn(&load("three-node-observational.txt")).unwrap();
    let l = lines(&r);
    assert_eq!(l.len(), 37);
    for m in [
        "line(1,2) line(2,3) arrow(1,2)",
        "line(1,2) line(1,3) arrow(2,3)",
        "line(1,2) line(1,3) line(2,3)",
        "arrow(1,2) arrow(3,1) arrow(3,2)",
        "line(1,2) arrow(3,1) arrow(3,2)",
    ] {
        assert!(l.contains(&m.to_string()), "{m}");
    }
}

#[test]
fn interventional_golden() {
    let full = learn(&load("three-node-interventional.txt")).unwrap();
    assert_eq!(full.models.len(), 18);
    assert!(full.models.iter().all(|g| g.ch(NodeId(3)).is_empty()));
    let obs: HashSet<String> = lines(&learn(&load("three-node-observational.txt")).unwrap())
        .into_iter()
        .collect();
    let expected: Vec<String> = {
        let mut v: Vec<String> = learn(&load("three-node-observational.txt"))
            .unwrap()
            .models
            .iter()
            .filter(|g| g.ch(NodeId(3)).is_empty())
            .map(model_line)
            .collect();
        v.sort();
        v
    };
    assert_eq!(lines(&full), expected);
    assert!(lines(&full).iter().all(|m| obs.contains(m)));
}

#[test]
fn both_dialects_golden() {
    let mut p = load("three-node-interventional.txt");
    p.dialects = DialectChoice::Both;
    let both = learn(&p).unwrap();
    let l = lines(&both);
    assert_eq!(l.len(), 34);
    assert!(l.contains(&"biarrow(1,2) biarrow(1,3) arrow(1,2)".to_string()));
    assert!(l.contains(&"biarrow(1,2) biarrow(1,3) arrow(2,3)".to_string()));
    assert_eq!(l.iter().filter(|m| m.contains("biarrow")).count(), 16);

    // union of the single-dialect optima at the joint optimum
    let mut union = HashSet::new();
    for d in [DialectChoice::Alternative, DialectChoice::Original] {
        p.dialects = d;
        let r = learn(&p).unwrap();
        if r.optimal_score == both.optimal_score {
            union.extend(lines(&r));
        }
    }
    assert_eq!(union, l.into_iter().collect());
}

#[test]
fn returned_models_are_optimal() {
    let p = load("three-node-interventional.txt");
    let r = learn(&p).unwrap();
    let returned: HashSet<String> = lines(&r).into_iter().collect();
    for g in &r.models {
        assert_eq!(score(g, &p), Score::Feasible(r.optimal_score));
    }
    let others: Vec<_> = all_graphs(3, Dialect::Alternative)
        .filter(|g| !returned.contains(&model_line(g)))
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let g = others.choose(&mut rng).unwrap();
        assert!(score(g, &p) > Score::Feasible(r.optimal_score));
    }
}

#[test]
fn adding_constraints_never_lowers_the_optimum() {
    let base = load("three-node-observational.txt");
    let opt = learn(&base).unwrap().optimal_score;
    let mut more = base.clone();
    more.constraints.push(Constraint {
        kind: ConstraintKind::Indep,
        x: NodeId(1),
        y: NodeId(3),
        cond: NodeSet::from([2]),
        regime: None,
        weight: 2,
    });
    assert!(learn(&more).unwrap().optimal_score >= opt);
    let mut req = base.clone();
    req.priors.required.push(EdgeSpec {
        kind: admg_core::EdgeKind::Arrow,
        a: NodeId(3),
        b: NodeId(1),
    });
    let r = learn(&req).unwrap();
    assert!(r.optimal_score >= opt);
    assert!(r.models.iter().all(|g| g.has_arrow(NodeId(3), NodeId(1))));
}

#[test]
fn ordering_prior_on_full_input() {
    let mut p = load("three-node-interventional.txt");
    p.priors.order = Some(vec![NodeId(1), NodeId(2), NodeId(3)]);
    let r = learn(&p).unwrap();
    assert!(!r.models.is_empty());
    assert!(r.models.iter().all(|g| g.arrows().iter().all(|(t, h)| t < h)));
}

#[test]
fn export_contains_the_input() {
    let mut p = load("three-node-interventional.txt");
    let text = export_asp(&p);
    assert!(text.contains("nodes(3).\nset(0..7).\n"));
    assert!(text.contains("dep(1,2,0,3,1).\ndep(1,2,4,3,1).\nindep(2,3,0,3,1).\n"));
    p.dialects = DialectChoice::Both;
    let text = export_asp(&p);
    assert!(text.contains(":- biarrow(X,Y,0), line(Z,W,0)."));
    assert_eq!(text, export_asp(&p));
}
