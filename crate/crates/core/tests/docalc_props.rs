use admg_core::docalc::intervene;
use admg_core::enumerate::{all_graphs, random_graph};
use admg_core::learner::regime_graph;
use admg_core::sem::{error_node, magnify};
use admg_core::separation::marginal_graph;
use admg_core::{Dialect, MixedGraph, NodeId, NodeSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_subset(rng: &mut impl Rng, n: usize) -> NodeSet {
    NodeSet::from_bits(rng.random_range(0..1u64 << n))
}

#[test]
fn intervention_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let n = rng.random_range(1..=6);
        let d = if i % 4 == 0 { Dialect::Original } else { Dialect::Alternative };
        let g = random_graph(n, d, &mut rng);
        let x = random_subset(&mut rng, n);
        let once = intervene(&g, x).unwrap();
        assert_eq!(intervene(&once, x).unwrap(), once);
        assert_eq!(intervene(&g, NodeSet::EMPTY).unwrap(), g);
        assert!(once.validate().is_ok());
    }
}

// Lines after intervening on x equal the marginal of the error-node graph
// over the error nodes of V \ x.
#[test]
fn bridging_matches_error_marginal() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let n = rng.random_range(1..=6);
        let g = random_graph(n, Dialect::Alternative, &mut rng);
        let x = random_subset(&mut rng, n);
        let m = magnify(&g).unwrap();
        let eps: NodeSet = g.nodes().difference(x).iter().map(|v| error_node(n, v)).collect();
        let marg = marginal_graph(&m.undirected_skeleton(), eps).unwrap();
        let mut expected: Vec<_> = marg
            .line_pairs()
            .into_iter()
            .map(|(a, b)| (NodeId(a.0 - n), NodeId(b.0 - n)))
            .collect();
        expected.sort();
        assert_eq!(intervene(&g, x).unwrap().line_pairs(), expected);
    }
}

// Single-node regimes built edge by edge: arrows not into i, lines bridged
// through i, other lines kept, biarrows away from i kept.
pub fn regime_by_rules(g: &MixedGraph, i: NodeId) -> MixedGraph {
    let mut h = MixedGraph::new(g.n());
    for (t, hd) in g.arrows() {
        if hd != i {
            h.add_arrow(t, hd).unwrap();
        }
    }
    for (a, b) in g.line_pairs() {
        if a != i && b != i {
            h.add_line(a, b).unwrap();
        }
    }
    for a in g.ne(i) {
        for b in g.ne(i).iter().filter(|&b| b > a) {
            h.add_line(a, b).unwrap();
        }
    }
    for (a, b) in g.biarrow_pairs() {
        if a != i && b != i {
            h.add_biarrow(a, b).unwrap();
        }
    }
    h
}

#[test]
fn regime_graph_matches_rules_n4() {
    for n in 1..=4 {
        for d in [Dialect::Alternative, Dialect::Original] {
            for g in all_graphs(n, d) {
                for i in g.nodes() {
                    assert_eq!(regime_graph(&g, i).unwrap(), regime_by_rules(&g, i));
                }
            }
        }
    }
}
