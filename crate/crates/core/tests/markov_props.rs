use admg_core::enumerate::all_graphs;
use admg_core::format::parse_graph;
use admg_core::markov::*;
use admg_core::sem::{ci_test_sets, random_sem};
use admg_core::separation::{augmented_graph, extended_subgraph, route_reachable};
use admg_core::{Dialect, MixedGraph, NodeSet};

fn oracle(g: &MixedGraph) -> impl Fn(&CiStatement) -> bool + '_ {
    move |st| route_reachable(g, st.x, st.z).is_disjoint(st.y)
}

fn amp_all(g: &MixedGraph) -> Vec<CiStatement> {
    let mut all = Vec::new();
    for f in [AmpFlavor::BlockRecursive, AmpFlavor::Local, AmpFlavor::Pairwise] {
        all.extend(amp_statements(g, f).unwrap());
    }
    all
}

#[test]
fn amp_statements_are_separations_n4() {
    let mut checked = 0;
    for n in 1..=4 {
        for g in all_graphs(n, Dialect::Alternative).filter(MixedGraph::is_amp_cg) {
            let all = amp_all(&g);
            checked += all.len();
            let bad = verify_statements(&all, oracle(&g));
            assert!(bad.is_empty(), "{g:?}: {bad:?}");
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn amp_statements_hold_in_gaussian_models() {
    for (i, g) in all_graphs(4, Dialect::Alternative)
        .filter(MixedGraph::is_amp_cg)
        .step_by(7)
        .enumerate()
    {
        let sigma = random_sem(&g, i as u64).unwrap().implied_covariance();
        for st in amp_all(&g) {
            assert!(ci_test_sets(&sigma, st.x, st.y, st.z, 1e-7).unwrap(), "{g:?} {st}");
        }
    }
}

// When the extended subgraph over an ancestral set adds no nodes, the
// ordered statements are separations.
#[test]
fn ordered_statements_sound_on_closed_sets() {
    for n in 1..=4 {
        for g in all_graphs(n, Dialect::Alternative) {
            let ctx = OrderedContext::with_default_order(g.clone()).unwrap();
            let mut pre = NodeSet::EMPTY;
            for &a in ctx.ordering() {
                pre.insert(a);
                for rest in pre.without(a).subsets() {
                    let s = rest.with(a);
                    if g.ancestors(s) != s {
                        continue;
                    }
                    let ext = extended_subgraph(&g, s).unwrap();
                    if ext.nodes != s {
                        continue;
                    }
                    let aug = augmented_graph(&ext.graph).unwrap();
                    for b in s {
                        let mb = markov_blanket(&g, s, b).unwrap();
                        let rest = s.without(b).difference(mb);
                        if !rest.is_empty() {
                            assert!(route_reachable(&g, NodeSet::singleton(b), mb).is_disjoint(rest));
                        }
                        for c in s.iter().filter(|&c| c > b && !aug.has_line(b, c)) {
                            let z = s.without(b).without(c);
                            assert!(!route_reachable(&g, NodeSet::singleton(b), z).contains(c));
                        }
                    }
                }
            }
        }
    }
}

// The extended subgraph over {2,3} keeps node 1 through the line but drops
// 3 -> 1, so 1 enters the blanket of 2 although conditioning on it
// connects 2 and 3.
#[test]
fn ordered_statements_can_leave_the_ancestral_set() {
    let g = parse_graph("nodes 3\narrow 3 1\nline 1 2\n").unwrap();
    let ctx = OrderedContext::with_default_order(g.clone()).unwrap();
    let st = CiStatement::new(NodeSet::from([2]), NodeSet::from([3]), NodeSet::from([1])).unwrap();
    assert!(ordered_local_statements(&ctx).unwrap().contains(&st));
    assert!(ordered_pairwise_statements(&ctx).unwrap().contains(&st));
    assert_eq!(verify_statements([&st], oracle(&g)), vec![st]);
    let sigma = random_sem(&g, 1).unwrap().implied_covariance();
    assert!(!ci_test_sets(&sigma, st.x, st.y, st.z, 1e-7).unwrap());
}
