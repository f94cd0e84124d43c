//! Property-based checks: the max-flow engine against the brute-force
//! oracle, cut symmetry, the two rank routes, and serialization round-trips.

use std::collections::BTreeSet;

use proptest::prelude::*;

use cutmimic::cut::{brute_force_min_cut, min_cut};
use cutmimic::graph::{enumerate_bipartitions, Bipartition};
use cutmimic::io::{parse_graph, serialize_graph};
use cutmimic::rank::{bareiss_rank, exact_rank, rational_rank, IncidenceMatrix, IncidenceRow};
use cutmimic::{TerminalGraph, Weight};

#[derive(Clone, Debug)]
struct RawGraph {
    n: usize,
    terminals: Vec<usize>,
    edges: Vec<(usize, usize, i64, i64)>,
}

fn raw_graph() -> impl Strategy<Value = RawGraph> {
    (2usize..=7).prop_flat_map(|n| {
        let tree = proptest::collection::vec((0usize..n.max(1), 0i64..=6, 1i64..=3), n - 1);
        let extra = proptest::collection::vec(
            (0usize..n, 0usize..n, 0i64..=6, 1i64..=3),
            0..=n,
        );
        let terminals = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n.min(4));
        (Just(n), tree, extra, terminals).prop_map(|(n, tree, extra, terminals)| {
            let mut edges = Vec::new();
            for (v, (pick, num, den)) in tree.into_iter().enumerate() {
                let v = v + 1;
                edges.push((pick % v, v, num, den));
            }
            for (u, v, num, den) in extra {
                if u != v {
                    edges.push((u, v, num, den));
                }
            }
            RawGraph { n, terminals, edges }
        })
    })
}

fn build(raw: &RawGraph) -> TerminalGraph {
    let mut g = TerminalGraph::new();
    for i in 0..raw.n {
        g.add_vertex(format!("n{i}")).unwrap();
    }
    for &(u, v, num, den) in &raw.edges {
        g.add_edge(u, v, Weight::ratio(num, den)).unwrap();
    }
    g.set_terminals(raw.terminals.clone()).unwrap();
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_cut_matches_oracle(raw in raw_graph()) {
        let g = build(&raw);
        for b in enumerate_bipartitions(g.terminal_count()).unwrap() {
            let engine = min_cut(&g, &b).unwrap();
            let (oracle, optimal) = brute_force_min_cut(&g, &b).unwrap();
            prop_assert_eq!(&engine.value, &oracle);
            prop_assert_eq!(engine.unique, optimal.len() == 1);
            // the canonical side attains the optimum
            prop_assert!(optimal.contains(&engine.source_min_side));
        }
    }

    #[test]
    fn cut_value_is_side_symmetric(raw in raw_graph()) {
        let g = build(&raw);
        let all: BTreeSet<usize> = (0..g.vertex_count()).collect();
        for b in enumerate_bipartitions(g.terminal_count()).unwrap() {
            let cut = min_cut(&g, &b).unwrap();
            let complement: BTreeSet<usize> =
                all.difference(&cut.source_min_side).copied().collect();
            prop_assert_eq!(g.cut_value(&complement).unwrap(), cut.value);
        }
    }

    #[test]
    fn serialization_round_trips(raw in raw_graph()) {
        let g = build(&raw);
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(serialize_graph(&back), text);
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edge_count(), g.edge_count());
        let t1: Vec<String> = g.terminal_labels().iter().map(|s| s.to_string()).collect();
        let t2: Vec<String> = back.terminal_labels().iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(t1, t2);
        // cut values are preserved across the round trip
        for b in enumerate_bipartitions(g.terminal_count()).unwrap() {
            let lift = |h: &TerminalGraph, b: &Bipartition| {
                let side: BTreeSet<usize> = b
                    .side_indices()
                    .iter()
                    .map(|&i| h.terminals()[i])
                    .collect();
                (h.terminal_labels().len(), side.len())
            };
            prop_assert_eq!(lift(&g, &b), lift(&back, &b));
            prop_assert_eq!(min_cut(&g, &b).unwrap().value, min_cut(&back, &b).unwrap().value);
        }
    }

    #[test]
    fn rank_routes_agree(rows in proptest::collection::vec(
        proptest::collection::vec(0u8..=1, 8), 1..=10)) {
        let cols = rows[0].len();
        let m = IncidenceMatrix {
            rows: rows
                .iter()
                .map(|_| IncidenceRow {
                    bipartition: Bipartition::new(2, 0).unwrap(),
                    unique: true,
                })
                .collect(),
            cols,
            data: rows.clone(),
            dropped_non_unique: Vec::new(),
        };
        let via_bareiss = exact_rank(&m);
        prop_assert_eq!(via_bareiss, rational_rank(&m));
        // permuting rows never changes the rank
        let mut reversed = rows;
        reversed.reverse();
        let ints = reversed
            .into_iter()
            .map(|r| r.into_iter().map(num::BigInt::from).collect())
            .collect();
        prop_assert_eq!(bareiss_rank(ints), via_bareiss);
    }
}
