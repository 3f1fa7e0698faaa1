mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use wcgame::construct::{build_gnq, build_gnq_seeded};
use wcgame::enumerate::enumerate_decomposable;
use wcgame::graph::{canonical_form, decompose_complete, verify_instance};
use wcgame::{Graph, Instance};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            Graph::new(n, all.zip(bits).filter(|x| x.1).map(|x| x.0)).unwrap()
        })
    })
}

fn with_permutation(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let ids: Vec<usize> = (0..g.n()).collect();
        (Just(g), Just(ids).prop_shuffle())
    })
}

/// Two graphs on the same vertex count: unrelated, or a relabeled copy with
/// one edge moved, which keeps the edge count.
fn same_size_pair(max_n: usize) -> impl Strategy<Value = (Graph, Graph)> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        let bits = proptest::collection::vec(any::<bool>(), pairs);
        let ids: Vec<usize> = (0..n).collect();
        (
            bits.clone(),
            bits,
            Just(ids).prop_shuffle(),
            any::<bool>(),
            any::<prop::sample::Index>(),
            any::<prop::sample::Index>(),
        )
            .prop_map(move |(a, b, perm, related, drop, add)| {
                let all: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
                let pick = |bits: &[bool]| -> Vec<(usize, usize)> {
                    all.iter().zip(bits).filter(|x| *x.1).map(|x| *x.0).collect()
                };
                let g = Graph::new(n, pick(&a)).unwrap();
                if !related {
                    return (g, Graph::new(n, pick(&b)).unwrap());
                }
                let mut edges = g.permuted(&perm).unwrap().edges().to_vec();
                let missing: Vec<_> = all.iter().filter(|e| !edges.contains(e)).copied().collect();
                if !edges.is_empty() && !missing.is_empty() {
                    edges.remove(drop.index(edges.len()));
                    edges.push(missing[add.index(missing.len())]);
                }
                (g, Graph::new(n, edges).unwrap())
            })
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels((g, perm) in with_permutation(10)) {
        let h = g.permuted(&perm).unwrap();
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn canonical_form_matches_brute_force_isomorphism((g, h) in same_size_pair(6)) {
        let same = common::brute_canonical(&g) == common::brute_canonical(&h);
        prop_assert_eq!(same, canonical_form(&g).unwrap() == canonical_form(&h).unwrap());
    }

    #[test]
    fn seeded_paddings_are_valid_and_reproducible(n in 9usize..=16, seed in any::<u64>()) {
        let q = 2;
        prop_assume!(q + 1 < (n - 1) / 2);
        let a = build_gnq_seeded(n, q, seed).unwrap();
        prop_assert!(verify_instance(&a).is_ok());
        prop_assert_eq!(&a, &build_gnq_seeded(n, q, seed).unwrap());
        prop_assert_eq!(Instance::from_json(&a.to_json()).unwrap(), a);
    }
}

#[test]
fn padded_family_up_to_25_vertices() {
    for n in 9..=25usize {
        for q in 2..n {
            if q + 1 >= (n - 1) / 2 {
                break;
            }
            let inst = build_gnq(n, q).unwrap();
            assert!(verify_instance(&inst).is_ok(), "n = {n}, q = {q}");
            assert_eq!(inst.graph.edge_count(), (q + 1) * (n - 1));
            let a = inst.anchors.expect("anchors");
            for v in a {
                assert_eq!(inst.graph.degree(v), q + 2, "n = {n}, q = {q}, anchor {v}");
            }
            for (x, y) in [(a[0], a[1]), (a[1], a[2]), (a[0], a[2])] {
                assert!(inst.graph.find_edge(x, y).is_some());
            }
            for t in inst.tree_pairs() {
                assert!(common::is_spanning_tree(n, &t));
            }
            assert_eq!(build_gnq(n, q).unwrap().graph.edges(), inst.graph.edges());
        }
    }
}

#[test]
fn complete_graph_trees_use_distinct_edges() {
    for m in 2..=14 {
        for k in 1..=m / 2 {
            let d = decompose_complete(m, k).unwrap();
            let g = Graph::complete(m);
            let used: BTreeSet<usize> = d.trees.iter().flatten().copied().collect();
            assert_eq!(used.len(), k * (m - 1), "m = {m}, k = {k}");
            for t in &d.trees {
                let pairs: Vec<_> = t.iter().map(|&e| g.edges()[e]).collect();
                assert!(common::is_spanning_tree(m, &pairs));
            }
        }
    }
}

/// Every labeled 3-edge complement on 7 vertices, kept when the remaining
/// 18 edges pass the partition condition for 3 trees, deduplicated by
/// brute-force isomorphism.
#[test]
fn seven_vertex_enumeration_is_complete() {
    let n = 7;
    let partitions = common::set_partitions(n);
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut oracle = BTreeSet::new();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            for k in j + 1..all.len() {
                let missing = [all[i], all[j], all[k]];
                let g = Graph::new(n, all.iter().copied().filter(|e| !missing.contains(e))).unwrap();
                if common::packs_by_partitions(&g, 3, &partitions) {
                    oracle.insert(common::brute_canonical(&g));
                }
            }
        }
    }
    let found = enumerate_decomposable(n, 2).unwrap();
    let ours: BTreeSet<_> = found
        .iter()
        .map(|e| common::brute_canonical(&e.instance.graph))
        .collect();
    assert_eq!(ours.len(), found.len(), "two enumerated boards are isomorphic");
    assert_eq!(ours, oracle);
    for e in &found {
        assert!(verify_instance(&e.instance).is_ok());
    }
}

#[test]
fn enumerated_boards_are_pairwise_distinct() {
    for (n, q) in [(5, 1), (6, 1), (7, 1), (8, 2), (9, 3)] {
        let found = enumerate_decomposable(n, q).unwrap();
        let codes: BTreeSet<_> = found.iter().map(|e| e.code.clone()).collect();
        assert_eq!(codes.len(), found.len(), "n = {n}, q = {q}");
        for e in &found {
            assert!(verify_instance(&e.instance).is_ok());
            assert_eq!(canonical_form(&e.instance.graph).unwrap(), e.code);
        }
    }
}
