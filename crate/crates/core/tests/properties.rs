use std::collections::HashSet;

use borsuk_core::coloring::dsatur;
use borsuk_core::coloring::{exact_chromatic_small, verify_coloring};
use borsuk_core::cube::{distance, group_order};
use borsuk_core::graph::{connected_components, parity_bipartition, trim};
use borsuk_core::iso::canonical_form;
use borsuk_core::{BitGraph, DistanceGraph, Isometry, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_set(dim: usize, max: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(0u16..(1 << dim), 1..max)
        .prop_map(move |m| VertexSet::from_masks(dim, m).unwrap())
}

fn arb_graph() -> impl Strategy<Value = BitGraph> {
    (1usize..12).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = BitGraph::new(n);
            let mut it = bits.into_iter();
            for a in 0..n {
                for b in a + 1..n {
                    if it.next().unwrap() {
                        g.add_edge(a, b);
                    }
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isometries_preserve_distance(seed in any::<u64>(), a in 0u16..1024, b in 0u16..1024) {
        let g = Isometry::random(10, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(distance(g.apply_mask(a), g.apply_mask(b)), distance(a, b));
    }

    #[test]
    fn canonical_form_is_an_invariant(set in arb_set(7, 9), seed in any::<u64>()) {
        let g = Isometry::random(7, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(canonical_form(&set), canonical_form(&g.apply_set(&set).unwrap()));
    }

    #[test]
    fn dsatur_is_proper_and_not_below_chi(g in arb_graph()) {
        let a = dsatur(&g);
        prop_assert!(verify_coloring(&g, &a).unwrap());
        prop_assert!(a.color_count() >= exact_chromatic_small(&g).unwrap());
    }

    #[test]
    fn trim_is_the_ball_intersection(seeds in arb_set(8, 4), k in 1u8..8) {
        let t = trim(8, k, &seeds).unwrap();
        let scan: Vec<u16> = (0..256u16)
            .filter(|&v| seeds.masks().iter().all(|&s| distance(s, v) <= u32::from(k)))
            .collect();
        prop_assert_eq!(t.masks(), &scan[..]);
    }
}

#[test]
fn odd_distance_graphs_are_bipartite_by_parity() {
    for n in 1..=10 {
        for k in (1..=n as u8).step_by(2) {
            let g = DistanceGraph::full_cube(n, k).unwrap();
            assert!(verify_coloring(g.graph(), &parity_bipartition(n, k).unwrap()).unwrap());
        }
    }
}

#[test]
fn even_distance_graphs_split_into_two_equal_components() {
    for n in 2..=8 {
        for k in (2..=n as u8).step_by(2) {
            let comps = connected_components(&DistanceGraph::full_cube(n, k).unwrap());
            // k = n links each vertex only to its complement.
            if usize::from(k) == n {
                assert_eq!(comps.len(), 1 << (n - 1));
                continue;
            }
            assert_eq!(comps.len(), 2, "n={n} k={k}");
            assert_eq!(comps[0].len(), comps[1].len());
            for c in &comps {
                assert!(c
                    .masks()
                    .iter()
                    .all(|&a| c.masks().iter().all(|&b| distance(a, b).is_multiple_of(2))));
            }
        }
    }
}

#[test]
fn group_order_matches_enumeration_for_small_n() {
    for n in 1..=4 {
        let all = Isometry::enumerate(n).unwrap();
        let distinct: HashSet<Vec<u16>> = all
            .iter()
            .map(|g| (0..1u16 << n).map(|v| g.apply_mask(v)).collect())
            .collect();
        assert_eq!(distinct.len() as u64, group_order(n).unwrap());
    }
    assert_eq!(group_order(10).unwrap(), 3_715_891_200);
}

#[test]
fn set_round_trips_through_text() {
    let s = VertexSet::parse_bitstrings(&["0000001111", "0000110011", "0000000000"]).unwrap();
    let text = borsuk_core::io::format_vertex_set(&s);
    assert_eq!(borsuk_core::io::parse_vertex_set(&text).unwrap(), s);
}
