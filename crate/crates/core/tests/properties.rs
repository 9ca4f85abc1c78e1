mod common;

use chambers_core::complex::{
    catalog_complex, catalog_source, complex_isomorphic, homology_h1, presentation, triangulate,
    IsoMode, Side,
};
use chambers_core::complex::{ShapeComplex, CATALOG_NAMES};
use chambers_core::mgraph::{self, MetricGraph};
use chambers_core::plane::{incidence_graph, projective_order};
use chambers_core::rank::roots;
use chambers_core::surgery::{catalog_graph, CATALOG_GRAPH_NAMES};
use proptest::prelude::*;
use proptest::sample::{select, Index};

fn graph_strategy() -> impl Strategy<Value = MetricGraph> {
    (2usize..8).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u32..6), 1..14).prop_map(move |edges| {
            let mut g = MetricGraph::new("random");
            for i in 0..n {
                g.add_vertex(format!("v{i}")).unwrap();
            }
            for (u, v, len) in edges {
                g.add_edge(u, v, len).unwrap();
            }
            g
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

/// The same complex with its vertices, edges and faces listed in another order.
fn reordered(c: &ShapeComplex, vperm: &[usize], eperm: &[usize], fperm: &[usize]) -> ShapeComplex {
    let mut out = ShapeComplex::new(c.name.clone());
    let mut vnew = vec![0; c.vertex_count()];
    for &v in vperm {
        vnew[v] = out.add_vertex(c.vertex_id(v)).unwrap();
    }
    let mut enew = vec![0; c.edge_count()];
    for &e in eperm {
        let edge = &c.edges()[e];
        enew[e] = out
            .add_edge(edge.id.clone(), vnew[edge.src], vnew[edge.dst])
            .unwrap();
    }
    for &f in fperm {
        let face = &c.faces()[f];
        let sides = face
            .sides
            .iter()
            .map(|s| Side {
                edge: enew[s.edge],
                ..*s
            })
            .collect();
        out.add_face(face.id.clone(), sides).unwrap();
    }
    out
}

proptest! {
    #[test]
    fn girth_matches_cycle_enumeration(g in graph_strategy()) {
        prop_assert_eq!(mgraph::girth(&g), common::brute_girth(&g));
    }

    #[test]
    fn girth_never_drops_in_subgraphs(g in graph_strategy(), drop in prop::collection::vec(any::<Index>(), 0..4)) {
        let mut removed: Vec<usize> = drop.iter().map(|i| i.index(g.edge_count())).collect();
        removed.sort_unstable();
        removed.dedup();
        let full = mgraph::girth(&g);
        if let Some(sub) = mgraph::girth(&g.without_edges(&removed)) {
            prop_assert!(full.is_some_and(|f| f <= sub));
        }
    }

    #[test]
    fn isomorphism_survives_relabelling(g in graph_strategy(), seed in any::<u64>()) {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        // cheap deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.relabeled(&perm);
        prop_assert_eq!(mgraph::canonical_form(&g), mgraph::canonical_form(&h));
        prop_assert!(mgraph::is_isomorphic(&g, &h).is_some());
        prop_assert_eq!(mgraph::automorphism_group(&g).order, mgraph::automorphism_group(&h).order);
    }

    #[test]
    fn catalog_forms_are_stable(name in select(CATALOG_GRAPH_NAMES.to_vec()), perm in permutation(14)) {
        let g = catalog_graph(name).unwrap();
        prop_assert_eq!(mgraph::canonical_form(&g.relabeled(&perm)), mgraph::canonical_form(&g));
    }

    #[test]
    fn triangulation_keeps_invariants(name in select(CATALOG_NAMES.to_vec())) {
        let c = catalog_complex(name).unwrap();
        let t = triangulate(&c).unwrap().complex;
        prop_assert_eq!(homology_h1(&c).unwrap(), homology_h1(&t).unwrap());
        prop_assert_eq!(c.euler_characteristic(), t.euler_characteristic());
        for v in 0..c.vertex_count() {
            prop_assert!(mgraph::is_isometric(&c.link(v), &t.link(v)));
        }
    }

    #[test]
    fn homology_ignores_listing_order(name in select(CATALOG_NAMES.to_vec()), seed in any::<u64>()) {
        let c = catalog_complex(name).unwrap();
        let shuffle = |n: usize, salt: u64| {
            let mut p: Vec<usize> = (0..n).collect();
            let mut s = seed ^ salt;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                p.swap(i, (s >> 33) as usize % (i + 1));
            }
            p
        };
        let d = reordered(&c, &shuffle(c.vertex_count(), 1), &shuffle(c.edge_count(), 2), &shuffle(c.face_count(), 3));
        prop_assert_eq!(homology_h1(&c).unwrap(), homology_h1(&d).unwrap());
        prop_assert!(complex_isomorphic(&c, &d, IsoMode::Strict).is_some());
        prop_assert_eq!(presentation(&d).unwrap().abelianization(), homology_h1(&d).unwrap());
    }
}

#[test]
fn competitors_never_exceed_thickness() {
    let mut all: Vec<MetricGraph> = CATALOG_GRAPH_NAMES
        .iter()
        .map(|n| catalog_graph(n).unwrap())
        .collect();
    all.push(incidence_graph(2).unwrap());
    all.push(incidence_graph(3).unwrap());
    for name in CATALOG_NAMES {
        let c = catalog_complex(name).unwrap();
        all.extend((0..c.vertex_count()).map(|v| c.link(v)));
    }
    let mut checked = 0;
    for g in &all {
        let Ok(rs) = roots(g) else { continue };
        for a in &rs.roots {
            let same_ends = rs
                .roots
                .iter()
                .filter(|b| b.start == a.start && b.end == a.end)
                .count() as u32
                - 1;
            assert_eq!(a.n, same_ends);
            assert!(a.n <= a.q, "{}: N = {} exceeds q = {}", g.name, a.n, a.q);
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn homology_agrees_with_abelianised_presentation() {
    for name in CATALOG_NAMES {
        let c = catalog_complex(name).unwrap();
        assert_eq!(
            presentation(&c).unwrap().abelianization(),
            homology_h1(&c).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn projective_orders_round_trip() {
    for q in 0..30u64 {
        assert_eq!(projective_order(2 * (q * q + q + 1)), Some(q));
    }
    assert_eq!(projective_order(20), None);
}

#[test]
fn every_catalog_entry_survives_text_and_json() {
    let mut graphs: Vec<MetricGraph> = CATALOG_GRAPH_NAMES
        .iter()
        .map(|n| catalog_graph(n).unwrap())
        .collect();
    graphs.push(incidence_graph(2).unwrap());
    for g in graphs {
        assert_eq!(MetricGraph::parse(&g.to_string()).unwrap(), g);
        assert_eq!(MetricGraph::from_json(&g.to_json()).unwrap(), g);
    }
    for name in CATALOG_NAMES {
        let c = catalog_complex(name).unwrap();
        assert_eq!(ShapeComplex::parse(&c.to_string()).unwrap(), c, "{name}");
        assert_eq!(ShapeComplex::from_json(&c.to_json()).unwrap(), c, "{name}");
        assert_eq!(
            ShapeComplex::parse(catalog_source(name).unwrap()).unwrap(),
            c,
            "{name}"
        );
    }
}
