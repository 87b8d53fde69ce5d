use std::collections::BTreeMap;

use proptest::prelude::*;

use flowtri::dkk::{dkk_triangulation, max_cliques};
use flowtri::equatorial::{equatorial_facets, equatorial_flow_triangulation, t_eq};
use flowtri::geometry::{count_lattice_points, ehrhart_hstar, verify_triangulation};
use flowtri::io::{graph_to_json, parse_graph};
use flowtri::planar::{
    canonical_triangulation, equatorial_complex, planar_framing, rw_equatorial_triangulation, truncated_dual,
    verify_equivalence, PlanarEmbedding,
};
use flowtri::quotient::{quotient_facets, transversal_identity_sweep, verify_reflexive};
use flowtri::random::{has_route_partition, random_balanced_dag, random_dag, rng};
use flowtri::routes::{decomposition_framing, enumerate_routes, route_decomposition};
use flowtri::{Dag, Edge, Poset, Vertex};

fn trim(mut h: Vec<i128>) -> Vec<i128> {
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h
}

/// Random poset on `n` elements: a random relation `i < j` reduced to covers.
fn random_poset(n: usize, bits: u64) -> Poset {
    let mut lt = vec![vec![false; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            lt[i][j] = bits >> (k % 64) & 1 == 1;
            k += 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][m] && lt[m][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let covers: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| lt[i][j] && !(0..n).any(|m| lt[i][m] && lt[m][j]))
        .collect();
    Poset::new((0..n).map(|i| format!("p{i}")).collect(), &covers).unwrap()
}

/// Series of parallel bundles `s => 1 => ... => t` drawn stacked, with
/// `widths[i]` edges in bundle `i`.
fn bundles(widths: &[usize]) -> (Dag, PlanarEmbedding) {
    let n = widths.len() - 1;
    let at = |p: usize| match p {
        0 => Vertex::Source,
        p if p == n + 1 => Vertex::Sink,
        p => Vertex::Inner(p),
    };
    let name = |b: usize, k: usize| format!("b{b}e{k}");
    let mut edges = Vec::new();
    for (b, &w) in widths.iter().enumerate() {
        for k in 0..w {
            edges.push(Edge::new(name(b, k), at(b), at(b + 1)));
        }
    }
    // edge k = 0 is the top of its bundle
    let up = |b: usize| (0..widths[b]).rev().map(|k| name(b, k)).collect::<Vec<_>>();
    let down = |b: usize| (0..widths[b]).map(|k| name(b, k)).collect::<Vec<_>>();
    let mut rotations = BTreeMap::new();
    rotations.insert(Vertex::Source, up(0));
    for p in 1..=n {
        let mut rot = up(p);
        rot.extend(down(p - 1));
        rotations.insert(Vertex::Inner(p), rot);
    }
    rotations.insert(Vertex::Sink, down(n));
    (Dag::checked(n, edges).unwrap(), PlanarEmbedding { rotations })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_iff_degree_equality(seed in any::<u64>()) {
        let g = random_dag(&mut rng(seed), 3, 8);
        let ok = route_decomposition(&g).is_ok();
        prop_assert_eq!(ok, g.degree_equality());
        prop_assert_eq!(ok, has_route_partition(&g));
        if let Ok(dec) = route_decomposition(&g) {
            prop_assert_eq!(dec.len(), g.outdeg(Vertex::Source));
        }
    }

    #[test]
    fn contraction_preserves_lattice_counts(seed in any::<u64>()) {
        let g = random_dag(&mut rng(seed), 3, 8);
        let c = g.contract_idle_edges().unwrap().dag;
        prop_assert!(c.idle_edges().is_empty());
        for t in 0..3 {
            prop_assert_eq!(count_lattice_points(&g, t, false), count_lattice_points(&c, t, false));
        }
    }

    #[test]
    fn graph_json_round_trip(seed in any::<u64>()) {
        let g = random_dag(&mut rng(seed), 3, 8);
        prop_assert_eq!(parse_graph(&graph_to_json(&g)).unwrap().dag, g);
    }

    #[test]
    fn dkk_triangulations_are_unimodular(seed in any::<u64>()) {
        let g = random_dag(&mut rng(seed), 3, 8).contract_idle_edges().unwrap().dag;
        let h = ehrhart_hstar(&g).unwrap();
        prop_assert!(h.h_star.iter().all(|&x| x >= 0));
        // a framing by edge id exists on every graph
        let orders = g
            .inner_vertices()
            .map(|v| (v, (g.in_edges(v).to_vec(), g.out_edges(v).to_vec())))
            .collect();
        let fr = flowtri::Framing::new(&g, orders).unwrap();
        let tri = dkk_triangulation(&g, &fr).unwrap();
        prop_assert!(verify_triangulation(&tri, h.volume()).unwrap().ok);
        prop_assert_eq!(trim(tri.h_vector().into_iter().map(i128::from).collect()), trim(h.h_star));
    }

    #[test]
    fn balanced_graphs_are_gorenstein(seed in any::<u64>()) {
        let g = random_balanced_dag(&mut rng(seed), 3, 9);
        let h = ehrhart_hstar(&g).unwrap();
        prop_assert_eq!(h.codegree, g.outdeg(Vertex::Source));
        prop_assert!(h.is_palindromic());
        let dec = route_decomposition(&g).unwrap();
        let eq = equatorial_flow_triangulation(&g, &dec).unwrap();
        prop_assert!(verify_triangulation(&eq, h.volume()).unwrap().ok);
        let dkk = dkk_triangulation(&g, &decomposition_framing(&g, &dec)).unwrap();
        let target = trim(h.h_star.clone());
        prop_assert_eq!(trim(eq.h_vector().into_iter().map(i128::from).collect()), target.clone());
        prop_assert_eq!(trim(dkk.h_vector().into_iter().map(i128::from).collect()), target);
        // equatorial faces are faces of the DKK triangulation of the decomposition framing
        let cliques = max_cliques(&g, &decomposition_framing(&g, &dec)).unwrap();
        for f in t_eq(&g, &dec).unwrap().facets {
            prop_assert!(cliques.iter().any(|c| f.iter().all(|x| c.contains(x))));
        }
    }

    #[test]
    fn equatorial_complex_is_a_sphere(seed in any::<u64>()) {
        let g = random_balanced_dag(&mut rng(seed), 3, 9);
        let dec = route_decomposition(&g).unwrap();
        let s = t_eq(&g, &dec).unwrap();
        let dim: usize = g.inner_vertices().map(|v| g.indeg(v) - 1).sum();
        prop_assert!(s.is_pure());
        if dim > 0 {
            prop_assert_eq!(s.rank(), dim);
            prop_assert!(s.ridge_degrees().values().all(|&d| d == 2));
            let sphere_euler = if (dim - 1).is_multiple_of(2) { 2 } else { 0 };
            prop_assert_eq!(s.euler_characteristic(), sphere_euler);
        }
    }

    #[test]
    fn quotient_is_reflexive(seed in any::<u64>()) {
        let g = random_balanced_dag(&mut rng(seed), 3, 9);
        let dec = route_decomposition(&g).unwrap();
        let sweep = transversal_identity_sweep(&g, &dec);
        prop_assert!(sweep.failures.is_empty());
        let q = quotient_facets(&g, &dec).unwrap();
        prop_assert!(verify_reflexive(&q).ok);
        if q.dimension > 0 {
            prop_assert!(!verify_reflexive(&q.scaled(2)).ok);
            prop_assert_eq!(q.facets.len(), equatorial_facets(&g, &dec).len());
        }
    }

    #[test]
    fn route_count_matches_dp(seed in any::<u64>()) {
        let g = random_dag(&mut rng(seed), 3, 8);
        prop_assert_eq!(enumerate_routes(&g).len() as u128, count_lattice_points(&g, 1, false));
    }

    #[test]
    fn order_polytope_invariants(n in 1usize..6, bits in any::<u64>()) {
        let p = random_poset(n, bits);
        let filters = p.filters();
        prop_assert_eq!(filters.len() as u128, p.count_order_points(1, false));
        prop_assert!(filters.iter().all(|f| p.is_filter(f)));
        let canon = canonical_triangulation(&p);
        prop_assert_eq!(canon.simplices().len() as u128, p.linear_extension_count());
        let h = p.order_hstar().unwrap();
        prop_assert_eq!(h.volume(), p.linear_extension_count());
        prop_assert!(verify_triangulation(&canon, h.volume()).unwrap().ok);
        if p.is_graded().0 {
            let rw = rw_equatorial_triangulation(&p).unwrap();
            prop_assert!(verify_triangulation(&rw, h.volume()).unwrap().ok);
            let h_eq: Vec<i128> = equatorial_complex(&p).unwrap().h_vector().into_iter().map(i128::from).collect();
            prop_assert_eq!(trim(h_eq), trim(h.h_star.clone()));
            let r = p.is_graded().1.into_iter().max().unwrap();
            prop_assert_eq!(h.codegree, r + 1);
        }
    }

    #[test]
    fn stacked_bundles_match_their_dual(widths in proptest::collection::vec(2usize..4, 1..4)) {
        let (g, emb) = bundles(&widths);
        prop_assume!(g.edge_count() <= 9);
        let dual = truncated_dual(&g, &emb).unwrap();
        prop_assert_eq!(dual.poset.len(), widths.iter().map(|w| w - 1).sum::<usize>());
        prop_assert_eq!(dual.poset.is_graded().0, g.degree_equality());
        let rep = verify_equivalence(&g, &emb).unwrap();
        prop_assert!(rep.ok, "{:?}", rep.checks);
        let cliques = max_cliques(&g, &planar_framing(&g, &emb).unwrap()).unwrap();
        prop_assert_eq!(cliques.len() as u128, dual.poset.linear_extension_count());
    }
}
