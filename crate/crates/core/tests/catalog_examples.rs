use std::collections::BTreeSet;

use flowtri::catalog;
use flowtri::dkk::{coherent, conflict, dkk_triangulation, exceptional_routes, max_cliques};
use flowtri::equatorial::{equatorial_facets, equatorial_flow_triangulation, t_eq, transversal_count};
use flowtri::geometry::{ehrhart_hstar, is_gorenstein, verify_triangulation};
use flowtri::quotient::{check_transversal_identity, quotient_facets};
use flowtri::routes::{decomposition_framing, enumerate_routes, route_decomposition, Route, RouteDecomposition};
use flowtri::{Dag, Vertex};

fn labels(dag: &Dag, routes: &[Route], set: &[usize]) -> BTreeSet<String> {
    set.iter().map(|&i| routes[i].label(dag)).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[test]
fn dimensions_and_route_counts() {
    assert_eq!(catalog::d1().dimension(), 2);
    assert_eq!(catalog::d2().dimension(), 3);
    assert_eq!(catalog::d3().dimension(), 4);
    assert_eq!(enumerate_routes(&catalog::d2()).len(), 8);
    let d1 = catalog::d1();
    let names: BTreeSet<String> = enumerate_routes(&d1).iter().map(|r| r.label(&d1)).collect();
    assert_eq!(names, set(&["ac", "ad", "bc", "bd"]));
}

#[test]
fn contraction_leaves_reduced_graphs_alone() {
    let d1 = catalog::d1();
    let c = d1.contract_idle_edges().unwrap();
    assert_eq!(c.dag, d1);
    assert!(c.merges.is_empty());
    let idle = catalog::chain_with_idle_middle();
    let c = idle.contract_idle_edges().unwrap();
    assert!(c.dag.idle_edges().is_empty());
    assert_eq!(c.dag.inner_count(), idle.inner_count() - 1);
}

#[test]
fn lexicographic_decomposition_of_d1() {
    let d1 = catalog::d1();
    let dec = route_decomposition(&d1).unwrap();
    assert_eq!(dec.to_ids(&d1), vec![vec!["a", "c"], vec!["b", "d"]]);
    assert!(route_decomposition(&catalog::unbalanced()).is_err());
}

#[test]
fn d1_conflicts_and_cliques() {
    let d1 = catalog::d1();
    let dec = route_decomposition(&d1).unwrap();
    let fr = decomposition_framing(&d1, &dec);
    let r = |ids: &[&str]| Route::from_ids(&d1, ids).unwrap();
    assert!(conflict(&d1, &fr, &r(&["a", "d"]), &r(&["b", "c"])));
    assert!(coherent(&d1, &fr, &r(&["a", "c"]), &r(&["b", "d"])));
    let exc: BTreeSet<String> = exceptional_routes(&d1, &fr).iter().map(|r| r.label(&d1)).collect();
    assert_eq!(exc, set(&["ac", "bd"]));
    let routes = enumerate_routes(&d1);
    let cliques: BTreeSet<BTreeSet<String>> =
        max_cliques(&d1, &fr).unwrap().iter().map(|c| labels(&d1, &routes, c)).collect();
    assert_eq!(cliques, BTreeSet::from([set(&["ac", "ad", "bd"]), set(&["ac", "bc", "bd"])]));
}

#[test]
fn d2_dkk_and_equatorial_triangulations() {
    let d2 = catalog::d2();
    let dec = route_decomposition(&d2).unwrap();
    let tri = dkk_triangulation(&d2, &decomposition_framing(&d2, &dec)).unwrap();
    assert_eq!(tri.simplices().len(), 6);
    assert!(verify_triangulation(&tri, 6).unwrap().ok);

    assert_eq!(transversal_count(&dec), 9);
    assert_eq!(equatorial_facets(&d2, &dec).len(), 6);
    let eq = equatorial_flow_triangulation(&d2, &dec).unwrap();
    assert_eq!(eq.simplices().len(), 6);
    for s in eq.labelled_simplices() {
        assert!(s.contains("ace") && s.contains("bdf"), "{s:?}");
    }
}

#[test]
fn d1_equatorial_pieces() {
    let d1 = catalog::d1();
    let dec = route_decomposition(&d1).unwrap();
    let routes = enumerate_routes(&d1);
    let facets: BTreeSet<BTreeSet<String>> =
        equatorial_facets(&d1, &dec).iter().map(|f| labels(&d1, &routes, &f.routes)).collect();
    assert_eq!(facets, BTreeSet::from([set(&["ad"]), set(&["bc"])]));
    let sphere = t_eq(&d1, &dec).unwrap();
    assert_eq!(sphere.facets.len(), 2);
    let tri = equatorial_flow_triangulation(&d1, &dec).unwrap();
    let expected = BTreeSet::from([set(&["ad", "ac", "bd"]), set(&["bc", "ac", "bd"])]);
    assert_eq!(tri.labelled_simplices(), expected);
}

#[test]
fn d3_sphere_is_the_off_diagonal_hexagon() {
    let d3 = catalog::d3();
    let dec = RouteDecomposition::from_ids(&d3, &[vec!["a", "d"], vec!["b", "e"], vec!["c", "f"]]).unwrap();
    let fr = decomposition_framing(&d3, &dec);
    let ids = fr.to_ids(&d3);
    assert_eq!(ids[&Vertex::Inner(1)].0, ["a", "b", "c"]);
    assert_eq!(ids[&Vertex::Inner(1)].1, ["d", "e", "f"]);
    let sphere = t_eq(&d3, &dec).unwrap();
    let used: BTreeSet<String> = sphere.used_vertices().iter().map(|&i| sphere.labels[i].clone()).collect();
    assert_eq!(used, set(&["ae", "af", "bd", "bf", "cd", "ce"]));
}

#[test]
fn ehrhart_examples() {
    let d1 = ehrhart_hstar(&catalog::d1()).unwrap();
    assert_eq!(d1.h_star, vec![1, 1, 0]);
    assert_eq!((d1.degree, d1.codegree), (1, 2));
    let d2 = ehrhart_hstar(&catalog::d2()).unwrap();
    assert_eq!(d2.h_star, vec![1, 4, 1, 0]);
    assert_eq!(d2.codegree, 2);
    assert_eq!(ehrhart_hstar(&catalog::parallel(3)).unwrap().h_star, vec![1, 0, 0]);
    for g in [catalog::d1(), catalog::d3(), catalog::spine()] {
        assert!(is_gorenstein(&g).unwrap());
    }
}

#[test]
fn quotient_of_d3_is_a_hexagon() {
    let d3 = catalog::d3();
    let dec = route_decomposition(&d3).unwrap();
    let q = quotient_facets(&d3, &dec).unwrap();
    assert_eq!(q.dimension, 2);
    assert_eq!(q.vertices.len(), 6);
    assert_eq!(q.facets.len(), 6);
    for f in &q.facets {
        assert_eq!(f.rhs, 1);
        assert_eq!(f.incident.len(), 2);
    }
}

#[test]
fn quotient_of_g3_is_a_point() {
    let g3 = catalog::parallel(3);
    let dec = route_decomposition(&g3).unwrap();
    let q = quotient_facets(&g3, &dec).unwrap();
    assert_eq!(q.dimension, 0);
    assert!(q.vertices.is_empty());
}

#[test]
fn transversal_identity_on_the_spine_graph() {
    let g = catalog::spine();
    let dec = route_decomposition(&g).unwrap();
    let m = flowtri::equatorial::enumerate_transversals(&dec).next().unwrap();
    for s in enumerate_routes(&g) {
        let check = check_transversal_identity(&g, &dec, &s, &m);
        assert!(check.holds, "{} vs {:?}", s.label(&g), m.ids(&g));
    }
}
