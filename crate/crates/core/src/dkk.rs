//! Coherence of routes under a framing and the DKK triangulations they induce.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use itertools::Itertools;

use crate::clique::Graph;
use crate::complex::{SimplicialComplex, Triangulation};
use crate::dag::{Dag, Vertex};
use crate::error::{Error, Result};
use crate::routes::{enumerate_routes, Framing, Route};

/// Compares the in-paths `Pv` and `Qv`, given the indices of the edges of `p`
/// and `q` entering `v`. Walks backward to the first edge where they differ and
/// orders by the framing at the vertex both differing edges enter.
fn compare_in(dag: &Dag, framing: &Framing, p: &[usize], ip: usize, q: &[usize], iq: usize) -> Option<Ordering> {
    let (mut i, mut j) = (ip, iq);
    loop {
        let (ep, eq) = (p[i], q[j]);
        if ep != eq {
            return Some(framing.in_rank(ep).cmp(&framing.in_rank(eq)));
        }
        if dag.edge(ep).tail == Vertex::Source {
            return None;
        }
        i -= 1;
        j -= 1;
    }
}

/// Compares the out-paths `vP` and `vQ`, given the indices of the first edges
/// after `v`.
fn compare_out(dag: &Dag, framing: &Framing, p: &[usize], ip: usize, q: &[usize], iq: usize) -> Option<Ordering> {
    let (mut i, mut j) = (ip, iq);
    loop {
        let (ep, eq) = (p[i], q[j]);
        if ep != eq {
            return Some(framing.out_rank(ep).cmp(&framing.out_rank(eq)));
        }
        if dag.edge(ep).head == Vertex::Sink {
            return None;
        }
        i += 1;
        j += 1;
    }
}

/// True iff `p` and `q` conflict at their common inner vertex `v`:
/// one is smaller on the in-side and larger on the out-side.
pub fn conflict_at(dag: &Dag, framing: &Framing, p: &Route, q: &Route, v: Vertex) -> bool {
    let (Some(ip), Some(iq)) = (p.entry_index(dag, v), q.entry_index(dag, v)) else { return false };
    let (pe, qe) = (p.edges(), q.edges());
    let Some(inward) = compare_in(dag, framing, pe, ip, qe, iq) else { return false };
    let Some(outward) = compare_out(dag, framing, pe, ip + 1, qe, iq + 1) else { return false };
    inward != outward
}

/// True iff `p` and `q` conflict at some common inner vertex.
pub fn conflict(dag: &Dag, framing: &Framing, p: &Route, q: &Route) -> bool {
    p.inner_vertices(dag).any(|v| conflict_at(dag, framing, p, q, v))
}

/// Routes are coherent when they do not conflict; routes sharing no inner
/// vertex are always coherent.
pub fn coherent(dag: &Dag, framing: &Framing, p: &Route, q: &Route) -> bool {
    !conflict(dag, framing, p, q)
}

/// Coherence graph on `routes`.
pub fn coherence_graph(dag: &Dag, framing: &Framing, routes: &[Route]) -> Graph {
    Graph::from_fn(routes.len(), |i, j| coherent(dag, framing, &routes[i], &routes[j]))
}

/// Routes coherent with every other route.
pub fn exceptional_routes(dag: &Dag, framing: &Framing) -> Vec<Route> {
    let routes = enumerate_routes(dag);
    let g = coherence_graph(dag, framing, &routes);
    routes.iter().enumerate().filter(|&(i, _)| g.degree(i) + 1 == routes.len()).map(|(_, r)| r.clone()).collect()
}

/// Maximal cliques of the coherence graph, as sorted index sets into
/// [`enumerate_routes`]. Each must have `dimension + 1` routes.
pub fn max_cliques(dag: &Dag, framing: &Framing) -> Result<Vec<Vec<usize>>> {
    let routes = enumerate_routes(dag);
    let cliques = coherence_graph(dag, framing, &routes).maximal_cliques();
    let want = dag.dimension() + 1;
    if let Some(bad) = cliques.iter().find(|c| c.len() != want) {
        let names = bad.iter().map(|&i| routes[i].label(dag)).join(", ");
        return Err(Error::CoherenceInconsistency(format!(
            "maximal clique {{{names}}} has {} routes, expected {want}",
            bad.len()
        )));
    }
    Ok(cliques)
}

/// Triangulation of the flow polytope whose simplices are `faces` (index sets
/// into `routes`), with every route's indicator vector as a carrier point.
pub fn route_triangulation(dag: &Dag, routes: &[Route], faces: impl IntoIterator<Item = Vec<usize>>) -> Triangulation {
    Triangulation {
        complex: SimplicialComplex::new(routes.iter().map(|r| r.label(dag)).collect(), faces),
        points: routes.iter().map(|r| r.indicator(dag)).collect(),
        coordinates: dag.edges().iter().map(|e| e.id.clone()).collect(),
    }
}

/// DKK triangulation: one simplex per maximal clique of coherent routes.
pub fn dkk_triangulation(dag: &Dag, framing: &Framing) -> Result<Triangulation> {
    let routes = enumerate_routes(dag);
    let cliques = max_cliques(dag, framing)?;
    Ok(route_triangulation(dag, &routes, cliques))
}

/// Number of framings: the product of `indeg(v)! * outdeg(v)!`.
pub fn framing_count(dag: &Dag) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    dag.inner_vertices().map(|v| fact(dag.indeg(v)) * fact(dag.outdeg(v))).product()
}

/// Every framing of `dag`, in a fixed order.
pub fn all_framings(dag: &Dag) -> impl Iterator<Item = Framing> + '_ {
    let sides: Vec<Vec<Vec<usize>>> = dag
        .inner_vertices()
        .flat_map(|v| [dag.in_edges(v), dag.out_edges(v)])
        .map(|edges| edges.iter().copied().permutations(edges.len()).collect())
        .collect();
    let verts: Vec<Vertex> = dag.inner_vertices().collect();
    sides.into_iter().multi_cartesian_product().map(move |choice| {
        let orders: BTreeMap<Vertex, (Vec<usize>, Vec<usize>)> =
            verts.iter().enumerate().map(|(k, &v)| (v, (choice[2 * k].clone(), choice[2 * k + 1].clone()))).collect();
        Framing::new(dag, orders).expect("permutations of in/out edges form a framing")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::routes::{decomposition_framing, route_decomposition};

    fn lex_framing(dag: &Dag) -> Framing {
        decomposition_framing(dag, &route_decomposition(dag).unwrap())
    }

    fn route(dag: &Dag, ids: &[&str]) -> Route {
        Route::from_ids(dag, ids).unwrap()
    }

    #[test]
    fn d1_conflicts() {
        let d1 = catalog::d1();
        let fr = lex_framing(&d1);
        let (ac, ad, bc, bd) =
            (route(&d1, &["a", "c"]), route(&d1, &["a", "d"]), route(&d1, &["b", "c"]), route(&d1, &["b", "d"]));
        assert!(conflict(&d1, &fr, &ad, &bc));
        assert!(conflict(&d1, &fr, &bc, &ad));
        assert!(!conflict(&d1, &fr, &ad, &ad));
        assert!(!conflict(&d1, &fr, &ac, &ad));
        assert!(coherent(&d1, &fr, &ac, &bd));
        let labels: Vec<String> = exceptional_routes(&d1, &fr).iter().map(|r| r.label(&d1)).collect();
        assert_eq!(labels, ["ac", "bd"]);
    }

    #[test]
    fn parallel_routes_are_all_coherent() {
        let g3 = catalog::parallel(3);
        let fr = lex_framing(&g3);
        assert_eq!(exceptional_routes(&g3, &fr).len(), 3);
        assert_eq!(max_cliques(&g3, &fr).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn d1_cliques() {
        let d1 = catalog::d1();
        let routes = enumerate_routes(&d1);
        let cliques = max_cliques(&d1, &lex_framing(&d1)).unwrap();
        let named: Vec<Vec<String>> =
            cliques.iter().map(|c| c.iter().map(|&i| routes[i].label(&d1)).collect()).collect();
        assert_eq!(named, [["ac", "ad", "bd"], ["ac", "bc", "bd"]]);
    }

    #[test]
    fn d2_has_six_cliques() {
        let d2 = catalog::d2();
        let cliques = max_cliques(&d2, &lex_framing(&d2)).unwrap();
        assert_eq!(cliques.len(), 6);
        assert!(cliques.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn spine_bottom_routes_are_exceptional() {
        let g = catalog::spine();
        let fr = crate::planar::planar_framing(&g, &catalog::spine_embedding()).unwrap();
        let mut labels: Vec<String> = exceptional_routes(&g, &fr).iter().map(|r| r.label(&g)).collect();
        labels.sort();
        assert_eq!(labels, ["u1-w1", "x3-z3"]);
    }

    #[test]
    fn framing_enumeration() {
        let d3 = catalog::d3();
        assert_eq!(framing_count(&d3), 36);
        assert_eq!(all_framings(&d3).count(), 36);
        assert_eq!(all_framings(&catalog::parallel(2)).count(), 1);
        assert_eq!(framing_count(&catalog::spine()), 16);
    }
}
