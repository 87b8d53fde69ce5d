//! Transversals of a route decomposition, the equatorial complex they cut out,
//! the equatorial sphere and the equatorial flow triangulation.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::complex::{maximal_sets, SimplicialComplex, Triangulation};
use crate::dag::{Dag, Vertex};
use crate::dkk::{all_framings, framing_count, max_cliques, route_triangulation};
use crate::error::{Error, Result};
use crate::routes::{decomposition_framing, enumerate_routes, Route, RouteDecomposition};

/// One edge from each decomposition route: `edges[i]` lies on route `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transversal {
    pub edges: Vec<usize>,
}

impl Transversal {
    pub fn new(dag: &Dag, decomp: &RouteDecomposition, edges: Vec<usize>) -> Result<Self> {
        if edges.len() != decomp.len() {
            return Err(Error::InvalidDecomposition(format!(
                "a transversal needs {} edges, got {}",
                decomp.len(),
                edges.len()
            )));
        }
        for (i, &e) in edges.iter().enumerate() {
            if decomp.label(e) != i {
                return Err(Error::InvalidDecomposition(format!(
                    "edge `{}` is not on decomposition route {}",
                    dag.edge(e).id,
                    i + 1
                )));
            }
        }
        Ok(Transversal { edges })
    }

    pub fn from_ids<S: AsRef<str>>(dag: &Dag, decomp: &RouteDecomposition, ids: &[S]) -> Result<Self> {
        let mut edges = ids.iter().map(|id| dag.edge_index(id.as_ref())).collect::<Result<Vec<_>>>()?;
        edges.sort_by_key(|&e| decomp.label(e));
        Transversal::new(dag, decomp, edges)
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }

    /// Edge of route `i`.
    pub fn edge_on(&self, route: usize) -> usize {
        self.edges[route]
    }

    pub fn ids(&self, dag: &Dag) -> Vec<String> {
        self.edges.iter().map(|&e| dag.edge(e).id.clone()).collect()
    }

    /// Route number (from 1) to chosen edge id.
    pub fn to_map(&self, dag: &Dag) -> BTreeMap<usize, String> {
        self.edges.iter().enumerate().map(|(i, &e)| (i + 1, dag.edge(e).id.clone())).collect()
    }
}

/// Every transversal: the product of the routes' edge lists, routes in
/// decomposition order and edges in path order.
pub fn enumerate_transversals(decomp: &RouteDecomposition) -> impl Iterator<Item = Transversal> + '_ {
    decomp.routes().iter().map(|r| r.edges().to_vec()).multi_cartesian_product().map(|edges| Transversal { edges })
}

/// Number of transversals.
pub fn transversal_count(decomp: &RouteDecomposition) -> u128 {
    decomp.routes().iter().map(|r| r.len() as u128).product()
}

/// Indices of `routes` that use no edge of any of `transversals`.
pub fn routes_avoiding(routes: &[Route], transversals: &[Transversal]) -> Vec<usize> {
    routes
        .iter()
        .enumerate()
        .filter(|(_, r)| r.edges().iter().all(|&e| transversals.iter().all(|m| !m.contains(e))))
        .map(|(i, _)| i)
        .collect()
}

/// True iff no decomposition route lies inside the union of the edges of
/// `routeset`, i.e. the routes avoid a common transversal.
pub fn common_face(dag: &Dag, decomp: &RouteDecomposition, routeset: &[&Route]) -> bool {
    let mut used = vec![false; dag.edge_count()];
    for r in routeset {
        for &e in r.edges() {
            used[e] = true;
        }
    }
    decomp.routes().iter().all(|r| !r.edges().iter().all(|&e| used[e]))
}

/// True iff every inner vertex lies on a route avoiding `m`.
pub fn is_facet_transversal(dag: &Dag, m: &Transversal) -> bool {
    let n = dag.inner_count() + 2;
    let mut from_s = vec![false; n];
    from_s[0] = true;
    for v in dag.vertices() {
        if from_s[dag.position(v)] {
            for &e in dag.out_edges(v) {
                if !m.contains(e) {
                    from_s[dag.position(dag.edge(e).head)] = true;
                }
            }
        }
    }
    let mut to_t = vec![false; n];
    to_t[n - 1] = true;
    for v in dag.vertices().collect::<Vec<_>>().into_iter().rev() {
        if dag.out_edges(v).iter().any(|&e| !m.contains(e) && to_t[dag.position(dag.edge(e).head)]) {
            to_t[dag.position(v)] = true;
        }
    }
    dag.inner_vertices().all(|v| from_s[dag.position(v)] && to_t[dag.position(v)])
}

/// A maximal face of the equatorial complex: the routes avoiding a facet
/// transversal, with every facet transversal that cuts out the same set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquatorialFace {
    /// Indices into [`enumerate_routes`].
    pub routes: Vec<usize>,
    #[serde(skip)]
    pub transversals: Vec<Transversal>,
}

/// Facets of the equatorial complex, sorted by route set. Empty faces are
/// dropped, so the result is empty when the polytope is the route simplex.
pub fn equatorial_facets(dag: &Dag, decomp: &RouteDecomposition) -> Vec<EquatorialFace> {
    let routes = enumerate_routes(dag);
    let mut by_face: BTreeMap<Vec<usize>, Vec<Transversal>> = BTreeMap::new();
    for m in enumerate_transversals(decomp) {
        if !is_facet_transversal(dag, &m) {
            continue;
        }
        let face = routes_avoiding(&routes, std::slice::from_ref(&m));
        if !face.is_empty() {
            by_face.entry(face).or_default().push(m);
        }
    }
    by_face.into_iter().map(|(routes, transversals)| EquatorialFace { routes, transversals }).collect()
}

/// Indices into [`enumerate_routes`] of the decomposition routes, in
/// decomposition order.
pub fn decomposition_indices(dag: &Dag, decomp: &RouteDecomposition) -> Vec<usize> {
    let routes = enumerate_routes(dag);
    decomp
        .routes()
        .iter()
        .map(|r| routes.iter().position(|q| q == r).expect("decomposition routes are routes"))
        .collect()
}

/// The equatorial sphere: maximal sets among the intersections of maximal
/// cliques (under the decomposition framing) with equatorial facets. Vertices
/// are indices into [`enumerate_routes`].
pub fn t_eq(dag: &Dag, decomp: &RouteDecomposition) -> Result<SimplicialComplex> {
    let routes = enumerate_routes(dag);
    let cliques = max_cliques(dag, &decomposition_framing(dag, decomp))?;
    let facets = equatorial_facets(dag, decomp);
    let mut faces = Vec::new();
    for c in &cliques {
        for f in &facets {
            let set: BTreeSet<usize> = f.routes.iter().copied().collect();
            faces.push(c.iter().copied().filter(|i| set.contains(i)).collect::<Vec<_>>());
        }
    }
    if faces.is_empty() {
        faces.push(Vec::new());
    }
    let labels = routes.iter().map(|r| r.label(dag)).collect();
    Ok(SimplicialComplex::new(labels, maximal_sets(faces)))
}

/// `T_eq` joined with the route simplex.
pub fn equatorial_flow_triangulation(dag: &Dag, decomp: &RouteDecomposition) -> Result<Triangulation> {
    let sphere = t_eq(dag, decomp)?;
    let special = decomposition_indices(dag, decomp);
    let faces = sphere.facets.iter().map(|f| f.iter().chain(&special).copied().collect::<Vec<_>>());
    Ok(route_triangulation(dag, &enumerate_routes(dag), faces))
}

pub const DEFAULT_FRAMING_BOUND: u128 = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DkkComparison {
    /// The equatorial flow triangulation equals the DKK triangulation of the
    /// decomposition framing.
    pub equals_decomposition_framing: bool,
    /// Framings examined in the exhaustive sweep, if it ran.
    pub framings_checked: Option<u128>,
    /// Framings whose DKK triangulation equals the equatorial one.
    pub matching_framings: Option<u128>,
    /// `Some(true)` when no framing reproduces the equatorial triangulation.
    pub not_dkk: Option<bool>,
}

/// Compares the equatorial flow triangulation with DKK triangulations: always
/// with the decomposition framing, and with every framing when `exhaustive`.
pub fn differs_from_dkk(
    dag: &Dag,
    decomp: &RouteDecomposition,
    exhaustive: bool,
    bound: u128,
) -> Result<DkkComparison> {
    let eq = equatorial_flow_triangulation(dag, decomp)?;
    let target: BTreeSet<Vec<usize>> = eq.simplices().iter().cloned().collect();
    let same = |cliques: Vec<Vec<usize>>| cliques.into_iter().collect::<BTreeSet<_>>() == target;
    let equals_decomposition_framing = same(max_cliques(dag, &decomposition_framing(dag, decomp))?);
    if !exhaustive {
        return Ok(DkkComparison {
            equals_decomposition_framing,
            framings_checked: None,
            matching_framings: None,
            not_dkk: None,
        });
    }
    let framings = framing_count(dag);
    if framings > bound {
        return Err(Error::ExhaustiveBoundExceeded { framings, bound });
    }
    let mut matches = 0u128;
    for fr in all_framings(dag) {
        if same(max_cliques(dag, &fr)?) {
            matches += 1;
        }
    }
    Ok(DkkComparison {
        equals_decomposition_framing,
        framings_checked: Some(framings),
        matching_framings: Some(matches),
        not_dkk: Some(matches == 0),
    })
}

/// Whether some inner vertex has indegree at least three.
pub fn has_high_indegree(dag: &Dag) -> bool {
    dag.inner_vertices().any(|v: Vertex| dag.indeg(v) >= 3)
}
