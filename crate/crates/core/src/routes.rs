//! Routes (s-t paths), route decompositions and framings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dag::{Dag, Vertex};
use crate::error::{Error, Result};

/// An `s -> t` path as a sequence of edge indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Route {
    edges: Vec<usize>,
}

impl Route {
    /// Checks that `edges` is a path from `s` to `t`.
    pub fn new(dag: &Dag, edges: Vec<usize>) -> Result<Self> {
        let (Some(&first), Some(&last)) = (edges.first(), edges.last()) else {
            return Err(Error::InvalidRoute("empty edge sequence".into()));
        };
        if dag.edge(first).tail != Vertex::Source {
            return Err(Error::InvalidRoute(format!("`{}` does not leave s", dag.edge(first).id)));
        }
        if dag.edge(last).head != Vertex::Sink {
            return Err(Error::InvalidRoute(format!("`{}` does not enter t", dag.edge(last).id)));
        }
        for pair in edges.windows(2) {
            let (a, b) = (dag.edge(pair[0]), dag.edge(pair[1]));
            if a.head != b.tail {
                return Err(Error::InvalidRoute(format!("`{}` and `{}` are not adjacent", a.id, b.id)));
            }
        }
        Ok(Route { edges })
    }

    pub fn from_ids<S: AsRef<str>>(dag: &Dag, ids: &[S]) -> Result<Self> {
        let edges = ids.iter().map(|id| dag.edge_index(id.as_ref())).collect::<Result<Vec<_>>>()?;
        Route::new(dag, edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn uses(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }

    /// Inner vertices visited, in order.
    pub fn inner_vertices<'a>(&'a self, dag: &'a Dag) -> impl Iterator<Item = Vertex> + 'a {
        self.edges[..self.edges.len() - 1].iter().map(|&e| dag.edge(e).head)
    }

    /// Index of the edge entering `v`, if the route visits the inner vertex `v`.
    /// The edge leaving `v` is at the next index.
    pub fn entry_index(&self, dag: &Dag, v: Vertex) -> Option<usize> {
        self.edges[..self.edges.len() - 1].iter().position(|&e| dag.edge(e).head == v)
    }

    /// The prefix `Pv` ending at `v` (inclusive of the edge entering `v`).
    pub fn prefix_to(&self, dag: &Dag, v: Vertex) -> Option<&[usize]> {
        self.entry_index(dag, v).map(|i| &self.edges[..=i])
    }

    /// The suffix `vP` starting at `v`.
    pub fn suffix_from(&self, dag: &Dag, v: Vertex) -> Option<&[usize]> {
        self.entry_index(dag, v).map(|i| &self.edges[i + 1..])
    }

    pub fn ids<'a>(&self, dag: &'a Dag) -> Vec<&'a str> {
        self.edges.iter().map(|&e| dag.edge(e).id.as_str()).collect()
    }

    /// Compact label: ids concatenated when all are single characters,
    /// otherwise joined by `-`.
    pub fn label(&self, dag: &Dag) -> String {
        let ids = self.ids(dag);
        if ids.iter().all(|id| id.chars().count() == 1) {
            ids.concat()
        } else {
            ids.join("-")
        }
    }

    /// 0/1 indicator vector over the edges of `dag`.
    pub fn indicator(&self, dag: &Dag) -> Vec<i64> {
        let mut x = vec![0; dag.edge_count()];
        for &e in &self.edges {
            x[e] = 1;
        }
        x
    }
}

/// Indicator vector of a route.
pub fn indicator_vector(dag: &Dag, route: &Route) -> Vec<i64> {
    route.indicator(dag)
}

/// All routes, in lexicographic order of their edge-id sequences.
pub fn enumerate_routes(dag: &Dag) -> Vec<Route> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    extend_routes(dag, Vertex::Source, &mut path, &mut out);
    out
}

fn extend_routes(dag: &Dag, v: Vertex, path: &mut Vec<usize>, out: &mut Vec<Route>) {
    if v == Vertex::Sink {
        out.push(Route { edges: path.clone() });
        return;
    }
    for &e in dag.out_edges(v) {
        path.push(e);
        extend_routes(dag, dag.edge(e).head, path, out);
        path.pop();
    }
}

/// Number of routes by dynamic programming over the vertex order.
pub fn count_routes(dag: &Dag) -> u128 {
    let mut ways = vec![0u128; dag.inner_count() + 2];
    ways[0] = 1;
    for v in dag.vertices() {
        let here = ways[dag.position(v)];
        for &e in dag.out_edges(v) {
            ways[dag.position(dag.edge(e).head)] += here;
        }
    }
    ways[dag.inner_count() + 1]
}

/// An ordered set of edge-disjoint routes covering every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteDecomposition {
    routes: Vec<Route>,
    /// route index of each edge
    labels: Vec<usize>,
}

impl RouteDecomposition {
    pub fn new(dag: &Dag, routes: Vec<Route>) -> Result<Self> {
        let mut labels = vec![usize::MAX; dag.edge_count()];
        for (i, r) in routes.iter().enumerate() {
            for &e in r.edges() {
                if labels[e] != usize::MAX {
                    return Err(Error::InvalidDecomposition(format!(
                        "edge `{}` is used by more than one route",
                        dag.edge(e).id
                    )));
                }
                labels[e] = i;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidDecomposition(format!("edge `{}` is not covered", dag.edge(e).id)));
        }
        Ok(RouteDecomposition { routes, labels })
    }

    pub fn from_ids<S: AsRef<str>>(dag: &Dag, routes: &[Vec<S>]) -> Result<Self> {
        let routes = routes.iter().map(|ids| Route::from_ids(dag, ids)).collect::<Result<Vec<_>>>()?;
        RouteDecomposition::new(dag, routes)
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    /// 0-based index of the decomposition route containing `edge`.
    pub fn label(&self, edge: usize) -> usize {
        self.labels[edge]
    }

    pub fn to_ids(&self, dag: &Dag) -> Vec<Vec<String>> {
        self.routes.iter().map(|r| r.ids(dag).into_iter().map(String::from).collect()).collect()
    }

    /// The same routes in a different order; `order[i]` is the old index of
    /// the new `i`-th route.
    pub fn reordered(&self, dag: &Dag, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidDecomposition("reordering is not a permutation".into()));
            }
        }
        if order.len() != self.len() {
            return Err(Error::InvalidDecomposition("reordering is not a permutation".into()));
        }
        RouteDecomposition::new(dag, order.iter().map(|&i| self.routes[i].clone()).collect())
    }
}

/// True iff `routes` are pairwise edge-disjoint and cover every edge.
pub fn is_route_decomposition(dag: &Dag, routes: &[Route]) -> bool {
    let mut used = vec![false; dag.edge_count()];
    for r in routes {
        for &e in r.edges() {
            if std::mem::replace(&mut used[e], true) {
                return false;
            }
        }
    }
    used.into_iter().all(|u| u)
}

/// Peels routes off the graph until no edge is left, each time taking the
/// lexicographically smallest route (by edge id) of what remains.
pub fn route_decomposition(dag: &Dag) -> Result<RouteDecomposition> {
    if !dag.degree_equality() {
        let bad: Vec<String> = dag
            .inner_vertices()
            .filter(|&v| dag.indeg(v) != dag.outdeg(v))
            .map(|v| format!("{v} (in {}, out {})", dag.indeg(v), dag.outdeg(v)))
            .collect();
        return Err(Error::NotGorenstein(format!("degree equality fails at {}", bad.join(", "))));
    }
    let mut alive = vec![true; dag.edge_count()];
    let mut routes = Vec::new();
    while alive.iter().any(|&a| a) {
        debug_assert!(remaining_is_balanced(dag, &alive));
        let mut path = Vec::new();
        if !smallest_route(dag, Vertex::Source, &alive, &mut path) {
            return Err(Error::NotGorenstein("remaining edges contain no s-t route".into()));
        }
        for &e in &path {
            alive[e] = false;
        }
        routes.push(Route { edges: path });
    }
    let decomp = RouteDecomposition::new(dag, routes)?;
    debug_assert_eq!(decomp.len(), dag.outdeg(Vertex::Source));
    Ok(decomp)
}

fn smallest_route(dag: &Dag, v: Vertex, alive: &[bool], path: &mut Vec<usize>) -> bool {
    if v == Vertex::Sink {
        return true;
    }
    for &e in dag.out_edges(v) {
        if !alive[e] {
            continue;
        }
        path.push(e);
        if smallest_route(dag, dag.edge(e).head, alive, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn remaining_is_balanced(dag: &Dag, alive: &[bool]) -> bool {
    dag.inner_vertices().all(|v| {
        let i = dag.in_edges(v).iter().filter(|&&e| alive[e]).count();
        let o = dag.out_edges(v).iter().filter(|&&e| alive[e]).count();
        i == o
    })
}

/// Per inner vertex, linear orders on incoming and outgoing edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Framing {
    /// indexed by vertex position; empty for `s` and `t`
    in_order: Vec<Vec<usize>>,
    out_order: Vec<Vec<usize>>,
    in_rank: Vec<usize>,
    out_rank: Vec<usize>,
}

impl Framing {
    /// `orders[v] = (in(v) order, out(v) order)` for each inner vertex.
    pub fn new(dag: &Dag, orders: BTreeMap<Vertex, (Vec<usize>, Vec<usize>)>) -> Result<Self> {
        let slots = dag.inner_count() + 2;
        let mut in_order = vec![Vec::new(); slots];
        let mut out_order = vec![Vec::new(); slots];
        let mut in_rank = vec![0; dag.edge_count()];
        let mut out_rank = vec![0; dag.edge_count()];
        for v in dag.inner_vertices() {
            let Some((ins, outs)) = orders.get(&v) else {
                return Err(Error::InvalidFraming(format!("no orders given at vertex {v}")));
            };
            check_permutation(dag, v, ins, dag.in_edges(v), "in")?;
            check_permutation(dag, v, outs, dag.out_edges(v), "out")?;
            for (r, &e) in ins.iter().enumerate() {
                in_rank[e] = r;
            }
            for (r, &e) in outs.iter().enumerate() {
                out_rank[e] = r;
            }
            in_order[dag.position(v)] = ins.clone();
            out_order[dag.position(v)] = outs.clone();
        }
        if let Some(v) = orders.keys().find(|v| !v.is_inner()) {
            return Err(Error::InvalidFraming(format!("vertex {v} is not an inner vertex")));
        }
        Ok(Framing { in_order, out_order, in_rank, out_rank })
    }

    pub fn from_ids(dag: &Dag, orders: &BTreeMap<Vertex, (Vec<String>, Vec<String>)>) -> Result<Self> {
        let mut idx = BTreeMap::new();
        for (&v, (ins, outs)) in orders {
            let ins = ins.iter().map(|id| dag.edge_index(id)).collect::<Result<Vec<_>>>()?;
            let outs = outs.iter().map(|id| dag.edge_index(id)).collect::<Result<Vec<_>>>()?;
            idx.insert(v, (ins, outs));
        }
        Framing::new(dag, idx)
    }

    pub fn in_order(&self, dag: &Dag, v: Vertex) -> &[usize] {
        &self.in_order[dag.position(v)]
    }

    pub fn out_order(&self, dag: &Dag, v: Vertex) -> &[usize] {
        &self.out_order[dag.position(v)]
    }

    /// Position of `edge` in the order on `in(head(edge))`.
    pub fn in_rank(&self, edge: usize) -> usize {
        self.in_rank[edge]
    }

    /// Position of `edge` in the order on `out(tail(edge))`.
    pub fn out_rank(&self, edge: usize) -> usize {
        self.out_rank[edge]
    }

    pub fn to_ids(&self, dag: &Dag) -> BTreeMap<Vertex, (Vec<String>, Vec<String>)> {
        let name = |list: &[usize]| list.iter().map(|&e| dag.edge(e).id.clone()).collect::<Vec<_>>();
        dag.inner_vertices().map(|v| (v, (name(self.in_order(dag, v)), name(self.out_order(dag, v))))).collect()
    }
}

fn check_permutation(dag: &Dag, v: Vertex, given: &[usize], expected: &[usize], side: &str) -> Result<()> {
    let mut a = given.to_vec();
    let mut b = expected.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::InvalidFraming(format!("{side}-order at {v} is not a permutation of {side}({v})")));
    }
    let _ = dag;
    Ok(())
}

/// Orders `in(v)` and `out(v)` by the index of the decomposition route
/// containing each edge.
pub fn decomposition_framing(dag: &Dag, decomp: &RouteDecomposition) -> Framing {
    let orders = dag
        .inner_vertices()
        .map(|v| {
            let mut ins = dag.in_edges(v).to_vec();
            let mut outs = dag.out_edges(v).to_vec();
            ins.sort_by_key(|&e| decomp.label(e));
            outs.sort_by_key(|&e| decomp.label(e));
            (v, (ins, outs))
        })
        .collect();
    Framing::new(dag, orders).expect("decomposition framing is a framing")
}

/// Serializable form of a decomposition file: an ordered array of routes,
/// each an array of edge ids.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct DecompositionSpec(pub Vec<Vec<String>>);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn labels(dag: &Dag, routes: &[Route]) -> Vec<String> {
        routes.iter().map(|r| r.label(dag)).collect()
    }

    #[test]
    fn enumerate_catalog_routes() {
        assert_eq!(enumerate_routes(&catalog::parallel(3)).len(), 3);
        let d1 = catalog::d1();
        assert_eq!(labels(&d1, &enumerate_routes(&d1)), ["ac", "ad", "bc", "bd"]);
        let d2 = catalog::d2();
        assert_eq!(enumerate_routes(&d2).len(), 8);
        assert_eq!(count_routes(&d2), 8);
    }

    #[test]
    fn peel_d1() {
        let d1 = catalog::d1();
        let decomp = route_decomposition(&d1).unwrap();
        assert_eq!(labels(&d1, decomp.routes()), ["ac", "bd"]);
        assert!(is_route_decomposition(&d1, decomp.routes()));
    }

    #[test]
    fn peel_parallel_and_spine() {
        let g3 = catalog::parallel(3);
        let decomp = route_decomposition(&g3).unwrap();
        assert_eq!(labels(&g3, decomp.routes()), ["e1", "e2", "e3"]);

        let spine = catalog::spine();
        let decomp = route_decomposition(&spine).unwrap();
        assert_eq!(labels(&spine, decomp.routes()), ["u1-w1", "x2-y2-w2", "x3-z3"]);
    }

    #[test]
    fn peel_rejects_unbalanced() {
        assert!(matches!(route_decomposition(&catalog::unbalanced()), Err(Error::NotGorenstein(_))));
    }

    #[test]
    fn decomposition_checks() {
        let d1 = catalog::d1();
        let r = |ids: &[&str]| Route::from_ids(&d1, ids).unwrap();
        assert!(is_route_decomposition(&d1, &[r(&["a", "c"]), r(&["b", "d"])]));
        assert!(!is_route_decomposition(&d1, &[r(&["a", "c"]), r(&["b", "c"])]));
        let d2 = catalog::d2();
        let good = RouteDecomposition::from_ids(&d2, &[vec!["a", "c", "e"], vec!["b", "d", "f"]]);
        assert!(good.is_ok());
    }

    #[test]
    fn invalid_routes() {
        let d1 = catalog::d1();
        assert!(Route::from_ids(&d1, &["a"]).is_err());
        assert!(Route::from_ids(&d1, &["c", "a"]).is_err());
        assert!(Route::from_ids(&d1, &["a", "zz"]).is_err());
    }

    #[test]
    fn framing_from_decomposition() {
        let d3 = catalog::d3();
        let decomp = RouteDecomposition::from_ids(&d3, &[vec!["a", "d"], vec!["b", "e"], vec!["c", "f"]]).unwrap();
        let fr = decomposition_framing(&d3, &decomp);
        let ids = fr.to_ids(&d3);
        let (ins, outs) = &ids[&Vertex::Inner(1)];
        assert_eq!(ins, &["a", "b", "c"]);
        assert_eq!(outs, &["d", "e", "f"]);

        let d2 = catalog::d2();
        let decomp = RouteDecomposition::from_ids(&d2, &[vec!["a", "c", "e"], vec!["b", "d", "f"]]).unwrap();
        let ids = decomposition_framing(&d2, &decomp).to_ids(&d2);
        assert_eq!(ids[&Vertex::Inner(1)], (vec!["a".into(), "b".into()], vec!["c".into(), "d".into()]));
        assert_eq!(ids[&Vertex::Inner(2)], (vec!["c".into(), "d".into()], vec!["e".into(), "f".into()]));

        // reversing the route order reverses every local order
        let rev = decomp.reordered(&d2, &[1, 0]).unwrap();
        let ids = decomposition_framing(&d2, &rev).to_ids(&d2);
        assert_eq!(ids[&Vertex::Inner(1)].0, ["b", "a"]);
    }

    #[test]
    fn bad_framing_is_rejected() {
        let d1 = catalog::d1();
        let mut orders = BTreeMap::new();
        orders.insert(Vertex::Inner(1), (vec![0], vec![2, 3]));
        assert!(Framing::new(&d1, orders).is_err());
    }

    #[test]
    fn indicators_sum_to_all_ones() {
        let d1 = catalog::d1();
        let ac = Route::from_ids(&d1, &["a", "c"]).unwrap();
        assert_eq!(indicator_vector(&d1, &ac), vec![1, 0, 1, 0]);
        for dag in [catalog::d1(), catalog::d2(), catalog::d3(), catalog::spine()] {
            let decomp = route_decomposition(&dag).unwrap();
            let mut sum = vec![0; dag.edge_count()];
            for r in decomp.routes() {
                for (s, x) in sum.iter_mut().zip(r.indicator(&dag)) {
                    *s += x;
                }
            }
            assert!(sum.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn indicators_conserve_flow() {
        for (_, dag) in catalog::all() {
            for r in enumerate_routes(&dag) {
                let x = r.indicator(&dag);
                for v in dag.inner_vertices() {
                    let inflow: i64 = dag.in_edges(v).iter().map(|&e| x[e]).sum();
                    let outflow: i64 = dag.out_edges(v).iter().map(|&e| x[e]).sum();
                    assert_eq!(inflow, outflow);
                }
                let s_out: i64 = dag.out_edges(Vertex::Source).iter().map(|&e| x[e]).sum();
                assert_eq!(s_out, 1);
            }
        }
    }
}
