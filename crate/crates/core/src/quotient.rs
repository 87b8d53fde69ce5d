//! The projection `φ` that collapses the route simplex, and the reflexive
//! polytope `Q` it maps the flow polytope onto.
//!
//! Coordinates are indexed by pairs `(inner vertex i, route label l)` with `l`
//! a label of an edge entering `i`. Labels are 0-based route indices
//! internally and printed 1-based.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dag::{Dag, Vertex};
use crate::equatorial::{enumerate_transversals, equatorial_facets, is_facet_transversal, Transversal};
use crate::error::{Error, Result};
use crate::geometry::{hstar_data, HStarData};
use crate::linalg::{matrix, rank};
use crate::routes::{enumerate_routes, Route, RouteDecomposition};

/// Route index of every edge.
pub fn edge_labels(dag: &Dag, decomp: &RouteDecomposition) -> Vec<usize> {
    (0..dag.edge_count()).map(|e| decomp.label(e)).collect()
}

/// Coordinate blocks `V^i`, one per inner vertex, each indexed by the sorted
/// labels of the edges entering `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeveledSpace {
    pub blocks: Vec<(Vertex, Vec<usize>)>,
    #[serde(skip)]
    index: BTreeMap<(Vertex, usize), usize>,
}

impl LeveledSpace {
    pub fn new(dag: &Dag, decomp: &RouteDecomposition) -> Self {
        let mut blocks = Vec::new();
        let mut index = BTreeMap::new();
        for v in dag.inner_vertices() {
            let mut labels: Vec<usize> = dag.in_edges(v).iter().map(|&e| decomp.label(e)).collect();
            labels.sort_unstable();
            labels.dedup();
            for &l in &labels {
                let k = index.len();
                index.insert((v, l), k);
            }
            blocks.push((v, labels));
        }
        LeveledSpace { blocks, index }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Position of coordinate `(v, label)`.
    pub fn coordinate(&self, v: Vertex, label: usize) -> Option<usize> {
        self.index.get(&(v, label)).copied()
    }

    /// Names like `1:2` (vertex 1, route 2).
    pub fn coordinate_names(&self) -> Vec<String> {
        self.blocks.iter().flat_map(|(v, ls)| ls.iter().map(move |l| format!("{v}:{}", l + 1))).collect()
    }

    /// Coordinate ranges of the blocks, in order.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|(_, ls)| {
                let r = start..start + ls.len();
                start = r.end;
                r
            })
            .collect()
    }

    /// Whether every block of `x` sums to zero.
    pub fn in_subspace(&self, x: &[i64]) -> bool {
        self.block_ranges().into_iter().all(|r| x[r].iter().sum::<i64>() == 0)
    }
}

/// `φ` of a flow vector: every edge `e` with label `l` contributes
/// `x_e (e^{head}_l - e^{tail}_l)`, ignoring `s` and `t`.
pub fn phi(dag: &Dag, space: &LeveledSpace, decomp: &RouteDecomposition, x: &[i64]) -> Vec<i64> {
    let mut out = vec![0; space.dim()];
    for (e, &xe) in x.iter().enumerate() {
        if xe == 0 {
            continue;
        }
        let edge = dag.edge(e);
        let l = decomp.label(e);
        if edge.head.is_inner() {
            out[space.coordinate(edge.head, l).expect("head block has the edge's label")] += xe;
        }
        if edge.tail.is_inner() {
            out[space.coordinate(edge.tail, l).expect("tail block has the edge's label")] -= xe;
        }
    }
    out
}

pub fn phi_route(dag: &Dag, space: &LeveledSpace, decomp: &RouteDecomposition, route: &Route) -> Vec<i64> {
    phi(dag, space, decomp, &route.indicator(dag))
}

/// Coefficient 1 on `(head(e), l)` for every edge `e` of decomposition route
/// `l` strictly before the transversal edge on that route.
pub fn transversal_functional(
    dag: &Dag,
    space: &LeveledSpace,
    decomp: &RouteDecomposition,
    m: &Transversal,
) -> Vec<i64> {
    let mut out = vec![0; space.dim()];
    for (l, r) in decomp.routes().iter().enumerate() {
        let cut = r.edges().iter().position(|&e| e == m.edge_on(l)).expect("transversal edge lies on its route");
        for &e in &r.edges()[..cut] {
            out[space.coordinate(dag.edge(e).head, l).expect("left part ends at inner vertices")] = 1;
        }
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Functional evaluated at `φ(S)`.
    pub lhs: i64,
    /// `1 - |E(S) ∩ M|`.
    pub rhs: i64,
}

/// Evaluates the transversal functional of `m` at `φ(s)` and compares it with
/// `1 - |E(s) ∩ m|`.
pub fn check_transversal_identity(dag: &Dag, decomp: &RouteDecomposition, s: &Route, m: &Transversal) -> IdentityCheck {
    let space = LeveledSpace::new(dag, decomp);
    let lhs = dot(&transversal_functional(dag, &space, decomp, m), &phi_route(dag, &space, decomp, s));
    let rhs = 1 - s.edges().iter().filter(|&&e| m.contains(e)).count() as i64;
    IdentityCheck { holds: lhs == rhs, lhs, rhs }
}

/// Result of checking the identity over every (route, transversal) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySweep {
    pub pairs: u64,
    pub failures: Vec<(String, Vec<String>)>,
}

pub fn transversal_identity_sweep(dag: &Dag, decomp: &RouteDecomposition) -> IdentitySweep {
    let space = LeveledSpace::new(dag, decomp);
    let routes = enumerate_routes(dag);
    let images: Vec<Vec<i64>> = routes.iter().map(|r| phi_route(dag, &space, decomp, r)).collect();
    let mut pairs = 0;
    let mut failures = Vec::new();
    for m in enumerate_transversals(decomp) {
        let f = transversal_functional(dag, &space, decomp, &m);
        for (r, img) in routes.iter().zip(&images) {
            pairs += 1;
            let rhs = 1 - r.edges().iter().filter(|&&e| m.contains(e)).count() as i64;
            if dot(&f, img) != rhs {
                failures.push((r.label(dag), m.ids(dag)));
            }
        }
    }
    IdentitySweep { pairs, failures }
}

/// A facet `coeffs · x <= rhs` of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
    /// Facet transversals whose functional cuts out this facet.
    #[serde(skip)]
    pub transversals: Vec<Transversal>,
    /// Distinct functionals among those transversals; they agree on the
    /// subspace but may differ by multiples of the block sums.
    pub functionals: usize,
    /// Indices into `vertices` of the vertices on this facet.
    pub incident: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientPolytope {
    pub space: LeveledSpace,
    /// `(route label, φ(route))` for every route outside the decomposition.
    pub vertices: Vec<(String, Vec<i64>)>,
    pub facets: Vec<Facet>,
    /// Dimension `sum_v (indeg(v) - 1)`.
    pub dimension: usize,
}

impl QuotientPolytope {
    /// The polytope dilated by `k`, with facets `coeffs · x <= k`.
    pub fn scaled(&self, k: i64) -> QuotientPolytope {
        let mut q = self.clone();
        for (_, x) in &mut q.vertices {
            x.iter_mut().for_each(|c| *c *= k);
        }
        for f in &mut q.facets {
            f.rhs *= k;
        }
        q
    }

    /// Lattice points of the `t`-th dilate in the subspace lattice, strictly
    /// inside every facet when `interior`.
    pub fn count_lattice_points(&self, t: i64, interior: bool) -> u128 {
        let mut n = 0u128;
        self.for_each_box_point(t, &mut |x| {
            if self.facets.iter().all(|f| {
                let v = dot(&f.coeffs, x);
                if interior {
                    v < t * f.rhs
                } else {
                    v <= t * f.rhs
                }
            }) {
                n += 1;
            }
        });
        n
    }

    /// Calls `f` on every point of the subspace lattice inside `t` times the
    /// vertex bounding box.
    fn for_each_box_point(&self, t: i64, f: &mut dyn FnMut(&[i64])) {
        let dim = self.space.dim();
        let mut lo = vec![0i64; dim];
        let mut hi = vec![0i64; dim];
        for (_, x) in &self.vertices {
            for k in 0..dim {
                lo[k] = lo[k].min(t * x[k]);
                hi[k] = hi[k].max(t * x[k]);
            }
        }
        let ranges = self.space.block_ranges();
        let mut x = vec![0i64; dim];
        fill(&ranges, 0, 0, &lo, &hi, &mut x, f);
    }

    /// Ehrhart data of `Q` in the subspace lattice.
    pub fn ehrhart_hstar(&self) -> Result<HStarData> {
        hstar_data(self.dimension, |t, interior| self.count_lattice_points(t as i64, interior))
    }
}

/// Enumerates block by block: free coordinates range over the box, the last
/// coordinate of each block is minus the sum of the others.
fn fill(
    ranges: &[std::ops::Range<usize>],
    block: usize,
    k: usize,
    lo: &[i64],
    hi: &[i64],
    x: &mut Vec<i64>,
    f: &mut dyn FnMut(&[i64]),
) {
    let Some(r) = ranges.get(block) else {
        f(x);
        return;
    };
    if r.is_empty() {
        return fill(ranges, block + 1, 0, lo, hi, x, f);
    }
    let c = r.start + k;
    if c + 1 == r.end {
        let last = -x[r.start..c].iter().sum::<i64>();
        if lo[c] <= last && last <= hi[c] {
            x[c] = last;
            fill(ranges, block + 1, 0, lo, hi, x, f);
        }
        return;
    }
    for v in lo[c]..=hi[c] {
        x[c] = v;
        fill(ranges, block, k + 1, lo, hi, x, f);
    }
}

/// Vertices of `Q`: `φ(R)` for each route `R` outside the decomposition.
pub fn quotient_vertices(dag: &Dag, decomp: &RouteDecomposition) -> Result<QuotientPolytope> {
    if !dag.degree_equality() {
        return Err(Error::NotGorenstein("degree equality fails".into()));
    }
    let space = LeveledSpace::new(dag, decomp);
    let vertices: Vec<(String, Vec<i64>)> = enumerate_routes(dag)
        .iter()
        .filter(|r| !decomp.routes().contains(r))
        .map(|r| (r.label(dag), phi_route(dag, &space, decomp, r)))
        .collect();
    let dimension = dag.inner_vertices().map(|v| dag.indeg(v) - 1).sum();
    Ok(QuotientPolytope { space, vertices, facets: Vec::new(), dimension })
}

type FacetGroup = (Vec<Vec<i64>>, Vec<Transversal>);

/// Vertices and facets of `Q`. Facet transversals are grouped by the set of
/// vertices where their functional attains 1. The affine rank of the vertices
/// must equal `sum_v (indeg(v) - 1)`.
pub fn quotient_facets(dag: &Dag, decomp: &RouteDecomposition) -> Result<QuotientPolytope> {
    let mut q = quotient_vertices(dag, decomp)?;
    let points: Vec<Vec<i64>> = q.vertices.iter().map(|(_, x)| x.clone()).collect();
    let r = if points.is_empty() { 0 } else { rank(&matrix(&points))? };
    if r != q.dimension {
        return Err(Error::RankMismatch(format!("vertices span dimension {r}, expected {}", q.dimension)));
    }
    // incidence set -> (functional, transversals inducing it)
    let mut groups: BTreeMap<Vec<usize>, FacetGroup> = BTreeMap::new();
    for m in enumerate_transversals(decomp) {
        if !is_facet_transversal(dag, &m) {
            continue;
        }
        let f = transversal_functional(dag, &q.space, decomp, &m);
        let incident: Vec<usize> = points.iter().enumerate().filter(|(_, x)| dot(&f, x) == 1).map(|(i, _)| i).collect();
        if incident.is_empty() {
            continue;
        }
        let entry = groups.entry(incident).or_default();
        if !entry.0.contains(&f) {
            entry.0.push(f);
        }
        entry.1.push(m);
    }
    q.facets = groups
        .into_iter()
        .map(|(incident, (functionals, transversals))| Facet {
            coeffs: functionals[0].clone(),
            rhs: 1,
            functionals: functionals.len(),
            transversals,
            incident,
        })
        .collect();
    debug_assert_eq!(q.facets.len(), equatorial_facets(dag, decomp).len());
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexiveReport {
    pub ok: bool,
    pub interior_points: Vec<Vec<i64>>,
    pub failures: Vec<String>,
}

/// Checks that every facet reads `coeffs · x <= 1` with integral
/// coefficients, every vertex satisfies all facets, the origin is the only
/// lattice point strictly inside, and every vertex lies on at least
/// `dimension` facets.
pub fn verify_reflexive(q: &QuotientPolytope) -> ReflexiveReport {
    let mut failures = Vec::new();
    for (k, f) in q.facets.iter().enumerate() {
        if f.rhs != 1 {
            failures.push(format!("facet {k} has right-hand side {}", f.rhs));
        }
        for (name, x) in &q.vertices {
            if dot(&f.coeffs, x) > f.rhs {
                failures.push(format!("vertex {name} violates facet {k}"));
            }
        }
    }
    for (name, x) in &q.vertices {
        if !q.space.in_subspace(x) {
            failures.push(format!("vertex {name} leaves the block-sum subspace"));
        }
        let on = q.facets.iter().filter(|f| dot(&f.coeffs, x) == f.rhs).count();
        if on < q.dimension {
            failures.push(format!("vertex {name} lies on {on} facets, fewer than {}", q.dimension));
        }
    }
    let mut interior_points = Vec::new();
    q.for_each_box_point(1, &mut |x| {
        if q.facets.iter().all(|f| dot(&f.coeffs, x) < f.rhs) {
            interior_points.push(x.to_vec());
        }
    });
    let origin = vec![0i64; q.space.dim()];
    if interior_points != [origin] {
        failures.push(format!("interior lattice points are {interior_points:?}, expected only the origin"));
    }
    ReflexiveReport { ok: failures.is_empty(), interior_points, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::routes::route_decomposition;

    fn setup(dag: &Dag) -> (LeveledSpace, RouteDecomposition) {
        let dec = route_decomposition(dag).unwrap();
        (LeveledSpace::new(dag, &dec), dec)
    }

    #[test]
    fn labels() {
        let d3 = catalog::d3();
        let dec = route_decomposition(&d3).unwrap();
        assert_eq!(edge_labels(&d3, &dec), vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn phi_examples() {
        let d1 = catalog::d1();
        let (space, dec) = setup(&d1);
        for r in dec.routes() {
            assert_eq!(phi_route(&d1, &space, &dec, r), vec![0, 0]);
        }
        let ad = Route::from_ids(&d1, &["a", "d"]).unwrap();
        assert_eq!(phi_route(&d1, &space, &dec, &ad), vec![1, -1]);
    }

    #[test]
    fn spine_route_image() {
        let g = catalog::spine();
        let (space, dec) = setup(&g);
        assert_eq!(space.coordinate_names(), ["1:2", "1:3", "2:1", "2:2"]);
        let s = Route::from_ids(&g, &["x3", "y2", "w1"]).unwrap();
        // e^1_3 - e^1_2 + e^2_2 - e^2_1
        assert_eq!(phi_route(&g, &space, &dec, &s), vec![-1, 1, -1, 1]);
    }

    #[test]
    fn functionals() {
        let d1 = catalog::d1();
        let (space, dec) = setup(&d1);
        let ad = Transversal::from_ids(&d1, &dec, &["a", "d"]).unwrap();
        assert_eq!(transversal_functional(&d1, &space, &dec, &ad), vec![0, 1]);
        let bc = Transversal::from_ids(&d1, &dec, &["b", "c"]).unwrap();
        assert_eq!(transversal_functional(&d1, &space, &dec, &bc), vec![1, 0]);
        let s = Route::from_ids(&d1, &["b", "c"]).unwrap();
        let check = check_transversal_identity(&d1, &dec, &s, &ad);
        assert_eq!((check.lhs, check.rhs), (1, 1));
    }

    #[test]
    fn sweeps_hold() {
        for (_, dag) in catalog::all() {
            let dec = route_decomposition(&dag).unwrap();
            assert!(transversal_identity_sweep(&dag, &dec).failures.is_empty());
        }
    }

    #[test]
    fn segment_and_hexagons() {
        let d1 = catalog::d1();
        let q = quotient_facets(&d1, &route_decomposition(&d1).unwrap()).unwrap();
        let mut verts: Vec<Vec<i64>> = q.vertices.iter().map(|(_, x)| x.clone()).collect();
        verts.sort();
        assert_eq!(verts, vec![vec![-1, 1], vec![1, -1]]);
        assert_eq!(q.facets.len(), 2);
        assert!(verify_reflexive(&q).ok);
        let doubled = verify_reflexive(&q.scaled(2));
        assert!(!doubled.ok);
        assert_eq!(doubled.interior_points.len(), 3);

        for dag in [catalog::d2(), catalog::d3()] {
            let q = quotient_facets(&dag, &route_decomposition(&dag).unwrap()).unwrap();
            assert_eq!((q.vertices.len(), q.facets.len(), q.dimension), (6, 6, 2));
            let report = verify_reflexive(&q);
            assert!(report.ok, "{:?}", report.failures);
        }
    }

    #[test]
    fn point_quotient() {
        let g3 = catalog::parallel(3);
        let q = quotient_facets(&g3, &route_decomposition(&g3).unwrap()).unwrap();
        assert!(q.vertices.is_empty());
        assert_eq!(q.dimension, 0);
        assert!(verify_reflexive(&q).ok);
    }

    #[test]
    fn quotient_hstar_matches_flow_polytope() {
        for (name, dag) in catalog::all() {
            let q = quotient_facets(&dag, &route_decomposition(&dag).unwrap()).unwrap();
            let hq = q.ehrhart_hstar().unwrap().h_star;
            let hf = crate::geometry::ehrhart_hstar(&dag).unwrap().h_star;
            let trim = |h: &[i128]| h[..=h.iter().rposition(|&x| x != 0).unwrap()].to_vec();
            assert_eq!(trim(&hq), trim(&hf), "{name}");
        }
    }
}
