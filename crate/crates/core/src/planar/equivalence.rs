//! Checks that an embedded DAG and its dual poset carry the same polytope and
//! the same triangulations.

use std::collections::BTreeSet;

use serde::Serialize;

use super::duality::{flow_to_order, order_to_flow, truncated_dual};
use super::embedding::{planar_framing, topmost_decomposition, PlanarEmbedding};
use super::poset::{
    canonical_triangulation, equatorial_complex, rank_constant_filters, rw_equatorial_triangulation, PosetSpec,
};
use crate::dag::{Dag, Vertex};
use crate::dkk::max_cliques;
use crate::equatorial::{decomposition_indices, equatorial_flow_triangulation};
use crate::error::Result;
use crate::geometry::{count_lattice_points, ehrhart_hstar, verify_triangulation};
use crate::routes::{decomposition_framing, enumerate_routes};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub ok: bool,
    pub poset: PosetSpec,
    pub graded: bool,
    pub ranks: Vec<usize>,
    pub linear_extensions: u128,
    pub canonical_simplices: usize,
    pub rw_simplices: Option<usize>,
    pub checks: Vec<Check>,
}

impl EquivalenceReport {
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }
}

fn trim(h: &[i128]) -> Vec<i128> {
    let mut h = h.to_vec();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h
}

fn simplex_set(simplices: impl IntoIterator<Item = Vec<usize>>) -> BTreeSet<Vec<usize>> {
    simplices
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect()
}

/// Builds the dual poset and compares lattice counts, vertices, the canonical
/// triangulation against the planar DKK triangulation and, for graded duals,
/// the Reiner-Welker triangulation against the equatorial flow triangulation
/// of the topmost decomposition.
pub fn verify_equivalence(dag: &Dag, emb: &PlanarEmbedding) -> Result<EquivalenceReport> {
    let dual = truncated_dual(dag, emb)?;
    let poset = &dual.poset;
    let (graded, ranks) = poset.is_graded();
    let mut report = EquivalenceReport {
        ok: false,
        poset: poset.to_spec(),
        graded,
        ranks: ranks.clone(),
        linear_extensions: poset.linear_extension_count(),
        canonical_simplices: 0,
        rw_simplices: None,
        checks: Vec::new(),
    };
    let balanced = dag.degree_equality();
    report.check(
        "graded_iff_degree_equality",
        graded == balanced,
        format!("graded = {graded}, degree equality = {balanced}"),
    );

    let flow_counts: Vec<u128> = (1..=4).map(|t| count_lattice_points(dag, t, false)).collect();
    let order_counts: Vec<u128> = (1..=4).map(|t| poset.count_order_points(t, false)).collect();
    report.check(
        "lattice_counts",
        flow_counts == order_counts,
        format!("flow {flow_counts:?}, order {order_counts:?}"),
    );

    // filter -> route index through the flow of its characteristic vector
    let routes = enumerate_routes(dag);
    let indicators: Vec<Vec<i64>> = routes.iter().map(|r| r.indicator(dag)).collect();
    let filters = poset.filters();
    let mut route_of = Vec::with_capacity(filters.len());
    let mut vertex_failures = Vec::new();
    for f in &filters {
        let chi = poset.characteristic(f);
        let flow = order_to_flow(&dual, &chi);
        match indicators.iter().position(|r| *r == flow) {
            Some(i) => route_of.push(i),
            None => vertex_failures.push(format!("filter {f:?} maps to non-route flow {flow:?}")),
        }
        match flow_to_order(&dual, &flow) {
            Ok(back) if back == chi => {}
            Ok(back) => vertex_failures.push(format!("filter {f:?} returns as {back:?}")),
            Err(e) => vertex_failures.push(format!("filter {f:?}: {e}")),
        }
    }
    let bijective = vertex_failures.is_empty()
        && route_of.iter().collect::<BTreeSet<_>>().len() == routes.len()
        && filters.len() == routes.len();
    report.check(
        "vertex_bijection",
        bijective,
        if vertex_failures.is_empty() {
            format!("{} filters, {} routes", filters.len(), routes.len())
        } else {
            vertex_failures.join("; ")
        },
    );
    if !bijective {
        report.ok = false;
        return Ok(report);
    }
    let to_routes = |s: &Vec<usize>| s.iter().map(|&i| route_of[i]).collect::<Vec<usize>>();

    let canonical = canonical_triangulation(poset);
    report.canonical_simplices = canonical.simplices().len();
    let planar = planar_framing(dag, emb)?;
    let dkk = max_cliques(dag, &planar)?;
    let image = simplex_set(canonical.simplices().iter().map(to_routes));
    report.check(
        "canonical_vs_planar_dkk",
        image == simplex_set(dkk.clone()),
        format!("{} canonical simplices, {} DKK simplices", canonical.simplices().len(), dkk.len()),
    );
    report.check(
        "linear_extensions_vs_cliques",
        report.linear_extensions == dkk.len() as u128,
        format!("{} linear extensions, {} cliques", report.linear_extensions, dkk.len()),
    );

    if graded && balanced {
        let top = topmost_decomposition(dag, emb)?;
        let top_framing = decomposition_framing(dag, &top);
        report.check(
            "topmost_framing_is_planar",
            top_framing == planar,
            format!("topmost decomposition {:?}", top.to_ids(dag)),
        );

        let rw = rw_equatorial_triangulation(poset)?;
        report.rw_simplices = Some(rw.simplices().len());
        let eq = equatorial_flow_triangulation(dag, &top)?;
        let image = simplex_set(rw.simplices().iter().map(to_routes));
        report.check(
            "rw_vs_equatorial",
            image == simplex_set(eq.simplices().to_vec()),
            format!("{} RW simplices, {} equatorial simplices", rw.simplices().len(), eq.simplices().len()),
        );

        let rc: Vec<usize> = rank_constant_filters(&ranks)
            .iter()
            .map(|f| route_of[filters.binary_search(f).expect("rank-constant sets are filters")])
            .collect();
        let special: BTreeSet<usize> = decomposition_indices(dag, &top).into_iter().collect();
        report.check(
            "rank_constant_to_route_simplex",
            rc.iter().copied().collect::<BTreeSet<_>>() == special,
            format!("{} rank-constant filters", rc.len()),
        );

        let hstar = poset.order_hstar()?;
        let tri = verify_triangulation(&rw, hstar.volume())?;
        let detail = if tri.ok { format!("volume {}", tri.volume) } else { tri.failures.join("; ") };
        report.check("rw_triangulation_valid", tri.ok, detail);

        let h_eq: Vec<i128> = equatorial_complex(poset)?.h_vector().into_iter().map(i128::from).collect();
        report.check(
            "equatorial_h_vector",
            trim(&h_eq) == trim(&hstar.h_star),
            format!("h = {:?}, h* = {:?}", trim(&h_eq), trim(&hstar.h_star)),
        );

        let r = ranks.iter().copied().max().unwrap_or(0);
        let flow_codegree = ehrhart_hstar(dag)?.codegree;
        report.check(
            "codegree",
            hstar.codegree == r + 1 && r + 1 == dag.outdeg(Vertex::Source) && flow_codegree == hstar.codegree,
            format!(
                "order {}, flow {flow_codegree}, r + 1 = {}, outdeg(s) = {}",
                hstar.codegree,
                r + 1,
                dag.outdeg(Vertex::Source)
            ),
        );
    }
    report.ok = report.checks.iter().all(|c| c.ok);
    Ok(report)
}
