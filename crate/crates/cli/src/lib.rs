//! Report-producing commands behind the `flowtri` binary.
//!
//! Every command reads one graph file and returns a [`Report`] plus an exit
//! code: 0 when every check passes, 1 when a check fails or the input lacks a
//! required property, 2 when the input cannot be parsed or validated. Reports
//! contain no wall-clock data unless timings are requested, so identical
//! input produces identical output.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use flowtri::dkk::{dkk_triangulation, max_cliques};
use flowtri::equatorial::{
    differs_from_dkk, equatorial_facets, equatorial_flow_triangulation, is_facet_transversal, t_eq,
    DEFAULT_FRAMING_BOUND,
};
use flowtri::geometry::{
    count_lattice_points, ehrhart_hstar, is_gorenstein, is_unimodular_simplex, verify_triangulation,
    TriangulationReport,
};
use flowtri::io::{parse_decomposition, parse_graph, GraphInput};
use flowtri::planar::{planar_framing, topmost_decomposition, verify_equivalence};
use flowtri::quotient::{quotient_facets, transversal_identity_sweep, verify_reflexive};
use flowtri::random::{has_route_partition, random_balanced_dag, random_dag, rng};
use flowtri::routes::{decomposition_framing, enumerate_routes, route_decomposition};
use flowtri::{Dag, Error, Framing, RouteDecomposition, Vertex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<CheckResult>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (sha256 {})\n", self.command, self.input_digest);
        out += &format!("status: {}\n", if self.ok { "ok" } else { "FAILED" });
        if let Some(err) = &self.error {
            out += &format!("error: {err}\n");
        }
        for c in &self.checks {
            out += &format!("  [{}] {}: {}\n", if c.ok { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        if let Value::Object(map) = &self.data {
            for (k, v) in map {
                out += &format!("{k}: {}\n", serde_json::to_string(v).expect("values serialize"));
            }
        }
        if let Some(t) = &self.timings_ms {
            for (k, ms) in t {
                out += &format!("time {k}: {ms:.3} ms\n");
            }
        }
        out
    }
}

/// A command run: its report and process exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Contents of a decomposition file.
    pub decomposition: Option<String>,
    pub exhaustive_dkk: bool,
    pub max_dilate: Option<u64>,
    pub timings: bool,
}

/// Checks and data accumulated by a command body.
struct Body {
    checks: Vec<CheckResult>,
    data: serde_json::Map<String, Value>,
    timings: BTreeMap<String, f64>,
}

impl Body {
    fn new() -> Self {
        Body { checks: Vec::new(), data: serde_json::Map::new(), timings: BTreeMap::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), ok, detail: detail.into() });
    }

    fn put(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(value).expect("values serialize"));
    }

    fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(name.into(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

pub fn digest(input: &str) -> String {
    hex::encode(Sha256::digest(input.as_bytes()))
}

/// Errors caused by the input itself rather than by a property it lacks.
pub fn is_input_error(err: &Error) -> bool {
    matches!(
        err,
        Error::Parse(_)
            | Error::InvalidDag(_)
            | Error::VertexOutOfRange(_)
            | Error::UnknownEdge(_)
            | Error::InvalidRoute(_)
            | Error::InvalidDecomposition(_)
            | Error::InvalidFraming(_)
            | Error::NonPlanar(_)
            | Error::InvalidPoset(_)
            | Error::TrivialGraph(_)
    )
}

fn finish(command: &str, input: &str, opts: &Options, result: Result<Body, Error>) -> Outcome {
    let input_digest = digest(input);
    match result {
        Ok(body) => {
            let ok = body.checks.iter().all(|c| c.ok);
            Outcome {
                report: Report {
                    command: command.into(),
                    input_digest,
                    ok,
                    error: None,
                    checks: body.checks,
                    data: Value::Object(body.data),
                    timings_ms: opts.timings.then_some(body.timings),
                },
                exit_code: if ok { EXIT_OK } else { EXIT_FAILED },
            }
        }
        Err(err) => Outcome {
            report: Report {
                command: command.into(),
                input_digest,
                ok: false,
                error: Some(err.to_string()),
                checks: Vec::new(),
                data: json!({}),
                timings_ms: None,
            },
            exit_code: if is_input_error(&err) { EXIT_INVALID } else { EXIT_FAILED },
        },
    }
}

fn triangulation_detail(rep: &TriangulationReport) -> String {
    if rep.ok {
        format!("{} unimodular simplices, volume {}", rep.simplices, rep.volume)
    } else {
        rep.failures.join("; ")
    }
}

fn trim(h: &[i128]) -> Vec<i128> {
    let mut h = h.to_vec();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h
}

fn trim_i64(h: &[i64]) -> Vec<i128> {
    trim(&h.iter().map(|&x| i128::from(x)).collect::<Vec<_>>())
}

/// The graph with idle edges contracted, noting whether anything changed.
fn contracted(dag: &Dag, body: &mut Body) -> Result<Dag, Error> {
    if dag.idle_edges().is_empty() {
        return Ok(dag.clone());
    }
    let c = dag.contract_idle_edges()?;
    body.put("contracted_edges", c.merges.iter().map(|m| m.edge.clone()).collect::<Vec<_>>());
    Ok(c.dag)
}

fn require_balanced(dag: &Dag) -> Result<(), Error> {
    if dag.degree_equality() {
        Ok(())
    } else {
        let bad: Vec<String> = dag
            .inner_vertices()
            .filter(|&v| dag.indeg(v) != dag.outdeg(v))
            .map(|v| format!("{v} (in {}, out {})", dag.indeg(v), dag.outdeg(v)))
            .collect();
        Err(Error::NotGorenstein(format!("degree equality fails at {}", bad.join(", "))))
    }
}

fn decomposition(dag: &Dag, opts: &Options) -> Result<RouteDecomposition, Error> {
    require_balanced(dag)?;
    match &opts.decomposition {
        Some(text) => parse_decomposition(dag, text),
        None => route_decomposition(dag),
    }
}

/// Validation, contraction, degree equality, dimension, route count and
/// Ehrhart data.
pub fn cmd_analyze(input: &str, opts: &Options) -> Outcome {
    let result = (|| {
        let mut body = Body::new();
        let GraphInput { dag, .. } = parse_graph(input)?;
        body.put("inner_count", dag.inner_count());
        body.put("edge_count", dag.edge_count());
        body.put("idle_edges", dag.idle_edges().iter().map(|&e| dag.edge(e).id.clone()).collect::<Vec<_>>());
        let g = contracted(&dag, &mut body)?;
        body.put("degree_equality", g.degree_equality());
        body.put("dimension", g.dimension());
        body.put("route_count", enumerate_routes(&g).len());
        let h = body.timed("ehrhart", || ehrhart_hstar(&g))?;
        body.put("L", &h.counts);
        body.put("h_star", trim(&h.h_star));
        body.put("degree", h.degree);
        body.put("codegree", h.codegree);
        body.put("normalized_volume", h.volume());
        body.put("gorenstein", is_gorenstein(&g)?);
        if let Some(t) = opts.max_dilate {
            let counts: Vec<u128> = (0..=t).map(|k| count_lattice_points(&g, k, false)).collect();
            body.put("lattice_counts", counts);
        }
        body.check("hstar_nonnegative", h.h_star.iter().all(|&x| x >= 0), format!("{:?}", trim(&h.h_star)));
        if g.degree_equality() {
            let out = g.outdeg(Vertex::Source);
            body.check("codegree_is_outdeg_s", h.codegree == out, format!("codegree {}, outdeg(s) {out}", h.codegree));
            body.check("palindromic_hstar", h.is_palindromic(), format!("degree {}", h.degree));
        }
        Ok(body)
    })();
    finish("analyze", input, opts, result)
}

/// A route decomposition (computed or read from file) and the route simplex.
pub fn cmd_decompose(input: &str, opts: &Options) -> Outcome {
    let result = (|| {
        let mut body = Body::new();
        let GraphInput { dag, embedding, .. } = parse_graph(input)?;
        let g = contracted(&dag, &mut body)?;
        let dec = decomposition(&g, opts)?;
        body.put("source", if opts.decomposition.is_some() { "file" } else { "lexicographic" });
        body.put("routes", dec.to_ids(&g));
        if let (Some(emb), true) = (embedding, dag.idle_edges().is_empty()) {
            body.put("topmost", topmost_decomposition(&g, &emb)?.to_ids(&g));
        }
        let points: Vec<Vec<i64>> = dec.routes().iter().map(|r| r.indicator(&g)).collect();
        let refs: Vec<&[i64]> = points.iter().map(Vec::as_slice).collect();
        body.check("unimodular_route_simplex", is_unimodular_simplex(&refs)?, format!("{} routes", dec.len()));
        let out = g.outdeg(Vertex::Source);
        body.check("route_count_is_outdeg_s", dec.len() == out, format!("{} routes, outdeg(s) {out}", dec.len()));
        let h = body.timed("ehrhart", || ehrhart_hstar(&g))?;
        body.check("codegree_is_route_count", h.codegree == dec.len(), format!("codegree {}", h.codegree));
        Ok(body)
    })();
    finish("decompose", input, opts, result)
}

/// DKK triangulation for the framing in the file, else the planar framing of
/// the embedding, else the decomposition framing.
pub fn cmd_dkk(input: &str, opts: &Options) -> Outcome {
    let result = (|| {
        let mut body = Body::new();
        let GraphInput { dag, framing, embedding } = parse_graph(input)?;
        let (g, framing, source): (Dag, Framing, &str) = match (framing, embedding) {
            (Some(f), _) => (dag, f, "file"),
            (None, Some(emb)) => {
                let f = planar_framing(&dag, &emb)?;
                (dag, f, "planar")
            }
            (None, None) => {
                let g = contracted(&dag, &mut body)?;
                let dec = decomposition(&g, opts)?;
                let f = decomposition_framing(&g, &dec);
                (g, f, "decomposition")
            }
        };
        body.put("framing_source", source);
        let framing_ids: BTreeMap<String, Value> =
            framing.to_ids(&g).into_iter().map(|(v, (i, o))| (v.to_string(), json!({"in": i, "out": o}))).collect();
        body.put("framing", framing_ids);
        let tri = body.timed("dkk", || dkk_triangulation(&g, &framing))?;
        body.put("routes", tri.complex.labels.clone());
        body.put("simplices", tri.complex.labelled_facets());
        let h = trim_i64(&tri.h_vector());
        body.put("h_vector", &h);
        let hstar = body.timed("ehrhart", || ehrhart_hstar(&g))?;
        body.check("h_equals_hstar", h == trim(&hstar.h_star), format!("h {h:?}, h* {:?}", trim(&hstar.h_star)));
        let rep = body.timed("verify", || verify_triangulation(&tri, hstar.volume()))?;
        body.check("triangulation_valid", rep.ok, triangulation_detail(&rep));
        Ok(body)
    })();
    finish("dkk", input, opts, result)
}

/// Equatorial flow triangulation of a decomposition and its checks.
pub fn cmd_equatorial(input: &str, opts: &Options) -> Outcome {
    let result = (|| {
        let mut body = Body::new();
        let GraphInput { dag, .. } = parse_graph(input)?;
        let g = contracted(&dag, &mut body)?;
        let dec = decomposition(&g, opts)?;
        body.put("decomposition", dec.to_ids(&g));
        let facets = equatorial_facets(&g, &dec);
        let transversals: Vec<Vec<Vec<String>>> =
            facets.iter().map(|f| f.transversals.iter().map(|m| m.ids(&g)).collect()).collect();
        body.check(
            "facet_transversals",
            facets.iter().all(|f| f.transversals.iter().all(|m| is_facet_transversal(&g, m))),
            format!("{} facets", facets.len()),
        );
        body.put("facet_transversals", transversals);
        let sphere = t_eq(&g, &dec)?;
        body.put("t_eq_maximal_faces", sphere.labelled_facets());
        let tri = body.timed("equatorial", || equatorial_flow_triangulation(&g, &dec))?;
        body.put("triangulation", tri.complex.labelled_facets());
        let h = trim_i64(&tri.h_vector());
        body.put("h_vector", &h);
        let hstar = body.timed("ehrhart", || ehrhart_hstar(&g))?;
        body.put("h_star", trim(&hstar.h_star));
        body.check("h_equals_hstar", h == trim(&hstar.h_star), format!("h {h:?}, h* {:?}", trim(&hstar.h_star)));
        if sphere.rank() > 0 {
            body.check(
                "sphere_pseudomanifold",
                sphere.is_pure() && sphere.is_pseudomanifold(),
                format!("dimension {}, Euler characteristic {}", sphere.dimension(), sphere.euler_characteristic()),
            );
        }
        let rep = body.timed("verify", || verify_triangulation(&tri, hstar.volume()))?;
        body.check("triangulation_valid", rep.ok, triangulation_detail(&rep));
        let cmp =
            body.timed("dkk_comparison", || differs_from_dkk(&g, &dec, opts.exhaustive_dkk, DEFAULT_FRAMING_BOUND))?;
        let verdict = match cmp.not_dkk {
            Some(true) => "not a DKK triangulation",
            Some(false) => "a DKK triangulation",
            None if cmp.equals_decomposition_framing => "equals the decomposition-framing DKK triangulation",
            None => "differs from the decomposition-framing DKK triangulation",
        };
        body.put("dkk_comparison", &cmp);
        body.put("dkk_verdict", verdict);
        Ok(body)
    })();
    finish("equatorial", input, opts, result)
}

/// Quotient polytope, its halfspace description and reflexivity.
pub fn cmd_quotient(input: &str, opts: &Options) -> Outcome {
    let result = (|| {
        let mut body = Body::new();
        let GraphInput { dag, .. } = parse_graph(input)?;
        let g = contracted(&dag, &mut body)?;
        let dec = decomposition(&g, opts)?;
        body.put("decomposition", dec.to_ids(&g));
        let q = body.timed("facets", || quotient_facets(&g, &dec))?;
        let names = q.space.coordinate_names();
        let blocks: BTreeMap<String, Vec<String>> = q
            .space
            .blocks
            .iter()
            .zip(q.space.block_ranges())
            .map(|((v, _), range)| (v.to_string(), names[range].to_vec()))
            .collect();
        body.put("blocks", &blocks);
        body.put("coordinates", &names);
        body.put("dimension", q.dimension);
        let vertices: BTreeMap<String, Vec<i64>> = q.vertices.iter().cloned().collect();
        body.put("vertices", vertices);
        let facets: Vec<Value> = q
            .facets
            .iter()
            .map(|f| {
                let coeffs: BTreeMap<&str, i64> =
                    names.iter().zip(&f.coeffs).filter(|(_, &c)| c != 0).map(|(n, &c)| (n.as_str(), c)).collect();
                let transversal: BTreeMap<String, String> =
                    f.transversals[0].to_map(&g).into_iter().map(|(route, id)| (route.to_string(), id)).collect();
                json!({"coeffs": coeffs, "rhs": f.rhs, "transversal": transversal, "vertices_on": f.incident.len()})
            })
            .collect();
        body.put("facets", facets);
        body.put("subspace", blocks.values().map(|b| format!("{} = 0", b.join(" + "))).collect::<Vec<_>>());
        let rep = body.timed("reflexive", || verify_reflexive(&q));
        body.check(
            "reflexive",
            rep.ok,
            if rep.ok { "origin is the only interior point".into() } else { rep.failures.join("; ") },
        );
        let sweep = body.timed("identity", || transversal_identity_sweep(&g, &dec));
        body.check(
            "transversal_identity",
            sweep.failures.is_empty(),
            format!("{} pairs, {} failures", sweep.pairs, sweep.failures.len()),
        );
        if q.dimension > 0 {
            let eq = equatorial_facets(&g, &dec).len();
            body.check(
                "facets_match_equatorial_facets",
                q.facets.len() == eq,
                format!("{} facets, {eq} equatorial facets of the flow polytope", q.facets.len()),
            );
        }
        Ok(body)
    })();
    finish("quotient", input, opts, result)
}

/// Dual poset and the flow/order equivalence checks; needs an embedding.
pub fn cmd_order(input: &str, opts: &Options) -> Outcome {
    let result = (|| {
        let mut body = Body::new();
        let GraphInput { dag, embedding, .. } = parse_graph(input)?;
        let emb = embedding.ok_or_else(|| Error::NonPlanar("the graph file has no embedding".into()))?;
        let rep = body.timed("equivalence", || verify_equivalence(&dag, &emb))?;
        body.put("poset", &rep.poset);
        body.put("graded", rep.graded);
        body.put("ranks", &rep.ranks);
        body.put("linear_extensions", rep.linear_extensions);
        body.put("canonical_simplices", rep.canonical_simplices);
        body.put("rw_simplices", rep.rw_simplices);
        for c in rep.checks {
            body.check(&c.name, c.ok, c.detail);
        }
        let cliques = max_cliques(&dag, &planar_framing(&dag, &emb)?)?;
        body.put("planar_dkk_simplices", cliques.len());
        Ok(body)
    })();
    finish("order", input, opts, result)
}

/// Random sweep: decomposition succeeds exactly when degree equality holds
/// (against a brute-force partition search), and on balanced graphs the DKK
/// and equatorial h-vectors equal h*.
pub fn cmd_fuzz(seed: u64, count: usize, opts: &Options) -> Outcome {
    let input = format!("fuzz seed={seed} count={count}");
    let mut body = Body::new();
    let mut rng = rng(seed);
    let mut failures = Vec::new();
    for i in 0..count {
        let g = random_dag(&mut rng, 3, 8);
        let decomposes = route_decomposition(&g).is_ok();
        let partition = has_route_partition(&g);
        if decomposes != g.degree_equality() || partition != decomposes {
            failures.push(format!(
                "graph {i}: decomposition {decomposes}, degree equality {}, partition {partition}",
                g.degree_equality()
            ));
        }
        let b = random_balanced_dag(&mut rng, 3, 9);
        match balanced_h_check(&b) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("balanced graph {i}: h vectors disagree")),
            Err(e) => failures.push(format!("balanced graph {i}: {e}")),
        }
    }
    body.put("graphs", 2 * count);
    body.check("random_sweep", failures.is_empty(), format!("{} failures", failures.len()));
    body.put("failures", failures);
    finish("fuzz", &input, opts, Ok(body))
}

/// `h(DKK) = h(equatorial) = h*` on a balanced graph without idle edges.
pub fn balanced_h_check(g: &Dag) -> Result<bool, Error> {
    let dec = route_decomposition(g)?;
    let hstar = trim(&ehrhart_hstar(g)?.h_star);
    let dkk = trim_i64(&dkk_triangulation(g, &decomposition_framing(g, &dec))?.h_vector());
    let eq = trim_i64(&equatorial_flow_triangulation(g, &dec)?.h_vector());
    Ok(dkk == hstar && eq == hstar)
}
