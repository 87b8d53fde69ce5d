//! Rotation systems of strongly planar DAGs drawn left to right.
//!
//! Rotations list edge ids: at `s` the out-edges bottom to top, at `t` the
//! in-edges top to bottom, and at an inner vertex every incident edge in
//! counterclockwise order, which must read as a block of out-edges (bottom to
//! top) followed by a block of in-edges (top to bottom), up to rotation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dag::{Dag, Vertex};
use crate::error::{Error, Result};
use crate::routes::{Framing, Route, RouteDecomposition};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarEmbedding {
    pub rotations: BTreeMap<Vertex, Vec<String>>,
}

impl PlanarEmbedding {
    pub fn from_rotations<I: IntoIterator<Item = (Vertex, Vec<String>)>>(rotations: I) -> Self {
        PlanarEmbedding { rotations: rotations.into_iter().collect() }
    }
}

/// Left-face tracing of an embedded DAG.
///
/// Dart `2e` runs along edge `e` from tail to head; dart `2e + 1` runs back.
/// The face on the left of a forward dart lies above its edge.
#[derive(Clone, Debug)]
pub struct Tracing {
    /// Counterclockwise rotation at each vertex position, as edge indices.
    pub rotation: Vec<Vec<usize>>,
    /// Out-edges of each vertex from top to bottom.
    pub out_top_down: Vec<Vec<usize>>,
    /// In-edges of each vertex from top to bottom.
    pub in_top_down: Vec<Vec<usize>>,
    pub face_of_dart: Vec<usize>,
    /// Boundary darts of each face in traversal order.
    pub face_darts: Vec<Vec<usize>>,
    pub outer: usize,
}

impl Tracing {
    pub fn face_count(&self) -> usize {
        self.face_darts.len()
    }

    /// Face above edge `e`.
    pub fn above(&self, e: usize) -> usize {
        self.face_of_dart[2 * e]
    }

    /// Face below edge `e`.
    pub fn below(&self, e: usize) -> usize {
        self.face_of_dart[2 * e + 1]
    }
}

fn lookup(dag: &Dag, v: Vertex, ids: &[String]) -> Result<Vec<usize>> {
    ids.iter()
        .map(|id| {
            dag.edge_index(id).map_err(|_| Error::NonPlanar(format!("rotation at {v} names unknown edge `{id}`")))
        })
        .collect()
}

/// Validates the rotations of `emb` against `dag` and traces its faces.
/// Fails unless `V - E + F = 2`.
pub fn trace_faces(dag: &Dag, emb: &PlanarEmbedding) -> Result<Tracing> {
    if let Some(v) = emb.rotations.keys().find(|&&v| dag.position_checked(v).is_none()) {
        return Err(Error::NonPlanar(format!("rotation given for unknown vertex {v}")));
    }
    let slots = dag.inner_count() + 2;
    let mut rotation = vec![Vec::new(); slots];
    let mut out_top_down = vec![Vec::new(); slots];
    let mut in_top_down = vec![Vec::new(); slots];
    for v in dag.vertices() {
        let pos = dag.position(v);
        let ids = emb.rotations.get(&v).ok_or_else(|| Error::NonPlanar(format!("no rotation at vertex {v}")))?;
        let rot = lookup(dag, v, ids)?;
        let mut expected: Vec<usize> = dag.in_edges(v).iter().chain(dag.out_edges(v)).copied().collect();
        let mut got = rot.clone();
        expected.sort_unstable();
        got.sort_unstable();
        if expected != got {
            return Err(Error::NonPlanar(format!("rotation at {v} does not list exactly its incident edges")));
        }
        let is_out = |e: usize| dag.edge(e).tail == v;
        // rotate so the out-block comes first
        let start = (0..rot.len())
            .find(|&i| is_out(rot[i]) && !is_out(rot[(i + rot.len() - 1) % rot.len()]))
            .unwrap_or_default();
        let rot: Vec<usize> = rot[start..].iter().chain(&rot[..start]).copied().collect();
        let outs = rot.iter().take_while(|&&e| is_out(e)).count();
        if rot[outs..].iter().any(|&e| is_out(e)) {
            return Err(Error::NonPlanar(format!("out-edges at {v} are not contiguous in its rotation")));
        }
        out_top_down[pos] = rot[..outs].iter().rev().copied().collect();
        in_top_down[pos] = rot[outs..].to_vec();
        rotation[pos] = rot;
    }

    // position of each edge in the rotation at its tail and head
    let mut at_tail = vec![0; dag.edge_count()];
    let mut at_head = vec![0; dag.edge_count()];
    for v in dag.vertices() {
        for (i, &e) in rotation[dag.position(v)].iter().enumerate() {
            if dag.edge(e).tail == v {
                at_tail[e] = i;
            } else {
                at_head[e] = i;
            }
        }
    }
    let darts = 2 * dag.edge_count();
    let mut face_of_dart = vec![usize::MAX; darts];
    let mut face_darts = Vec::new();
    for start in 0..darts {
        if face_of_dart[start] != usize::MAX {
            continue;
        }
        let face = face_darts.len();
        let mut walk = Vec::new();
        let mut d = start;
        while face_of_dart[d] == usize::MAX {
            face_of_dart[d] = face;
            walk.push(d);
            let e = d / 2;
            let (v, idx) = if d % 2 == 0 { (dag.edge(e).head, at_head[e]) } else { (dag.edge(e).tail, at_tail[e]) };
            let rot = &rotation[dag.position(v)];
            let next = rot[(idx + rot.len() - 1) % rot.len()];
            d = if dag.edge(next).tail == v { 2 * next } else { 2 * next + 1 };
        }
        if d != start {
            return Err(Error::NonPlanar("face tracing did not close up".into()));
        }
        face_darts.push(walk);
    }
    let v = slots as i64;
    let e = dag.edge_count() as i64;
    let f = face_darts.len() as i64;
    if v - e + f != 2 {
        return Err(Error::NonPlanar(format!("V - E + F = {v} - {e} + {f} != 2")));
    }
    check_face_shapes(&face_darts)?;
    let top = *out_top_down[0].first().ok_or_else(|| Error::NonPlanar("source has no edges".into()))?;
    let outer = face_of_dart[2 * top];
    let sink = dag.inner_count() + 1;
    let bottom_out = *out_top_down[0].last().expect("source has edges");
    let (top_in, bottom_in) = (in_top_down[sink][0], *in_top_down[sink].last().expect("sink has edges"));
    if face_of_dart[2 * bottom_out + 1] != outer
        || face_of_dart[2 * top_in] != outer
        || face_of_dart[2 * bottom_in + 1] != outer
    {
        return Err(Error::NonPlanar("source and sink orders disagree with the outer face".into()));
    }
    Ok(Tracing { rotation, out_top_down, in_top_down, face_of_dart, face_darts, outer })
}

/// Every face of a left-to-right drawing is bounded by two directed paths, so
/// its boundary walk switches direction exactly twice. Darts `2e` and `2e + 1`
/// run along and against edge `e`.
pub(crate) fn check_face_shapes(walks: &[Vec<usize>]) -> Result<()> {
    for walk in walks {
        let switches = (0..walk.len()).filter(|&i| walk[i] % 2 != walk[(i + 1) % walk.len()] % 2).count();
        if switches != 2 {
            return Err(Error::NonPlanar(format!("a face boundary changes direction {switches} times")));
        }
    }
    Ok(())
}

/// In- and out-edges at each inner vertex ordered top to bottom.
pub fn planar_framing(dag: &Dag, emb: &PlanarEmbedding) -> Result<Framing> {
    let tr = trace_faces(dag, emb)?;
    let orders = dag
        .inner_vertices()
        .map(|v| (v, (tr.in_top_down[dag.position(v)].clone(), tr.out_top_down[dag.position(v)].clone())))
        .collect();
    Framing::new(dag, orders)
}

/// Peels the topmost route repeatedly; routes are ordered top to bottom.
pub fn topmost_decomposition(dag: &Dag, emb: &PlanarEmbedding) -> Result<RouteDecomposition> {
    if !dag.degree_equality() {
        return Err(Error::NotGorenstein("degree equality fails".into()));
    }
    let tr = trace_faces(dag, emb)?;
    let mut alive = vec![true; dag.edge_count()];
    let mut routes = Vec::new();
    while alive.iter().any(|&a| a) {
        let mut path = Vec::new();
        let mut v = Vertex::Source;
        while v != Vertex::Sink {
            let Some(&e) = tr.out_top_down[dag.position(v)].iter().find(|&&e| alive[e]) else {
                return Err(Error::NotGorenstein(format!("peeling got stuck at {v}")));
            };
            alive[e] = false;
            path.push(e);
            v = dag.edge(e).head;
        }
        routes.push(Route::new(dag, path)?);
    }
    RouteDecomposition::new(dag, routes)
}
