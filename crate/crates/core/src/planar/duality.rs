//! Duality between strongly planar DAGs and posets.
//!
//! Bounded faces of an embedded DAG become poset elements; each edge joins the
//! face below it to the face above it. Conversely the bounded faces of the
//! Hasse diagram of `P + {0, 1}` become inner vertices of a DAG whose edges
//! cross the Hasse edges from left to right.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::embedding::{check_face_shapes, trace_faces, PlanarEmbedding};
use super::poset::Poset;
use crate::dag::{Dag, Edge, Vertex};
use crate::error::{Error, Result};

/// A node of the poset extended by a bottom and a top element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Bottom,
    Elem(usize),
    Top,
}

/// The truncated dual of an embedded DAG.
#[derive(Clone, Debug)]
pub struct Duality {
    pub poset: Poset,
    /// For each DAG edge, the faces (below, above) it separates.
    pub edge_cover: Vec<(Node, Node)>,
    /// Face index of each poset element.
    pub faces: Vec<usize>,
}

/// Truncated dual: bounded faces named `f0, f1, ...` in discovery order, with
/// `below(e) < above(e)` for every edge not on the outer face.
pub fn truncated_dual(dag: &Dag, emb: &PlanarEmbedding) -> Result<Duality> {
    let tr = trace_faces(dag, emb)?;
    let faces: Vec<usize> = (0..tr.face_count()).filter(|&f| f != tr.outer).collect();
    let elem = |f: usize| faces.iter().position(|&g| g == f).expect("bounded face");
    let edge_cover: Vec<(Node, Node)> = (0..dag.edge_count())
        .map(|e| {
            let below = if tr.below(e) == tr.outer { Node::Bottom } else { Node::Elem(elem(tr.below(e))) };
            let above = if tr.above(e) == tr.outer { Node::Top } else { Node::Elem(elem(tr.above(e))) };
            (below, above)
        })
        .collect();
    let mut relation: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(lo, hi) in &edge_cover {
        match (lo, hi) {
            (Node::Elem(a), Node::Elem(b)) if a == b => {
                return Err(Error::NonPlanar(format!("an edge has face f{a} on both sides")));
            }
            (Node::Elem(a), Node::Elem(b)) => {
                relation.insert((a, b));
            }
            _ => {}
        }
    }
    let names: Vec<String> = (0..faces.len()).map(|i| format!("f{i}")).collect();
    let covers = transitive_reduction(faces.len(), &relation)
        .ok_or_else(|| Error::NonPlanar("dual relation has a cycle".into()))?;
    let poset = Poset::new(names, &covers)?;
    Ok(Duality { poset, edge_cover, faces })
}

/// Covers of the order generated by `relation`, or `None` if it has a cycle.
fn transitive_reduction(n: usize, relation: &BTreeSet<(usize, usize)>) -> Option<Vec<(usize, usize)>> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in relation {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    if (0..n).any(|i| reach[i][i]) {
        return None;
    }
    Some(relation.iter().copied().filter(|&(a, b)| !(0..n).any(|c| reach[a][c] && reach[c][b])).collect())
}

/// `fl(e) = f(above e) - f(below e)` with `f(bottom) = 0` and `f(top) = 1`.
pub fn order_to_flow(duality: &Duality, f: &[i64]) -> Vec<i64> {
    let value = |n: Node| match n {
        Node::Bottom => 0,
        Node::Top => 1,
        Node::Elem(i) => f[i],
    };
    duality.edge_cover.iter().map(|&(lo, hi)| value(hi) - value(lo)).collect()
}

/// Inverse of [`order_to_flow`]: integrates the flow upward from the bottom.
/// Fails when two paths give an element different values.
pub fn flow_to_order(duality: &Duality, flow: &[i64]) -> Result<Vec<i64>> {
    let mut value: BTreeMap<Node, i64> = BTreeMap::from([(Node::Bottom, 0)]);
    let mut queue = VecDeque::from([Node::Bottom]);
    while let Some(node) = queue.pop_front() {
        let here = value[&node];
        for (e, &(lo, hi)) in duality.edge_cover.iter().enumerate() {
            let (other, v) = if lo == node {
                (hi, here + flow[e])
            } else if hi == node {
                (lo, here - flow[e])
            } else {
                continue;
            };
            match value.get(&other) {
                Some(&w) if w != v => {
                    return Err(Error::ChainDependent(format!("{other:?} reached with values {w} and {v}")));
                }
                Some(_) => {}
                None => {
                    value.insert(other, v);
                    queue.push_back(other);
                }
            }
        }
    }
    if value.get(&Node::Top).is_some_and(|&top| top != 1) {
        return Err(Error::ChainDependent(format!("top reached with value {}", value[&Node::Top])));
    }
    (0..duality.poset.len())
        .map(|i| {
            value
                .get(&Node::Elem(i))
                .copied()
                .ok_or_else(|| Error::ChainDependent(format!("element f{i} is unreachable")))
        })
        .collect()
}

/// Counterclockwise rotations of the Hasse diagram of `P + {0, 1}` drawn
/// upward, keyed by element name (`hat0`, `hat1` for the added bounds). Edge
/// ids are `lo<hi`. At `hat0` the up-edges run right to left, at `hat1` the
/// down-edges left to right, and at an element the up-edges right to left are
/// followed by the down-edges left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseEmbedding {
    pub rotations: BTreeMap<String, Vec<String>>,
}

pub const HAT0: &str = "hat0";
pub const HAT1: &str = "hat1";

/// Edges `(lo, hi)` of the Hasse diagram of `P + {0, 1}` by name.
pub fn hasse_edges(poset: &Poset) -> Vec<(String, String)> {
    let names = poset.names();
    let mut edges: Vec<(String, String)> =
        poset.covers().into_iter().map(|(a, b)| (names[a].clone(), names[b].clone())).collect();
    for x in 0..poset.len() {
        if poset.lower_covers(x).is_empty() {
            edges.push((HAT0.into(), names[x].clone()));
        }
        if poset.upper_covers(x).is_empty() {
            edges.push((names[x].clone(), HAT1.into()));
        }
    }
    if poset.is_empty() {
        edges.push((HAT0.into(), HAT1.into()));
    }
    edges
}

/// The strongly planar dual DAG of a poset, with its stacked embedding.
pub fn poset_to_dag(poset: &Poset, hasse: &HasseEmbedding) -> Result<(Dag, PlanarEmbedding)> {
    let edges = hasse_edges(poset);
    let ids: Vec<String> = edges.iter().map(|(a, b)| format!("{a}<{b}")).collect();
    let mut nodes: Vec<String> = vec![HAT0.into()];
    nodes.extend(poset.names().iter().cloned());
    nodes.push(HAT1.into());
    let node_index = |name: &str| nodes.iter().position(|n| n == name).expect("hasse node");

    // rotations as edge indices, checked against the incidence
    let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(nodes.len());
    for name in &nodes {
        let list = hasse.rotations.get(name).ok_or_else(|| Error::NonPlanar(format!("no Hasse rotation at {name}")))?;
        let rot = list
            .iter()
            .map(|id| {
                ids.iter().position(|x| x == id).ok_or_else(|| Error::NonPlanar(format!("unknown Hasse edge `{id}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut got = rot.clone();
        got.sort_unstable();
        let expected: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].0 == *name || edges[e].1 == *name).collect();
        if got != expected {
            return Err(Error::NonPlanar(format!("Hasse rotation at {name} does not list exactly its edges")));
        }
        rotation.push(rot);
    }
    let lo = |e: usize| node_index(&edges[e].0);
    let hi = |e: usize| node_index(&edges[e].1);

    // dart 2e runs upward along edge e, 2e + 1 downward; faces lie on the left
    let mut at_lo = vec![0; edges.len()];
    let mut at_hi = vec![0; edges.len()];
    for (v, rot) in rotation.iter().enumerate() {
        for (i, &e) in rot.iter().enumerate() {
            if lo(e) == v {
                at_lo[e] = i;
            } else {
                at_hi[e] = i;
            }
        }
    }
    let darts = 2 * edges.len();
    let mut face_of_dart = vec![usize::MAX; darts];
    let mut walks: Vec<Vec<usize>> = Vec::new();
    for start in 0..darts {
        if face_of_dart[start] != usize::MAX {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = start;
        while face_of_dart[d] == usize::MAX {
            face_of_dart[d] = walks.len();
            walk.push(d);
            let e = d / 2;
            let (v, idx) = if d % 2 == 0 { (hi(e), at_hi[e]) } else { (lo(e), at_lo[e]) };
            let rot = &rotation[v];
            let next = rot[(idx + rot.len() - 1) % rot.len()];
            d = if lo(next) == v { 2 * next } else { 2 * next + 1 };
        }
        if d != start {
            return Err(Error::NonPlanar("Hasse face tracing did not close up".into()));
        }
        walks.push(walk);
    }
    if nodes.len() as i64 - edges.len() as i64 + walks.len() as i64 != 2 {
        return Err(Error::NonPlanar("Hasse rotation fails the Euler check".into()));
    }
    check_face_shapes(&walks)?;
    let leftmost = *rotation[0].last().expect("hat0 has an up-edge");
    let outer = face_of_dart[2 * leftmost];
    let top = &rotation[nodes.len() - 1];
    let (top_left, top_right) = (top[0], *top.last().expect("hat1 has a down-edge"));
    if face_of_dart[2 * rotation[0][0] + 1] != outer
        || face_of_dart[2 * top_left] != outer
        || face_of_dart[2 * top_right + 1] != outer
    {
        return Err(Error::NonPlanar("hat0 and hat1 rotations disagree with the outer face".into()));
    }

    // dual edge of e runs from the face left of e to the face right of e
    let left = |e: usize| face_of_dart[2 * e];
    let right = |e: usize| face_of_dart[2 * e + 1];
    let bounded: Vec<usize> = (0..walks.len()).filter(|&f| f != outer).collect();
    let mut indeg: BTreeMap<usize, usize> = bounded.iter().map(|&f| (f, 0)).collect();
    for e in 0..edges.len() {
        if left(e) != outer && right(e) != outer {
            *indeg.get_mut(&right(e)).expect("bounded") += 1;
        }
    }
    let mut ready: BTreeSet<usize> = indeg.iter().filter(|&(_, &d)| d == 0).map(|(&f, _)| f).collect();
    let mut order = Vec::new();
    while let Some(f) = ready.pop_first() {
        order.push(f);
        for e in 0..edges.len() {
            if left(e) == f && right(e) != outer {
                let d = indeg.get_mut(&right(e)).expect("bounded");
                *d -= 1;
                if *d == 0 {
                    ready.insert(right(e));
                }
            }
        }
    }
    if order.len() != bounded.len() {
        return Err(Error::NonPlanar("dual of the Hasse diagram has a directed cycle".into()));
    }
    let vertex = |f: usize, side_is_left: bool| -> Vertex {
        if f == outer {
            if side_is_left {
                Vertex::Source
            } else {
                Vertex::Sink
            }
        } else {
            Vertex::Inner(order.iter().position(|&g| g == f).expect("ordered") + 1)
        }
    };
    let dag_edges: Vec<Edge> =
        (0..edges.len()).map(|e| Edge::new(ids[e].clone(), vertex(left(e), true), vertex(right(e), false))).collect();
    let dag = Dag::checked(order.len(), dag_edges)?;

    let mut rotations = BTreeMap::new();
    for (k, &f) in order.iter().enumerate() {
        rotations.insert(Vertex::Inner(k + 1), walks[f].iter().map(|&d| ids[d / 2].clone()).collect());
    }
    let outer_walk = &walks[outer];
    let start = outer_walk.iter().position(|&d| d == 2 * leftmost).expect("leftmost dart on outer face");
    let cycle: Vec<usize> = outer_walk[start..].iter().chain(&outer_walk[..start]).copied().collect();
    rotations.insert(Vertex::Source, cycle.iter().filter(|&&d| d % 2 == 0).map(|&d| ids[d / 2].clone()).collect());
    rotations.insert(Vertex::Sink, cycle.iter().filter(|&&d| d % 2 == 1).map(|&d| ids[d / 2].clone()).collect());
    Ok((dag, PlanarEmbedding { rotations }))
}

/// Hasse embedding of a chain: a single vertical path.
pub fn chain_hasse_embedding(poset: &Poset) -> HasseEmbedding {
    let names = poset.names();
    let edge = |a: &str, b: &str| format!("{a}<{b}");
    let mut rotations = BTreeMap::new();
    let mut path: Vec<&str> = vec![HAT0];
    path.extend(names.iter().map(String::as_str));
    path.push(HAT1);
    for (i, &v) in path.iter().enumerate() {
        let mut rot = Vec::new();
        if i + 1 < path.len() {
            rot.push(edge(v, path[i + 1]));
        }
        if i > 0 {
            rot.push(edge(path[i - 1], v));
        }
        rotations.insert(v.to_string(), rot);
    }
    HasseEmbedding { rotations }
}

/// Hasse embedding of an antichain with its elements drawn left to right.
pub fn antichain_hasse_embedding(poset: &Poset) -> HasseEmbedding {
    let names = poset.names();
    let mut rotations = BTreeMap::new();
    rotations.insert(HAT0.to_string(), names.iter().rev().map(|x| format!("{HAT0}<{x}")).collect());
    rotations.insert(HAT1.to_string(), names.iter().map(|x| format!("{x}<{HAT1}")).collect());
    for x in names {
        rotations.insert(x.clone(), vec![format!("{x}<{HAT1}"), format!("{HAT0}<{x}")]);
    }
    HasseEmbedding { rotations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::planar::embedding::trace_faces;

    #[test]
    fn duals_of_catalog_graphs() {
        let p = truncated_dual(&catalog::d1(), &catalog::d1_embedding()).unwrap().poset;
        assert!(p.is_isomorphic(&Poset::antichain(2)));
        let p = truncated_dual(&catalog::parallel(3), &catalog::parallel_embedding(3)).unwrap().poset;
        assert!(p.is_isomorphic(&Poset::chain(2)));
        let p = truncated_dual(&catalog::d2(), &catalog::d2_embedding()).unwrap().poset;
        assert!(p.is_isomorphic(&Poset::antichain(3)));
        let p = truncated_dual(&catalog::parallel(1), &catalog::parallel_embedding(1)).unwrap().poset;
        assert!(p.is_empty());
    }

    #[test]
    fn poset_duals() {
        let c2 = Poset::chain(2);
        let (g, emb) = poset_to_dag(&c2, &chain_hasse_embedding(&c2)).unwrap();
        assert!(g.is_isomorphic(&catalog::parallel(3)));
        trace_faces(&g, &emb).unwrap();
        let a2 = Poset::antichain(2);
        let (g, _) = poset_to_dag(&a2, &antichain_hasse_embedding(&a2)).unwrap();
        assert!(g.is_isomorphic(&catalog::d1()));
        let c1 = Poset::chain(1);
        let (g, _) = poset_to_dag(&c1, &chain_hasse_embedding(&c1)).unwrap();
        assert!(g.is_isomorphic(&catalog::parallel(2)));
    }

    #[test]
    fn round_trip() {
        for p in [Poset::chain(1), Poset::chain(3), Poset::antichain(2), Poset::antichain(4)] {
            let hasse = if p.covers().is_empty() && p.len() > 1 {
                antichain_hasse_embedding(&p)
            } else {
                chain_hasse_embedding(&p)
            };
            let (g, emb) = poset_to_dag(&p, &hasse).unwrap();
            let back = truncated_dual(&g, &emb).unwrap().poset;
            assert!(back.is_isomorphic(&p), "{:?}", p.names());
        }
    }

    #[test]
    fn bad_hasse_rotation() {
        let a3 = Poset::antichain(3);
        let mut hasse = antichain_hasse_embedding(&a3);
        let order = |ids: &[&str]| ids.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        hasse.rotations.insert(HAT0.into(), order(&["hat0<a1", "hat0<a2", "hat0<a3"]));
        assert!(matches!(poset_to_dag(&a3, &hasse), Err(Error::NonPlanar(_))));
        // a2 drawn left of a1 at the bottom only
        let mut hasse = antichain_hasse_embedding(&Poset::antichain(2));
        hasse.rotations.insert(HAT0.into(), order(&["hat0<a1", "hat0<a2"]));
        assert!(matches!(poset_to_dag(&Poset::antichain(2), &hasse), Err(Error::NonPlanar(_))));
        hasse.rotations.remove(HAT0);
        assert!(matches!(poset_to_dag(&Poset::antichain(2), &hasse), Err(Error::NonPlanar(_))));
    }

    #[test]
    fn flows_and_orders_invert() {
        for (g, emb) in [
            (catalog::d1(), catalog::d1_embedding()),
            (catalog::d2(), catalog::d2_embedding()),
            (catalog::spine(), catalog::spine_embedding()),
        ] {
            let dual = truncated_dual(&g, &emb).unwrap();
            for f in dual.poset.order_polytope_vertices() {
                let flow = order_to_flow(&dual, &f);
                assert!(flow.iter().all(|&x| x == 0 || x == 1));
                assert_eq!(flow_to_order(&dual, &flow).unwrap(), f);
            }
        }
    }

    #[test]
    fn chain_dependent_flow_is_rejected() {
        let g = catalog::d1();
        let dual = truncated_dual(&g, &catalog::d1_embedding()).unwrap();
        // a and b both full: the face between them gets two values
        assert!(matches!(flow_to_order(&dual, &[1, 1, 1, 0]), Err(Error::ChainDependent(_))));
    }
}
