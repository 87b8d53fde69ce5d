//! Vertex-ordered directed acyclic multigraphs with a distinguished source and
//! sink.
//!
//! Vertices are `s < 1 < ... < n < t`. Edges are identified by string ids, so
//! parallel edges are distinct objects. The vertex order is part of the input
//! and is never recomputed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex of a [`Dag`]. The derived order is the vertex order of the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Source,
    /// Inner vertex, numbered from 1.
    Inner(usize),
    Sink,
}

impl Vertex {
    pub fn is_inner(self) -> bool {
        matches!(self, Vertex::Inner(_))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Source => f.write_str("s"),
            Vertex::Inner(i) => write!(f, "{i}"),
            Vertex::Sink => f.write_str("t"),
        }
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Vertex::Source => serializer.serialize_str("s"),
            Vertex::Inner(i) => serializer.serialize_u64(*i as u64),
            Vertex::Sink => serializer.serialize_str("t"),
        }
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct VertexVisitor;

        impl Visitor<'_> for VertexVisitor {
            type Value = Vertex;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"s\", \"t\", or a positive inner-vertex number")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Vertex, E> {
                if v == 0 {
                    return Err(E::custom("inner vertices are numbered from 1"));
                }
                Ok(Vertex::Inner(v as usize))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Vertex, E> {
                if v <= 0 {
                    return Err(E::custom("inner vertices are numbered from 1"));
                }
                Ok(Vertex::Inner(v as usize))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Vertex, E> {
                v.parse().map_err(|_| E::custom(format!("bad vertex `{v}`")))
            }
        }

        deserializer.deserialize_any(VertexVisitor)
    }
}

impl std::str::FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(Vertex::Source),
            "t" => Ok(Vertex::Sink),
            other => match other.parse::<usize>() {
                Ok(i) if i > 0 => Ok(Vertex::Inner(i)),
                _ => Err(Error::Parse(format!("bad vertex `{other}`"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: Vertex,
    pub head: Vertex,
}

impl Edge {
    pub fn new(id: impl Into<String>, tail: Vertex, head: Vertex) -> Self {
        Edge { id: id.into(), tail, head }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, rule: &str, message: String) {
        self.violations.push(Violation { rule: rule.to_string(), message });
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{}: {}", v.rule, v.message)).collect();
        f.write_str(&parts.join("; "))
    }
}

/// A DAG with source `s`, sink `t` and inner vertices `1..=n`.
///
/// Edge indices (`usize`) refer to positions in [`Dag::edges`]; adjacency lists
/// are sorted by edge id so that every traversal is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    inner_count: usize,
    edges: Vec<Edge>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl Dag {
    /// Builds a graph without checking the structural invariants; use
    /// [`Dag::validate`] or [`Dag::checked`] for that. Only vertex numbers
    /// outside `1..=inner_count` are rejected here.
    pub fn new(inner_count: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            for v in [e.tail, e.head] {
                if let Vertex::Inner(i) = v {
                    if i == 0 || i > inner_count {
                        return Err(Error::VertexOutOfRange(format!("{v} (edge {})", e.id)));
                    }
                }
            }
        }
        let mut incoming = vec![Vec::new(); inner_count + 2];
        let mut outgoing = vec![Vec::new(); inner_count + 2];
        for (idx, e) in edges.iter().enumerate() {
            outgoing[position(e.tail, inner_count)].push(idx);
            incoming[position(e.head, inner_count)].push(idx);
        }
        for list in incoming.iter_mut().chain(outgoing.iter_mut()) {
            list.sort_by(|&a, &b| edges[a].id.cmp(&edges[b].id));
        }
        Ok(Dag { inner_count, edges, incoming, outgoing })
    }

    /// Builds a graph and rejects it unless [`Dag::validate`] passes.
    pub fn checked(inner_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let dag = Dag::new(inner_count, edges)?;
        let report = dag.validate();
        if report.ok {
            Ok(dag)
        } else {
            Err(Error::InvalidDag(report))
        }
    }

    /// Convenience constructor from `(id, tail, head)` triples.
    pub fn from_triples(inner_count: usize, triples: &[(&str, Vertex, Vertex)]) -> Result<Self> {
        Dag::checked(inner_count, triples.iter().map(|&(id, t, h)| Edge::new(id, t, h)).collect())
    }

    pub fn inner_count(&self) -> usize {
        self.inner_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges.iter().position(|e| e.id == id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// All vertices in order `s, 1, ..., n, t`.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(Vertex::Source)
            .chain((1..=self.inner_count).map(Vertex::Inner))
            .chain(std::iter::once(Vertex::Sink))
    }

    pub fn inner_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.inner_count).map(Vertex::Inner)
    }

    /// Index of `v` in `s, 1, ..., n, t`.
    pub fn position(&self, v: Vertex) -> usize {
        position(v, self.inner_count)
    }

    /// Like [`Dag::position`], but `None` for inner vertices out of range.
    pub fn position_checked(&self, v: Vertex) -> Option<usize> {
        match v {
            Vertex::Inner(i) if i == 0 || i > self.inner_count => None,
            v => Some(self.position(v)),
        }
    }

    pub fn vertex_at(&self, pos: usize) -> Vertex {
        match pos {
            0 => Vertex::Source,
            p if p == self.inner_count + 1 => Vertex::Sink,
            p => Vertex::Inner(p),
        }
    }

    /// Incoming edges of `v`, sorted by id.
    pub fn in_edges(&self, v: Vertex) -> &[usize] {
        &self.incoming[self.position(v)]
    }

    /// Outgoing edges of `v`, sorted by id.
    pub fn out_edges(&self, v: Vertex) -> &[usize] {
        &self.outgoing[self.position(v)]
    }

    pub fn indeg(&self, v: Vertex) -> usize {
        self.in_edges(v).len()
    }

    pub fn outdeg(&self, v: Vertex) -> usize {
        self.out_edges(v).len()
    }

    /// Same multiset of `(tail, head)` pairs after some relabelling of the
    /// inner vertices; edge ids and vertex order are ignored. Brute force.
    pub fn is_isomorphic(&self, other: &Dag) -> bool {
        use itertools::Itertools;
        if self.inner_count != other.inner_count || self.edges.len() != other.edges.len() {
            return false;
        }
        let shape = |dag: &Dag, perm: &[usize]| -> Vec<(usize, usize)> {
            let map = |v: Vertex| match v {
                Vertex::Source => 0,
                Vertex::Inner(i) => perm[i - 1] + 1,
                Vertex::Sink => usize::MAX,
            };
            let mut pairs: Vec<(usize, usize)> = dag.edges.iter().map(|e| (map(e.tail), map(e.head))).collect();
            pairs.sort_unstable();
            pairs
        };
        let identity: Vec<usize> = (0..self.inner_count).collect();
        let target = shape(other, &identity);
        (0..self.inner_count).permutations(self.inner_count).any(|perm| shape(self, &perm) == target)
    }

    /// Checks the structural invariants of the graph.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert(e.id.as_str()) {
                report.push("duplicate-id", format!("edge id `{}` is used more than once", e.id));
            }
        }
        for e in &self.edges {
            if e.tail >= e.head {
                report.push(
                    "self-loop/order",
                    format!("edge `{}` goes from {} to {}, against the vertex order", e.id, e.tail, e.head),
                );
            }
        }
        if self.edges.is_empty() {
            report.push("no-edges", "the graph has no edges".to_string());
        }
        for v in self.inner_vertices() {
            if self.outdeg(v) == 0 {
                report.push("dead inner vertex", format!("inner vertex {v} has no outgoing edge"));
            }
            if self.indeg(v) == 0 {
                report.push("unreachable inner vertex", format!("inner vertex {v} has no incoming edge"));
            }
        }
        if report.violations.is_empty() {
            // With a consistent order, every vertex with in- and out-edges lies
            // on a route; check reachability explicitly anyway.
            let from_s = self.reachable(Vertex::Source, true);
            let to_t = self.reachable(Vertex::Sink, false);
            for v in self.inner_vertices() {
                let p = self.position(v);
                if !(from_s[p] && to_t[p]) {
                    report.push("no-route", format!("inner vertex {v} lies on no s-t route"));
                }
            }
        }
        report.ok = report.violations.is_empty();
        report
    }

    fn reachable(&self, start: Vertex, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.inner_count + 2];
        let mut stack = vec![self.position(start)];
        seen[self.position(start)] = true;
        while let Some(p) = stack.pop() {
            let list = if forward { &self.outgoing[p] } else { &self.incoming[p] };
            for &e in list {
                let next = if forward { self.edges[e].head } else { self.edges[e].tail };
                let q = self.position(next);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// An idle edge is the sole incoming or sole outgoing edge of an inner vertex.
    pub fn is_idle(&self, edge: usize) -> bool {
        let e = &self.edges[edge];
        (e.head.is_inner() && self.indeg(e.head) == 1) || (e.tail.is_inner() && self.outdeg(e.tail) == 1)
    }

    pub fn idle_edges(&self) -> Vec<usize> {
        let mut idle: Vec<usize> = (0..self.edges.len()).filter(|&e| self.is_idle(e)).collect();
        idle.sort_by(|&a, &b| self.edges[a].id.cmp(&self.edges[b].id));
        idle
    }

    /// `indeg(v) == outdeg(v)` at every inner vertex.
    pub fn degree_equality(&self) -> bool {
        self.inner_vertices().all(|v| self.indeg(v) == self.outdeg(v))
    }

    /// Dimension `|E| - n - 1` of the flow polytope (for graphs without idle edges).
    pub fn dimension(&self) -> usize {
        self.edges.len() - self.inner_count - 1
    }

    /// Contracts idle edges until none remain.
    ///
    /// When the head of an idle edge has indegree one, the head is merged into
    /// the tail; otherwise the tail (outdegree one) is merged into the head.
    /// Both choices keep every edge pointing forward in the vertex order.
    /// Idle edges are processed in edge-id order and the surviving inner
    /// vertices are renumbered consecutively.
    pub fn contract_idle_edges(&self) -> Result<Contraction> {
        if self.edges.is_empty() {
            return Err(Error::TrivialGraph("no edges to contract".into()));
        }
        let mut inner_count = self.inner_count;
        let mut edges = self.edges.clone();
        // original label of each current vertex position
        let mut origin: Vec<Vertex> = self.vertices().collect();
        let mut merges = Vec::new();

        loop {
            let dag = Dag::new(inner_count, edges.clone())?;
            let Some(&idle) = dag.idle_edges().first() else { break };
            let e = dag.edge(idle).clone();
            let (removed, kept) =
                if e.head.is_inner() && dag.indeg(e.head) == 1 { (e.head, e.tail) } else { (e.tail, e.head) };
            merges.push(Merge {
                edge: e.id.clone(),
                removed: origin[dag.position(removed)],
                into: origin[dag.position(kept)],
            });
            let Vertex::Inner(gone) = removed else { unreachable!("idle edges touch an inner vertex") };
            let relabel = |v: Vertex| -> Vertex {
                let v = if v == removed { kept } else { v };
                match v {
                    Vertex::Inner(i) if i > gone => Vertex::Inner(i - 1),
                    other => other,
                }
            };
            edges = edges
                .into_iter()
                .filter(|x| x.id != e.id)
                .map(|x| Edge { id: x.id, tail: relabel(x.tail), head: relabel(x.head) })
                .collect();
            origin.remove(gone);
            inner_count -= 1;
        }

        let dag = Dag::new(inner_count, edges)?;
        let kept: BTreeSet<&str> = dag.edges.iter().map(|e| e.id.as_str()).collect();
        let edge_map = self
            .edges
            .iter()
            .map(|e| {
                let survivor = kept.contains(e.id.as_str()).then(|| e.id.clone());
                (e.id.clone(), survivor)
            })
            .collect();
        Ok(Contraction { dag, merges, edge_map })
    }

    /// Adds `|indeg - outdeg|` edges at each unbalanced inner vertex, from `s`
    /// when outdegree exceeds indegree and to `t` otherwise. Original edges keep
    /// their ids; the flow polytope of `self` is the face of the result where
    /// the new edges carry zero flow.
    pub fn gorenstein_completion(&self) -> Dag {
        let mut edges = self.edges.clone();
        let mut used: BTreeSet<String> = edges.iter().map(|e| e.id.clone()).collect();
        for v in self.inner_vertices() {
            let (indeg, outdeg) = (self.indeg(v), self.outdeg(v));
            for k in 0..indeg.abs_diff(outdeg) {
                let (tail, head, mut id) = match indeg.cmp(&outdeg) {
                    Ordering::Less => (Vertex::Source, v, format!("s>{v}#{}", k + 1)),
                    _ => (v, Vertex::Sink, format!("{v}>t#{}", k + 1)),
                };
                while used.contains(&id) {
                    id.push('\'');
                }
                used.insert(id.clone());
                edges.push(Edge { id, tail, head });
            }
        }
        Dag::new(self.inner_count, edges).expect("completion keeps vertex range")
    }
}

fn position(v: Vertex, inner_count: usize) -> usize {
    match v {
        Vertex::Source => 0,
        Vertex::Inner(i) => i,
        Vertex::Sink => inner_count + 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Merge {
    /// Id of the contracted edge.
    pub edge: String,
    /// Original label of the vertex that disappeared.
    pub removed: Vertex,
    /// Original label of the vertex it was merged into.
    pub into: Vertex,
}

#[derive(Clone, Debug)]
pub struct Contraction {
    pub dag: Dag,
    pub merges: Vec<Merge>,
    /// Old edge id to surviving edge id; contracted edges map to `None`.
    pub edge_map: BTreeMap<String, Option<String>>,
}
