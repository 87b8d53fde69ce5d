//! JSON input formats.
//!
//! A graph file is `{"inner_count": n, "edges": [{"id", "tail", "head"}],
//! "framing"?: {"1": {"in": [...], "out": [...]}}, "embedding"?: {"rotations":
//! {"s": [...], ...}}}` with vertices written `"s"`, `"t"` or a number.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dag::{Dag, Edge, Vertex};
use crate::error::{Error, Result};
use crate::planar::{PlanarEmbedding, Poset, PosetSpec};
use crate::routes::{DecompositionSpec, Framing, RouteDecomposition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramingEntry {
    #[serde(rename = "in")]
    pub ins: Vec<String>,
    #[serde(rename = "out")]
    pub outs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub inner_count: usize,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<BTreeMap<Vertex, FramingEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<PlanarEmbedding>,
}

/// A validated graph with its optional framing and embedding.
#[derive(Clone, Debug)]
pub struct GraphInput {
    pub dag: Dag,
    pub framing: Option<Framing>,
    pub embedding: Option<PlanarEmbedding>,
}

impl GraphFile {
    pub fn from_dag(dag: &Dag) -> Self {
        GraphFile { inner_count: dag.inner_count(), edges: dag.edges().to_vec(), framing: None, embedding: None }
    }

    pub fn into_input(self) -> Result<GraphInput> {
        let dag = Dag::checked(self.inner_count, self.edges)?;
        let framing = match self.framing {
            None => None,
            Some(map) => {
                let orders = map.into_iter().map(|(v, e)| (v, (e.ins, e.outs))).collect();
                Some(Framing::from_ids(&dag, &orders)?)
            }
        };
        Ok(GraphInput { dag, framing, embedding: self.embedding })
    }
}

pub fn parse_graph(text: &str) -> Result<GraphInput> {
    serde_json::from_str::<GraphFile>(text)?.into_input()
}

pub fn graph_to_json(dag: &Dag) -> String {
    serde_json::to_string_pretty(&GraphFile::from_dag(dag)).expect("graphs serialize")
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    Poset::from_spec(&serde_json::from_str::<PosetSpec>(text)?)
}

/// A decomposition file: an array of routes, each an array of edge ids.
pub fn parse_decomposition(dag: &Dag, text: &str) -> Result<RouteDecomposition> {
    let spec: DecompositionSpec = serde_json::from_str(text)?;
    if spec.0.is_empty() {
        return Err(Error::InvalidDecomposition("no routes given".into()));
    }
    RouteDecomposition::from_ids(dag, &spec.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const D1: &str = r#"{
        "inner_count": 1,
        "edges": [
            {"id": "a", "tail": "s", "head": 1},
            {"id": "b", "tail": "s", "head": 1},
            {"id": "c", "tail": 1, "head": "t"},
            {"id": "d", "tail": 1, "head": "t"}
        ],
        "framing": {"1": {"in": ["b", "a"], "out": ["c", "d"]}},
        "embedding": {"rotations": {"s": ["b", "a"], "1": ["d", "c", "a", "b"], "t": ["c", "d"]}}
    }"#;

    #[test]
    fn parses_full_graph_file() {
        let input = parse_graph(D1).unwrap();
        assert_eq!(input.dag, catalog::d1());
        let fr = input.framing.unwrap();
        assert_eq!(fr.in_order(&input.dag, Vertex::Inner(1)), [1, 0]);
        assert_eq!(input.embedding.unwrap(), catalog::d1_embedding());
    }

    #[test]
    fn round_trips_through_json() {
        for (_, g) in catalog::all() {
            assert_eq!(parse_graph(&graph_to_json(&g)).unwrap().dag, g);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_graph("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph(r#"{"inner_count": 0, "edges": [], "x": 1}"#), Err(Error::Parse(_))));
        let cyclic = r#"{"inner_count": 1, "edges": [{"id": "a", "tail": 1, "head": "s"}]}"#;
        assert!(parse_graph(cyclic).is_err());
        let bad_framing = D1.replace(r#""in": ["b", "a"]"#, r#""in": ["b", "c"]"#);
        assert!(parse_graph(&bad_framing).is_err());
    }

    #[test]
    fn poset_and_decomposition_files() {
        let p = parse_poset(r#"{"elements": ["x", "y"], "covers": [["x", "y"]]}"#).unwrap();
        assert!(p.is_isomorphic(&Poset::chain(2)));
        assert!(parse_poset(r#"{"elements": ["x"], "covers": [["x", "z"]]}"#).is_err());
        let d1 = catalog::d1();
        let dec = parse_decomposition(&d1, r#"[["a", "d"], ["b", "c"]]"#).unwrap();
        assert_eq!(dec.len(), 2);
        assert!(parse_decomposition(&d1, r#"[["a", "d"]]"#).is_err());
    }
}
