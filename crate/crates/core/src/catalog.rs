//! Fixed test graphs used throughout the crate.
//!
//! * `G_k`: `k` parallel edges `s -> t`.
//! * `D1`: one inner vertex `v`; `a, b: s -> v`, `c, d: v -> t` (a square).
//! * `D2`: inner vertices 1, 2; `a, b: s -> 1`, `c, d: 1 -> 2`, `e, f: 2 -> t` (a cube).
//! * `D3`: one inner vertex; `a, b, c: s -> v`, `d, e, f: v -> t` (product of two triangles).
//! * [`spine`]: two inner vertices of in/out degree 2 with three routes in its
//!   decomposition; its flow polytope has Ehrhart numerator `1 + 3z + z^2`.
//!
//! Stacked embeddings list the rotation at `s` bottom-to-top, at `t`
//! top-to-bottom, and at inner vertices counterclockwise.

use crate::dag::{Dag, Edge, Vertex};
use crate::planar::PlanarEmbedding;
use Vertex::{Inner, Sink, Source};

/// `k` parallel edges `s -> t` named `e1, ..., ek`.
pub fn parallel(k: usize) -> Dag {
    let edges = (1..=k).map(|i| Edge::new(format!("e{i}"), Source, Sink)).collect();
    Dag::checked(0, edges).expect("parallel edges form a valid graph")
}

pub fn d1() -> Dag {
    Dag::from_triples(
        1,
        &[("a", Source, Inner(1)), ("b", Source, Inner(1)), ("c", Inner(1), Sink), ("d", Inner(1), Sink)],
    )
    .expect("D1 is valid")
}

pub fn d2() -> Dag {
    Dag::from_triples(
        2,
        &[
            ("a", Source, Inner(1)),
            ("b", Source, Inner(1)),
            ("c", Inner(1), Inner(2)),
            ("d", Inner(1), Inner(2)),
            ("e", Inner(2), Sink),
            ("f", Inner(2), Sink),
        ],
    )
    .expect("D2 is valid")
}

pub fn d3() -> Dag {
    Dag::from_triples(
        1,
        &[
            ("a", Source, Inner(1)),
            ("b", Source, Inner(1)),
            ("c", Source, Inner(1)),
            ("d", Inner(1), Sink),
            ("e", Inner(1), Sink),
            ("f", Inner(1), Sink),
        ],
    )
    .expect("D3 is valid")
}

/// Two inner vertices, each with in- and outdegree 2, and outdegree 3 at the
/// source. The lexicographic decomposition is `u1 w1 < x2 y2 w2 < x3 z3`,
/// and the route `x3 y2 w1` switches levels 3 -> 2 -> 1 along the spine.
pub fn spine() -> Dag {
    Dag::from_triples(
        2,
        &[
            ("u1", Source, Inner(2)),
            ("x2", Source, Inner(1)),
            ("x3", Source, Inner(1)),
            ("y2", Inner(1), Inner(2)),
            ("z3", Inner(1), Sink),
            ("w1", Inner(2), Sink),
            ("w2", Inner(2), Sink),
        ],
    )
    .expect("spine graph is valid")
}

/// `s -> v` twice, `v -> t` three times; fails degree equality.
pub fn unbalanced() -> Dag {
    Dag::from_triples(
        1,
        &[
            ("a", Source, Inner(1)),
            ("b", Source, Inner(1)),
            ("c", Inner(1), Sink),
            ("d", Inner(1), Sink),
            ("e", Inner(1), Sink),
        ],
    )
    .expect("valid")
}

/// `s => 1 -> 2 => t` with a single middle edge, which is idle.
pub fn chain_with_idle_middle() -> Dag {
    Dag::from_triples(
        2,
        &[
            ("a", Source, Inner(1)),
            ("b", Source, Inner(1)),
            ("c", Inner(1), Inner(2)),
            ("d", Inner(2), Sink),
            ("e", Inner(2), Sink),
        ],
    )
    .expect("valid")
}

/// Named catalog graphs, in a fixed order.
pub fn all() -> Vec<(&'static str, Dag)> {
    vec![
        ("G1", parallel(1)),
        ("G2", parallel(2)),
        ("G3", parallel(3)),
        ("D1", d1()),
        ("D2", d2()),
        ("D3", d3()),
        ("spine", spine()),
    ]
}

/// Stacked embedding of `G_k`: `e1` on top.
pub fn parallel_embedding(k: usize) -> PlanarEmbedding {
    let top_down: Vec<String> = (1..=k).map(|i| format!("e{i}")).collect();
    let bottom_up: Vec<String> = top_down.iter().rev().cloned().collect();
    PlanarEmbedding::from_rotations([(Source, bottom_up), (Sink, top_down)])
}

/// `a` above `b`, `c` above `d`.
pub fn d1_embedding() -> PlanarEmbedding {
    PlanarEmbedding::from_rotations([
        (Source, ids(&["b", "a"])),
        (Inner(1), ids(&["d", "c", "a", "b"])),
        (Sink, ids(&["c", "d"])),
    ])
}

/// `a` above `b`, `c` above `d`, `e` above `f`.
pub fn d2_embedding() -> PlanarEmbedding {
    PlanarEmbedding::from_rotations([
        (Source, ids(&["b", "a"])),
        (Inner(1), ids(&["d", "c", "a", "b"])),
        (Inner(2), ids(&["f", "e", "c", "d"])),
        (Sink, ids(&["e", "f"])),
    ])
}

/// Vertex 1 drawn above vertex 2; top route `x3 z3`, bottom route `u1 w1`.
pub fn spine_embedding() -> PlanarEmbedding {
    PlanarEmbedding::from_rotations([
        (Source, ids(&["u1", "x2", "x3"])),
        (Inner(1), ids(&["y2", "z3", "x3", "x2"])),
        (Inner(2), ids(&["w1", "w2", "y2", "u1"])),
        (Sink, ids(&["z3", "w2", "w1"])),
    ])
}

fn ids(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}
