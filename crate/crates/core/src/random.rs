//! Seeded random graphs for fuzzing and property tests, and brute-force
//! oracles that check them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::{Dag, Edge, Vertex};
use crate::routes::{enumerate_routes, Route};

/// The generator used by the fuzzers: ChaCha8 seeded from `seed`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vertex(pos: usize, inner: usize) -> Vertex {
    match pos {
        0 => Vertex::Source,
        p if p == inner + 1 => Vertex::Sink,
        p => Vertex::Inner(p),
    }
}

/// A valid graph with at most `max_inner` inner vertices and at most
/// `max_edges` edges (at least `2 * inner + 1` are always placed).
pub fn random_dag<R: Rng>(rng: &mut R, max_inner: usize, max_edges: usize) -> Dag {
    let inner = rng.gen_range(0..=max_inner.min(max_edges.saturating_sub(1) / 2));
    let mut pairs = Vec::new();
    // every inner vertex gets one edge from an earlier and one to a later vertex
    for p in 1..=inner {
        pairs.push((rng.gen_range(0..p), p));
        pairs.push((p, rng.gen_range(p + 1..=inner + 1)));
    }
    if pairs.is_empty() || rng.gen_bool(0.5) {
        pairs.push((0, inner + 1));
    }
    let target = rng.gen_range(pairs.len()..=max_edges.max(pairs.len()));
    while pairs.len() < target {
        let a = rng.gen_range(0..=inner);
        let b = rng.gen_range(a + 1..=inner + 1);
        pairs.push((a, b));
    }
    pairs.shuffle(rng);
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| Edge::new(format!("e{i}"), vertex(a, inner), vertex(b, inner)))
        .collect();
    Dag::checked(inner, edges).expect("every inner vertex lies on a route by construction")
}

/// A graph satisfying degree equality and without idle edges: a union of
/// random routes, with idle edges contracted. At most `max_edges` edges
/// before contraction.
pub fn random_balanced_dag<R: Rng>(rng: &mut R, max_inner: usize, max_edges: usize) -> Dag {
    let inner = rng.gen_range(0..=max_inner);
    let mut routes: Vec<Vec<usize>> = Vec::new();
    let mut used = 0;
    loop {
        let mut stops: Vec<usize> = (1..=inner).filter(|_| rng.gen_bool(0.5)).collect();
        stops.sort_unstable();
        let len = stops.len() + 1;
        if used + len > max_edges && !routes.is_empty() {
            break;
        }
        used += len;
        routes.push(stops);
        if routes.len() >= 2 && rng.gen_bool(0.3) {
            break;
        }
    }
    // drop inner vertices no route visits, renumbering the rest
    let mut visited: Vec<usize> = routes.iter().flatten().copied().collect();
    visited.sort_unstable();
    visited.dedup();
    let kept = visited.len();
    let rename = |p: usize| visited.binary_search(&p).expect("visited") + 1;
    let mut edges = Vec::new();
    for stops in &routes {
        let mut path = vec![0];
        path.extend(stops.iter().map(|&p| rename(p)));
        path.push(kept + 1);
        for w in path.windows(2) {
            edges.push(Edge::new(format!("e{}", edges.len()), vertex(w[0], kept), vertex(w[1], kept)));
        }
    }
    let dag = Dag::checked(kept, edges).expect("a union of routes is valid");
    dag.contract_idle_edges().expect("graph has edges").dag
}

/// Brute force: does the edge set split into edge-disjoint routes?
pub fn has_route_partition(dag: &Dag) -> bool {
    let routes = enumerate_routes(dag);
    let mut used = vec![false; dag.edge_count()];
    partition_from(&routes, &mut used)
}

fn partition_from(routes: &[Route], used: &mut Vec<bool>) -> bool {
    let Some(first) = used.iter().position(|&u| !u) else { return true };
    for r in routes.iter().filter(|r| r.uses(first)) {
        if r.edges().iter().any(|&e| used[e]) {
            continue;
        }
        for &e in r.edges() {
            used[e] = true;
        }
        if partition_from(routes, used) {
            return true;
        }
        for &e in r.edges() {
            used[e] = false;
        }
    }
    false
}
