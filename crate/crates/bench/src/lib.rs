//! Shared inputs for the benchmarks.

use flowtri::catalog;
use flowtri::random::{random_balanced_dag, rng};
use flowtri::routes::{route_decomposition, RouteDecomposition};
use flowtri::Dag;

/// Balanced graphs with their lexicographic decompositions, smallest first.
pub fn balanced_inputs() -> Vec<(String, Dag, RouteDecomposition)> {
    let mut graphs: Vec<(String, Dag)> =
        vec![("D1".into(), catalog::d1()), ("D2".into(), catalog::d2()), ("D3".into(), catalog::d3())];
    graphs.push(("spine".into(), catalog::spine()));
    // fixed seed, so the largest input is stable across runs
    let mut r = rng(11);
    let big = (0..200).map(|_| random_balanced_dag(&mut r, 4, 10)).max_by_key(|g| (g.dimension(), g.edge_count()));
    graphs.extend(big.map(|g| ("random".to_string(), g)));
    graphs
        .into_iter()
        .map(|(name, g)| {
            let dec = route_decomposition(&g).expect("inputs are balanced");
            (name, g, dec)
        })
        .collect()
}
