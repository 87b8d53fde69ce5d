//! Strongly planar DAGs, their dual posets and order polytopes.

pub mod duality;
pub mod embedding;
pub mod equivalence;
pub mod poset;

pub use duality::{
    antichain_hasse_embedding, chain_hasse_embedding, flow_to_order, order_to_flow, poset_to_dag, truncated_dual,
    Duality, HasseEmbedding, Node,
};
pub use embedding::{planar_framing, topmost_decomposition, trace_faces, PlanarEmbedding, Tracing};
pub use equivalence::{verify_equivalence, Check, EquivalenceReport};
pub use poset::{
    canonical_triangulation, equatorial_chains, equatorial_complex, is_equatorial_chain, is_rank_constant,
    rank_constant_filters, rw_equatorial_triangulation, Poset, PosetSpec,
};
