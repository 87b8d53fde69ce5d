//! Exact construction and verification of equatorial flow triangulations of
//! Gorenstein flow polytopes.
//!
//! Everything is integer-exact. The pipeline runs from a vertex-ordered
//! multigraph ([`Dag`]) through route decompositions and framings to DKK
//! triangulations, the equatorial sphere, the reflexive quotient polytope and,
//! for strongly planar graphs, the order polytope of the dual poset.

pub mod catalog;
pub mod clique;
pub mod complex;
pub mod dag;
pub mod dkk;
pub mod equatorial;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod planar;
pub mod quotient;
pub mod random;
pub mod routes;

pub use complex::{SimplicialComplex, Triangulation};
pub use dag::{Contraction, Dag, Edge, ValidationReport, Vertex, Violation};
pub use error::{Error, Result};
pub use geometry::HStarData;
pub use planar::{PlanarEmbedding, Poset};
pub use routes::{Framing, Route, RouteDecomposition};
