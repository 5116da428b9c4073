//! Structural algorithms for directed graphs: havens, linked sets, butterfly
//! minors, planar rerouting and cylindrical grid extraction, each paired with
//! a checker that re-verifies its output.

pub mod digraph;
pub mod embedding;
pub mod combinatorics;
pub mod error;
pub mod generators;
pub mod gridextract;
pub mod havens;
pub mod linkages;
pub mod minors;
pub mod report;
pub mod rerouting;

pub use digraph::{Digraph, DirectedPath, Edge, EdgeId, Subdigraph, Vertex, VertexSet};
pub use error::{Error, Result};
pub use report::Report;
