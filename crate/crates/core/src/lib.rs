//! Star-join graph constructions and the machinery to check their
//! chromatic and topological properties at desk scale.

pub mod certificate;
pub mod coloring;
pub mod complex;
pub mod construct;
pub mod dimacs;
pub mod error;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Distance, Graph, VertexLabel};
