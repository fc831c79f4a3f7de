//! Edge-gluing of bipartite patterns and small exact Turán numbers.

pub mod bounds;
pub mod constructions;
pub mod embedding;
pub mod error;
pub mod extremal;
pub mod gluing;
pub mod graph;
pub mod supersat;

pub use error::{Error, Result};
pub use graph::{Graph, Sign, SignedBipartiteGraph};
