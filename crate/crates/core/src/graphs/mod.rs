//! Admissible graphs, their enumeration and the edge boundary operation.

pub mod enumerate;
pub mod graph;

pub use enumerate::{enumerate, enumerate_with_degrees};
pub use graph::{two_vertex_example, AdmissibleGraph, EdgeRef, GraphClassKey, RuleViolation, Target};
