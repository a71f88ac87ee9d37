//! Graph-sum formality morphism from negative cyclic chains to multivector fields on ℝ^d.

pub mod assembly;
pub mod error;
pub mod gradedcore;
pub mod graphs;
pub mod hochschild;
pub mod random;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
