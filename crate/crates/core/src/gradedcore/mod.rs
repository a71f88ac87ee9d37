//! Exact polynomial, Grassmann and multivector calculus on ℝ^d.

pub mod exponent;
pub mod form;
pub mod hkr;
pub mod indexset;
pub mod json;
pub mod koszul;
pub mod multivector;
pub mod poly;
pub mod rational;

pub use exponent::Exponent;
pub use form::{contraction, lie_action, DiffForm};
pub use hkr::{hkr_chain, hkr_cochain};
pub use indexset::IndexSet;
pub use koszul::{koszul_sign, permutation_sign, KoszulContext};
pub use multivector::{delta_omega, divergence, schouten, wedge, MultiVector, MvKey};
pub use poly::{poly_arith, PolyFunction, PolyOp, MAX_DIM};
pub use rational::Q;
