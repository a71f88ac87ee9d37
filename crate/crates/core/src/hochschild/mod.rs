//! Normalized Hochschild and negative cyclic chains, multidifferential cochains and their action.

pub mod action;
pub mod chain;
pub mod cochain;

pub use action::{cochain_action, cochain_action_neg};
pub use chain::{b_plus_ub, connes_b, hoch_b, HochschildChain, NegCyclicChain};
pub use cochain::{gerstenhaber_bracket, gerstenhaber_product, hochschild_cochain_diff, MultiDiffOp};
