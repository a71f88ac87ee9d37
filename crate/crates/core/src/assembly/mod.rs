//! Taylor components, low Kontsevich components, and the identities built from them.

pub mod affine;
pub mod closed;
pub mod component;
pub mod kontsevich;
pub mod miranda;
pub mod operator;
pub mod taylor;
pub mod unimodular;

pub use affine::{affine_property_check, is_affine};
pub use closed::{f0_closed, f1_closed};
pub use component::{graph_term, taylor_component, taylor_component_chain, taylor_component_with, Engine, GammaWord};
pub use kontsevich::{star_product, u1, u2, HalfPlaneWeights, StarSeries, WeightedCochain, U2_SIGN};
pub use miranda::{miranda_residual, miranda_terms, shuffles};
pub use operator::{black_edge_sign, graph_operator, MvDiffOp};
pub use taylor::{Component, Symbol, TaylorResult, Weights};
pub use unimodular::{check_unimodular, resummation_residual, trace_integrand, PoissonData, TraceIntegrand, UnimodularReport};
