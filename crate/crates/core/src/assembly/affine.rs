//! Equivariance of F under affine vector fields.

use super::component::{taylor_component, Engine, GammaWord};
use super::taylor::TaylorResult;
use crate::error::{Error, Result};
use crate::gradedcore::MultiVector;
use crate::hochschild::NegCyclicChain;

/// True for `Σ_i (Σ_k c_{ik} x_k + d_i) ∂_i`.
pub fn is_affine(gamma: &MultiVector) -> bool {
    gamma.bidegree() == Some((1, 0)) && gamma.terms().keys().all(|k| k.exp.0.iter().sum::<u32>() <= 1)
}

/// `F_n(γ₁ γ₂⋯γ_n; a) − γ₁ ∧ F_{n−1}(γ₂⋯γ_n; a)`.
pub fn affine_property_check(engine: &Engine, gamma1: &MultiVector, rest: &GammaWord, a: &NegCyclicChain) -> Result<TaylorResult> {
    if !is_affine(gamma1) {
        return Err(Error::NotAffine);
    }
    let mut slots = vec![gamma1.clone()];
    slots.extend(rest.slots().iter().cloned());
    let full = GammaWord::new(rest.dim(), slots)?;
    let lhs = taylor_component(engine, &full, a)?;
    let rhs = taylor_component(engine, rest, a)?.map(|v| gamma1.wedge(v))?;
    Ok(lhs.sub(&rhs))
}
