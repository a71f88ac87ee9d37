//! Closed forms of the low Taylor components.

use super::taylor::TaylorResult;
use crate::error::Result;
use crate::gradedcore::rational::sign;
use crate::gradedcore::{contraction, hkr_chain, MultiVector};
use crate::hochschild::NegCyclicChain;

/// `F₀(a)`: the function a₀ of the p = 0 part, u-powers kept.
pub fn f0_closed(a: &NegCyclicChain) -> TaylorResult {
    let mut out = TaylorResult::zero(a.dim());
    for (&j, chain) in a.parts() {
        let f = hkr_chain(&chain.part(0)).coefficient(Default::default());
        out = out.add(&TaylorResult::exact(j, MultiVector::from_function(&f)));
    }
    out
}

/// `F₁(γ v^ℓ; a) = (−1)^p u^s γ⌞H(a)` for k ≥ p and s = k + ℓ − p − 1 ≥ 0, and 0 otherwise.
pub fn f1_closed(gamma: &MultiVector, a: &NegCyclicChain) -> Result<TaylorResult> {
    let mut out = TaylorResult::zero(a.dim());
    for (k, l) in gamma.bidegrees() {
        let g = gamma.homogeneous_part(k, l).v_coefficient(l);
        for (&j, chain) in a.parts() {
            for p in chain.degrees() {
                let s = k as i64 + l as i64 - p as i64 - 1;
                if k < p || s < 0 {
                    continue;
                }
                let value = contraction(&g, &hkr_chain(&chain.part(p)))?.scale(&sign(p % 2 == 1));
                out = out.add(&TaylorResult::exact(s as u32 + j, value));
            }
        }
    }
    Ok(out)
}
