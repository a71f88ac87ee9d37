//! Hochschild–Kostant–Rosenberg maps for chains and for multivector fields.

use num_traits::One;

use super::exponent::Exponent;
use super::form::DiffForm;
use super::koszul::{permutation_sign, permutations};
use super::multivector::MultiVector;
use super::poly::PolyFunction;
use super::rational::{factorial, q, Q};
use crate::error::{Error, Result};
use crate::hochschild::{HochschildChain, MultiDiffOp};

/// `(a_0, …, a_p) ↦ (1/p!) a_0 da_1 ⋯ da_p`.
pub fn hkr_chain(a: &HochschildChain) -> DiffForm {
    let dim = a.dim();
    let mut out = DiffForm::zero(dim);
    for (key, c) in a.terms() {
        let p = key.len() - 1;
        let mut w = DiffForm::from_function(&PolyFunction::monomial(dim, key[0].clone(), c / factorial(p)));
        for e in &key[1..] {
            let da = DiffForm::from_function(&PolyFunction::monomial(dim, e.clone(), Q::one())).d();
            w = w.wedge(&da).expect("same dimension");
        }
        out = out.add(&w).expect("same dimension");
    }
    out
}

/// `ξ_1 ∧ ⋯ ∧ ξ_n ↦ (f_1, …, f_n) ↦ (1/n!) Σ_σ ε(σ) ξ_{σ(1)}(f_1) ⋯ ξ_{σ(n)}(f_n)`.
///
/// The input must be v-free and of a single θ-degree; the zero field maps to the zero 0-ary operator.
pub fn hkr_cochain(gamma: &MultiVector) -> Result<MultiDiffOp> {
    let dim = gamma.dim();
    if gamma.terms().keys().any(|k| k.vpow != 0) {
        return Err(Error::NonzeroVPower);
    }
    let Some((n, _)) = gamma.bidegree() else {
        return Err(Error::Unsupported("hkr_cochain of a field with mixed θ-degree".into()));
    };
    let mut op = MultiDiffOp::zero(dim, n);
    let perms = permutations(n);
    let norm = factorial(n);
    for (key, c) in gamma.terms() {
        let idx = key.theta.indices();
        let coef = PolyFunction::monomial(dim, key.exp.clone(), c / &norm);
        for sigma in &perms {
            let s = q(permutation_sign(sigma)? as i64);
            let alphas: Vec<Exponent> = sigma.iter().map(|&j| Exponent::unit(dim, idx[j])).collect();
            op.add_term(alphas, coef.scale(&s));
        }
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcore::rational::qr;

    fn x(i: usize) -> PolyFunction {
        PolyFunction::var(2, i)
    }

    #[test]
    fn chain_examples() {
        let a = HochschildChain::from_tuple(&[x(0)]).unwrap();
        assert_eq!(hkr_chain(&a), DiffForm::from_function(&x(0)));
        let a = HochschildChain::from_tuple(&[x(0), x(1)]).unwrap();
        assert_eq!(hkr_chain(&a), DiffForm::from_parts(&x(0), &[1]).unwrap());
        let a = HochschildChain::from_tuple(&[PolyFunction::one(2), x(0), x(1)]).unwrap();
        assert_eq!(hkr_chain(&a), DiffForm::volume(2).scale(&qr(1, 2)));
    }

    #[test]
    fn cochain_examples() {
        let pi = MultiVector::from_parts(&PolyFunction::one(2), &[0, 1]).unwrap();
        let op = hkr_cochain(&pi).unwrap();
        assert_eq!(op.apply(&[x(0), x(1)]).unwrap(), PolyFunction::constant(2, qr(1, 2)));
        assert_eq!(op.apply(&[x(1), x(0)]).unwrap(), PolyFunction::constant(2, qr(-1, 2)));
        let h = x(0).mul(&x(1)).unwrap();
        let op0 = hkr_cochain(&MultiVector::from_function(&h)).unwrap();
        assert_eq!(op0.arity(), 0);
        assert_eq!(op0.apply(&[]).unwrap(), h);
        assert!(hkr_cochain(&pi.times_v(1)).is_err());
    }
}
