//! Action of multidifferential cochains on Hochschild chains.

use crate::error::Result;
use crate::gradedcore::exponent::Exponent;
use crate::gradedcore::poly::{same_dim, PolyFunction};
use crate::gradedcore::rational::sign;

use super::chain::{HochschildChain, NegCyclicChain};
use super::cochain::MultiDiffOp;

fn mono(dim: usize, e: &Exponent) -> PolyFunction {
    PolyFunction::monomial(dim, e.clone(), num_traits::One::one())
}

/// `φ · a` for `φ` of arity `k` acting on `C_p → C_{p−k+1}`; zero when `k > p + 1`.
pub fn cochain_action(phi: &MultiDiffOp, a: &HochschildChain) -> Result<HochschildChain> {
    same_dim(phi.dim(), a.dim())?;
    let dim = a.dim();
    let k = phi.arity();
    let mut out = HochschildChain::zero(dim);
    if phi.is_zero() {
        return Ok(out);
    }
    for (key, c) in a.terms() {
        let p = key.len() - 1;
        if k > p + 1 {
            continue;
        }
        let pre = sign(((k as i64 - 1) * (p as i64 + 1)).rem_euclid(2) == 1);
        for i in 0..=(p + 1 - k) {
            let val = phi.apply_monomials(&key[i..i + k])?;
            if val.is_zero() {
                continue;
            }
            let mut entries: Vec<PolyFunction> = key[..i].iter().map(|e| mono(dim, e)).collect();
            entries.push(val);
            entries.extend(key[i + k..].iter().map(|e| mono(dim, e)));
            let s = sign(((i as i64) * (k as i64 - 1)).rem_euclid(2) == 1);
            out.add_poly_tuple(&entries, &(&pre * &s * c));
        }
        for i in (p + 2 - k).max(1)..=p {
            let wrap = i + k - p - 2;
            let mut args: Vec<Exponent> = key[i..].to_vec();
            args.extend_from_slice(&key[..=wrap]);
            let val = phi.apply_monomials(&args)?;
            if val.is_zero() {
                continue;
            }
            let mut entries = vec![val];
            entries.extend(key[wrap + 1..i].iter().map(|e| mono(dim, e)));
            let s = sign(((i * p) % 2) == 1);
            out.add_poly_tuple(&entries, &(&pre * &s * c));
        }
    }
    Ok(out)
}

/// `u`-linear extension of [`cochain_action`].
pub fn cochain_action_neg(phi: &MultiDiffOp, a: &NegCyclicChain) -> Result<NegCyclicChain> {
    let mut out = NegCyclicChain::zero(a.dim());
    for (j, c) in a.parts() {
        out.add_part(*j, &cochain_action(phi, c)?);
    }
    Ok(out)
}
