//! The quadratic relation satisfied by the Taylor components, as a residual.

use super::component::{taylor_component, Engine, GammaWord};
use super::kontsevich::{u1, u2, HalfPlaneWeights, WeightedCochain};
use super::taylor::TaylorResult;
use crate::error::{Error, Result};
use crate::gradedcore::rational::sign;
use crate::gradedcore::{koszul_sign, MultiVector, Q};
use crate::hochschild::NegCyclicChain;

/// Subsets of size k of 0..n in lexicographic order, each followed by its complement: the (k, n−k) shuffles.
pub fn shuffles(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut perm: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        perm.extend((0..n).filter(|i| mask & (1 << i) == 0));
        out.push(perm);
    }
    out.sort();
    out
}

fn q_sign(s: i8) -> Q {
    Q::from_integer(s.into())
}

/// Splits a chain into its (u-power, p)-homogeneous pieces.
fn homogeneous_parts(a: &NegCyclicChain) -> Vec<(usize, NegCyclicChain)> {
    let mut out = Vec::new();
    for (&j, chain) in a.parts() {
        for p in chain.degrees() {
            out.push((p, NegCyclicChain::from_u_power(j, chain.part(p))));
        }
    }
    out
}

/// `U_r(γ̄_{i_1}, …, γ̄_{i_r})` for r ∈ {1, 2}.
fn kontsevich_component(hp: &HalfPlaneWeights, bars: &[MultiVector]) -> Result<WeightedCochain> {
    match bars {
        [g] => Ok(WeightedCochain::exact(u1(g)?)),
        [g1, g2] => u2(hp, g1, g2),
        _ => Err(Error::Unsupported(format!("U_{} is not available", bars.len()))),
    }
}

/// Left side minus right side of the relation, for n ≤ 2:
///
/// `F_n(δ_Ω γ; a) + (−1)^{|γ|+p} F_n(γ; (b+uB)a)
///  + Σ_{k<n} Σ_σ (−1)^{|γ|−1} ε(σ;γ) F_k(γ_{σ(1..k)}; U_{n−k}(γ̄_{σ(k+1..n)})·a)
///  + Σ_{i<j} ε_{ij} F_{n−1}((−1)^{|γ_i|−1}[γ_i,γ_j] γ_1⋯γ̂_i⋯γ̂_j⋯γ_n; a) − div_Ω F_n(γ; a)`.
pub fn miranda_residual(engine: &Engine, hp: &HalfPlaneWeights, gamma: &GammaWord, a: &NegCyclicChain) -> Result<TaylorResult> {
    let terms = miranda_terms(engine, hp, gamma, a)?;
    Ok(terms.iter().fold(TaylorResult::zero(gamma.dim()), |acc, (_, t)| acc.add(t)))
}

/// The five groups of the relation, labelled, with their signs applied; they sum to the residual.
pub fn miranda_terms(engine: &Engine, hp: &HalfPlaneWeights, gamma: &GammaWord, a: &NegCyclicChain) -> Result<Vec<(&'static str, TaylorResult)>> {
    let n = gamma.len();
    if n > 2 {
        return Err(Error::Unsupported(format!("quadratic relation residual for n = {n}")));
    }
    let dim = gamma.dim();
    let degs = gamma.degrees();
    let total = gamma.total_degree();
    let ctx = gamma.koszul();
    let mut groups = Vec::new();
    let mut out = TaylorResult::zero(dim);

    let mut before = 0i64;
    for i in 0..n {
        let d = gamma.slots()[i].delta_omega();
        if !d.is_zero() {
            let mut slots = gamma.slots().to_vec();
            slots[i] = d;
            let word = GammaWord::new(dim, slots)?;
            out = out.add(&taylor_component(engine, &word, a)?.scale(&sign(before.rem_euclid(2) == 1)));
        }
        before += degs[i];
    }
    groups.push(("delta", std::mem::replace(&mut out, TaylorResult::zero(dim))));

    for (p, part) in homogeneous_parts(a) {
        let s = sign((total + p as i64).rem_euclid(2) == 1);
        out = out.add(&taylor_component(engine, gamma, &part.b_plus_ub())?.scale(&s));
    }
    groups.push(("boundary", std::mem::replace(&mut out, TaylorResult::zero(dim))));

    let pre = sign((total - 1).rem_euclid(2) == 1);
    for k in 0..n {
        for sigma in shuffles(n, k) {
            let eps = q_sign(koszul_sign(&sigma, &ctx)?);
            let bars: Vec<MultiVector> = sigma[k..].iter().map(|&i| gamma.slots()[i].v_truncation()).collect();
            if bars.iter().any(MultiVector::is_zero) {
                continue;
            }
            let front = gamma.permuted(&sigma[..k]);
            let u = kontsevich_component(hp, &bars)?;
            let term = u.act_then(a, |b| taylor_component(engine, &front, b))?;
            out = out.add(&term.scale(&(&pre * &eps)));
        }
    }
    groups.push(("kontsevich", std::mem::replace(&mut out, TaylorResult::zero(dim))));

    for i in 0..n {
        for j in i + 1..n {
            let mut perm = vec![i, j];
            perm.extend((0..n).filter(|&l| l != i && l != j));
            let eps = q_sign(koszul_sign(&perm, &ctx)?);
            let bracket = gamma.slots()[i].schouten(&gamma.slots()[j])?;
            if bracket.is_zero() {
                continue;
            }
            let mut slots = vec![bracket.scale(&sign((degs[i] - 1).rem_euclid(2) == 1))];
            slots.extend(perm[2..].iter().map(|&l| gamma.slots()[l].clone()));
            let word = GammaWord::new(dim, slots)?;
            out = out.add(&taylor_component(engine, &word, a)?.scale(&eps));
        }
    }

    groups.push(("bracket", out));
    let f = taylor_component(engine, gamma, a)?;
    groups.push(("divergence", f.map(|v| Ok(v.divergence()))?.scale(&-Q::from_integer(1.into()))));
    Ok(groups)
}
