//! Multidifferential operators with polynomial coefficients and their Gerstenhaber algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gradedcore::exponent::Exponent;
use crate::gradedcore::poly::{same_dim, PolyFunction};
use crate::gradedcore::rational::{factorial, sign, Q};

/// `φ(f_1, …, f_k) = Σ c_{α}(x) ∂^{α_1} f_1 ⋯ ∂^{α_k} f_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDiffOp {
    dim: usize,
    arity: usize,
    terms: BTreeMap<Vec<Exponent>, PolyFunction>,
}

fn multinomial(total: &Exponent, parts: &[&Exponent]) -> Q {
    let mut c = Q::one();
    for nu in 0..total.dim() {
        c *= factorial(total.get(nu) as usize);
        for p in parts {
            c /= factorial(p.get(nu) as usize);
        }
    }
    c
}

/// All ways to write `alpha` as an ordered sum of `n` multi-indices.
fn compositions(alpha: &Exponent, n: usize) -> Vec<Vec<Exponent>> {
    if n == 0 {
        return if alpha.is_zero() { vec![vec![]] } else { vec![] };
    }
    if n == 1 {
        return vec![vec![alpha.clone()]];
    }
    let mut out = Vec::new();
    for first in alpha.divisors() {
        let rest = alpha.checked_sub(&first).expect("divisor");
        for mut tail in compositions(&rest, n - 1) {
            let mut v = vec![first.clone()];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

impl MultiDiffOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        MultiDiffOp { dim, arity, terms: BTreeMap::new() }
    }

    /// Multiplication `μ(f, g) = fg`.
    pub fn mu(dim: usize) -> Self {
        let mut op = MultiDiffOp::zero(dim, 2);
        op.add_term(vec![Exponent::zero(dim); 2], PolyFunction::one(dim));
        op
    }

    /// The identity operator of arity one.
    pub fn identity(dim: usize) -> Self {
        let mut op = MultiDiffOp::zero(dim, 1);
        op.add_term(vec![Exponent::zero(dim)], PolyFunction::one(dim));
        op
    }

    /// The 0-ary operator returning `h`.
    pub fn constant(h: &PolyFunction) -> Self {
        let mut op = MultiDiffOp::zero(h.dim(), 0);
        op.add_term(vec![], h.clone());
        op
    }

    /// `c(x) ∂^{α_1} ⊗ ⋯ ⊗ ∂^{α_k}`.
    pub fn monomial(alphas: Vec<Exponent>, c: PolyFunction) -> Self {
        let mut op = MultiDiffOp::zero(c.dim(), alphas.len());
        op.add_term(alphas, c);
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Cochain degree `arity − 1`.
    pub fn degree(&self) -> i64 {
        self.arity as i64 - 1
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Exponent>, PolyFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, alphas: Vec<Exponent>, c: PolyFunction) {
        assert_eq!(alphas.len(), self.arity, "multi-index count must equal the arity");
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&alphas).unwrap_or_else(|| PolyFunction::zero(self.dim));
        let sum = cur.add(&c).expect("same dimension");
        if !sum.is_zero() {
            self.terms.insert(alphas, sum);
        }
    }

    fn check_compatible(&self, other: &MultiDiffOp) -> Result<()> {
        same_dim(self.dim, other.dim)?;
        if self.arity != other.arity {
            return Err(Error::Unsupported(format!("adding operators of arity {} and {}", self.arity, other.arity)));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiDiffOp) -> Result<MultiDiffOp> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiDiffOp) -> Result<MultiDiffOp> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> MultiDiffOp {
        if c.is_zero() {
            return MultiDiffOp::zero(self.dim, self.arity);
        }
        MultiDiffOp {
            dim: self.dim,
            arity: self.arity,
            terms: self.terms.iter().map(|(k, f)| (k.clone(), f.scale(c))).collect(),
        }
    }

    /// Left multiplication of every coefficient by `g`.
    pub fn mul_function(&self, g: &PolyFunction) -> Result<MultiDiffOp> {
        let mut out = MultiDiffOp::zero(self.dim, self.arity);
        for (k, f) in &self.terms {
            out.add_term(k.clone(), f.mul(g)?);
        }
        Ok(out)
    }

    pub fn apply(&self, args: &[PolyFunction]) -> Result<PolyFunction> {
        if args.len() != self.arity {
            return Err(Error::Unsupported(format!("operator of arity {} applied to {} arguments", self.arity, args.len())));
        }
        for a in args {
            same_dim(self.dim, a.dim())?;
        }
        let mut out = PolyFunction::zero(self.dim);
        for (alphas, c) in &self.terms {
            let mut term = c.clone();
            for (alpha, f) in alphas.iter().zip(args) {
                term = term.mul(&f.derivative(alpha)?)?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Applies the operator to monomials `x^{e_1}, …, x^{e_k}`.
    pub fn apply_monomials(&self, args: &[Exponent]) -> Result<PolyFunction> {
        let polys: Vec<PolyFunction> = args.iter().map(|e| PolyFunction::monomial(self.dim, e.clone(), Q::one())).collect();
        self.apply(&polys)
    }

    /// Partial composition `φ ∘_k ψ = φ ∘ (id^{⊗k} ⊗ ψ ⊗ id^{⊗(arity φ − 1 − k)})`.
    pub fn compose_at(&self, k: usize, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
        same_dim(self.dim, psi.dim)?;
        if k >= self.arity {
            return Err(Error::Unsupported(format!("composition slot {} for arity {}", k, self.arity)));
        }
        let b = psi.arity;
        let mut out = MultiDiffOp::zero(self.dim, self.arity + b - 1);
        for (alphas, c) in &self.terms {
            let alpha = &alphas[k];
            for (betas, g) in &psi.terms {
                for split in compositions(alpha, b + 1) {
                    let refs: Vec<&Exponent> = split.iter().collect();
                    let coef = multinomial(alpha, &refs);
                    let dg = g.derivative(&split[0])?;
                    if dg.is_zero() {
                        continue;
                    }
                    let mut key = Vec::with_capacity(self.arity + b - 1);
                    key.extend_from_slice(&alphas[..k]);
                    for (j, beta) in betas.iter().enumerate() {
                        key.push(beta.add(&split[j + 1]));
                    }
                    key.extend_from_slice(&alphas[k + 1..]);
                    out.add_term(key, c.mul(&dg)?.scale(&coef));
                }
            }
        }
        Ok(out)
    }

    /// Gerstenhaber product `φ • ψ = Σ_k (−1)^{|ψ|(|φ|−k)} φ ∘_k ψ`.
    pub fn gerstenhaber_product(&self, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
        same_dim(self.dim, psi.dim)?;
        let out_arity = (self.arity + psi.arity).saturating_sub(1);
        let mut out = MultiDiffOp::zero(self.dim, out_arity);
        for k in 0..self.arity {
            let s = sign((psi.degree() * (self.degree() - k as i64)).rem_euclid(2) == 1);
            out = out.add(&self.compose_at(k, psi)?.scale(&s))?;
        }
        Ok(out)
    }

    /// Gerstenhaber bracket `[φ, ψ] = φ • ψ − (−1)^{|φ||ψ|} ψ • φ`.
    pub fn gerstenhaber_bracket(&self, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
        let s = sign((self.degree() * psi.degree()).rem_euclid(2) == 1);
        let a = self.gerstenhaber_product(psi)?;
        let b = psi.gerstenhaber_product(self)?.scale(&s);
        if a.is_zero() && b.is_zero() {
            return Ok(MultiDiffOp::zero(self.dim, (self.arity + psi.arity).saturating_sub(1)));
        }
        a.sub(&b)
    }

    /// Hochschild differential `[μ, φ]`.
    pub fn hochschild_diff(&self) -> Result<MultiDiffOp> {
        MultiDiffOp::mu(self.dim).gerstenhaber_bracket(self)
    }
}

pub fn gerstenhaber_product(phi: &MultiDiffOp, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
    phi.gerstenhaber_product(psi)
}

pub fn gerstenhaber_bracket(phi: &MultiDiffOp, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
    phi.gerstenhaber_bracket(psi)
}

pub fn hochschild_cochain_diff(phi: &MultiDiffOp) -> Result<MultiDiffOp> {
    phi.hochschild_diff()
}

impl fmt::Display for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alphas, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}]", c)?;
            for (slot, a) in alphas.iter().enumerate() {
                write!(f, " ⊗{}", slot + 1)?;
                if a.is_zero() {
                    write!(f, "id")?;
                }
                for (nu, &k) in a.0.iter().enumerate() {
                    for _ in 0..k {
                        write!(f, "∂{}", nu + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcore::rational::q;

    fn x(i: usize) -> PolyFunction {
        PolyFunction::var(2, i)
    }

    fn vector_field(coef: PolyFunction, i: usize) -> MultiDiffOp {
        MultiDiffOp::monomial(vec![Exponent::unit(2, i)], coef)
    }

    #[test]
    fn composition_of_unary_operators() {
        let xi = vector_field(x(0), 0);
        let eta = vector_field(x(1), 0);
        let comp = xi.gerstenhaber_product(&eta).unwrap();
        let f = x(0).mul(&x(0)).unwrap();
        let direct = xi.apply(&[eta.apply(std::slice::from_ref(&f)).unwrap()]).unwrap();
        assert_eq!(comp.apply(&[f]).unwrap(), direct);
    }

    #[test]
    fn mu_product_and_bracket() {
        let mu = MultiDiffOp::mu(2);
        let prod = mu.gerstenhaber_product(&mu).unwrap();
        // (fg)h − f(gh) with |μ| = 1
        let args = [x(0), x(1), x(0).add(&x(1)).unwrap()];
        assert!(prod.apply(&args).unwrap().is_zero());
        assert!(mu.gerstenhaber_bracket(&mu).unwrap().is_zero());
    }

    #[test]
    fn insertion_of_constant() {
        let mu = MultiDiffOp::mu(2);
        let c = MultiDiffOp::constant(&x(1));
        let prod = mu.gerstenhaber_product(&c).unwrap();
        assert_eq!(prod.arity(), 1);
        // k = 0: (−1)^{−1·1} = −1, k = 1: (−1)^0 = +1, so c·f − c·f = 0
        assert!(prod.is_zero());
    }

    #[test]
    fn bracket_with_function() {
        let xi = vector_field(x(1), 0);
        let f = MultiDiffOp::constant(&x(0).mul(&x(0)).unwrap());
        let br = xi.gerstenhaber_bracket(&f).unwrap();
        let expected = MultiDiffOp::constant(&x(0).mul(&x(1)).unwrap().scale(&q(2)));
        assert_eq!(br, expected);
    }

    #[test]
    fn leibniz_composition() {
        let d1 = vector_field(PolyFunction::one(2), 0);
        let g = x(0).mul(&x(1)).unwrap();
        let mult = MultiDiffOp::monomial(vec![Exponent::zero(2)], g.clone());
        let comp = d1.compose_at(0, &mult).unwrap();
        let f = x(0).mul(&x(0)).unwrap();
        assert_eq!(comp.apply(std::slice::from_ref(&f)).unwrap(), g.mul(&f).unwrap().partial(0).unwrap());
    }
}
