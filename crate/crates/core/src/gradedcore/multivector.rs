//! Polynomial multivector fields on ℝ^d with formal powers of the degree-2 variable `v`.
//!
//! A term is `c · v^ℓ · θ_I · x^e` where `θ_ν = ∂/∂x_ν` are odd generators stored
//! in increasing order. All Grassmann signs derive from that storage order and
//! from left derivatives, except for the contraction, which peels θ's from the
//! right.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::exponent::Exponent;
use super::indexset::IndexSet;
use super::poly::{same_dim, PolyFunction};
use super::rational::{format_q, q, sign, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MvKey {
    pub vpow: u32,
    pub theta: IndexSet,
    pub exp: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiVector {
    dim: usize,
    terms: BTreeMap<MvKey, Q>,
}

impl MultiVector {
    pub fn zero(dim: usize) -> Self {
        MultiVector { dim, terms: BTreeMap::new() }
    }

    pub fn from_function(f: &PolyFunction) -> Self {
        let mut mv = MultiVector::zero(f.dim());
        for (e, c) in f.terms() {
            mv.add_term(MvKey { vpow: 0, theta: IndexSet::EMPTY, exp: e.clone() }, c.clone());
        }
        mv
    }

    /// `f · θ_{i_1} ⋯ θ_{i_k}` in the given (not necessarily sorted) order.
    pub fn from_parts(f: &PolyFunction, thetas: &[usize]) -> Result<Self> {
        for &i in thetas {
            if i >= f.dim() {
                return Err(Error::IndexOutOfRange { index: i, dim: f.dim() });
            }
        }
        let Some((set, neg)) = IndexSet::from_indices(thetas) else {
            return Ok(MultiVector::zero(f.dim()));
        };
        let mut mv = MultiVector::zero(f.dim());
        for (e, c) in f.terms() {
            let c = if neg { -c.clone() } else { c.clone() };
            mv.add_term(MvKey { vpow: 0, theta: set, exp: e.clone() }, c);
        }
        Ok(mv)
    }

    /// The coordinate vector field `∂_i`.
    pub fn partial_field(dim: usize, i: usize) -> Self {
        MultiVector::from_parts(&PolyFunction::one(dim), &[i]).expect("index in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MvKey, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: MvKey, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiVector) -> Result<MultiVector> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> MultiVector {
        if c.is_zero() {
            return MultiVector::zero(self.dim);
        }
        MultiVector {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
        }
    }

    pub fn neg(&self) -> MultiVector {
        self.scale(&-Q::one())
    }

    /// Multiplies by `v^ℓ`.
    pub fn times_v(&self, l: u32) -> MultiVector {
        MultiVector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (MvKey { vpow: k.vpow + l, ..k.clone() }, c.clone()))
                .collect(),
        }
    }

    pub fn mul_function(&self, f: &PolyFunction) -> Result<MultiVector> {
        self.wedge(&MultiVector::from_function(f))
    }

    /// Component with θ-degree `k` and v-power `l`.
    pub fn homogeneous_part(&self, k: usize, l: u32) -> MultiVector {
        MultiVector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(key, _)| key.theta.len() == k && key.vpow == l)
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    /// All `(k, ℓ)` bidegrees that occur.
    pub fn bidegrees(&self) -> Vec<(usize, u32)> {
        let mut v: Vec<_> = self.terms.keys().map(|k| (k.theta.len(), k.vpow)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `Some((k, ℓ))` when the field is homogeneous (zero counts as homogeneous of (0,0)).
    pub fn bidegree(&self) -> Option<(usize, u32)> {
        let b = self.bidegrees();
        match b.len() {
            0 => Some((0, 0)),
            1 => Some(b[0]),
            _ => None,
        }
    }

    /// The projection `γ ↦ γ̄` onto the v-free part.
    pub fn v_truncation(&self) -> MultiVector {
        MultiVector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.vpow == 0)
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn max_vpow(&self) -> u32 {
        self.terms.keys().map(|k| k.vpow).max().unwrap_or(0)
    }

    /// Coefficient of `v^ℓ`, as a v-free multivector.
    pub fn v_coefficient(&self, l: u32) -> MultiVector {
        MultiVector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.vpow == l)
                .map(|(k, c)| (MvKey { vpow: 0, ..k.clone() }, c.clone()))
                .collect(),
        }
    }

    /// Coefficient function of `v^ℓ θ_I`.
    pub fn coefficient(&self, l: u32, theta: IndexSet) -> PolyFunction {
        let mut f = PolyFunction::zero(self.dim);
        for (k, c) in &self.terms {
            if k.vpow == l && k.theta == theta {
                f.add_term(k.exp.clone(), c.clone());
            }
        }
        f
    }

    /// Degree in the graded Lie algebra `g_S[v]`: `k - 1 + 2ℓ`. Requires homogeneity.
    pub fn lie_degree(&self) -> Option<i64> {
        self.bidegree().map(|(k, l)| k as i64 - 1 + 2 * l as i64)
    }

    /// Degree in the shifted space `g_S[v][1]`: `k - 2 + 2ℓ`.
    pub fn shifted_degree(&self) -> Option<i64> {
        self.bidegree().map(|(k, l)| k as i64 - 2 + 2 * l as i64)
    }

    /// Grassmann (wedge) product; v-powers add.
    pub fn wedge(&self, other: &MultiVector) -> Result<MultiVector> {
        same_dim(self.dim, other.dim)?;
        let mut out = MultiVector::zero(self.dim);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let Some((theta, neg)) = k1.theta.product(k2.theta) else { continue };
                let key = MvKey { vpow: k1.vpow + k2.vpow, theta, exp: k1.exp.add(&k2.exp) };
                out.add_term(key, sign(neg) * c1 * c2);
            }
        }
        Ok(out)
    }

    /// `∂/∂x_i` applied to coefficients.
    pub fn partial_x(&self, i: usize) -> MultiVector {
        let mut out = MultiVector::zero(self.dim);
        for (k, c) in &self.terms {
            let e = k.exp.get(i);
            if e == 0 {
                continue;
            }
            let mut exp = k.exp.clone();
            exp.0[i] -= 1;
            out.add_term(MvKey { exp, ..k.clone() }, c * q(e as i64));
        }
        out
    }

    /// Left Grassmann derivative `∂/∂θ_i`.
    pub fn left_theta_derivative(&self, i: usize) -> MultiVector {
        let mut out = MultiVector::zero(self.dim);
        for (k, c) in &self.terms {
            if let Some((theta, neg)) = k.theta.left_derivative(i) {
                out.add_term(MvKey { theta, ..k.clone() }, sign(neg) * c);
            }
        }
        out
    }

    /// Right Grassmann derivative `· ∂⃖/∂θ_i`.
    pub fn right_theta_derivative(&self, i: usize) -> MultiVector {
        let mut out = MultiVector::zero(self.dim);
        for (k, c) in &self.terms {
            if let Some((theta, neg)) = k.theta.right_derivative(i) {
                out.add_term(MvKey { theta, ..k.clone() }, sign(neg) * c);
            }
        }
        out
    }

    fn theta_parts(&self) -> BTreeMap<usize, MultiVector> {
        let mut parts: BTreeMap<usize, MultiVector> = BTreeMap::new();
        for (k, c) in &self.terms {
            parts
                .entry(k.theta.len())
                .or_insert_with(|| MultiVector::zero(self.dim))
                .add_term(k.clone(), c.clone());
        }
        parts
    }

    /// Schouten–Nijenhuis bracket, extended v-bilinearly.
    ///
    /// On θ-homogeneous pieces of degrees `a`, `b`:
    /// `[α,β] = Σ_ν (α ∂⃖_θν)(∂_ν β) − (−1)^{(a−1)(b−1)} (β ∂⃖_θν)(∂_ν α)`.
    pub fn schouten(&self, other: &MultiVector) -> Result<MultiVector> {
        same_dim(self.dim, other.dim)?;
        let mut out = MultiVector::zero(self.dim);
        let pa = self.theta_parts();
        let pb = other.theta_parts();
        for (&a, alpha) in &pa {
            for (&b, beta) in &pb {
                let s = sign(((a as i64 - 1) * (b as i64 - 1)).rem_euclid(2) == 1);
                for nu in 0..self.dim {
                    let t1 = alpha.right_theta_derivative(nu).wedge(&beta.partial_x(nu))?;
                    let t2 = beta.right_theta_derivative(nu).wedge(&alpha.partial_x(nu))?;
                    out = out.add(&t1)?.sub(&t2.scale(&s))?;
                }
            }
        }
        Ok(out)
    }

    /// `div_Ω γ = Σ_ν ∂²γ / ∂x_ν ∂θ_ν` with left θ-derivatives; v-powers unchanged.
    pub fn divergence(&self) -> MultiVector {
        let mut out = MultiVector::zero(self.dim);
        for nu in 0..self.dim {
            let t = self.left_theta_derivative(nu).partial_x(nu);
            out = out.add(&t).expect("same dimension");
        }
        out
    }

    /// `δ_Ω = v · div_Ω`.
    pub fn delta_omega(&self) -> MultiVector {
        self.divergence().times_v(1)
    }

    /// Evaluates the v-free part at a rational point, giving coefficients per θ-monomial.
    pub fn eval_at(&self, point: &[Q]) -> Result<BTreeMap<(u32, IndexSet), Q>> {
        same_dim(self.dim, point.len())?;
        let mut out: BTreeMap<(u32, IndexSet), Q> = BTreeMap::new();
        for (k, c) in &self.terms {
            let val = PolyFunction::monomial(self.dim, k.exp.clone(), c.clone()).eval(point)?;
            *out.entry((k.vpow, k.theta)).or_insert_with(Q::zero) += val;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

pub fn wedge(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    a.wedge(b)
}

pub fn schouten(a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    a.schouten(b)
}

pub fn divergence(g: &MultiVector) -> MultiVector {
    g.divergence()
}

pub fn delta_omega(g: &MultiVector) -> MultiVector {
    g.delta_omega()
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_q(c))?;
            if k.vpow > 0 {
                write!(f, "·v^{}", k.vpow)?;
            }
            for (i, &e) in k.exp.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, e)?,
                }
            }
            for i in k.theta.iter() {
                write!(f, "·∂{}", i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(i: usize) -> MultiVector {
        MultiVector::partial_field(2, i)
    }

    fn x(i: usize) -> PolyFunction {
        PolyFunction::var(2, i)
    }

    #[test]
    fn wedge_examples() {
        let e12 = d(0).wedge(&d(1)).unwrap();
        assert_eq!(e12, MultiVector::from_parts(&PolyFunction::one(2), &[0, 1]).unwrap());
        assert_eq!(e12.terms().values().next().unwrap(), &q(1));
        assert_eq!(d(1).wedge(&d(0)).unwrap(), e12.neg());
        assert!(d(0).wedge(&d(0)).unwrap().is_zero());
    }

    #[test]
    fn schouten_examples() {
        // [∂1, x1 ∂2] = ∂2
        let x1d2 = MultiVector::from_parts(&x(0), &[1]).unwrap();
        assert_eq!(d(0).schouten(&x1d2).unwrap(), d(1));
        // constant bivector is Poisson
        let pi = d(0).wedge(&d(1)).unwrap();
        assert!(pi.schouten(&pi).unwrap().is_zero());
        // [x2 ∂1∧∂2, x1] = −x2 ∂2 (value confirmed by the Leibniz-rule oracle in tests/)
        let g = MultiVector::from_parts(&x(1), &[0, 1]).unwrap();
        let f = MultiVector::from_function(&x(0));
        let expected = MultiVector::from_parts(&x(1), &[1]).unwrap().neg();
        assert_eq!(g.schouten(&f).unwrap(), expected);
    }

    #[test]
    fn divergence_examples() {
        let x1d1 = MultiVector::from_parts(&x(0), &[0]).unwrap();
        assert_eq!(x1d1.divergence(), MultiVector::from_function(&PolyFunction::one(2)));
        let pi = d(0).wedge(&d(1)).unwrap();
        assert!(pi.divergence().is_zero());
        let x1pi = MultiVector::from_parts(&x(0), &[0, 1]).unwrap();
        assert_eq!(x1pi.divergence(), d(1));
    }

    #[test]
    fn delta_omega_examples() {
        let x1d1 = MultiVector::from_parts(&x(0), &[0]).unwrap();
        assert_eq!(
            x1d1.delta_omega(),
            MultiVector::from_function(&PolyFunction::one(2)).times_v(1)
        );
        let f = MultiVector::from_function(&x(0).mul(&x(1)).unwrap());
        assert!(f.delta_omega().is_zero());
    }

    #[test]
    fn degrees() {
        let pi = d(0).wedge(&d(1)).unwrap().times_v(1);
        assert_eq!(pi.bidegree(), Some((2, 1)));
        assert_eq!(pi.lie_degree(), Some(3));
        assert_eq!(pi.shifted_degree(), Some(2));
        let mixed = pi.add(&d(0)).unwrap();
        assert_eq!(mixed.bidegree(), None);
    }
}
