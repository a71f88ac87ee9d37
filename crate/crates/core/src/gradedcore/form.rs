//! Polynomial differential forms on ℝ^d, interior products and the Lie action of multivectors.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::exponent::Exponent;
use super::indexset::IndexSet;
use super::multivector::{MultiVector, MvKey};
use super::poly::{same_dim, PolyFunction};
use super::rational::{format_q, q, sign, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffForm {
    dim: usize,
    terms: BTreeMap<(IndexSet, Exponent), Q>,
}

impl DiffForm {
    pub fn zero(dim: usize) -> Self {
        DiffForm { dim, terms: BTreeMap::new() }
    }

    pub fn from_function(f: &PolyFunction) -> Self {
        let mut w = DiffForm::zero(f.dim());
        for (e, c) in f.terms() {
            w.add_term(IndexSet::EMPTY, e.clone(), c.clone());
        }
        w
    }

    /// `f dx_{i_1} ∧ ⋯ ∧ dx_{i_p}` in the given order.
    pub fn from_parts(f: &PolyFunction, dx: &[usize]) -> Result<Self> {
        for &i in dx {
            if i >= f.dim() {
                return Err(Error::IndexOutOfRange { index: i, dim: f.dim() });
            }
        }
        let mut w = DiffForm::zero(f.dim());
        let Some((set, neg)) = IndexSet::from_indices(dx) else { return Ok(w) };
        for (e, c) in f.terms() {
            w.add_term(set, e.clone(), sign(neg) * c);
        }
        Ok(w)
    }

    pub fn dx(dim: usize, i: usize) -> Self {
        DiffForm::from_parts(&PolyFunction::one(dim), &[i]).expect("index in range")
    }

    /// The standard volume form `dx_1 ∧ ⋯ ∧ dx_d`.
    pub fn volume(dim: usize) -> Self {
        let idx: Vec<usize> = (0..dim).collect();
        DiffForm::from_parts(&PolyFunction::one(dim), &idx).expect("indices in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<(IndexSet, Exponent), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, dx: IndexSet, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((dx, e)) {
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

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for ((s, e), c) in &other.terms {
            out.add_term(*s, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> DiffForm {
        if c.is_zero() {
            return DiffForm::zero(self.dim);
        }
        DiffForm { dim: self.dim, terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect() }
    }

    /// Degree-`p` component.
    pub fn part(&self, p: usize) -> DiffForm {
        DiffForm {
            dim: self.dim,
            terms: self.terms.iter().filter(|((s, _), _)| s.len() == p).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|(s, _)| s.len()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Coefficient function of `dx_I`.
    pub fn coefficient(&self, dx: IndexSet) -> PolyFunction {
        let mut f = PolyFunction::zero(self.dim);
        for ((s, e), c) in &self.terms {
            if *s == dx {
                f.add_term(e.clone(), c.clone());
            }
        }
        f
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        same_dim(self.dim, other.dim)?;
        let mut out = DiffForm::zero(self.dim);
        for ((s1, e1), c1) in &self.terms {
            for ((s2, e2), c2) in &other.terms {
                if let Some((s, neg)) = s1.product(*s2) {
                    out.add_term(s, e1.add(e2), sign(neg) * c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_function(&self, f: &PolyFunction) -> Result<DiffForm> {
        DiffForm::from_function(f).wedge(self)
    }

    /// de Rham differential.
    pub fn d(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.dim);
        for ((s, e), c) in &self.terms {
            for nu in 0..self.dim {
                let k = e.get(nu);
                if k == 0 {
                    continue;
                }
                let Some((s2, neg)) = s.insert_left(nu) else { continue };
                let mut e2 = e.clone();
                e2.0[nu] -= 1;
                out.add_term(s2, e2, sign(neg) * c * q(k as i64));
            }
        }
        out
    }

    /// Interior product with `∂_j`, a left derivative in `dx_j`.
    pub fn interior_partial(&self, j: usize) -> DiffForm {
        let mut out = DiffForm::zero(self.dim);
        for ((s, e), c) in &self.terms {
            if let Some((s2, neg)) = s.left_derivative(j) {
                out.add_term(s2, e.clone(), sign(neg) * c);
            }
        }
        out
    }

    /// `ι_γ ω`; for `γ = g ∂_{j_1}∧⋯∧∂_{j_k}` this is `g ι_{j_1} ⋯ ι_{j_k} ω` (innermost `ι_{j_k}`).
    pub fn interior(&self, gamma: &MultiVector) -> Result<DiffForm> {
        same_dim(self.dim, gamma.dim())?;
        let mut out = DiffForm::zero(self.dim);
        for (key, c) in gamma.terms() {
            if key.vpow != 0 {
                return Err(Error::NonzeroVPower);
            }
            let mut w = self.clone();
            for j in key.theta.indices().into_iter().rev() {
                w = w.interior_partial(j);
            }
            let g = DiffForm::from_function(&PolyFunction::monomial(self.dim, key.exp.clone(), c.clone()));
            out = out.add(&g.wedge(&w)?)?;
        }
        Ok(out)
    }
}

/// `γ ⌞ ω`: each `dx_ν` is paired with `θ_ν` by a right derivative, the rightmost form factor first.
pub fn contraction(gamma: &MultiVector, omega: &DiffForm) -> Result<MultiVector> {
    same_dim(gamma.dim(), omega.dim())?;
    let dim = gamma.dim();
    let mut out = MultiVector::zero(dim);
    for ((s, e), c) in omega.terms() {
        let mut g = gamma.clone();
        for i in s.indices().into_iter().rev() {
            g = g.right_theta_derivative(i);
        }
        let f = MultiVector::from_function(&PolyFunction::monomial(dim, e.clone(), c.clone()));
        out = out.add(&f.wedge(&g)?)?;
    }
    Ok(out)
}

/// Cartan-type action `L_γ ω = d ι_γ ω + (−1)^p ι_γ dω` for `γ ∈ Γ(∧^{p+1} TM)`.
pub fn lie_action(gamma: &MultiVector, omega: &DiffForm) -> Result<DiffForm> {
    same_dim(gamma.dim(), omega.dim())?;
    if gamma.terms().keys().any(|k| k.vpow != 0) {
        return Err(Error::NonzeroVPower);
    }
    let mut out = DiffForm::zero(gamma.dim());
    for (k, _) in gamma.bidegrees() {
        let part = gamma.homogeneous_part(k, 0);
        let p = k as i64 - 1;
        let first = omega.interior(&part)?.d();
        let second = omega.d().interior(&part)?.scale(&sign(p.rem_euclid(2) == 1));
        out = out.add(&first)?.add(&second)?;
    }
    Ok(out)
}

impl MultiVector {
    /// Bivector-valued helper: the multivector `ι`-dual of a form against the volume, `γ ↦ ι_γ Ω`.
    pub fn interior_volume(&self) -> Result<DiffForm> {
        DiffForm::volume(self.dim()).interior(self)
    }
}

/// Inverse of `γ ↦ ι_γ Ω` on v-free multivectors.
pub fn from_volume_interior(omega: &DiffForm) -> MultiVector {
    let dim = omega.dim();
    let vol = DiffForm::volume(dim);
    let mut out = MultiVector::zero(dim);
    // ι_{θ_J} Ω = ±dx_{J^c}; invert monomial by monomial.
    for ((s, e), c) in omega.terms() {
        let comp = IndexSet(((1u32 << dim) - 1) & !s.0);
        let probe = MultiVector::from_parts(&PolyFunction::one(dim), &comp.indices()).expect("in range");
        let image = vol.interior(&probe).expect("v-free");
        let sgn = image.terms().values().next().cloned().expect("nonzero image");
        out.add_term(MvKey { vpow: 0, theta: comp, exp: e.clone() }, c / sgn);
    }
    out
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((s, e), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_q(c))?;
            for (i, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, k)?,
                }
            }
            for i in s.iter() {
                write!(f, "·dx{}", i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcore::rational::qr;

    fn x(i: usize) -> PolyFunction {
        PolyFunction::var(2, i)
    }

    #[test]
    fn contraction_examples() {
        let d1 = MultiVector::partial_field(2, 0);
        assert_eq!(contraction(&d1, &DiffForm::dx(2, 0)).unwrap(), MultiVector::from_function(&PolyFunction::one(2)));
        let f = MultiVector::from_function(&x(0));
        assert_eq!(contraction(&f, &DiffForm::from_function(&PolyFunction::one(2))).unwrap(), f);
        let pi = MultiVector::from_parts(&PolyFunction::one(2), &[0, 1]).unwrap();
        assert_eq!(contraction(&pi, &DiffForm::dx(2, 0)).unwrap(), MultiVector::partial_field(2, 1).neg());
        assert_eq!(contraction(&pi, &DiffForm::dx(2, 1)).unwrap(), d1);
        assert_eq!(contraction(&pi, &DiffForm::volume(2)).unwrap(), MultiVector::from_function(&PolyFunction::one(2)));
    }

    #[test]
    fn d_squares_to_zero_and_leibniz() {
        let w = DiffForm::from_parts(&x(0).mul(&x(1)).unwrap().mul(&x(1)).unwrap(), &[0]).unwrap();
        assert!(w.d().d().is_zero());
        assert_eq!(w.d(), DiffForm::from_parts(&x(0).mul(&x(1)).unwrap().scale(&q(-2)), &[0, 1]).unwrap());
    }

    #[test]
    fn lie_action_examples() {
        let d1 = MultiVector::partial_field(2, 0);
        let w = DiffForm::from_parts(&x(0), &[1]).unwrap();
        assert_eq!(lie_action(&d1, &w).unwrap(), DiffForm::dx(2, 1));
        let pi = MultiVector::from_parts(&x(0), &[0, 1]).unwrap();
        assert!(lie_action(&pi, &DiffForm::from_function(&PolyFunction::one(2))).unwrap().is_zero());
        let f = MultiVector::from_function(&x(1));
        let closed = DiffForm::dx(2, 0);
        assert_eq!(lie_action(&f, &closed).unwrap(), DiffForm::from_parts(&PolyFunction::one(2), &[1, 0]).unwrap());
        assert!(lie_action(&d1.times_v(1), &w).is_err());
    }

    #[test]
    fn volume_interior_round_trip() {
        let g = MultiVector::from_parts(&x(1).scale(&qr(3, 2)), &[0]).unwrap();
        let w = g.interior_volume().unwrap();
        assert_eq!(from_volume_interior(&w), g);
    }
}
