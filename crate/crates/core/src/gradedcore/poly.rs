//! Polynomial functions on ℝ^d with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::exponent::Exponent;
use super::rational::{q, Q};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 6;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

pub(crate) fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

/// A polynomial `Σ c_e x^e`. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFunction {
    dim: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl PolyFunction {
    pub fn zero(dim: usize) -> Self {
        PolyFunction { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        let mut p = PolyFunction::zero(dim);
        p.add_term(Exponent::zero(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        PolyFunction::constant(dim, Q::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        PolyFunction::monomial(dim, Exponent::unit(dim, i), Q::one())
    }

    pub fn monomial(dim: usize, e: Exponent, c: Q) -> Self {
        assert_eq!(e.dim(), dim, "exponent length must equal dimension");
        let mut p = PolyFunction::zero(dim);
        p.add_term(e, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Result<Self> {
        let mut p = PolyFunction::zero(dim);
        for (e, c) in terms {
            same_dim(dim, e.dim())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Q> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for polynomials of x-degree 0 (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_zero)
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Exponent::zero(self.dim)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &PolyFunction) -> Result<PolyFunction> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyFunction) -> Result<PolyFunction> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyFunction {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> PolyFunction {
        if c.is_zero() {
            return PolyFunction::zero(self.dim);
        }
        PolyFunction {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyFunction) -> Result<PolyFunction> {
        same_dim(self.dim, other.dim)?;
        let mut out = PolyFunction::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// `∂/∂x_i` (0-based).
    pub fn partial(&self, i: usize) -> Result<PolyFunction> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
        }
        let mut out = PolyFunction::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f.0[i] -= 1;
            out.add_term(f, c * q(k as i64));
        }
        Ok(out)
    }

    /// `∂^α` for a multi-index `α`.
    pub fn derivative(&self, alpha: &Exponent) -> Result<PolyFunction> {
        same_dim(self.dim, alpha.dim())?;
        let mut out = PolyFunction::zero(self.dim);
        for (e, c) in &self.terms {
            let Some(rest) = e.checked_sub(alpha) else { continue };
            let mut coef = c.clone();
            for (i, &a) in alpha.0.iter().enumerate() {
                for j in 0..a {
                    coef *= q((e.get(i) - j) as i64);
                }
            }
            out.add_term(rest, coef);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Q]) -> Result<Q> {
        same_dim(self.dim, point.len())?;
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Splits into `(coefficient, monomial exponent)` pairs.
    pub fn monomials(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }
}

/// Binary operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    /// `∂/∂x_ν` applied to the first operand; the second is ignored.
    Partial(usize),
}

pub fn poly_arith(p: &PolyFunction, other: &PolyFunction, op: PolyOp) -> Result<PolyFunction> {
    same_dim(p.dim, other.dim)?;
    match op {
        PolyOp::Add => p.add(other),
        PolyOp::Mul => p.mul(other),
        PolyOp::Partial(i) => p.partial(i),
    }
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", super::rational::format_q(c))?;
            for (i, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
