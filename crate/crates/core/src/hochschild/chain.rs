//! Normalized Hochschild chains and their negative cyclic extension.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::gradedcore::exponent::Exponent;
use crate::gradedcore::poly::{same_dim, PolyFunction};
use crate::gradedcore::rational::{format_q, sign, Q};

/// A rational combination of tuples of monomials `(a_0, …, a_p)`.
///
/// Tuples are expanded multilinearly into monomial entries. A tuple with a
/// constant entry in a position `≥ 1` is zero in the normalized complex and is
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HochschildChain {
    dim: usize,
    terms: BTreeMap<Vec<Exponent>, Q>,
}

impl HochschildChain {
    pub fn zero(dim: usize) -> Self {
        HochschildChain { dim, terms: BTreeMap::new() }
    }

    /// The chain `(a_0, …, a_p)`, expanded multilinearly and normalized.
    pub fn from_tuple(entries: &[PolyFunction]) -> Result<Self> {
        assert!(!entries.is_empty(), "a Hochschild tuple has at least one entry");
        let dim = entries[0].dim();
        for e in entries {
            same_dim(dim, e.dim())?;
        }
        let mut out = HochschildChain::zero(dim);
        let mut partial: Vec<(Vec<Exponent>, Q)> = vec![(Vec::new(), Q::one())];
        for (pos, f) in entries.iter().enumerate() {
            let mut next = Vec::new();
            for (key, c) in &partial {
                for (e, a) in f.terms() {
                    if pos > 0 && e.is_zero() {
                        continue;
                    }
                    let mut k = key.clone();
                    k.push(e.clone());
                    next.push((k, c * a));
                }
            }
            partial = next;
        }
        for (k, c) in partial {
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Exponent>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · (x^{e_0}, …, x^{e_p})`, dropping it if some `e_i`, `i ≥ 1`, is constant.
    pub fn add_term(&mut self, key: Vec<Exponent>, c: Q) {
        if c.is_zero() || key.iter().skip(1).any(|e| e.is_zero()) {
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

    /// Adds `c · (f_0, …, f_p)` for polynomial entries, expanding multilinearly.
    pub fn add_poly_tuple(&mut self, entries: &[PolyFunction], c: &Q) {
        let mut partial: Vec<(Vec<Exponent>, Q)> = vec![(Vec::new(), c.clone())];
        for (pos, f) in entries.iter().enumerate() {
            let mut next = Vec::new();
            for (key, a) in &partial {
                for (e, b) in f.terms() {
                    if pos > 0 && e.is_zero() {
                        continue;
                    }
                    let mut k = key.clone();
                    k.push(e.clone());
                    next.push((k, a * b));
                }
            }
            partial = next;
        }
        for (k, a) in partial {
            self.add_term(k, a);
        }
    }

    pub fn add(&self, other: &HochschildChain) -> Result<HochschildChain> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HochschildChain) -> Result<HochschildChain> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> HochschildChain {
        if c.is_zero() {
            return HochschildChain::zero(self.dim);
        }
        HochschildChain { dim: self.dim, terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect() }
    }

    /// Chain degrees `p` that occur.
    pub fn degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|k| k.len() - 1).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Component of chain degree `p`.
    pub fn part(&self, p: usize) -> HochschildChain {
        HochschildChain {
            dim: self.dim,
            terms: self.terms.iter().filter(|(k, _)| k.len() == p + 1).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Hochschild boundary.
    pub fn b(&self) -> HochschildChain {
        let mut out = HochschildChain::zero(self.dim);
        for (key, c) in &self.terms {
            let p = key.len() - 1;
            for i in 0..p {
                let mut k = Vec::with_capacity(p);
                k.extend_from_slice(&key[..i]);
                k.push(key[i].add(&key[i + 1]));
                k.extend_from_slice(&key[i + 2..]);
                out.add_term(k, sign(i % 2 == 1) * c);
            }
            if p > 0 {
                let mut k = Vec::with_capacity(p);
                k.push(key[p].add(&key[0]));
                k.extend_from_slice(&key[1..p]);
                out.add_term(k, sign(p % 2 == 1) * c);
            }
        }
        out
    }

    /// Connes' operator `B(a_0,…,a_p) = Σ_i (−1)^{ip} (1, a_i, …, a_p, a_0, …, a_{i−1})`.
    pub fn connes_b(&self) -> HochschildChain {
        let mut out = HochschildChain::zero(self.dim);
        for (key, c) in &self.terms {
            let p = key.len() - 1;
            for i in 0..=p {
                let mut k = Vec::with_capacity(p + 2);
                k.push(Exponent::zero(self.dim));
                k.extend_from_slice(&key[i..]);
                k.extend_from_slice(&key[..i]);
                out.add_term(k, sign((i * p) % 2 == 1) * c);
            }
        }
        out
    }
}

pub fn hoch_b(a: &HochschildChain) -> HochschildChain {
    a.b()
}

pub fn connes_b(a: &HochschildChain) -> HochschildChain {
    a.connes_b()
}

/// A polynomial in `u` with Hochschild chain coefficients; `u^j (a_0,…,a_p)` has degree `2j − p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NegCyclicChain {
    dim: usize,
    parts: BTreeMap<u32, HochschildChain>,
}

impl NegCyclicChain {
    pub fn zero(dim: usize) -> Self {
        NegCyclicChain { dim, parts: BTreeMap::new() }
    }

    pub fn from_chain(a: HochschildChain) -> Self {
        NegCyclicChain::from_u_power(0, a)
    }

    pub fn from_u_power(j: u32, a: HochschildChain) -> Self {
        let mut out = NegCyclicChain::zero(a.dim());
        out.add_part(j, &a);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &BTreeMap<u32, HochschildChain> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn u_coefficient(&self, j: u32) -> HochschildChain {
        self.parts.get(&j).cloned().unwrap_or_else(|| HochschildChain::zero(self.dim))
    }

    pub fn add_part(&mut self, j: u32, a: &HochschildChain) {
        let cur = self.parts.remove(&j).unwrap_or_else(|| HochschildChain::zero(self.dim));
        let sum = cur.add(a).expect("same dimension");
        if !sum.is_zero() {
            self.parts.insert(j, sum);
        }
    }

    pub fn add(&self, other: &NegCyclicChain) -> Result<NegCyclicChain> {
        same_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (j, a) in &other.parts {
            out.add_part(*j, a);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> NegCyclicChain {
        let mut out = NegCyclicChain::zero(self.dim);
        for (j, a) in &self.parts {
            out.add_part(*j, &a.scale(c));
        }
        out
    }

    /// Applies a `u`-linear map to every coefficient.
    pub fn map(&self, f: impl Fn(&HochschildChain) -> HochschildChain) -> NegCyclicChain {
        let mut out = NegCyclicChain::zero(self.dim);
        for (j, a) in &self.parts {
            out.add_part(*j, &f(a));
        }
        out
    }

    /// Differential `b + uB`.
    pub fn b_plus_ub(&self) -> NegCyclicChain {
        let mut out = NegCyclicChain::zero(self.dim);
        for (j, a) in &self.parts {
            out.add_part(*j, &a.b());
            out.add_part(j + 1, &a.connes_b());
        }
        out
    }

    /// All `(j, p)` pairs present.
    pub fn bidegrees(&self) -> Vec<(u32, usize)> {
        let mut v = Vec::new();
        for (j, a) in &self.parts {
            for p in a.degrees() {
                v.push((*j, p));
            }
        }
        v
    }
}

pub fn b_plus_ub(a: &NegCyclicChain) -> NegCyclicChain {
    a.b_plus_ub()
}

fn fmt_mono(f: &mut fmt::Formatter<'_>, e: &Exponent) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "1");
    }
    let mut first = true;
    for (i, &k) in e.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "·")?;
        }
        first = false;
        if k == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, k)?;
        }
    }
    Ok(())
}

impl fmt::Display for HochschildChain {
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
            write!(f, "({})(", format_q(c))?;
            for (i, e) in k.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                fmt_mono(f, e)?;
            }
            write!(f, ")")?;
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

    fn one() -> PolyFunction {
        PolyFunction::one(2)
    }

    fn tuple(v: &[PolyFunction]) -> HochschildChain {
        HochschildChain::from_tuple(v).unwrap()
    }

    #[test]
    fn normalization() {
        assert!(tuple(&[x(0), one()]).is_zero());
        let shifted = x(1).add(&one()).unwrap();
        assert_eq!(tuple(&[x(0), shifted]), tuple(&[x(0), x(1)]));
        assert_eq!(tuple(&[one()]).terms().len(), 1);
    }

    #[test]
    fn b_examples() {
        assert!(tuple(&[x(0), x(1)]).b().is_zero());
        assert!(tuple(&[x(0)]).b().is_zero());
        let d3 = PolyFunction::var(3, 2);
        let d1 = PolyFunction::var(3, 0);
        let d2 = PolyFunction::var(3, 1);
        let a = HochschildChain::from_tuple(&[d1.clone(), d2.clone(), d3.clone()]).unwrap();
        let expected = HochschildChain::from_tuple(&[d1.mul(&d2).unwrap(), d3.clone()])
            .unwrap()
            .sub(&HochschildChain::from_tuple(&[d1.clone(), d2.mul(&d3).unwrap()]).unwrap())
            .unwrap()
            .add(&HochschildChain::from_tuple(&[d3.mul(&d1).unwrap(), d2]).unwrap())
            .unwrap();
        assert_eq!(a.b(), expected);
    }

    #[test]
    fn connes_b_examples() {
        assert_eq!(tuple(&[x(0)]).connes_b(), tuple(&[one(), x(0)]));
        let expected = tuple(&[one(), x(0), x(1)]).sub(&tuple(&[one(), x(1), x(0)])).unwrap();
        assert_eq!(tuple(&[x(0), x(1)]).connes_b(), expected);
        assert!(tuple(&[one(), x(0)]).connes_b().is_zero());
    }

    #[test]
    fn b_plus_ub_examples() {
        let a = NegCyclicChain::from_chain(tuple(&[x(0)]));
        assert_eq!(a.b_plus_ub(), NegCyclicChain::from_u_power(1, tuple(&[one(), x(0)])));
        let c = NegCyclicChain::from_u_power(1, tuple(&[x(0), x(1)]));
        let mut expected = NegCyclicChain::from_u_power(1, tuple(&[x(0), x(1)]).b());
        expected.add_part(2, &tuple(&[x(0), x(1)]).connes_b());
        assert_eq!(c.b_plus_ub(), expected);
        assert!(c.b_plus_ub().b_plus_ub().is_zero());
        assert_eq!(a.scale(&q(0)), NegCyclicChain::zero(2));
    }
}
