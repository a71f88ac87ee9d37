//! Canonical JSON for polynomials, multivector fields, forms and chains.
//!
//! Terms are listed in the canonical term order, exponents as integer arrays, index sets as
//! increasing arrays and coefficients as `"num/den"` strings.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::exponent::Exponent;
use super::form::DiffForm;
use super::indexset::IndexSet;
use super::multivector::{MultiVector, MvKey};
use super::poly::{check_dim, PolyFunction};
use super::rational::{de_q, ser_q, Q};
use crate::hochschild::{HochschildChain, NegCyclicChain};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyTerm {
    exp: Exponent,
    #[serde(serialize_with = "ser_q", deserialize_with = "de_q")]
    coeff: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    dim: usize,
    terms: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MvTerm {
    v: u32,
    theta: IndexSet,
    exp: Exponent,
    #[serde(serialize_with = "ser_q", deserialize_with = "de_q")]
    coeff: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MvRepr {
    dim: usize,
    terms: Vec<MvTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormTerm {
    dx: IndexSet,
    exp: Exponent,
    #[serde(serialize_with = "ser_q", deserialize_with = "de_q")]
    coeff: Q,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormRepr {
    dim: usize,
    terms: Vec<FormTerm>,
}

fn check_term<E: serde::de::Error>(dim: usize, exp: &Exponent, set: IndexSet) -> Result<(), E> {
    if exp.dim() != dim {
        return Err(E::custom(format!("exponent of length {} in dimension {dim}", exp.dim())));
    }
    if set.iter().any(|i| i >= dim) {
        return Err(E::custom(format!("index out of range in dimension {dim}")));
    }
    Ok(())
}

impl Serialize for PolyFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.terms().iter().map(|(e, c)| PolyTerm { exp: e.clone(), coeff: c.clone() }).collect();
        PolyRepr { dim: self.dim(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        check_dim(r.dim).map_err(D::Error::custom)?;
        let mut f = PolyFunction::zero(r.dim);
        for t in r.terms {
            check_term::<D::Error>(r.dim, &t.exp, IndexSet::EMPTY)?;
            f.add_term(t.exp, t.coeff);
        }
        Ok(f)
    }
}

impl Serialize for MultiVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms()
            .iter()
            .map(|(k, c)| MvTerm { v: k.vpow, theta: k.theta, exp: k.exp.clone(), coeff: c.clone() })
            .collect();
        MvRepr { dim: self.dim(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MvRepr::deserialize(d)?;
        check_dim(r.dim).map_err(D::Error::custom)?;
        let mut g = MultiVector::zero(r.dim);
        for t in r.terms {
            check_term::<D::Error>(r.dim, &t.exp, t.theta)?;
            g.add_term(MvKey { vpow: t.v, theta: t.theta, exp: t.exp }, t.coeff);
        }
        Ok(g)
    }
}

impl Serialize for DiffForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.terms().iter().map(|((dx, e), c)| FormTerm { dx: *dx, exp: e.clone(), coeff: c.clone() }).collect();
        FormRepr { dim: self.dim(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FormRepr::deserialize(d)?;
        check_dim(r.dim).map_err(D::Error::custom)?;
        let mut w = DiffForm::zero(r.dim);
        for t in r.terms {
            check_term::<D::Error>(r.dim, &t.exp, t.dx)?;
            w.add_term(t.dx, t.exp, t.coeff);
        }
        Ok(w)
    }
}

#[derive(Serialize)]
struct ChainTerm<'a> {
    tuple: &'a [Exponent],
    #[serde(serialize_with = "ser_q")]
    coeff: Q,
}

#[derive(Serialize)]
struct ChainRepr<'a> {
    dim: usize,
    terms: Vec<ChainTerm<'a>>,
}

impl Serialize for HochschildChain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.terms().iter().map(|(k, c)| ChainTerm { tuple: k, coeff: c.clone() }).collect();
        ChainRepr { dim: self.dim(), terms }.serialize(s)
    }
}

#[derive(Serialize)]
struct NegPart<'a> {
    u: u32,
    chain: &'a HochschildChain,
}

#[derive(Serialize)]
struct NegRepr<'a> {
    dim: usize,
    parts: Vec<NegPart<'a>>,
}

impl Serialize for NegCyclicChain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts = self.parts().iter().map(|(u, chain)| NegPart { u: *u, chain }).collect();
        NegRepr { dim: self.dim(), parts }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcore::rational::qr;

    #[test]
    fn multivector_text() {
        let f = PolyFunction::monomial(2, Exponent(vec![1, 0]), qr(-1, 2));
        let g = MultiVector::from_parts(&f, &[0, 1]).unwrap().times_v(1);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"dim":2,"terms":[{"v":1,"theta":[0,1],"exp":[1,0],"coeff":"-1/2"}]}"#);
        assert_eq!(serde_json::from_str::<MultiVector>(&s).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(serde_json::from_str::<PolyFunction>(r#"{"dim":2,"terms":[{"exp":[1],"coeff":"1/1"}]}"#).is_err());
        assert!(serde_json::from_str::<PolyFunction>(r#"{"dim":9,"terms":[]}"#).is_err());
        assert!(serde_json::from_str::<MultiVector>(r#"{"dim":2,"terms":[{"v":0,"theta":[3],"exp":[0,0],"coeff":"1"}]}"#).is_err());
    }
}
