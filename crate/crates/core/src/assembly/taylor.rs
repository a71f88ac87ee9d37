//! Multivector-valued u-polynomials whose coefficients are exact rationals times products of
//! Monte Carlo weights, with first-order error propagation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gradedcore::rational::q_to_f64;
use crate::gradedcore::{IndexSet, MultiVector, MvKey, Q};
use crate::weights::Estimate;

/// Sorted list of Monte Carlo weight ids multiplying a term; empty for exact terms.
pub type Symbol = Vec<String>;

/// Named estimates multiplying one term.
pub type Weights = Vec<(String, Estimate)>;

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorResult {
    dim: usize,
    terms: BTreeMap<(Symbol, u32), MultiVector>,
    estimates: BTreeMap<String, Estimate>,
}

/// One numeric coefficient: `u^{u_power} θ_theta x^exp`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub u_power: u32,
    pub theta: Vec<usize>,
    pub exp: Vec<u32>,
    pub mean: f64,
    pub stderr: f64,
}

impl TaylorResult {
    pub fn zero(dim: usize) -> Self {
        TaylorResult { dim, terms: BTreeMap::new(), estimates: BTreeMap::new() }
    }

    pub fn exact(upow: u32, value: MultiVector) -> Self {
        let mut r = TaylorResult::zero(value.dim());
        r.add_term(Vec::new(), upow, &value);
        r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<(Symbol, u32), MultiVector> {
        &self.terms
    }

    pub fn estimates(&self) -> &BTreeMap<String, Estimate> {
        &self.estimates
    }

    fn add_term(&mut self, mut sym: Symbol, upow: u32, value: &MultiVector) {
        if value.is_zero() {
            return;
        }
        sym.sort();
        let key = (sym, upow);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(value).expect("same dimension"),
            None => value.clone(),
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    /// Adds `w · u^upow · value` where `w` is exact (`None`) or a named estimate.
    pub fn add_weighted(&mut self, weight: Option<&(String, Estimate)>, upow: u32, value: &MultiVector) {
        match weight {
            None => self.add_term(Vec::new(), upow, value),
            Some((id, est)) => {
                self.estimates.entry(id.clone()).or_insert_with(|| est.clone());
                self.add_term(vec![id.clone()], upow, value);
            }
        }
    }

    /// Adds `(∏ weights) · u^upow · value`.
    pub fn add_product(&mut self, weights: &[&(String, Estimate)], upow: u32, value: &MultiVector) {
        for (id, est) in weights {
            self.estimates.entry(id.clone()).or_insert_with(|| est.clone());
        }
        self.add_term(weights.iter().map(|w| w.0.clone()).collect(), upow, value);
    }

    /// Terms expanded as (weights, u power, value).
    pub fn weighted_terms(&self) -> Vec<(Weights, u32, MultiVector)> {
        self.terms
            .iter()
            .map(|((s, u), v)| (s.iter().map(|id| (id.clone(), self.estimates[id].clone())).collect(), *u, v.clone()))
            .collect()
    }

    pub fn add(&self, other: &TaylorResult) -> TaylorResult {
        let mut out = self.clone();
        for ((s, u), v) in &other.terms {
            out.add_term(s.clone(), *u, v);
        }
        for (k, e) in &other.estimates {
            out.estimates.entry(k.clone()).or_insert_with(|| e.clone());
        }
        out
    }

    pub fn sub(&self, other: &TaylorResult) -> TaylorResult {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Q) -> TaylorResult {
        self.map(|v| Ok(v.scale(c))).expect("scaling cannot fail")
    }

    /// Applies a linear map to every coefficient.
    pub fn map(&self, f: impl Fn(&MultiVector) -> Result<MultiVector>) -> Result<TaylorResult> {
        let mut out = TaylorResult { dim: self.dim, terms: BTreeMap::new(), estimates: self.estimates.clone() };
        for ((s, u), v) in &self.terms {
            let w = f(v)?;
            out.add_term(s.clone(), *u, &w);
        }
        Ok(out)
    }

    pub fn shift_u(&self, j: u32) -> TaylorResult {
        let mut out = TaylorResult { dim: self.dim, terms: BTreeMap::new(), estimates: self.estimates.clone() };
        for ((s, u), v) in &self.terms {
            out.add_term(s.clone(), u + j, v);
        }
        out
    }

    /// True when every coefficient cancels in exact arithmetic.
    pub fn is_exactly_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no Monte Carlo weight enters.
    pub fn is_exact(&self) -> bool {
        self.terms.keys().all(|(s, _)| s.is_empty())
    }

    /// The exact u-polynomial, if no Monte Carlo weight enters.
    pub fn exact_value(&self) -> Option<BTreeMap<u32, MultiVector>> {
        if !self.is_exact() {
            return None;
        }
        Some(self.terms.iter().map(|((_, u), v)| (*u, v.clone())).collect())
    }

    /// Mean and delta-method standard error of every monomial coefficient.
    pub fn components(&self) -> Vec<Component> {
        let mean_of = |id: &String| self.estimates[id].mean;
        type Gradient = BTreeMap<String, f64>;
        let mut acc: BTreeMap<(u32, IndexSet, Vec<u32>), (f64, Gradient)> = BTreeMap::new();
        for ((sym, u), v) in &self.terms {
            let prod: f64 = sym.iter().map(mean_of).product();
            for (MvKey { theta, exp, .. }, c) in v.terms() {
                let c = q_to_f64(c);
                let entry = acc.entry((*u, *theta, exp.0.clone())).or_default();
                entry.0 += c * prod;
                for (i, id) in sym.iter().enumerate() {
                    let others: f64 = sym.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| mean_of(s)).product();
                    *entry.1.entry(id.clone()).or_default() += c * others;
                }
            }
        }
        acc.into_iter()
            .map(|((u, t, e), (mean, grad))| {
                let var: f64 = grad.iter().map(|(id, g)| (g * self.estimates[id].stderr).powi(2)).fold(0.0, |a, b| a + b);
                Component { u_power: u, theta: t.indices(), exp: e, mean, stderr: var.sqrt() }
            })
            .collect()
    }

    /// Largest `|mean| − k·σ` over all components (≤ 0 means every component is within k σ).
    pub fn worst_excess(&self, k: f64) -> f64 {
        self.components().iter().map(|c| c.mean.abs() - k * c.stderr).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Every component within `k` propagated standard errors of 0, up to float roundoff.
    pub fn within_sigma(&self, k: f64) -> bool {
        self.components().iter().all(|c| c.mean.abs() <= k * c.stderr + 1e-9)
    }

    /// Largest absolute component mean.
    pub fn max_abs(&self) -> f64 {
        self.components().iter().map(|c| c.mean.abs()).fold(0.0, f64::max)
    }
}
