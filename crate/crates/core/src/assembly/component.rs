//! Taylor components F_n as sums over admissible graphs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::operator::{black_edge_sign, graph_operator};
use super::taylor::TaylorResult;
use crate::error::{Error, Result};
use crate::gradedcore::rational::sign;
use crate::gradedcore::{KoszulContext, MultiVector};
use crate::graphs::{enumerate_with_degrees, AdmissibleGraph, Target};
use crate::hochschild::{HochschildChain, NegCyclicChain};
use crate::weights::{graph_weight, McParams, RawWeight};

/// An ordered list of (k, ℓ)-homogeneous multivector fields.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaWord {
    dim: usize,
    slots: Vec<MultiVector>,
    bidegrees: Vec<(usize, u32)>,
}

impl GammaWord {
    /// Zero slots are allowed and given bidegree (0, 0).
    pub fn new(dim: usize, slots: Vec<MultiVector>) -> Result<Self> {
        let mut bidegrees = Vec::with_capacity(slots.len());
        for (i, g) in slots.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
            }
            if g.is_zero() {
                bidegrees.push((0, 0));
                continue;
            }
            bidegrees.push(g.bidegree().ok_or(Error::InhomogeneousSlot { slot: i })?);
        }
        Ok(GammaWord { dim, slots, bidegrees })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[MultiVector] {
        &self.slots
    }

    pub fn bidegrees(&self) -> &[(usize, u32)] {
        &self.bidegrees
    }

    /// Shifted degree `k − 2 + 2ℓ` of each slot.
    pub fn degrees(&self) -> Vec<i64> {
        self.bidegrees.iter().map(|&(k, l)| k as i64 - 2 + 2 * l as i64).collect()
    }

    /// `|γ| = Σ |γ_i|`.
    pub fn total_degree(&self) -> i64 {
        self.degrees().iter().sum()
    }

    pub fn koszul(&self) -> KoszulContext {
        KoszulContext::new(self.degrees())
    }

    /// The word with slots listed in the order `perm`.
    pub fn permuted(&self, perm: &[usize]) -> GammaWord {
        GammaWord {
            dim: self.dim,
            slots: perm.iter().map(|&i| self.slots[i].clone()).collect(),
            bidegrees: perm.iter().map(|&i| self.bidegrees[i]).collect(),
        }
    }
}

type GraphKey = (Vec<usize>, usize, Vec<u32>);

/// Graph sets and weights shared across evaluations.
pub struct Engine {
    pub params: McParams,
    graphs: Mutex<HashMap<GraphKey, Arc<Vec<AdmissibleGraph>>>>,
    weights: Mutex<HashMap<String, RawWeight>>,
}

impl Engine {
    pub fn new(params: McParams) -> Self {
        Engine { params, graphs: Mutex::new(HashMap::new()), weights: Mutex::new(HashMap::new()) }
    }

    pub fn graphs(&self, k: &[usize], m: usize, deg: &[u32]) -> Arc<Vec<AdmissibleGraph>> {
        let key = (k.to_vec(), m, deg.to_vec());
        if let Some(g) = self.graphs.lock().expect("graph cache").get(&key) {
            return g.clone();
        }
        let g = Arc::new(enumerate_with_degrees(k, m, deg));
        self.graphs.lock().expect("graph cache").insert(key, g.clone());
        g
    }

    /// w_Γ including 1/∏k_i!, computed once per graph class.
    pub fn weight(&self, g: &AdmissibleGraph) -> RawWeight {
        let key = g.canonical_key().expect("enumerated graphs are admissible").0;
        if let Some(w) = self.weights.lock().expect("weight cache").get(&key) {
            return w.clone();
        }
        let w = graph_weight(g, &self.params);
        self.weights.lock().expect("weight cache").insert(key, w.clone());
        w
    }

    /// Number of cached graph weights.
    pub fn cached_weights(&self) -> usize {
        self.weights.lock().expect("weight cache").len()
    }

    pub(crate) fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.params.parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}

pub(crate) fn flat_edges(g: &AdmissibleGraph) -> Vec<(usize, Target)> {
    g.edges.iter().enumerate().flat_map(|(i, es)| es.iter().map(move |&t| (i, t))).collect()
}

/// The operator part `F_Γ` on one graph, black-edge sign included, applied to a chain of length m.
pub fn graph_term(g: &AdmissibleGraph, gamma: &GammaWord, a: &HochschildChain) -> Result<MultiVector> {
    let coeffs: Vec<MultiVector> = gamma.slots.iter().zip(&g.deg).map(|(s, &l)| s.v_coefficient(l)).collect();
    let op = graph_operator(gamma.dim, &coeffs, g.m, &flat_edges(g))?;
    if op.is_zero() {
        return Ok(MultiVector::zero(gamma.dim));
    }
    let value = op.apply_chain(a)?;
    Ok(value.scale(&black_edge_sign(g.black_edges().len())))
}

/// `F_n(γ; a)`; with `connected_only`, graphs with a disconnected interior vertex are left out (F̃_n).
pub fn taylor_component_with(engine: &Engine, gamma: &GammaWord, a: &NegCyclicChain, connected_only: bool) -> Result<TaylorResult> {
    let dim = gamma.dim;
    if a.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
    }
    let mut out = TaylorResult::zero(dim);
    if gamma.slots.iter().any(MultiVector::is_zero) {
        return Ok(out);
    }
    let k: Vec<usize> = gamma.bidegrees.iter().map(|b| b.0).collect();
    let deg: Vec<u32> = gamma.bidegrees.iter().map(|b| b.1).collect();
    let total = gamma.total_degree();
    for (&j, chain) in a.parts() {
        for p in chain.degrees() {
            let part = chain.part(p);
            let graphs = engine.graphs(&k, p + 1, &deg);
            let global = sign((total * p as i64).rem_euclid(2) == 1);
            let terms: Vec<Result<Option<(RawWeight, MultiVector)>>> = engine.map(&graphs, |g| {
                if connected_only && (0..g.n()).any(|i| g.is_disconnected(i)) {
                    return Ok(None);
                }
                let value = graph_term(g, gamma, &part)?;
                if value.is_zero() {
                    return Ok(None);
                }
                let w = engine.weight(g);
                if w.is_zero() {
                    return Ok(None);
                }
                Ok(Some((w.clone(), value.scale(&(&w.coeff * &global)))))
            });
            for t in terms {
                if let Some((w, value)) = t? {
                    out.add_weighted(w.mc.as_ref(), w.upow + j, &value);
                }
            }
        }
    }
    Ok(out)
}

/// `F_n(γ; a) = (−1)^{|γ|p} Σ_Γ w_Γ F_Γ(γ; a)`, summed over graphs with v-degrees ℓ_i.
pub fn taylor_component(engine: &Engine, gamma: &GammaWord, a: &NegCyclicChain) -> Result<TaylorResult> {
    taylor_component_with(engine, gamma, a, false)
}

/// Convenience: F_n on a single Hochschild chain (u⁰ part).
pub fn taylor_component_chain(engine: &Engine, gamma: &GammaWord, a: &HochschildChain) -> Result<TaylorResult> {
    taylor_component(engine, gamma, &NegCyclicChain::from_chain(a.clone()))
}
