//! Kontsevich components U₁, U₂ and the star product up to ε².

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::One;

use super::operator::{black_edge_sign, graph_operator};
use super::taylor::{TaylorResult, Weights};
use crate::error::{Error, Result};
use crate::gradedcore::rational::factorial;
use crate::gradedcore::{hkr_cochain, IndexSet, MultiVector, PolyFunction, Q};
use crate::graphs::Target;
use crate::hochschild::{cochain_action_neg, MultiDiffOp, NegCyclicChain};
use crate::weights::halfplane::{kontsevich_weight_n2, u2_graphs, KGraph, KTarget};
use crate::weights::{Estimate, McParams};

/// Overall sign of the two-vertex half-plane weights in the z₁ = i gauge, fixed by associativity of ⋆ at ε².
pub const U2_SIGN: i64 = 1;

/// A sum of multidifferential operators, each scaled by an exact or Monte Carlo weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCochain {
    pub dim: usize,
    pub arity: usize,
    pub terms: Vec<(Option<(String, Estimate)>, MultiDiffOp)>,
}

impl WeightedCochain {
    pub fn exact(op: MultiDiffOp) -> Self {
        WeightedCochain { dim: op.dim(), arity: op.arity(), terms: vec![(None, op)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, op)| op.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Self {
        WeightedCochain {
            dim: self.dim,
            arity: self.arity,
            terms: self.terms.iter().map(|(w, op)| (w.clone(), op.scale(c))).collect(),
        }
    }

    /// Applies the cochain to function-valued arguments, expanding multilinearly in their weights.
    pub fn apply(&self, args: &[TaylorResult]) -> Result<TaylorResult> {
        if args.len() != self.arity {
            return Err(Error::Unsupported(format!("cochain of arity {} applied to {} arguments", self.arity, args.len())));
        }
        let mut out = TaylorResult::zero(self.dim);
        let expanded: Vec<Vec<(Weights, u32, PolyFunction)>> = args
            .iter()
            .map(|a| {
                a.weighted_terms()
                    .into_iter()
                    .map(|(w, u, v)| (w, u, v.coefficient(0, IndexSet::EMPTY)))
                    .collect()
            })
            .collect();
        let mut combos: Vec<(Weights, u32, Vec<PolyFunction>)> = vec![(Vec::new(), 0, Vec::new())];
        for options in &expanded {
            let mut next = Vec::new();
            for (w, u, fs) in &combos {
                for (w2, u2, f) in options {
                    let mut ws = w.clone();
                    ws.extend(w2.iter().cloned());
                    let mut fs2 = fs.clone();
                    fs2.push(f.clone());
                    next.push((ws, u + u2, fs2));
                }
            }
            combos = next;
        }
        for (weight, op) in &self.terms {
            for (ws, u, fs) in &combos {
                let value = op.apply(fs)?;
                let mut all: Vec<&(String, Estimate)> = ws.iter().collect();
                if let Some(w) = weight {
                    all.push(w);
                }
                out.add_product(&all, *u, &MultiVector::from_function(&value));
            }
        }
        Ok(out)
    }

    /// `Σ w · F(op · a)` for a linear map `F` on chains.
    pub fn act_then<F>(&self, a: &NegCyclicChain, f: F) -> Result<TaylorResult>
    where
        F: Fn(&NegCyclicChain) -> Result<TaylorResult>,
    {
        let mut out = TaylorResult::zero(self.dim);
        for (weight, op) in &self.terms {
            let b = cochain_action_neg(op, a)?;
            if b.is_zero() {
                continue;
            }
            let r = f(&b)?;
            for (ws, u, v) in r.weighted_terms() {
                let mut all: Vec<&(String, Estimate)> = ws.iter().collect();
                if let Some(w) = weight {
                    all.push(w);
                }
                let mut piece = TaylorResult::zero(self.dim);
                piece.add_product(&all, u, &v);
                out = out.add(&piece);
            }
        }
        Ok(out)
    }
}

/// `U₁(γ) = hkr_cochain(γ)` for a v-free θ-homogeneous field.
pub fn u1(gamma: &MultiVector) -> Result<MultiDiffOp> {
    hkr_cochain(gamma)
}

/// Weights of half-plane graphs, cached by graph key.
pub struct HalfPlaneWeights {
    pub params: McParams,
    cache: Mutex<HashMap<String, Estimate>>,
}

impl HalfPlaneWeights {
    pub fn new(params: McParams) -> Self {
        HalfPlaneWeights { params, cache: Mutex::new(HashMap::new()) }
    }

    pub fn raw(&self, g: &KGraph) -> Estimate {
        let key = g.key();
        if let Some(e) = self.cache.lock().expect("weight cache").get(&key) {
            return e.clone();
        }
        let e = kontsevich_weight_n2(g, &self.params);
        self.cache.lock().expect("weight cache").insert(key, e.clone());
        e
    }
}

/// `B_Γ(γ₁, γ₂)` as a multidifferential operator on the m boundary slots, black-edge sign included.
pub fn kgraph_operator(g: &KGraph, g1: &MultiVector, g2: &MultiVector) -> Result<MultiDiffOp> {
    let edges: Vec<(usize, Target)> = g
        .edges
        .iter()
        .enumerate()
        .flat_map(|(i, es)| {
            es.iter().map(move |t| {
                (
                    i,
                    match *t {
                        KTarget::Interior(j) => Target::Interior(j),
                        KTarget::Boundary(j) => Target::Boundary(j),
                    },
                )
            })
        })
        .collect();
    let op = graph_operator(g1.dim(), &[g1.clone(), g2.clone()], g.m, &edges)?;
    Ok(op.to_multidiffop()?.scale(&black_edge_sign(edges.len())))
}

/// `U₂(γ₁, γ₂) = Σ_Γ (±) raw_Γ / (k₁! k₂!) · B_Γ(γ₁, γ₂)` over two-vertex half-plane graphs.
pub fn u2(weights: &HalfPlaneWeights, g1: &MultiVector, g2: &MultiVector) -> Result<WeightedCochain> {
    let dim = g1.dim();
    let (Some((k1, 0)), Some((k2, 0))) = (g1.bidegree(), g2.bidegree()) else {
        if g1.is_zero() || g2.is_zero() {
            return Ok(WeightedCochain { dim, arity: 0, terms: Vec::new() });
        }
        return Err(Error::Unsupported("U₂ takes v-free θ-homogeneous fields".into()));
    };
    let m = (k1 + k2).saturating_sub(2);
    let pref = Q::from_integer(U2_SIGN.into()) / (factorial(k1) * factorial(k2));
    let mut terms = Vec::new();
    for g in u2_graphs([k1, k2]) {
        let op = kgraph_operator(&g, g1, g2)?;
        if op.is_zero() {
            continue;
        }
        let est = weights.raw(&g);
        if est.mean == 0.0 && est.stderr == 0.0 {
            continue;
        }
        terms.push((Some((g.key(), est)), op.scale(&pref)));
    }
    Ok(WeightedCochain { dim, arity: m, terms })
}

/// `f ⋆ g = fg + ε U₁(π)(f,g) + ε²/2 U₂(π,π)(f,g) + O(ε³)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSeries {
    pub order: usize,
    pub coefficients: Vec<WeightedCochain>,
}

pub fn star_product(pi: &MultiVector, order: usize, weights: &HalfPlaneWeights) -> Result<StarSeries> {
    let dim = pi.dim();
    if order > 2 {
        return Err(Error::Unsupported(format!("star product to order {order}")));
    }
    if !pi.is_zero() && pi.bidegree() != Some((2, 0)) {
        return Err(Error::Unsupported("star product needs a v-free bivector".into()));
    }
    if !pi.schouten(pi)?.is_zero() {
        return Err(Error::NotPoisson);
    }
    let mut coefficients = vec![WeightedCochain::exact(MultiDiffOp::mu(dim))];
    if order >= 1 {
        coefficients.push(if pi.is_zero() {
            WeightedCochain { dim, arity: 2, terms: Vec::new() }
        } else {
            WeightedCochain::exact(u1(pi)?)
        });
    }
    if order >= 2 {
        let mut c = u2(weights, pi, pi)?.scale(&(Q::one() / Q::from_integer(2.into())));
        c.arity = 2;
        coefficients.push(c);
    }
    Ok(StarSeries { order, coefficients })
}

impl StarSeries {
    /// ε-coefficients of `f ⋆ g` as weighted functions.
    pub fn apply(&self, f: &TaylorResult, g: &TaylorResult) -> Result<Vec<TaylorResult>> {
        self.coefficients.iter().map(|c| c.apply(&[f.clone(), g.clone()])).collect()
    }

    /// ε-coefficients of `(f⋆g)⋆h − f⋆(g⋆h)`.
    pub fn associator(&self, f: &PolyFunction, g: &PolyFunction, h: &PolyFunction) -> Result<Vec<TaylorResult>> {
        let lift = |p: &PolyFunction| TaylorResult::exact(0, MultiVector::from_function(p));
        let (f, g, h) = (lift(f), lift(g), lift(h));
        let fg = self.apply(&f, &g)?;
        let gh = self.apply(&g, &h)?;
        let dim = f.dim();
        let mut out = Vec::new();
        for n in 0..=self.order {
            let mut acc = TaylorResult::zero(dim);
            for a in 0..=n {
                let b = n - a;
                acc = acc.add(&self.coefficients[a].apply(&[fg[b].clone(), h.clone()])?);
                acc = acc.sub(&self.coefficients[a].apply(&[f.clone(), gh[b].clone()])?);
            }
            out.push(acc);
        }
        Ok(out)
    }
}
