//! Unimodular Poisson data, the trace integrand H₀, …, H_N and the disconnected-vertex resummation.

use num_traits::One;
use serde::Serialize;

use super::component::{taylor_component, taylor_component_with, Engine, GammaWord};
use super::taylor::TaylorResult;
use crate::error::{Error, Result};
use crate::gradedcore::rational::factorial;
use crate::gradedcore::{MultiVector, PolyFunction, Q};
use crate::hochschild::{HochschildChain, NegCyclicChain};

/// `π + v h`: a bivector and a function.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonData {
    pub pi: MultiVector,
    pub h: PolyFunction,
}

impl PoissonData {
    pub fn new(pi: MultiVector, h: PolyFunction) -> Self {
        PoissonData { pi, h }
    }

    pub fn dim(&self) -> usize {
        self.pi.dim()
    }

    /// `h v` as a (0, 1)-homogeneous field.
    pub fn hv(&self) -> MultiVector {
        MultiVector::from_function(&self.h).times_v(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnimodularReport {
    pub ok: bool,
    /// Problems with the shape of the data; empty when π is a v-free bivector and h a function.
    pub issues: Vec<String>,
    /// `[π, π]`.
    pub poisson_residual: MultiVector,
    /// `div π − [h, π]`.
    pub divergence_residual: MultiVector,
}

/// Tests `[π,π] = 0` and `div π − [h,π] = 0` exactly.
pub fn check_unimodular(pd: &PoissonData) -> UnimodularReport {
    let dim = pd.dim();
    let mut issues = Vec::new();
    if !pd.pi.is_zero() && pd.pi.bidegree() != Some((2, 0)) {
        issues.push("pi is not a v-free bivector".to_string());
    }
    if pd.h.dim() != dim {
        issues.push(format!("h has dimension {}, pi has {dim}", pd.h.dim()));
    }
    if !issues.is_empty() {
        return UnimodularReport {
            ok: false,
            issues,
            poisson_residual: MultiVector::zero(dim),
            divergence_residual: MultiVector::zero(dim),
        };
    }
    let poisson_residual = pd.pi.schouten(&pd.pi).expect("same dimension");
    let bracket = MultiVector::from_function(&pd.h).schouten(&pd.pi).expect("same dimension");
    let divergence_residual = pd.pi.divergence().sub(&bracket).expect("same dimension");
    UnimodularReport {
        ok: poisson_residual.is_zero() && divergence_residual.is_zero(),
        issues,
        poisson_residual,
        divergence_residual,
    }
}

/// `H₀, …, H_N` with the global factor `e^h` kept symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceIntegrand {
    /// Exponent of the `e^h` factor.
    pub h: PolyFunction,
    pub terms: Vec<TaylorResult>,
}

fn word(pd: &PoissonData, r: usize, n: usize) -> Result<GammaWord> {
    let mut slots = vec![pd.hv(); r];
    slots.extend(std::iter::repeat_n(pd.pi.clone(), n));
    GammaWord::new(pd.dim(), slots)
}

fn function_chain(f: &PolyFunction) -> Result<NegCyclicChain> {
    Ok(NegCyclicChain::from_chain(HochschildChain::from_tuple(std::slice::from_ref(f))?))
}

/// `H_n = Σ_r F̃_{n+r}((hv)^r π^n; f) / r!` for n ≤ N. Vertices of `hv` have no outgoing edges, so
/// only r ≤ 2n contribute.
pub fn trace_integrand(engine: &Engine, pd: &PoissonData, f: &PolyFunction, order: usize) -> Result<TraceIntegrand> {
    if !check_unimodular(pd).ok {
        return Err(Error::NotUnimodular);
    }
    if f.dim() != pd.dim() {
        return Err(Error::DimensionMismatch { expected: pd.dim(), found: f.dim() });
    }
    let a = function_chain(f)?;
    let mut terms = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut hn = TaylorResult::zero(pd.dim());
        for r in 0..=2 * n {
            let fr = taylor_component_with(engine, &word(pd, r, n)?, &a, true)?;
            hn = hn.add(&fr.scale(&(Q::one() / factorial(r))));
        }
        terms.push(hn);
    }
    Ok(TraceIntegrand { h: pd.h.clone(), terms })
}

/// `F_{k+n}((hv)^k π^n; f) − Σ_s C(k,s) h^s F̃_{k−s+n}((hv)^{k−s} π^n; f)`.
pub fn resummation_residual(engine: &Engine, pd: &PoissonData, f: &PolyFunction, k: usize, n: usize) -> Result<TaylorResult> {
    let a = function_chain(f)?;
    let mut out = taylor_component(engine, &word(pd, k, n)?, &a)?;
    let mut hs = PolyFunction::one(pd.dim());
    for s in 0..=k {
        let binom = factorial(k) / (factorial(s) * factorial(k - s));
        let reduced = taylor_component_with(engine, &word(pd, k - s, n)?, &a, true)?;
        let term = reduced.map(|v| v.mul_function(&hs))?.scale(&binom);
        out = out.sub(&term);
        hs = hs.mul(&pd.h)?;
    }
    Ok(out)
}
