use num_traits::One;
use rand::Rng;
use serde_json::{json, Value};

use super::{run_criterion, Record, VerifyConfig};
use crate::assembly::*;
use crate::gradedcore::form::from_volume_interior;
use crate::gradedcore::rational::sign;
use crate::gradedcore::{hkr_chain, Exponent, MultiVector, PolyFunction, Q};
use crate::graphs::Target;
use crate::hochschild::{cochain_action, MultiDiffOp, NegCyclicChain};
use crate::random::{self, TestRng};
use crate::weights::vanishing::{omega_omega_integral, omega_phi_integral};
use crate::weights::weight::mc_integral;
use crate::weights::{Estimate, FormSpec, Point};

/// Result of a check before it is stamped with the run configuration.
pub(super) struct Outcome {
    criterion: u32,
    name: &'static str,
    identity: &'static str,
    anchor: &'static str,
    inputs: Value,
    cases: usize,
    exact_failures: usize,
    residual: f64,
    tolerance: f64,
    pub(super) monte_carlo: bool,
    pub(super) pass: bool,
}

impl Outcome {
    fn new(criterion: u32, name: &'static str, identity: &'static str, anchor: &'static str) -> Self {
        Outcome {
            criterion,
            name,
            identity,
            anchor,
            inputs: Value::Null,
            cases: 0,
            exact_failures: 0,
            residual: 0.0,
            tolerance: 0.0,
            monte_carlo: false,
            pass: false,
        }
    }

    /// Exact case: counts a failure when `ok` is false.
    fn exact(&mut self, ok: bool) {
        self.cases += 1;
        self.exact_failures += usize::from(!ok);
    }

    /// Monte Carlo case with normalized residual `r` (passes at ≤ 1).
    fn ratio(&mut self, r: f64) {
        self.cases += 1;
        self.monte_carlo = true;
        self.tolerance = 1.0;
        self.residual = self.residual.max(r);
    }

    fn finish(mut self, inputs: Value) -> Self {
        self.inputs = inputs;
        self.pass = self.exact_failures == 0 && self.residual <= self.tolerance;
        self
    }

    pub(super) fn into_record(self, cfg: &VerifyConfig, samples: usize, escalated: bool) -> Record {
        Record {
            name: format!("c{:02}-{}", self.criterion, self.name),
            criterion: self.criterion,
            identity: self.identity.to_string(),
            anchor: self.anchor.to_string(),
            inputs: self.inputs,
            cases: self.cases,
            exact_failures: self.exact_failures,
            residual: self.residual,
            tolerance: self.tolerance,
            pass: self.pass,
            seeds: vec![cfg.seed],
            samples: if self.monte_carlo { samples } else { 0 },
            escalated,
        }
    }
}

pub(super) fn run(cfg: &VerifyConfig, criterion: u32, samples: usize) -> Outcome {
    match criterion {
        1 => zero_mode_powers(cfg, samples),
        2 => boundary_family(cfg, samples),
        3 => vanishing_lemmas(cfg, samples),
        4 => algebra(cfg),
        5 => f1_closed_form(cfg, samples),
        6 => miranda_one(cfg),
        7 => miranda_two(cfg, samples),
        8 => star(cfg, samples),
        9 => trace(cfg, samples),
        10 => affine(cfg, samples),
        _ => panic!("no check for criterion {criterion}"),
    }
}

fn rng_for(cfg: &VerifyConfig, criterion: u32) -> TestRng {
    random::rng(cfg.seed.wrapping_mul(1_000_003).wrapping_add(criterion as u64))
}

const CAP: f64 = 2e-2;

/// `max(|err|/cap, |err|/(3σ·mult))`: at most 1 iff both bounds hold.
fn two_sided(est: &Estimate, target: f64, cfg: &VerifyConfig) -> f64 {
    let err = (est.mean - target).abs();
    (err / CAP).max(err / (3.0 * cfg.tol_mult * est.stderr.max(1e-300)))
}

/// Worst component of `r` in units of 3σ·mult; float roundoff below 10⁻⁹ is ignored.
fn sigma_ratio(r: &TaylorResult, cfg: &VerifyConfig) -> f64 {
    r.components()
        .iter()
        .map(|c| (c.mean.abs() - 1e-9).max(0.0) / (3.0 * cfg.tol_mult * c.stderr.max(1e-12)))
        .fold(0.0, f64::max)
}

fn single_vertex(p: usize, s: u32) -> FormSpec {
    FormSpec { n: 1, m: p + 1, edges: (1..=p).map(|j| (0, Target::Boundary(j))).collect(), r: vec![s + 1] }
}

fn zero_mode_powers(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(1, "zero-mode-powers", "∫_D φ(z,u)^{s+1} = u^s for s = 0..3", "zero-mode powers");
    let params = cfg.params(samples);
    let mut estimates = Vec::new();
    for s in 0..4u32 {
        let est = mc_integral(&single_vertex(0, s), &params);
        out.ratio(two_sided(&est, 1.0, cfg));
        estimates.push(json!({"s": s, "mean": est.mean, "stderr": est.stderr}));
    }
    out.finish(json!({"s": [0, 1, 2, 3], "estimates": estimates}))
}

fn boundary_family(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(2, "boundary-family", "single-vertex weights u^s/p! for (p,s) in {(1,0),(1,1),(2,0)}", "single-vertex boundary weights");
    let params = cfg.params(samples);
    let mut estimates = Vec::new();
    for (p, s) in [(1usize, 0u32), (1, 1), (2, 0)] {
        let est = mc_integral(&single_vertex(p, s), &params);
        let target = if p == 2 { 0.5 } else { 1.0 };
        out.ratio(two_sided(&est, target, cfg));
        estimates.push(json!({"p": p, "s": s, "expected": target, "mean": est.mean, "stderr": est.stderr}));
    }
    out.finish(json!({"estimates": estimates}))
}

fn interior_point(rng: &mut TestRng) -> num_complex::Complex64 {
    let r = 0.95 * rng.random::<f64>().sqrt();
    num_complex::Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
}

fn vanishing_lemmas(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(3, "vanishing-lemmas", "∫_w ω(z,w)φ(w,u) = 0 and ∫_w ω(z,w)ω(w,z') = 0 componentwise", "vanishing of ωφ and ωω fiber integrals");
    let params = cfg.params(samples);
    let mut rng = rng_for(cfg, 3);
    let mut points = Vec::new();
    for _ in 0..5 {
        let z = interior_point(&mut rng);
        let zp = interior_point(&mut rng);
        let mut ests = omega_phi_integral(Point::Interior(z), &params);
        ests.extend(omega_omega_integral(Point::Interior(z), Point::Interior(zp), &params));
        for e in &ests {
            out.ratio(e.mean.abs() / (3.0 * cfg.tol_mult * e.stderr).max(1e-2));
        }
        points.push(json!({"z": [z.re, z.im], "z_prime": [zp.re, zp.im]}));
    }
    out.finish(json!({"points": points}))
}

fn algebra(cfg: &VerifyConfig) -> Outcome {
    let mut out = Outcome::new(
        4,
        "exact-algebra",
        "b²=B²=bB+Bb=0; Schouten antisymmetry and Jacobi; div²=0 and derivation; div = ι_γΩ/de Rham; H∘b=0; [μ,μ]=0 and Gerstenhaber Jacobi; μ·a = (−1)^{p+1} b a",
        "Schouten calculus, Hochschild and cyclic differentials, divergence",
    );
    let dim = cfg.dim;
    let mut rng = rng_for(cfg, 4);
    for _ in 0..100 {
        let p = rng.random_range(0..=4);
        let a = random::chain(&mut rng, dim, p, 2, 3);
        out.exact(a.b().b().is_zero());
        out.exact(a.connes_b().connes_b().is_zero());
        out.exact(a.b().connes_b().add(&a.connes_b().b()).expect("same dimension").is_zero());
        out.exact(hkr_chain(&a.b()).is_zero());
        let expected = a.b().scale(&sign(p % 2 == 0));
        out.exact(cochain_action(&MultiDiffOp::mu(dim), &a).ok() == Some(expected));
    }
    let field = |rng: &mut TestRng| {
        let k = rng.random_range(0..=dim);
        let l = rng.random_range(0..=1);
        random::multivector(rng, dim, k, l, 2, 2)
    };
    for _ in 0..100 {
        let (a, b, c) = (field(&mut rng), field(&mut rng), field(&mut rng));
        let (da, db) = (a.lie_degree().expect("homogeneous"), b.lie_degree().expect("homogeneous"));
        let sab = sign((da * db).rem_euclid(2) == 1);
        let br = |x: &MultiVector, y: &MultiVector| x.schouten(y).expect("same dimension");
        out.exact(br(&a, &b) == br(&b, &a).scale(&-sab.clone()));
        let jacobi = br(&a, &br(&b, &c)).sub(&br(&br(&a, &b), &c).add(&br(&b, &br(&a, &c)).scale(&sab)).expect("dim"));
        out.exact(jacobi.expect("dim").is_zero());
        out.exact(a.divergence().divergence().is_zero());
        let deriv = br(&a.divergence(), &b).add(&br(&a, &b.divergence()).scale(&sign(da.rem_euclid(2) == 1)));
        out.exact(br(&a, &b).divergence() == deriv.expect("dim"));
        let pure = a.v_coefficient(a.max_vpow());
        out.exact(from_volume_interior(&pure.interior_volume().expect("v-free").d()) == pure.divergence());
    }
    let mu = MultiDiffOp::mu(dim);
    out.exact(mu.gerstenhaber_bracket(&mu).expect("dim").is_zero());
    for _ in 0..40 {
        let ops: Vec<MultiDiffOp> = (0..3)
            .map(|_| {
                let k = rng.random_range(0..=3);
                random::cochain(&mut rng, dim, k, 2, 1, 2)
            })
            .collect();
        let (a, b, c) = (&ops[0], &ops[1], &ops[2]);
        let br = |x: &MultiDiffOp, y: &MultiDiffOp| x.gerstenhaber_bracket(y).expect("dim");
        let s = sign((a.degree() * b.degree()).rem_euclid(2) == 1);
        let rhs = br(&br(a, b), c).add(&br(b, &br(a, c)).scale(&s)).expect("dim");
        out.exact(br(a, &br(b, c)).sub(&rhs).expect("dim").is_zero());
    }
    out.finish(json!({"dim": dim, "chains": 100, "max_p": 4, "field_triples": 100, "cochain_triples": 40}))
}

fn grid_cases(rng: &mut TestRng) -> Vec<(MultiVector, NegCyclicChain)> {
    let mut cases = Vec::new();
    for k in 0..=2usize {
        for l in 0..=2u32 {
            for p in 0..=2usize {
                let g = random::multivector(rng, 2, k, l, 2, 2);
                let a = NegCyclicChain::from_chain(random::chain(rng, 2, p, 2, 2));
                cases.push((g, a));
            }
        }
    }
    cases
}

fn f1_closed_form(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(5, "f1-closed-form", "graph-sum F₁(γv^ℓ; a) = (−1)^p u^s γ⌞H(a) on (k,ℓ,p) ∈ {0..2}³, d = 2", "first Taylor component as contraction with the HKR map");
    let exact = Engine::new(cfg.params(samples));
    let raw = Engine::new(cfg.params(samples).raw());
    let cases = grid_cases(&mut rng_for(cfg, 5));
    for (g, a) in &cases {
        let word = GammaWord::new(2, vec![g.clone()]).expect("homogeneous");
        let closed = f1_closed(g, a).expect("homogeneous");
        let graph = taylor_component(&exact, &word, a).expect("evaluates");
        out.exact(graph.is_exact() && graph == closed);
        let diff = taylor_component(&raw, &word, a).expect("evaluates").sub(&closed);
        let cap = CAP * closed.max_abs().max(1.0);
        out.ratio((diff.max_abs() / cap).max(sigma_ratio(&diff, cfg)));
    }
    let inputs: Vec<Value> = cases.iter().map(|(g, a)| json!({"gamma": g, "a": a})).collect();
    out.finish(json!({"dim": 2, "cases": inputs}))
}

fn miranda_one(cfg: &VerifyConfig) -> Outcome {
    let mut out = Outcome::new(6, "miranda-n1", "F₁ quadratic relation residual = 0 exactly, k ≤ 2, ℓ ≤ 1, p ≤ 2, d = 2", "quadratic relation of the Taylor components");
    let engine = Engine::new(cfg.params(cfg.samples));
    let hp = HalfPlaneWeights::new(cfg.params(cfg.samples));
    let mut rng = rng_for(cfg, 6);
    let mut inputs = Vec::new();
    for _ in 0..cfg.trials.unwrap_or(20) {
        let k = rng.random_range(0..=2);
        let l = rng.random_range(0..=1);
        let p = rng.random_range(0..=2);
        let g = random::multivector(&mut rng, 2, k, l, 2, 2);
        let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
        let word = GammaWord::new(2, vec![g.clone()]).expect("homogeneous");
        out.exact(miranda_residual(&engine, &hp, &word, &a).is_ok_and(|r| r.is_exactly_zero()));
        inputs.push(json!({"gamma": [g], "a": a}));
    }
    out.finish(json!({"dim": 2, "cases": inputs}))
}

fn miranda_two(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(7, "miranda-n2-function-slots", "F₂ quadratic relation residual with γᵢ = fᵢ v, within 3σ componentwise, p ≤ 1", "quadratic relation of the Taylor components");
    let engine = Engine::new(cfg.params(samples).raw());
    let hp = HalfPlaneWeights::new(cfg.params(samples));
    let mut rng = rng_for(cfg, 7);
    let mut inputs = Vec::new();
    for i in 0..5 {
        let slots: Vec<MultiVector> = (0..2).map(|_| MultiVector::from_function(&random::reduced_poly(&mut rng, 2, 2, 2)).times_v(1)).collect();
        let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, i % 2, 2, 2));
        let word = GammaWord::new(2, slots.clone()).expect("homogeneous");
        let (mut sampled, mut exactly_zero) = (0, false);
        match miranda_residual(&engine, &hp, &word, &a) {
            Ok(r) => {
                sampled = r.estimates().len();
                exactly_zero = r.is_exactly_zero();
                out.ratio(sigma_ratio(&r, cfg));
            }
            Err(_) => out.exact(false),
        }
        inputs.push(json!({"gamma": slots, "a": a, "sampled_weights": sampled, "exactly_zero": exactly_zero}));
    }
    out.finish(json!({"dim": 2, "cases": inputs}))
}

fn lift(f: &PolyFunction) -> TaylorResult {
    TaylorResult::exact(0, MultiVector::from_function(f))
}

fn star(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(8, "star-product", "x₁⋆x₂ − x₂⋆x₁ = ε exactly at order ε; (f⋆g)⋆h − f⋆(g⋆h) within 3σ at ε² over all monomial triples of degree ≤ 2, π = ∂₁∧∂₂; reversing U₂ breaks it", "star product from a Poisson bivector");
    let hp = HalfPlaneWeights::new(cfg.params(samples));
    let pi = MultiVector::from_parts(&PolyFunction::one(2), &[0, 1]).expect("dim 2");
    let Ok(series) = star_product(&pi, 2, &hp) else {
        out.exact(false);
        return out.finish(Value::Null);
    };
    let (x1, x2) = (lift(&PolyFunction::var(2, 0)), lift(&PolyFunction::var(2, 1)));
    let ab = series.apply(&x1, &x2).expect("arity 2");
    let ba = series.apply(&x2, &x1).expect("arity 2");
    out.exact(ab[0].sub(&ba[0]).is_exactly_zero());
    out.exact(ab[1].sub(&ba[1]) == lift(&PolyFunction::one(2)));
    let monomials: Vec<PolyFunction> = [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
        .iter()
        .map(|e| PolyFunction::monomial(2, Exponent(e.to_vec()), Q::one()))
        .collect();
    let mut flipped = series.clone();
    flipped.coefficients[2] = flipped.coefficients[2].scale(&-Q::one());
    let (mut weighted, mut flip_detected) = (0usize, false);
    for f in &monomials {
        for g in &monomials {
            for h in &monomials {
                let assoc = series.associator(f, g, h).expect("evaluates");
                out.exact(assoc[0].is_exactly_zero() && assoc[1].is_exactly_zero());
                if !assoc[2].is_exactly_zero() {
                    weighted += 1;
                    out.ratio(sigma_ratio(&assoc[2], cfg));
                }
                flip_detected |= sigma_ratio(&flipped.associator(f, g, h).expect("evaluates")[2], cfg) > 1.0;
            }
        }
    }
    out.exact(weighted > 0 && flip_detected);
    out.finish(json!({"pi": pi, "monomials": monomials, "triples": monomials.len().pow(3), "weighted_triples": weighted, "sign_flip_detected": flip_detected}))
}

fn trace(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(9, "trace-structure", "H₀ = f exactly for unimodular (π, h, f); disconnected-vertex resummation within 3σ for (k,n) ∈ {(1,0),(1,1),(2,0)}", "trace for unimodular Poisson structures; disconnected-vertex resummation");
    let exact = Engine::new(cfg.params(samples));
    let raw = Engine::new(cfg.params(samples).raw());
    let mut rng = rng_for(cfg, 9);
    let mut inputs = Vec::new();
    for i in 0..10 {
        let dim = 2 + i % 2;
        let (pi, h) = random::unimodular(&mut rng, dim);
        let f = random::poly(&mut rng, dim, 2, 3);
        let pd = PoissonData::new(pi.clone(), h.clone());
        let ok = check_unimodular(&pd).ok && trace_integrand(&exact, &pd, &f, 0).is_ok_and(|t| t.terms[0] == lift(&f));
        out.exact(ok);
        inputs.push(json!({"pi": pi, "h": h, "f": f}));
    }
    let (pi, h) = random::unimodular(&mut rng, 3);
    let f = random::poly(&mut rng, 3, 2, 2);
    let pd = PoissonData::new(pi.clone(), h.clone());
    for (k, n) in [(1, 0), (1, 1), (2, 0)] {
        match resummation_residual(&raw, &pd, &f, k, n) {
            Ok(r) => out.ratio(sigma_ratio(&r, cfg)),
            Err(_) => out.exact(false),
        }
    }
    out.finish(json!({"leading": inputs, "resummation": {"pi": pi, "h": h, "f": f}}))
}

/// A nonzero vector field on ℝ² with coefficients of degree ≤ 1.
fn random_affine(rng: &mut TestRng) -> MultiVector {
    loop {
        let mut g = MultiVector::zero(2);
        for i in 0..2 {
            let c = random::poly(rng, 2, 1, 3);
            g = g.add(&MultiVector::from_parts(&c, &[i]).expect("dim 2")).expect("dim 2");
        }
        if !g.is_zero() {
            return g;
        }
    }
}

fn affine(cfg: &VerifyConfig, samples: usize) -> Outcome {
    let mut out = Outcome::new(10, "affine-equivariance", "F_n(γ₁⋯; a) = γ₁ ∧ F_{n−1}(⋯; a) for affine γ₁: exact at n = 1, within 3σ at n = 2", "equivariance under affine vector fields");
    let exact = Engine::new(cfg.params(samples));
    let raw = Engine::new(cfg.params(samples).raw());
    let mut rng = rng_for(cfg, 10);
    let empty = GammaWord::new(2, vec![]).expect("empty word");
    let mut ones = Vec::new();
    while ones.len() < 10 {
        let g1 = random_affine(&mut rng);
        let a = random::neg_cyclic_chain(&mut rng, 2, 1, 1, 2);
        out.exact(affine_property_check(&exact, &g1, &empty, &a).is_ok_and(|r| r.is_exactly_zero()));
        ones.push(json!({"gamma1": g1, "a": a}));
    }
    let mut twos = Vec::new();
    let mut sampled = 0usize;
    for (k2, l2) in [(1, 1), (2, 0), (0, 2)] {
        let g1 = random_affine(&mut rng);
        let g2 = random::multivector(&mut rng, 2, k2, l2, 2, 2);
        let a = random::neg_cyclic_chain(&mut rng, 2, 0, 0, 2);
        let rest = GammaWord::new(2, vec![g2.clone()]).expect("homogeneous");
        match affine_property_check(&raw, &g1, &rest, &a) {
            Ok(r) => {
                sampled += r.estimates().len();
                out.ratio(sigma_ratio(&r, cfg));
            }
            Err(_) => out.exact(false),
        }
        twos.push(json!({"gamma1": g1, "gamma2": g2, "a": a}));
    }
    out.exact(sampled > 0);
    out.finish(json!({"n1": ones, "n2": twos, "n2_sampled_weights": sampled}))
}

/// Re-runs every Monte Carlo criterion already in `records` with fresh caches and compares the
/// serialized records byte for byte.
pub(super) fn determinism(cfg: &VerifyConfig, records: &[Record]) -> Record {
    let mut out = Outcome::new(11, "determinism", "re-running the Monte Carlo checks with the same seed gives byte-identical records", "artifact reproducibility");
    let mut rerun = Vec::new();
    for r in records.iter().filter(|r| r.samples > 0) {
        let again = run_criterion(cfg, r.criterion);
        let same = serde_json::to_string(r).ok() == serde_json::to_string(&again).ok();
        out.exact(same);
        rerun.push(r.name.clone());
    }
    out.finish(json!({"rerun": rerun})).into_record(cfg, 0, false)
}
