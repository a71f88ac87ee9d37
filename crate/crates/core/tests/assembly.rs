mod common;

use std::collections::BTreeMap;

use cyclic_core::assembly::*;
use cyclic_core::gradedcore::rational::factorial;
use cyclic_core::gradedcore::{Exponent, MultiVector, PolyFunction, Q};
use cyclic_core::graphs::{enumerate_with_degrees, Target};
use cyclic_core::hochschild::{HochschildChain, NegCyclicChain};
use cyclic_core::random;
use cyclic_core::weights::weight::{mc_integral, FormSpec};
use cyclic_core::weights::McParams;
use cyclic_core::Error;
use num_traits::One;

fn engine() -> Engine {
    Engine::new(McParams::default())
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn fun(f: &PolyFunction) -> NegCyclicChain {
    NegCyclicChain::from_chain(HochschildChain::from_tuple(std::slice::from_ref(f)).unwrap())
}

fn bivector(c: PolyFunction) -> MultiVector {
    MultiVector::from_parts(&c, &[0, 1]).unwrap()
}

#[test]
fn f0_is_identity_on_functions_and_vanishes_above() {
    let e = engine();
    let mut rng = random::rng(1);
    let empty = GammaWord::new(2, vec![]).unwrap();
    let f = random::poly(&mut rng, 2, 3, 3);
    let r = taylor_component(&e, &empty, &fun(&f)).unwrap();
    assert_eq!(r.exact_value().unwrap(), BTreeMap::from([(0, MultiVector::from_function(&f))]));
    for p in 1..=3 {
        let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
        assert!(taylor_component(&e, &empty, &a).unwrap().is_exactly_zero());
    }
}

#[test]
fn f1_graph_sum_equals_closed_form_on_grid() {
    let e = engine();
    let mut rng = random::rng(5);
    for k in 0..=2usize {
        for l in 0..=2u32 {
            for p in 0..=2usize {
                let g = random::multivector(&mut rng, 2, k, l, 2, 2);
                let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
                let word = GammaWord::new(2, vec![g.clone()]).unwrap();
                let graph = taylor_component(&e, &word, &a).unwrap();
                assert!(graph.is_exact(), "k={k} l={l} p={p}");
                assert_eq!(graph, f1_closed(&g, &a).unwrap(), "k={k} l={l} p={p}");
            }
        }
    }
}

#[test]
fn f1_raw_monte_carlo_within_tolerance() {
    let e = Engine::new(McParams::default().raw());
    let mut rng = random::rng(5);
    for k in 0..=2usize {
        for l in 0..=2u32 {
            for p in 0..=2usize {
                let g = random::multivector(&mut rng, 2, k, l, 2, 2);
                let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
                let word = GammaWord::new(2, vec![g.clone()]).unwrap();
                let closed = f1_closed(&g, &a).unwrap();
                let diff = taylor_component(&e, &word, &a).unwrap().sub(&closed);
                let scale = closed.max_abs().max(1.0);
                assert!(diff.within_sigma(3.0), "k={k} l={l} p={p}: {:?}", diff.components());
                assert!(diff.max_abs() <= 2e-2 * scale, "k={k} l={l} p={p}");
            }
        }
    }
}

#[test]
fn f1_on_unit_vector_and_coordinate_chain() {
    // F₁(∂₁ v; (f, x₁)) = −f
    let e = engine();
    let mut rng = random::rng(8);
    let f = random::poly(&mut rng, 2, 2, 3);
    let a = NegCyclicChain::from_chain(HochschildChain::from_tuple(&[f.clone(), PolyFunction::var(2, 0)]).unwrap());
    let word = GammaWord::new(2, vec![MultiVector::partial_field(2, 0).times_v(1)]).unwrap();
    let r = taylor_component(&e, &word, &a).unwrap();
    assert_eq!(r.exact_value().unwrap(), BTreeMap::from([(0, MultiVector::from_function(&f.neg()))]));
}

fn sorted_with_sign(edges: &[(usize, Target)]) -> Option<(Vec<(usize, Target)>, bool)> {
    let mut v = edges.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, negative))
}

fn graph_expansion(word: &GammaWord, a: &HochschildChain) -> BTreeMap<common::FormKey, MultiVector> {
    let dim = word.dim();
    let k: Vec<usize> = word.bidegrees().iter().map(|b| b.0).collect();
    let deg: Vec<u32> = word.bidegrees().iter().map(|b| b.1).collect();
    let mut out: BTreeMap<common::FormKey, MultiVector> = BTreeMap::new();
    for p in a.degrees() {
        let part = a.part(p);
        for g in enumerate_with_degrees(&k, p + 1, &deg) {
            let black: Vec<(usize, Target)> = g.black_edges().into_iter().map(|e| (e.vertex, g.target(e))).collect();
            let Some((omegas, negative)) = sorted_with_sign(&black) else { continue };
            let pref: Q = g.k.iter().map(|&k| Q::one() / factorial(k)).product();
            let value = graph_term(&g, word, &part).unwrap().scale(&if negative { -pref } else { pref });
            let key = common::FormKey { omegas, phi: (0..g.n()).map(|i| g.r(i)).collect() };
            let entry = out.entry(key).or_insert_with(|| MultiVector::zero(dim));
            *entry = entry.add(&value).unwrap();
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[test]
fn graph_sum_agrees_with_direct_exponential_expansion() {
    let mut rng = random::rng(21);
    let mut nonempty = 0;
    for trial in 0..24 {
        let n = trial % 3;
        let slots: Vec<MultiVector> = (0..n)
            .map(|_| {
                let k = rand::Rng::random_range(&mut rng, 0..=2usize);
                let l = rand::Rng::random_range(&mut rng, 0..=1u32);
                random::multivector(&mut rng, 2, k, l, 2, 2)
            })
            .collect();
        let p = trial % 3;
        let a = random::chain(&mut rng, 2, p, 2, 2);
        let word = GammaWord::new(2, slots.clone()).unwrap();
        let graphs = graph_expansion(&word, &a);
        let direct = common::expand(2, &slots, &a);
        assert_eq!(graphs, direct, "trial {trial}");
        nonempty += usize::from(!direct.is_empty());
    }
    assert!(nonempty >= 12);
}

#[test]
fn swapping_slots_is_graded_symmetric() {
    let e = engine();
    let mut rng = random::rng(31);
    for (k1, l1, k2, l2, p) in [(1, 0, 1, 0, 0), (2, 0, 1, 0, 1), (1, 1, 0, 1, 0), (2, 0, 2, 0, 1)] {
        let g1 = random::multivector(&mut rng, 2, k1, l1, 1, 2);
        let g2 = random::multivector(&mut rng, 2, k2, l2, 1, 2);
        let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
        let w12 = GammaWord::new(2, vec![g1.clone(), g2.clone()]).unwrap();
        let w21 = GammaWord::new(2, vec![g2, g1]).unwrap();
        let degs = w12.degrees();
        let sign = if (degs[0] * degs[1]).rem_euclid(2) == 1 { q(-1) } else { q(1) };
        let f12 = taylor_component(&e, &w12, &a).unwrap();
        let f21 = taylor_component(&e, &w21, &a).unwrap();
        let diff = f12.sub(&f21.scale(&sign));
        assert!(diff.within_sigma(3.0), "({k1},{l1})({k2},{l2}) p={p}: {:?}", diff.components());
    }
}

#[test]
fn pruned_graphs_have_vanishing_integrals() {
    let e = engine();
    let small = McParams::default().with_samples(4_000);
    let mut pruned = 0;
    for (k, m) in [(vec![1, 1], 1), (vec![2, 1], 2), (vec![2, 0], 1), (vec![1, 0], 2)] {
        for g in e.graphs(&k, m, &vec![0; k.len()]).iter() {
            if !e.weight(g).is_zero() {
                continue;
            }
            pruned += 1;
            let est = mc_integral(&FormSpec::from_graph(g), &small);
            assert!(est.mean.abs() <= 3.0 * est.stderr + 1e-12, "{g:?}: {est:?}");
        }
    }
    assert!(pruned > 0);
}

#[test]
fn miranda_residual_vanishes_for_empty_word() {
    let e = engine();
    let hp = HalfPlaneWeights::new(McParams::default());
    let mut rng = random::rng(40);
    let word = GammaWord::new(2, vec![]).unwrap();
    for p in 0..=2 {
        let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
        assert!(miranda_residual(&e, &hp, &word, &a).unwrap().is_exactly_zero());
    }
}

#[test]
fn miranda_residual_vanishes_exactly_for_one_slot() {
    let e = engine();
    let hp = HalfPlaneWeights::new(McParams::default());
    let mut rng = random::rng(11);
    for k in 0..=2usize {
        for l in 0..=1u32 {
            for p in 0..=2usize {
                let g = random::multivector(&mut rng, 2, k, l, 2, 2);
                let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
                let word = GammaWord::new(2, vec![g]).unwrap();
                let r = miranda_residual(&e, &hp, &word, &a).unwrap();
                assert!(r.is_exactly_zero(), "k={k} l={l} p={p}: {:?}", r.exact_value());
            }
        }
    }
}

#[test]
fn miranda_residual_vanishes_for_two_slots() {
    let e = engine();
    let hp = HalfPlaneWeights::new(McParams::default());
    let mut rng = random::rng(13);
    for (k1, l1, k2, l2, p) in [(1, 0, 1, 0, 0), (1, 1, 1, 0, 0), (1, 1, 1, 1, 1), (1, 0, 0, 1, 1)] {
        let g1 = random::multivector(&mut rng, 2, k1, l1, 2, 2);
        let g2 = random::multivector(&mut rng, 2, k2, l2, 2, 2);
        let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
        let word = GammaWord::new(2, vec![g1, g2]).unwrap();
        let groups = miranda_terms(&e, &hp, &word, &a).unwrap();
        let r = groups.iter().fold(TaylorResult::zero(2), |acc, (_, t)| acc.add(t));
        assert!(r.within_sigma(3.0), "({k1},{l1})({k2},{l2}) p={p}");
    }
}

#[test]
fn miranda_residual_for_function_slots_in_raw_mode() {
    let e = Engine::new(McParams::default().raw());
    let hp = HalfPlaneWeights::new(McParams::default());
    let mut rng = random::rng(12);
    for p in 0..=1usize {
        for _ in 0..3 {
            let g1 = MultiVector::from_function(&random::reduced_poly(&mut rng, 2, 2, 2)).times_v(1);
            let g2 = MultiVector::from_function(&random::reduced_poly(&mut rng, 2, 2, 2)).times_v(1);
            let a = NegCyclicChain::from_chain(random::chain(&mut rng, 2, p, 2, 2));
            let word = GammaWord::new(2, vec![g1, g2]).unwrap();
            let r = miranda_residual(&e, &hp, &word, &a).unwrap();
            assert!(r.within_sigma(3.0), "p={p}: {:?}", r.components());
        }
    }
}

#[test]
fn miranda_rejects_three_slots() {
    let e = engine();
    let hp = HalfPlaneWeights::new(McParams::default());
    let g = MultiVector::partial_field(2, 0);
    let word = GammaWord::new(2, vec![g.clone(), g.clone(), g]).unwrap();
    let a = fun(&PolyFunction::one(2));
    assert!(matches!(miranda_residual(&e, &hp, &word, &a), Err(Error::Unsupported(_))));
}

#[test]
fn u1_of_standard_bivector_on_coordinates() {
    let op = u1(&bivector(PolyFunction::one(2))).unwrap();
    let v = op.apply(&[PolyFunction::var(2, 0), PolyFunction::var(2, 1)]).unwrap();
    assert_eq!(v, PolyFunction::constant(2, Q::new(1.into(), 2.into())));
}

fn lift(f: &PolyFunction) -> TaylorResult {
    TaylorResult::exact(0, MultiVector::from_function(f))
}

#[test]
fn star_commutator_of_coordinates() {
    let hp = HalfPlaneWeights::new(McParams::default());
    let star = star_product(&bivector(PolyFunction::one(2)), 2, &hp).unwrap();
    let (x1, x2) = (lift(&PolyFunction::var(2, 0)), lift(&PolyFunction::var(2, 1)));
    let a = star.apply(&x1, &x2).unwrap();
    let b = star.apply(&x2, &x1).unwrap();
    assert!(a[0].sub(&b[0]).is_exactly_zero());
    assert_eq!(a[1].sub(&b[1]), lift(&PolyFunction::one(2)));
    assert!(a[2].sub(&b[2]).within_sigma(3.0));
}

#[test]
fn star_product_with_one_is_identity() {
    let hp = HalfPlaneWeights::new(McParams::default());
    let star = star_product(&bivector(PolyFunction::one(2)), 2, &hp).unwrap();
    let mut rng = random::rng(50);
    let f = random::poly(&mut rng, 2, 3, 3);
    let one = lift(&PolyFunction::one(2));
    for r in [star.apply(&lift(&f), &one).unwrap(), star.apply(&one, &lift(&f)).unwrap()] {
        assert_eq!(r[0], lift(&f));
        assert!(r[1].is_exactly_zero());
        assert!(r[2].is_exactly_zero());
    }
}

#[test]
fn star_rejects_non_poisson_bivector() {
    let hp = HalfPlaneWeights::new(McParams::default());
    let pi = bivector(PolyFunction::one(3)).add(&MultiVector::from_parts(&PolyFunction::var(3, 0), &[0, 2]).unwrap()).unwrap();
    assert!(matches!(star_product(&pi, 2, &hp), Err(Error::NotPoisson)));
}

fn associators(star: &StarSeries) -> Vec<Vec<TaylorResult>> {
    let x = |i| PolyFunction::var(2, i);
    let sq = |i| x(i).mul(&x(i)).unwrap();
    let triples = [(sq(0), sq(1), x(0).mul(&x(1)).unwrap()), (x(0), sq(1), sq(0)), (x(0).mul(&x(1)).unwrap(), x(0).mul(&x(1)).unwrap(), sq(1))];
    triples.iter().map(|(f, g, h)| star.associator(f, g, h).unwrap()).collect()
}

#[test]
fn star_product_is_associative_to_second_order() {
    let hp = HalfPlaneWeights::new(McParams::default());
    let star = star_product(&bivector(PolyFunction::one(2)), 2, &hp).unwrap();
    for assoc in associators(&star) {
        assert!(assoc[0].is_exactly_zero());
        assert!(assoc[1].is_exactly_zero());
        assert!(assoc[2].within_sigma(3.0), "{:?}", assoc[2].components());
    }
    let mut flipped = star.clone();
    flipped.coefficients[2] = flipped.coefficients[2].scale(&q(-1));
    assert!(associators(&flipped).iter().any(|a| !a[2].within_sigma(3.0)));
}

#[test]
fn unimodularity_examples() {
    let zero2 = PolyFunction::zero(2);
    assert!(check_unimodular(&PoissonData::new(bivector(PolyFunction::one(2)), zero2.clone())).ok);
    let x3 = PolyFunction::monomial(3, Exponent(vec![0, 0, 1]), Q::one());
    let rep = check_unimodular(&PoissonData::new(bivector(x3), PolyFunction::zero(3)));
    assert!(rep.ok && rep.poisson_residual.is_zero() && rep.divergence_residual.is_zero());
    let rep = check_unimodular(&PoissonData::new(bivector(PolyFunction::var(2, 0)), zero2));
    assert!(!rep.ok);
    assert_eq!(rep.divergence_residual, MultiVector::partial_field(2, 1));
}

#[test]
fn random_jacobian_structures_are_unimodular() {
    let mut rng = random::rng(60);
    for dim in [2, 3, 3, 4] {
        let (pi, h) = random::unimodular(&mut rng, dim);
        assert!(check_unimodular(&PoissonData::new(pi, h)).ok);
    }
}

#[test]
fn trace_leading_term_is_the_function() {
    let e = engine();
    let mut rng = random::rng(70);
    for trial in 0..6 {
        let dim = 2 + trial % 2;
        let (pi, h) = random::unimodular(&mut rng, dim);
        let f = random::poly(&mut rng, dim, 2, 3);
        let t = trace_integrand(&e, &PoissonData::new(pi, h.clone()), &f, 0).unwrap();
        assert_eq!(t.h, h);
        assert_eq!(t.terms[0], lift(&f));
    }
    let bad = PoissonData::new(bivector(PolyFunction::var(2, 0)), PolyFunction::zero(2));
    assert!(matches!(trace_integrand(&e, &bad, &PolyFunction::one(2), 0), Err(Error::NotUnimodular)));
}

#[test]
fn trace_first_order_without_hamiltonian() {
    let e = engine();
    let pi = bivector(PolyFunction::one(2));
    let f = PolyFunction::var(2, 0).mul(&PolyFunction::var(2, 1)).unwrap();
    let pd = PoissonData::new(pi.clone(), PolyFunction::zero(2));
    let t = trace_integrand(&e, &pd, &f, 1).unwrap();
    let word = GammaWord::new(2, vec![pi]).unwrap();
    assert_eq!(t.terms[1], taylor_component_with(&e, &word, &fun(&f), true).unwrap());
}

#[test]
fn disconnected_vertices_resum() {
    let e = Engine::new(McParams::default().raw());
    let mut rng = random::rng(80);
    for _ in 0..2 {
        let (pi, h) = random::unimodular(&mut rng, 3);
        let pd = PoissonData::new(pi, h);
        let f = random::poly(&mut rng, 3, 2, 2);
        for (k, n) in [(1, 0), (1, 1), (2, 0)] {
            let r = resummation_residual(&e, &pd, &f, k, n).unwrap();
            assert!(r.within_sigma(3.0), "k={k} n={n}: {:?}", r.components());
        }
    }
}

#[test]
fn affine_vector_fields_factor_out() {
    let e = engine();
    let mut rng = random::rng(90);
    for _ in 0..5 {
        let mut g1 = MultiVector::zero(2);
        for i in 0..2 {
            let c = random::poly(&mut rng, 2, 1, 3);
            g1 = g1.add(&MultiVector::from_parts(&c, &[i]).unwrap()).unwrap();
        }
        if g1.is_zero() {
            continue;
        }
        let a = random::neg_cyclic_chain(&mut rng, 2, 1, 1, 2);
        let r = affine_property_check(&e, &g1, &GammaWord::new(2, vec![]).unwrap(), &a).unwrap();
        assert!(r.is_exactly_zero());
    }
    let raw = Engine::new(McParams::default().raw());
    for _ in 0..2 {
        let g = MultiVector::from_function(&random::reduced_poly(&mut rng, 2, 2, 2)).times_v(1);
        let f = random::poly(&mut rng, 2, 2, 2);
        let rest = GammaWord::new(2, vec![g]).unwrap();
        let r = affine_property_check(&raw, &MultiVector::partial_field(2, 0), &rest, &fun(&f)).unwrap();
        assert!(r.within_sigma(3.0));
    }
}

#[test]
fn affine_check_rejects_curved_fields() {
    let e = engine();
    let x1sq = PolyFunction::var(2, 0).mul(&PolyFunction::var(2, 0)).unwrap();
    let g = MultiVector::from_parts(&x1sq, &[1]).unwrap();
    let word = GammaWord::new(2, vec![]).unwrap();
    assert!(matches!(affine_property_check(&e, &g, &word, &fun(&PolyFunction::one(2))), Err(Error::NotAffine)));
    assert!(!is_affine(&bivector(PolyFunction::one(2))));
}
