use cyclic_core::gradedcore::form::from_volume_interior;
use cyclic_core::gradedcore::*;
use cyclic_core::hochschild::*;
use cyclic_core::random as r;
use num_traits::{One, Zero};
use rand::Rng;

fn qi(i: i64) -> Q {
    Q::from_integer(i.into())
}

fn sgn(odd: bool) -> Q {
    if odd { -Q::one() } else { Q::one() }
}

/// Splits a field into its monomials, each returned as (v-power, θ indices, coefficient function).
fn monomials(g: &MultiVector) -> Vec<(u32, Vec<usize>, PolyFunction)> {
    g.terms()
        .iter()
        .map(|(k, c)| (k.vpow, k.theta.indices(), PolyFunction::monomial(g.dim(), k.exp.clone(), c.clone())))
        .collect()
}

fn mono_field(f: &PolyFunction, idx: &[usize]) -> MultiVector {
    MultiVector::from_parts(f, idx).unwrap()
}

/// Bracket built only from the Lie bracket of vector fields, `[ξ, f] = ξ(f)`,
/// graded antisymmetry and the Leibniz rule `[α∧β,γ] = α∧[β,γ] + (−1)^{|γ|(|β|+1)}[α,γ]∧β`.
fn leibniz_bracket(a: &MultiVector, b: &MultiVector) -> MultiVector {
    let dim = a.dim();
    let mut out = MultiVector::zero(dim);
    for (la, ia, fa) in monomials(a) {
        for (lb, ib, fb) in monomials(b) {
            let t = leibniz_mono(&fa, &ia, &fb, &ib).times_v(la + lb);
            out = out.add(&t).unwrap();
        }
    }
    out
}

fn apply_field(f: &PolyFunction, i: usize, g: &PolyFunction) -> PolyFunction {
    f.mul(&g.partial(i).unwrap()).unwrap()
}

fn leibniz_mono(fa: &PolyFunction, ia: &[usize], fb: &PolyFunction, ib: &[usize]) -> MultiVector {
    let dim = fa.dim();
    let (ka, kb) = (ia.len(), ib.len());
    if ka >= 2 {
        // α = (fa θ_{ia[..ka-1]}) ∧ θ_{ia[ka-1]}
        let head = mono_field(fa, &ia[..ka - 1]);
        let tail = mono_field(&PolyFunction::one(dim), &ia[ka - 1..]);
        let deg_g = kb as i64 - 1;
        let deg_tail = 0i64;
        let t1 = head.wedge(&leibniz_mono(&PolyFunction::one(dim), &ia[ka - 1..], fb, ib)).unwrap();
        let inner = leibniz_bracket(&head, &mono_field(fb, ib));
        let t2 = inner.wedge(&tail).unwrap().scale(&sgn((deg_g * (deg_tail + 1)).rem_euclid(2) == 1));
        return t1.add(&t2).unwrap();
    }
    if kb > ka {
        let da = ka as i64 - 1;
        let db = kb as i64 - 1;
        return leibniz_mono(fb, ib, fa, ia).scale(&-sgn((da * db).rem_euclid(2) == 1));
    }
    match (ka, kb) {
        (0, 0) => MultiVector::zero(dim),
        (1, 0) => MultiVector::from_function(&apply_field(fa, ia[0], fb)),
        (1, 1) => {
            let x = mono_field(&apply_field(fa, ia[0], fb), &[ib[0]]);
            let y = mono_field(&apply_field(fb, ib[0], fa), &[ia[0]]);
            x.sub(&y).unwrap()
        }
        _ => unreachable!(),
    }
}

fn random_field(rng: &mut r::TestRng, dim: usize, max_k: usize, max_l: u32) -> MultiVector {
    let k = rng.random_range(0..=max_k.min(dim));
    let l = rng.random_range(0..=max_l);
    r::multivector(rng, dim, k, l, 2, 2)
}

#[test]
fn schouten_matches_leibniz_oracle() {
    let mut rng = r::rng(11);
    for _ in 0..150 {
        let a = random_field(&mut rng, 3, 3, 1);
        let b = random_field(&mut rng, 3, 3, 1);
        assert_eq!(a.schouten(&b).unwrap(), leibniz_bracket(&a, &b), "a = {a}, b = {b}");
    }
}

#[test]
fn schouten_oracle_pins_the_function_example() {
    let x1 = PolyFunction::var(2, 0);
    let x2 = PolyFunction::var(2, 1);
    let g = MultiVector::from_parts(&x2, &[0, 1]).unwrap();
    let f = MultiVector::from_function(&x1);
    let expected = MultiVector::from_parts(&x2, &[1]).unwrap().neg();
    assert_eq!(leibniz_bracket(&g, &f), expected);
    assert_eq!(g.schouten(&f).unwrap(), expected);
}

#[test]
fn schouten_graded_antisymmetry() {
    let mut rng = r::rng(12);
    for _ in 0..200 {
        let a = random_field(&mut rng, 3, 3, 2);
        let b = random_field(&mut rng, 3, 3, 2);
        let (da, db) = (a.lie_degree().unwrap(), b.lie_degree().unwrap());
        let lhs = a.schouten(&b).unwrap();
        let rhs = b.schouten(&a).unwrap().scale(&-sgn((da * db).rem_euclid(2) == 1));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn schouten_graded_jacobi() {
    let mut rng = r::rng(13);
    for _ in 0..100 {
        let a = random_field(&mut rng, 3, 3, 1);
        let b = random_field(&mut rng, 3, 3, 1);
        let c = random_field(&mut rng, 3, 3, 1);
        let (da, db) = (a.lie_degree().unwrap(), b.lie_degree().unwrap());
        let lhs = a.schouten(&b.schouten(&c).unwrap()).unwrap();
        let r1 = a.schouten(&b).unwrap().schouten(&c).unwrap();
        let r2 = b.schouten(&a.schouten(&c).unwrap()).unwrap().scale(&sgn((da * db).rem_euclid(2) == 1));
        assert_eq!(lhs, r1.add(&r2).unwrap());
    }
}

#[test]
fn divergence_agrees_with_de_rham_oracle() {
    let mut rng = r::rng(14);
    for _ in 0..100 {
        let dim = rng.random_range(1..=4);
        let g = random_field(&mut rng, dim, dim, 0);
        let oracle = from_volume_interior(&g.interior_volume().unwrap().d());
        assert_eq!(g.divergence(), oracle);
    }
    let x1 = PolyFunction::var(2, 0);
    let g = MultiVector::from_parts(&x1, &[0, 1]).unwrap();
    assert_eq!(from_volume_interior(&g.interior_volume().unwrap().d()), MultiVector::partial_field(2, 1));
}

#[test]
fn divergence_is_a_derivation_and_squares_to_zero() {
    let mut rng = r::rng(15);
    for _ in 0..100 {
        let a = random_field(&mut rng, 3, 3, 1);
        let b = random_field(&mut rng, 3, 3, 1);
        let da = a.lie_degree().unwrap();
        let lhs = a.schouten(&b).unwrap().divergence();
        let r1 = a.divergence().schouten(&b).unwrap();
        let r2 = a.schouten(&b.divergence()).unwrap().scale(&sgn(da.rem_euclid(2) == 1));
        assert_eq!(lhs, r1.add(&r2).unwrap());
        assert!(a.divergence().divergence().is_zero());
        assert!(a.delta_omega().delta_omega().is_zero());
    }
}

fn random_form(rng: &mut r::TestRng, dim: usize) -> DiffForm {
    let mut w = DiffForm::zero(dim);
    for _ in 0..3 {
        let deg = rng.random_range(0..=dim);
        let mut idx: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            let j = rng.random_range(0..=i);
            idx.swap(i, j);
        }
        let f = r::poly(rng, dim, 2, 2);
        w = w.add(&DiffForm::from_parts(&f, &idx[..deg]).unwrap()).unwrap();
    }
    w
}

#[test]
fn lie_action_commutes_with_d() {
    let mut rng = r::rng(16);
    for _ in 0..100 {
        let g = random_field(&mut rng, 3, 3, 0);
        let k = g.bidegree().unwrap().0 as i64;
        let w = random_form(&mut rng, 3);
        let lhs = lie_action(&g, &w).unwrap().d();
        let rhs = lie_action(&g, &w.d()).unwrap().scale(&sgn((k - 1).rem_euclid(2) == 1));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn lie_action_of_vector_field_is_lie_derivative() {
    let mut rng = r::rng(17);
    for _ in 0..50 {
        let xi = r::multivector(&mut rng, 3, 1, 0, 2, 2);
        let f = r::poly(&mut rng, 3, 3, 3);
        let direct: PolyFunction = (0..3)
            .map(|i| xi.coefficient(0, IndexSet::single(i)).mul(&f.partial(i).unwrap()).unwrap())
            .fold(PolyFunction::zero(3), |a, b| a.add(&b).unwrap());
        assert_eq!(lie_action(&xi, &DiffForm::from_function(&f)).unwrap(), DiffForm::from_function(&direct));
    }
}

#[test]
fn lie_action_of_function_matches_term_expansion() {
    let mut rng = r::rng(18);
    for _ in 0..50 {
        let f = r::poly(&mut rng, 3, 2, 3);
        let w = random_form(&mut rng, 3);
        let expected = DiffForm::from_function(&f).d().wedge(&w).unwrap();
        assert_eq!(lie_action(&MultiVector::from_function(&f), &w).unwrap(), expected);
    }
}

#[test]
fn contraction_against_interior_composition() {
    // ⟨γ⌞ω, η⟩ = (−1)^{p(p−1)/2} ⟨γ, ω ∧ η⟩ for a p-form ω and η of complementary degree k − p
    let mut rng = r::rng(19);
    for _ in 0..100 {
        let dim = 3;
        let k = rng.random_range(0..=3);
        let g = r::multivector(&mut rng, dim, k, 0, 2, 2);
        let p = rng.random_range(0..=k);
        let idx: Vec<usize> = (0..p).collect();
        let w = DiffForm::from_parts(&r::poly(&mut rng, dim, 1, 2), &idx).unwrap();
        let eta = random_form(&mut rng, dim).part(k - p);
        let lhs = eta.interior(&contraction(&g, &w).unwrap()).unwrap();
        let s = sgn(((p * p.saturating_sub(1)) / 2) % 2 == 1);
        let rhs = w.wedge(&eta).unwrap().interior(&g).unwrap().scale(&s);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn contraction_of_wedge_is_iterated() {
    let mut rng = r::rng(20);
    for _ in 0..100 {
        let g = r::multivector(&mut rng, 3, 3, 0, 2, 2);
        let a = random_form(&mut rng, 3);
        let b = random_form(&mut rng, 3);
        let lhs = contraction(&g, &a.wedge(&b).unwrap()).unwrap();
        let rhs = contraction(&contraction(&g, &b).unwrap(), &a).unwrap();
        assert_eq!(lhs, rhs);
    }
}

/// Sorts the word by adjacent transpositions, tracking the sign.
fn bubble_koszul(perm: &[usize], degrees: &[i64]) -> i8 {
    let mut word: Vec<usize> = perm.to_vec();
    let mut s = 1i8;
    loop {
        let mut swapped = false;
        for i in 0..word.len().saturating_sub(1) {
            if word[i] > word[i + 1] {
                if (degrees[word[i]] * degrees[word[i + 1]]).rem_euclid(2) == 1 {
                    s = -s;
                }
                word.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            return s;
        }
    }
}

#[test]
fn koszul_sign_matches_transposition_oracle() {
    let mut rng = r::rng(21);
    let ctx = KoszulContext::new(vec![1, 2, 1]);
    assert_eq!(koszul_sign(&[1, 2, 0], &ctx).unwrap(), bubble_koszul(&[1, 2, 0], &ctx.degrees));
    assert_eq!(koszul_sign(&[1, 2, 0], &ctx).unwrap(), -1);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let degrees: Vec<i64> = (0..n).map(|_| rng.random_range(-1..=4)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let ctx = KoszulContext::new(degrees.clone());
        assert_eq!(koszul_sign(&perm, &ctx).unwrap(), bubble_koszul(&perm, &degrees));
    }
}

#[test]
fn hochschild_differentials_square_to_zero_and_anticommute() {
    let mut rng = r::rng(22);
    for _ in 0..100 {
        let p = rng.random_range(0..=4);
        let a = r::chain(&mut rng, 2, p, 2, 3);
        assert!(a.b().b().is_zero());
        assert!(a.connes_b().connes_b().is_zero());
        assert!(a.b().connes_b().add(&a.connes_b().b()).unwrap().is_zero());
    }
    for _ in 0..30 {
        let a = r::neg_cyclic_chain(&mut rng, 2, 3, 2, 2);
        assert!(a.b_plus_ub().b_plus_ub().is_zero());
    }
}

#[test]
fn connes_b_normalization_oracle() {
    // Expand B(1, x1) without normalization: (1,1,x1) + (−1)^1 (1,x1,1); both contain a unit in position ≥ 1.
    let x1 = PolyFunction::var(2, 0);
    let one = PolyFunction::one(2);
    let raw = [vec![one.clone(), one.clone(), x1.clone()], vec![one.clone(), x1.clone(), one.clone()]];
    let mut expanded = HochschildChain::zero(2);
    for (i, t) in raw.iter().enumerate() {
        expanded.add_poly_tuple(t, &sgn(i % 2 == 1));
    }
    let b = HochschildChain::from_tuple(&[one, x1]).unwrap().connes_b();
    assert_eq!(b, expanded);
    assert!(b.is_zero());
}

#[test]
fn hkr_is_a_chain_map() {
    let mut rng = r::rng(23);
    for _ in 0..100 {
        let p = rng.random_range(0..=4);
        let a = r::chain_tuple(&mut rng, 3, p, 2, 2);
        assert!(hkr_chain(&a.b()).is_zero());
        // intertwines B with d up to the factor produced by 1/p!
        let lhs = hkr_chain(&a.connes_b());
        let rhs = hkr_chain(&a).d();
        assert_eq!(lhs, rhs);
    }
}

fn normalized_cochain(rng: &mut r::TestRng, arity: usize) -> MultiDiffOp {
    let raw = r::cochain(rng, 2, arity, 2, 1, 3);
    let mut op = MultiDiffOp::zero(2, arity);
    for (k, c) in raw.terms() {
        if k.iter().all(|e| !e.is_zero()) {
            op.add_term(k.clone(), c.clone());
        }
    }
    op
}

#[test]
fn multiplication_acts_by_signed_boundary() {
    let mut rng = r::rng(24);
    let mu = MultiDiffOp::mu(2);
    for _ in 0..50 {
        let p = rng.random_range(0..=4);
        let a = r::chain(&mut rng, 2, p, 2, 3);
        let expected = a.b().scale(&sgn(p % 2 == 0));
        assert_eq!(cochain_action(&mu, &a).unwrap(), expected);
    }
}

#[test]
fn cochain_action_is_a_lie_module() {
    let mut rng = r::rng(25);
    for _ in 0..60 {
        let ka = rng.random_range(1..=3);
        let kb = rng.random_range(1..=3);
        let phi = if rng.random_bool(0.3) { MultiDiffOp::mu(2) } else { normalized_cochain(&mut rng, ka) };
        let psi = normalized_cochain(&mut rng, kb);
        let p = rng.random_range(0..=4);
        let a = r::chain(&mut rng, 2, p, 2, 2);
        let l = cochain_action(&phi, &cochain_action(&psi, &a).unwrap()).unwrap();
        let rr = cochain_action(&psi, &cochain_action(&phi, &a).unwrap()).unwrap();
        let s = sgn((phi.degree() * psi.degree()).rem_euclid(2) == 1);
        let br = cochain_action(&phi.gerstenhaber_bracket(&psi).unwrap(), &a).unwrap();
        assert_eq!(l.sub(&rr.scale(&s)).unwrap(), br);
    }
}

#[test]
fn cochain_action_commutes_with_b_plus_ub_for_cocycles() {
    let mut rng = r::rng(26);
    for _ in 0..30 {
        let k = rng.random_range(0..=2);
        let g = r::multivector(&mut rng, 2, k.max(1), 0, 2, 2);
        let phi = hkr_cochain(&g).unwrap();
        assert!(phi.hochschild_diff().unwrap().is_zero());
        let a = r::neg_cyclic_chain(&mut rng, 2, 3, 1, 2);
        let lhs = cochain_action_neg(&phi, &a).unwrap().b_plus_ub();
        let rhs = cochain_action_neg(&phi, &a.b_plus_ub()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn gerstenhaber_bracket_jacobi_and_square_zero() {
    let mut rng = r::rng(27);
    for _ in 0..40 {
        let ops: Vec<MultiDiffOp> = (0..3)
            .map(|_| {
                let k = rng.random_range(0..=3);
                r::cochain(&mut rng, 2, k, 2, 1, 2)
            })
            .collect();
        let (a, b, c) = (&ops[0], &ops[1], &ops[2]);
        let lhs = a.gerstenhaber_bracket(&b.gerstenhaber_bracket(c).unwrap()).unwrap();
        let r1 = a.gerstenhaber_bracket(b).unwrap().gerstenhaber_bracket(c).unwrap();
        let r2 = b
            .gerstenhaber_bracket(&a.gerstenhaber_bracket(c).unwrap())
            .unwrap()
            .scale(&sgn((a.degree() * b.degree()).rem_euclid(2) == 1));
        assert!(lhs.sub(&r1.add(&r2).unwrap()).unwrap().is_zero());
        assert!(a.hochschild_diff().unwrap().hochschild_diff().unwrap().is_zero());
        let anti = a.gerstenhaber_bracket(b).unwrap().add(
            &b.gerstenhaber_bracket(a).unwrap().scale(&sgn((a.degree() * b.degree()).rem_euclid(2) == 1)),
        );
        assert!(anti.unwrap().is_zero());
    }
    assert!(MultiDiffOp::mu(2).gerstenhaber_bracket(&MultiDiffOp::mu(2)).unwrap().is_zero());
}

#[test]
fn hkr_cochain_is_a_cocycle_and_antisymmetric() {
    let mut rng = r::rng(28);
    for _ in 0..30 {
        let k = rng.random_range(0..=3);
        let g = r::multivector(&mut rng, 3, k, 0, 2, 2);
        let phi = hkr_cochain(&g).unwrap();
        assert!(phi.hochschild_diff().unwrap().is_zero());
    }
    let _ = qi(0).is_zero();
}
