//! Seeded random generators for polynomial, multivector, chain and cochain test inputs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::gradedcore::{Exponent, IndexSet, MultiVector, MvKey, PolyFunction, Q};
use crate::hochschild::{HochschildChain, MultiDiffOp, NegCyclicChain};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn small_q(rng: &mut TestRng) -> Q {
    let n: i64 = rng.random_range(-3..=3);
    let d: i64 = rng.random_range(1..=2);
    let n = if n == 0 { 1 } else { n };
    Q::new(n.into(), d.into())
}

pub fn exponent(rng: &mut TestRng, dim: usize, max_deg: u32) -> Exponent {
    let total = rng.random_range(0..=max_deg);
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.random_range(0..dim)] += 1;
    }
    Exponent(e)
}

fn nonconstant_exponent(rng: &mut TestRng, dim: usize, max_deg: u32) -> Exponent {
    let mut e = exponent(rng, dim, max_deg.max(1));
    if e.is_zero() {
        e.0[rng.random_range(0..dim)] = 1;
    }
    e
}

pub fn poly(rng: &mut TestRng, dim: usize, max_deg: u32, max_terms: usize) -> PolyFunction {
    let n = rng.random_range(1..=max_terms.max(1));
    let mut f = PolyFunction::zero(dim);
    for _ in 0..n {
        f.add_term(exponent(rng, dim, max_deg), small_q(rng));
    }
    f
}

/// A nonconstant polynomial without constant term.
pub fn reduced_poly(rng: &mut TestRng, dim: usize, max_deg: u32, max_terms: usize) -> PolyFunction {
    let n = rng.random_range(1..=max_terms.max(1));
    let mut f = PolyFunction::zero(dim);
    while f.is_zero() {
        for _ in 0..n {
            f.add_term(nonconstant_exponent(rng, dim, max_deg), small_q(rng));
        }
    }
    f
}

fn theta_set(rng: &mut TestRng, dim: usize, k: usize) -> IndexSet {
    let mut idx: Vec<usize> = (0..dim).collect();
    for i in (1..idx.len()).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    IndexSet::from_indices(&idx[..k]).expect("distinct").0
}

/// A field homogeneous of bidegree `(k, l)`; requires `k ≤ dim`.
pub fn multivector(rng: &mut TestRng, dim: usize, k: usize, l: u32, max_deg: u32, max_terms: usize) -> MultiVector {
    let mut g = MultiVector::zero(dim);
    let n = rng.random_range(1..=max_terms.max(1));
    while g.is_zero() {
        for _ in 0..n {
            let key = MvKey { vpow: l, theta: theta_set(rng, dim, k), exp: exponent(rng, dim, max_deg) };
            g.add_term(key, small_q(rng));
        }
    }
    g
}

/// A chain with a single tuple of degree `p` and random polynomial entries.
pub fn chain_tuple(rng: &mut TestRng, dim: usize, p: usize, max_deg: u32, max_terms: usize) -> HochschildChain {
    loop {
        let mut entries = vec![poly(rng, dim, max_deg, max_terms)];
        for _ in 0..p {
            entries.push(reduced_poly(rng, dim, max_deg, max_terms));
        }
        let a = HochschildChain::from_tuple(&entries).expect("same dimension");
        if !a.is_zero() {
            return a;
        }
    }
}

/// Sum of a few tuples of degree `p` with monomial entries.
pub fn chain(rng: &mut TestRng, dim: usize, p: usize, max_deg: u32, terms: usize) -> HochschildChain {
    let mut a = HochschildChain::zero(dim);
    while a.is_zero() {
        for _ in 0..terms.max(1) {
            let mut key = vec![exponent(rng, dim, max_deg)];
            for _ in 0..p {
                key.push(nonconstant_exponent(rng, dim, max_deg));
            }
            a.add_term(key, small_q(rng));
        }
    }
    a
}

pub fn neg_cyclic_chain(rng: &mut TestRng, dim: usize, max_p: usize, max_u: u32, max_deg: u32) -> NegCyclicChain {
    let mut a = NegCyclicChain::zero(dim);
    for j in 0..=max_u {
        let p = rng.random_range(0..=max_p);
        a.add_part(j, &chain(rng, dim, p, max_deg, 2));
    }
    a
}

/// A multidifferential operator of the given arity with derivatives of order ≤ `max_order` per slot.
pub fn cochain(rng: &mut TestRng, dim: usize, arity: usize, max_order: u32, max_deg: u32, terms: usize) -> MultiDiffOp {
    let mut op = MultiDiffOp::zero(dim, arity);
    for _ in 0..terms.max(1) {
        let alphas = (0..arity).map(|_| exponent(rng, dim, max_order)).collect();
        op.add_term(alphas, poly(rng, dim, max_deg, 2));
    }
    op
}

/// A unimodular pair `(π, h)`. In d = 2, π and h are constant. In d ≥ 3, π is the Jacobian structure
/// `ι_{dF}(∂₀∧∂₁∧∂₂)` of a random quadratic F in x₀, x₁, x₂, and h is an affine function of the
/// Casimir F.
pub fn unimodular(rng: &mut TestRng, dim: usize) -> (MultiVector, PolyFunction) {
    let c = small_q(rng);
    if dim < 3 {
        let pi = MultiVector::from_parts(&PolyFunction::constant(dim, small_q(rng)), &[0, 1]).expect("dim 2");
        return (pi, PolyFunction::constant(dim, c));
    }
    let mut f = PolyFunction::zero(dim);
    while f.partial(0).unwrap().is_zero() && f.partial(1).unwrap().is_zero() && f.partial(2).unwrap().is_zero() {
        f = PolyFunction::zero(dim);
        for _ in 0..3 {
            let mut e = vec![0u32; dim];
            for _ in 0..rng.random_range(1..=2) {
                e[rng.random_range(0..3)] += 1;
            }
            f.add_term(Exponent(e), small_q(rng));
        }
    }
    let mut pi = MultiVector::zero(dim);
    for (i, j, l, s) in [(0, 1, 2, 1), (0, 2, 1, -1), (1, 2, 0, 1)] {
        let coeff = f.partial(l).expect("in range").scale(&Q::from_integer(s.into()));
        pi = pi.add(&MultiVector::from_parts(&coeff, &[i, j]).expect("in range")).expect("same dimension");
    }
    let h = f.scale(&small_q(rng)).add(&PolyFunction::constant(dim, c)).expect("same dimension");
    (pi, h)
}
