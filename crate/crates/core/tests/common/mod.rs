//! Direct expansion of exp(Φ_n) acting on γ₁⋯γ_n a₀⋯a_{m−1}, without graphs.
//!
//! Odd variables are numbered: output θ_ν is ν, θ⁽ⁱ⁾_ν is d(i+1)+ν. Forms are products of odd
//! propagator symbols ω(i→t), kept sorted, and even zero-mode symbols φ_i.

use std::collections::BTreeMap;

use cyclic_core::gradedcore::{Exponent, IndexSet, MultiVector, MvKey, Q};
use cyclic_core::graphs::Target;
use cyclic_core::hochschild::HochschildChain;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormKey {
    pub omegas: Vec<(usize, Target)>,
    pub phi: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Super {
    odd: Vec<usize>,
    x: Vec<Vec<u32>>,
    v: Vec<u32>,
}

type State = BTreeMap<(FormKey, Super), Q>;

fn push(state: &mut State, key: (FormKey, Super), c: Q) {
    let e = state.entry(key).or_insert_with(Q::zero);
    *e += c;
}

fn flip(c: Q, negative: bool) -> Q {
    if negative {
        -c
    } else {
        c
    }
}

/// Left-multiplies a sorted odd list by `x`; `None` if `x` is already present.
fn insert_sorted<T: Ord + Clone>(list: &[T], x: T) -> Option<(Vec<T>, bool)> {
    let pos = list.iter().take_while(|y| **y < x).count();
    if list.get(pos) == Some(&x) {
        return None;
    }
    let mut out = list.to_vec();
    out.insert(pos, x);
    Some((out, pos % 2 == 1))
}

fn left_derivative(odd: &[usize], x: usize) -> Option<(Vec<usize>, bool)> {
    let pos = odd.iter().position(|y| *y == x)?;
    let mut out = odd.to_vec();
    out.remove(pos);
    Some((out, pos % 2 == 1))
}

fn apply_phi(dim: usize, n: usize, m: usize, state: &State) -> State {
    let mut out = State::new();
    for ((form, s), c) in state {
        for i in 0..n {
            let mut targets: Vec<Target> = (0..n).filter(|&j| j != i).map(Target::Interior).collect();
            targets.extend((0..m).map(Target::Boundary));
            // ω(i→t) ⊗ Σ_ν ∂/∂θ⁽ⁱ⁾_ν ∂/∂x⁽ᵗ⁾_ν; moving the odd operator past the form gives (−1)^{#ω}
            for t in targets {
                let Some((omegas, s1)) = insert_sorted(&form.omegas, (i, t)) else { continue };
                let pass = form.omegas.len() % 2 == 1;
                let slot = match t {
                    Target::Interior(j) => j,
                    Target::Boundary(b) => n + b,
                    Target::White(_) => unreachable!(),
                };
                for nu in 0..dim {
                    let Some((odd, s2)) = left_derivative(&s.odd, dim * (i + 1) + nu) else { continue };
                    let e = s.x[slot][nu];
                    if e == 0 {
                        continue;
                    }
                    let mut s2x = Super { odd, x: s.x.clone(), v: s.v.clone() };
                    s2x.x[slot][nu] -= 1;
                    let f = FormKey { omegas: omegas.clone(), phi: form.phi.clone() };
                    push(&mut out, (f, s2x), flip(c * Q::from_integer(e.into()), s1 ^ pass ^ s2));
                }
            }
            // φ_i ⊗ (Σ_ν θ_ν ∂/∂θ⁽ⁱ⁾_ν + ∂/∂v_i)
            let mut f = form.clone();
            f.phi[i] += 1;
            for nu in 0..dim {
                let Some((odd, s1)) = left_derivative(&s.odd, dim * (i + 1) + nu) else { continue };
                let Some((odd, s2)) = insert_sorted(&odd, nu) else { continue };
                let s2x = Super { odd, x: s.x.clone(), v: s.v.clone() };
                push(&mut out, (f.clone(), s2x), flip(c.clone(), s1 ^ s2));
            }
            if s.v[i] > 0 {
                let mut s2x = s.clone();
                s2x.v[i] -= 1;
                push(&mut out, (f.clone(), s2x), c * Q::from_integer(s.v[i].into()));
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Σ_N Φ^N/N! (γ₁⋯γ_n a)` at v = 0, restricted to the diagonal, grouped by form monomial.
/// Terms that keep some θ⁽ⁱ⁾ are dropped.
pub fn expand(dim: usize, gammas: &[MultiVector], a: &HochschildChain) -> BTreeMap<FormKey, MultiVector> {
    let n = gammas.len();
    let mut result: BTreeMap<FormKey, MultiVector> = BTreeMap::new();
    for (key, ac) in a.terms() {
        let m = key.len();
        let mut state = State::new();
        let start = Super { odd: Vec::new(), x: Vec::new(), v: Vec::new() };
        let mut partial = vec![(start, ac.clone())];
        for (i, g) in gammas.iter().enumerate() {
            let mut next = Vec::new();
            for (s, c) in &partial {
                for (MvKey { vpow, theta, exp }, gc) in g.terms() {
                    let mut s2 = s.clone();
                    s2.odd.extend(theta.iter().map(|nu| dim * (i + 1) + nu));
                    s2.x.push(exp.0.clone());
                    s2.v.push(*vpow);
                    next.push((s2, c * gc));
                }
            }
            partial = next;
        }
        for (mut s, c) in partial {
            s.x.extend(key.iter().map(|e| e.0.clone()));
            push(&mut state, (FormKey { omegas: Vec::new(), phi: vec![0; n] }, s), c);
        }
        let mut total = state.clone();
        let mut power = state;
        let mut order = 0i64;
        while !power.is_empty() {
            order += 1;
            let inv = Q::one() / Q::from_integer(order.into());
            power = apply_phi(dim, n, m, &power).into_iter().map(|(k, c)| (k, c * &inv)).collect();
            for (k, c) in &power {
                push(&mut total, k.clone(), c.clone());
            }
        }
        total.retain(|_, c| !c.is_zero());
        for ((form, s), c) in total {
            if s.v.iter().any(|&v| v > 0) || s.odd.iter().any(|&o| o >= dim) {
                continue;
            }
            let mut exp = vec![0u32; dim];
            for xs in &s.x {
                for (e, x) in exp.iter_mut().zip(xs) {
                    *e += x;
                }
            }
            let theta = IndexSet::from_indices(&s.odd).expect("distinct").0;
            let mut mv = MultiVector::zero(dim);
            mv.add_term(MvKey { vpow: 0, theta, exp: Exponent(exp) }, c);
            let entry = result.entry(form).or_insert_with(|| MultiVector::zero(dim));
            *entry = entry.add(&mv).expect("same dimension");
        }
    }
    result.retain(|_, v| !v.is_zero());
    result
}
