//! Graph superoperators: the derivative word of a graph applied to γ₁⋯γ_n a₀⋯a_p.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gradedcore::poly::PolyFunction;
use crate::gradedcore::{Exponent, IndexSet, MultiVector, MvKey, Q};
use crate::graphs::Target;
use crate::hochschild::{HochschildChain, MultiDiffOp};

/// `Σ θ_S c(x) ∂^{α_0}a_0 ⋯ ∂^{α_{m−1}}a_{m−1}`: a multidifferential operator with multivector values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvDiffOp {
    dim: usize,
    arity: usize,
    terms: BTreeMap<(IndexSet, Vec<Exponent>), PolyFunction>,
}

impl MvDiffOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        MvDiffOp { dim, arity, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<(IndexSet, Vec<Exponent>), PolyFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, theta: IndexSet, alphas: Vec<Exponent>, c: PolyFunction) {
        if c.is_zero() {
            return;
        }
        let key = (theta, alphas);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&c).expect("same dimension"),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &Q) -> MvDiffOp {
        let mut out = MvDiffOp::zero(self.dim, self.arity);
        if c.is_zero() {
            return out;
        }
        for (k, f) in &self.terms {
            out.terms.insert(k.clone(), f.scale(c));
        }
        out
    }

    pub fn add(&self, other: &MvDiffOp) -> Result<MvDiffOp> {
        if self.dim != other.dim || self.arity != other.arity {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = self.clone();
        for ((t, a), f) in &other.terms {
            out.add_term(*t, a.clone(), f.clone());
        }
        Ok(out)
    }

    /// Evaluates on monomial arguments `x^{e_0}, …, x^{e_{m−1}}`.
    pub fn apply_monomials(&self, args: &[Exponent]) -> Result<MultiVector> {
        if args.len() != self.arity {
            return Err(Error::Unsupported(format!("operator of arity {} applied to {} arguments", self.arity, args.len())));
        }
        let mut out = MultiVector::zero(self.dim);
        for ((theta, alphas), c) in &self.terms {
            let mut coeff = Q::one();
            let mut exp = Exponent::zero(self.dim);
            let mut vanished = false;
            for (alpha, e) in alphas.iter().zip(args) {
                let Some(rest) = e.checked_sub(alpha) else {
                    vanished = true;
                    break;
                };
                for nu in 0..self.dim {
                    for s in 0..alpha.get(nu) {
                        coeff *= Q::from_integer((e.get(nu) - s).into());
                    }
                }
                exp = exp.add(&rest);
            }
            if vanished {
                continue;
            }
            for (ce, cc) in c.terms() {
                out.add_term(MvKey { vpow: 0, theta: *theta, exp: exp.add(ce) }, &coeff * cc);
            }
        }
        Ok(out)
    }

    /// Linear extension to the arity-matching part of a Hochschild chain.
    pub fn apply_chain(&self, a: &HochschildChain) -> Result<MultiVector> {
        let mut out = MultiVector::zero(self.dim);
        for (key, c) in a.terms() {
            if key.len() != self.arity {
                continue;
            }
            out = out.add(&self.apply_monomials(key)?.scale(c))?;
        }
        Ok(out)
    }

    /// The same operator as a scalar multidifferential operator; fails if any θ survives.
    pub fn to_multidiffop(&self) -> Result<MultiDiffOp> {
        let mut out = MultiDiffOp::zero(self.dim, self.arity);
        for ((theta, alphas), c) in &self.terms {
            if !theta.is_empty() {
                return Err(Error::Unsupported("operator has multivector values".into()));
            }
            out.add_term(alphas.clone(), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MvDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((t, a), c)| {
                let th: String = t.iter().map(|i| format!("θ{}", i + 1)).collect();
                let ds: Vec<String> = a.iter().map(|e| format!("{:?}", e.0)).collect();
                format!("({c}){th}[{}]", ds.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Partial state of the derivative word on one monomial of g.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Word {
    out: IndexSet,
    theta: Vec<IndexSet>,
    x: Vec<Exponent>,
    d: Vec<Exponent>,
}

/// Applies `O_{e_1} ⋯ O_{e_N}` (rightmost first) to `γ₁(x⁽¹⁾,θ⁽¹⁾) ⋯ γ_n a₀ ⋯ a_{m−1}` and restricts
/// to the diagonal, with `O_e = Σ_ν ∂/∂θ⁽ⁱ⁾_ν ∂/∂x⁽ᵗ⁾_ν` for black edges and `Σ_ν θ_ν ∂/∂θ⁽ⁱ⁾_ν` for
/// white ones. Odd variables are ordered: output θ, then θ⁽¹⁾, …, θ⁽ⁿ⁾. Each `γ_i` must be v-free.
/// Terms that keep an unconsumed θ⁽ⁱ⁾ are dropped.
pub fn graph_operator(dim: usize, gammas: &[MultiVector], m: usize, edges: &[(usize, Target)]) -> Result<MvDiffOp> {
    let n = gammas.len();
    if n == 0 {
        let mut op = MvDiffOp::zero(dim, m);
        if edges.is_empty() {
            op.add_term(IndexSet::EMPTY, vec![Exponent::zero(dim); m], PolyFunction::one(dim));
        }
        return Ok(op);
    }
    for g in gammas {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
        }
        if g.max_vpow() > 0 {
            return Err(Error::NonzeroVPower);
        }
    }
    for &(src, t) in edges {
        let bad = match t {
            Target::Interior(j) => j >= n || j == src,
            Target::Boundary(j) => j >= m,
            Target::White(_) => false,
        };
        if src >= n || bad {
            return Err(Error::InvalidGraph(format!("edge {src} -> {t}")));
        }
    }
    let mut words: BTreeMap<Word, Q> = BTreeMap::new();
    words.insert(
        Word {
            out: IndexSet::EMPTY,
            theta: Vec::new(),
            x: Vec::new(),
            d: vec![Exponent::zero(dim); m],
        },
        Q::one(),
    );
    for g in gammas {
        let mut next = BTreeMap::new();
        for (w, c) in &words {
            for (key, gc) in g.terms() {
                let mut w2 = w.clone();
                w2.theta.push(key.theta);
                w2.x.push(key.exp.clone());
                *next.entry(w2).or_insert_with(Q::zero) += c * gc;
            }
        }
        words = next;
    }
    for &(src, t) in edges.iter().rev() {
        let mut next: BTreeMap<Word, Q> = BTreeMap::new();
        for (w, c) in &words {
            let before: usize = w.out.len() + w.theta[..src].iter().map(|s| s.len()).sum::<usize>();
            for nu in w.theta[src].iter() {
                let (rest, neg) = w.theta[src].left_derivative(nu).expect("member");
                let mut negative = neg ^ (before % 2 == 1);
                let mut coeff = c.clone();
                let mut w2 = w.clone();
                w2.theta[src] = rest;
                match t {
                    Target::Interior(j) => {
                        let e = w2.x[j].get(nu);
                        if e == 0 {
                            continue;
                        }
                        coeff *= Q::from_integer(e.into());
                        w2.x[j].0[nu] -= 1;
                    }
                    Target::Boundary(j) => w2.d[j].0[nu] += 1,
                    Target::White(_) => {
                        let Some((out, neg)) = w2.out.insert_left(nu) else {
                            continue;
                        };
                        w2.out = out;
                        negative ^= neg;
                    }
                }
                if negative {
                    coeff = -coeff;
                }
                *next.entry(w2).or_insert_with(Q::zero) += coeff;
            }
        }
        next.retain(|_, c| !c.is_zero());
        words = next;
    }
    let mut op = MvDiffOp::zero(dim, m);
    for (w, c) in words {
        if w.theta.iter().any(|s| !s.is_empty()) || c.is_zero() {
            continue;
        }
        let exp = w.x.iter().fold(Exponent::zero(dim), |acc, e| acc.add(e));
        op.add_term(w.out, w.d, PolyFunction::monomial(dim, exp, c));
    }
    Ok(op)
}

/// `(−1)^{N(N−1)/2}` for N black edges: the reordering of forms past odd operators.
pub fn black_edge_sign(black: usize) -> Q {
    if (black * black.saturating_sub(1) / 2) % 2 == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}
