//! Graph weights: structural pruning, closed-form families and Monte Carlo integration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::config::{ConfigPoint, ImportanceSampler};
use super::forms::{propagator, Layout};
use super::mc::{fnv1a, integrate, Estimate, McParams, RNG_NAME};
use crate::gradedcore::rational::{factorial, q_to_f64};
use crate::gradedcore::{permutation_sign, Q};
use crate::graphs::{AdmissibleGraph, Target};

/// The data of a graph form that the weight integral depends on: black edges in
/// global order and the zero-mode powers r_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormSpec {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<(usize, Target)>,
    pub r: Vec<u32>,
}

impl FormSpec {
    pub fn from_graph(g: &AdmissibleGraph) -> Self {
        FormSpec {
            n: g.n(),
            m: g.m,
            edges: g.black_edges().into_iter().map(|e| (e.vertex, g.target(e))).collect(),
            r: (0..g.n()).map(|i| g.r(i)).collect(),
        }
    }

    pub fn layout(&self) -> Layout {
        Layout { n: self.n, m: self.m }
    }

    /// Number of zero-mode 2-forms needed to reach the top degree, if the parity allows it.
    fn two_forms_needed(&self) -> Option<usize> {
        let d = self.layout().dim();
        let e = self.edges.len();
        (e <= d && (d - e).is_multiple_of(2)).then(|| (d - e) / 2)
    }

    /// The only u power that can carry a top component.
    pub fn u_power(&self) -> Option<u32> {
        let s = self.two_forms_needed()? as u32;
        let total: u32 = self.r.iter().sum();
        total.checked_sub(s)
    }

    pub fn key(&self) -> String {
        let mut s = format!("n{}m{}|", self.n, self.m);
        for (i, (src, t)) in self.edges.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{src}>{t}");
        }
        s.push_str("|r");
        for (i, r) in self.r.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{r}");
        }
        s
    }

    /// Sorts the edge list; returns the sign of the reordering, or `None` if an
    /// edge repeats (the form then vanishes).
    fn sorted(&self) -> Option<(FormSpec, i8)> {
        let mut idx: Vec<usize> = (0..self.edges.len()).collect();
        idx.sort_by_key(|&i| self.edges[i]);
        if idx.windows(2).any(|w| self.edges[w[0]] == self.edges[w[1]]) {
            return None;
        }
        let sign = permutation_sign(&idx).expect("index permutation");
        let edges = idx.iter().map(|&i| self.edges[i]).collect();
        Some((FormSpec { edges, ..self.clone() }, sign))
    }

    fn incident(&self, i: usize) -> bool {
        self.edges.iter().any(|&(s, t)| s == i || t == Target::Interior(i))
    }

    /// Removes interior vertices without black edges; each contributes ∫φ^r = u^{r−1}.
    /// Returns `None` if such a vertex has r = 0.
    fn without_isolated(&self) -> Option<(FormSpec, u32)> {
        let mut keep = Vec::new();
        let mut shift = 0;
        for i in 0..self.n {
            if self.incident(i) {
                keep.push(i);
            } else if self.r[i] == 0 {
                return None;
            } else {
                shift += self.r[i] - 1;
            }
        }
        let relabel = |i: usize| keep.iter().position(|&k| k == i).unwrap();
        let edges = self
            .edges
            .iter()
            .map(|&(s, t)| {
                let t = match t {
                    Target::Interior(j) => Target::Interior(relabel(j)),
                    other => other,
                };
                (relabel(s), t)
            })
            .collect();
        let r = keep.iter().map(|&i| self.r[i]).collect();
        Some((FormSpec { n: keep.len(), m: self.m, edges, r }, shift))
    }

    /// Generator columns an edge can fill.
    fn edge_columns(&self, e: usize) -> Vec<usize> {
        let l = self.layout();
        let (s, t) = self.edges[e];
        let mut cols = vec![l.re(s), l.im(s)];
        match t {
            Target::Interior(j) => cols.extend([l.re(j), l.im(j)]),
            Target::Boundary(j) if j > 0 => cols.push(l.phi(j)),
            _ => {}
        }
        cols
    }

    fn two_form_subsets(&self) -> Vec<Vec<usize>> {
        let Some(s) = self.two_forms_needed() else {
            return Vec::new();
        };
        let cand: Vec<usize> = (0..self.n).filter(|&i| self.r[i] >= 1).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << cand.len()) {
            if mask.count_ones() as usize == s {
                out.push(cand.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect());
            }
        }
        out
    }

    fn complement_columns(&self, subset: &[usize]) -> Vec<usize> {
        let l = self.layout();
        let used: Vec<usize> = subset.iter().flat_map(|&i| [l.re(i), l.im(i)]).collect();
        (0..l.dim()).filter(|c| !used.contains(c)).collect()
    }

    /// True when no placement of 2-forms leaves a column set that the edges can fill.
    pub fn structurally_zero(&self) -> bool {
        let subsets = self.two_form_subsets();
        !subsets.iter().any(|s| {
            let cols = self.complement_columns(s);
            let allowed: Vec<Vec<usize>> = (0..self.edges.len())
                .map(|e| {
                    let ec = self.edge_columns(e);
                    (0..cols.len()).filter(|&c| ec.contains(&cols[c])).collect()
                })
                .collect();
            perfect_matching(&allowed, cols.len())
        })
    }

    /// Top coefficient of the graph form at `p`, in the unique admissible u power.
    pub fn integrand(&self, p: &ConfigPoint) -> f64 {
        let l = self.layout();
        let e = self.edges.len();
        let d = l.dim();
        let mut rows = vec![0.0; e * d];
        for (row, &(s, t)) in self.edges.iter().enumerate() {
            let (zp, zs) = l.slots(Target::Interior(s), p);
            let (wp, ws) = l.slots(t, p);
            let Ok(pf) = propagator(zp, wp) else {
                return 0.0;
            };
            for (slots, vals) in [(zs, pf.first), (ws, pf.second)] {
                for (c, v) in slots.iter().zip(vals) {
                    if let Some(c) = c {
                        rows[row * d + c] += v;
                    }
                }
            }
        }
        let rho: Vec<f64> = p.z.iter().map(|z| 1.0 - z.norm_sqr()).collect();
        let mut total = 0.0;
        for subset in self.two_form_subsets() {
            let cols = self.complement_columns(&subset);
            let mut mat = Vec::with_capacity(e * e);
            for row in 0..e {
                mat.extend(cols.iter().map(|&c| rows[row * d + c]));
            }
            let mut coeff = determinant(&mut mat, e);
            for i in 0..self.n {
                let r = self.r[i] as i32;
                if subset.contains(&i) {
                    coeff *= r as f64 * rho[i].powi(r - 1) / std::f64::consts::PI;
                } else {
                    coeff *= rho[i].powi(r);
                }
            }
            total += coeff;
        }
        total
    }
}

fn perfect_matching(allowed: &[Vec<usize>], ncols: usize) -> bool {
    if allowed.len() != ncols {
        return false;
    }
    fn augment(e: usize, allowed: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &c in &allowed[e] {
            if !seen[c] {
                seen[c] = true;
                if owner[c].is_none() || augment(owner[c].unwrap(), allowed, seen, owner) {
                    owner[c] = Some(e);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; ncols];
    (0..allowed.len()).all(|e| augment(e, allowed, &mut vec![false; ncols], &mut owner))
}

/// Determinant by Gaussian elimination with partial pivoting; `a` is row-major n×n.
pub fn determinant(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs())).unwrap();
        if a[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    det
}

/// A weight factored as `coeff · u^upow · (Monte Carlo integral, if any)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawWeight {
    pub upow: u32,
    pub coeff: Q,
    pub mc: Option<(String, Estimate)>,
}

impl RawWeight {
    pub fn zero() -> Self {
        RawWeight { upow: 0, coeff: Q::zero(), mc: None }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.mc.is_none()
    }

    pub fn mean(&self) -> f64 {
        q_to_f64(&self.coeff) * self.mc.as_ref().map_or(1.0, |(_, e)| e.mean)
    }

    pub fn stderr(&self) -> f64 {
        q_to_f64(&self.coeff).abs() * self.mc.as_ref().map_or(0.0, |(_, e)| e.stderr)
    }

    pub fn scaled(mut self, c: &Q) -> Self {
        self.coeff *= c;
        if self.coeff.is_zero() {
            return RawWeight::zero();
        }
        self
    }
}

/// Closed-form value of a reduced spec, if it belongs to an exact family.
fn exact_family(spec: &FormSpec) -> Option<(u32, Q)> {
    if spec.n == 0 {
        return Some((0, if spec.m == 1 { Q::one() } else { Q::zero() }));
    }
    if spec.n == 1 && spec.r[0] >= 1 && spec.edges.len() + 1 == spec.m {
        let targets: Vec<usize> = spec
            .edges
            .iter()
            .filter_map(|&(_, t)| match t {
                Target::Boundary(j) if j > 0 => Some(j - 1),
                _ => None,
            })
            .collect();
        if targets.len() == spec.edges.len() {
            let mut sorted = targets.clone();
            sorted.sort();
            if sorted.windows(2).all(|w| w[0] != w[1]) {
                let sign = permutation_sign(&targets).expect("distinct boundary targets");
                return Some((spec.r[0] - 1, Q::from_integer(sign.into()) / factorial(targets.len())));
            }
        }
    }
    None
}

impl FormSpec {
    pub fn sampler(&self, min_sep: f64) -> ImportanceSampler {
        ImportanceSampler::for_edges(self.n, self.m, &self.edges, min_sep)
    }
}

/// Monte Carlo integral of the top component of `spec` under a given sampler,
/// with a point transform applied to each draw.
pub fn mc_integral_with<M>(spec: &FormSpec, sampler: &ImportanceSampler, params: &McParams, stream: u64, map: M) -> Estimate
where
    M: Fn(ConfigPoint) -> ConfigPoint + Sync,
{
    integrate(
        params,
        stream,
        1.0,
        |rng| sampler.sample(rng),
        |w| if w.weight == 0.0 { 0.0 } else { w.weight * spec.integrand(&map(w.point.clone())) },
    )
}

pub fn mc_integral(spec: &FormSpec, params: &McParams) -> Estimate {
    mc_integral_with(spec, &spec.sampler(params.min_sep), params, fnv1a(&spec.key()), |p| p)
}

/// The integral of the graph form of `spec` over C⁰_{n,m}(D), without the 1/∏k! prefactor.
pub fn raw_weight(spec: &FormSpec, params: &McParams) -> RawWeight {
    let Some(upow) = spec.u_power() else {
        return RawWeight::zero();
    };
    if spec.structurally_zero() {
        return RawWeight::zero();
    }
    if !params.exact_shortcuts {
        let est = mc_integral(spec, params);
        return RawWeight { upow, coeff: Q::one(), mc: Some((spec.key(), est)) };
    }
    let Some((sorted, sign)) = spec.sorted() else {
        return RawWeight::zero();
    };
    let Some((reduced, shift)) = sorted.without_isolated() else {
        return RawWeight::zero();
    };
    let coeff = Q::from_integer(sign.into());
    if let Some((u, c)) = exact_family(&reduced) {
        debug_assert_eq!(u + shift, upow);
        return RawWeight { upow, coeff: coeff * c, mc: None }.scaled(&Q::one());
    }
    let est = mc_integral(&reduced, params);
    RawWeight { upow, coeff, mc: Some((reduced.key(), est)) }
}

/// w_Γ including the 1/∏k_i! prefactor.
pub fn graph_weight(g: &AdmissibleGraph, params: &McParams) -> RawWeight {
    let pref: Q = g.k.iter().map(|&k| Q::one() / factorial(k)).product();
    raw_weight(&FormSpec::from_graph(g), params).scaled(&pref)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub u_power: u32,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Report form of a graph weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEstimate {
    pub graph_key: String,
    pub seed: u64,
    pub samples: u64,
    pub rejected: u64,
    pub rng: String,
    pub pruned: bool,
    pub exact: bool,
    pub coefficients: Vec<Coefficient>,
}

pub fn mc_weight(g: &AdmissibleGraph, params: &McParams) -> crate::Result<WeightEstimate> {
    g.validate().map_err(|v| crate::Error::InvalidGraph(format!("{v:?}")))?;
    let w = graph_weight(g, params);
    let (samples, rejected) = w.mc.as_ref().map_or((0, 0), |(_, e)| (e.samples, e.rejected));
    let mut coefficients = Vec::new();
    if !w.is_zero() {
        coefficients.push(Coefficient { u_power: w.upow, mean: w.mean(), stderr: w.stderr(), samples });
    }
    Ok(WeightEstimate {
        graph_key: g.canonical_key()?.0,
        seed: params.seed,
        samples,
        rejected,
        rng: RNG_NAME.to_string(),
        pruned: w.is_zero() && w.mc.is_none(),
        exact: w.is_exact(),
        coefficients,
    })
}

/// Coefficient table keyed by u power (empty when pruned).
pub fn coefficient_map(w: &WeightEstimate) -> BTreeMap<u32, (f64, f64)> {
    w.coefficients.iter().map(|c| (c.u_power, (c.mean, c.stderr))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let mut a = vec![0.0, 2.0, 3.0, 1.0];
        assert_eq!(determinant(&mut a, 2), -6.0);
    }

    #[test]
    fn isolated_vertex_family_is_exact() {
        let spec = FormSpec { n: 1, m: 1, edges: vec![], r: vec![3] };
        let w = raw_weight(&spec, &McParams::default());
        assert_eq!((w.upow, w.coeff.clone(), w.mc.is_none()), (2, Q::one(), true));
    }

    #[test]
    fn dimension_count_prunes() {
        let spec = FormSpec { n: 1, m: 1, edges: vec![(0, Target::Boundary(0))], r: vec![0] };
        assert!(raw_weight(&spec, &McParams::default()).is_zero());
        let spec = FormSpec { n: 1, m: 2, edges: vec![(0, Target::Boundary(0))], r: vec![1] };
        assert!(spec.structurally_zero());
    }
}
