//! Kontsevich half-plane propagator and two-vertex weights in the gauge z₁ = i.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use super::config::{mixture_density, mixture_sample};
use super::mc::{fnv1a, integrate, Estimate, McParams};
use super::weight::determinant;
use crate::error::{Error, Result};

/// Point of the closed upper half-plane: interior or on the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HPoint {
    Upper(Complex64),
    Real(f64),
}

impl HPoint {
    fn position(self) -> Complex64 {
        match self {
            HPoint::Upper(z) => z,
            HPoint::Real(t) => Complex64::new(t, 0.0),
        }
    }
}

/// ω_K(x,y) = (2π)^{-1}(d arg(x−y) − d arg(x̄−y)); components as for [`super::PairForm`],
/// with a real-line point carrying only its `dt` coefficient.
pub fn propagator_halfplane(x: HPoint, y: HPoint) -> Result<super::PairForm> {
    let xc = x.position();
    let yc = y.position();
    if (xc - yc).norm() < 1e-300 || (xc.conj() - yc).norm() < 1e-300 {
        return Err(Error::CoincidentPoints);
    }
    let c = (xc - yc).inv();
    let q = (xc.conj() - yc).inv();
    let s = 1.0 / (2.0 * PI);
    let first = [(c.im - q.im) * s, (c.re + q.re) * s];
    let mut second = [(q.im - c.im) * s, (q.re - c.re) * s];
    if let HPoint::Real(_) = y {
        second[1] = 0.0;
    }
    let first = if let HPoint::Real(_) = x { [first[0], 0.0] } else { first };
    Ok(super::PairForm { first, second })
}

/// Target of an edge in a half-plane graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KTarget {
    Interior(usize),
    Boundary(usize),
}

impl fmt::Display for KTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KTarget::Interior(j) => write!(f, "i{j}"),
            KTarget::Boundary(j) => write!(f, "b{j}"),
        }
    }
}

/// Half-plane graph: ordered out-edges of each interior vertex, m boundary vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KGraph {
    pub m: usize,
    pub edges: Vec<Vec<KTarget>>,
}

impl KGraph {
    pub fn key(&self) -> String {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|es| es.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("K m{}|{}", self.m, parts.join(";"))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    fn flat_edges(&self) -> Vec<(usize, KTarget)> {
        self.edges.iter().enumerate().flat_map(|(i, es)| es.iter().map(move |&t| (i, t))).collect()
    }
}

/// All graphs with two interior vertices of out-degrees `k`, no loops or repeated
/// targets, and m = k₁ + k₂ − 2 boundary vertices (the dimension count).
pub fn u2_graphs(k: [usize; 2]) -> Vec<KGraph> {
    let Some(m) = (k[0] + k[1]).checked_sub(2) else {
        return Vec::new();
    };
    let options = |i: usize| -> Vec<Vec<KTarget>> {
        let mut alphabet = vec![KTarget::Interior(1 - i)];
        alphabet.extend((0..m).map(KTarget::Boundary));
        let mut out: Vec<Vec<KTarget>> = vec![vec![]];
        for _ in 0..k[i] {
            out = out
                .into_iter()
                .flat_map(|v| {
                    alphabet
                        .iter()
                        .filter(|t| !v.contains(t))
                        .map(|&t| [v.clone(), vec![t]].concat())
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        out
    };
    let mut graphs = Vec::new();
    for a in options(0) {
        for b in options(1) {
            graphs.push(KGraph { m, edges: vec![a.clone(), b] });
        }
    }
    graphs
}

/// t = −cot(α/2), mapping (0, 2π) increasingly onto ℝ; returns (t, dt/dα).
fn circle_to_line(alpha: f64) -> (f64, f64) {
    let s = (alpha / 2.0).sin();
    (-(alpha / 2.0).cos() / s, 0.5 / (s * s))
}

/// A sample: boundary angles, interior point w of the Cayley disk.
struct HSample {
    t: Vec<f64>,
    jac_t: f64,
    z2: Complex64,
    jac_z: f64,
}

fn integrand(g: &KGraph, s: &HSample) -> f64 {
    if s.jac_z == 0.0 {
        return 0.0;
    }
    let dim = g.m + 2;
    let edges = g.flat_edges();
    if edges.len() != dim {
        return 0.0;
    }
    let z = [Complex64::new(0.0, 1.0), s.z2];
    let mut mat = vec![0.0; dim * dim];
    for (row, &(src, t)) in edges.iter().enumerate() {
        let y = match t {
            KTarget::Interior(j) => HPoint::Upper(z[j]),
            KTarget::Boundary(j) => HPoint::Real(s.t[j]),
        };
        let Ok(pf) = propagator_halfplane(HPoint::Upper(z[src]), y) else {
            return 0.0;
        };
        if src == 1 {
            mat[row * dim + g.m] += pf.first[0];
            mat[row * dim + g.m + 1] += pf.first[1];
        }
        match t {
            KTarget::Interior(1) => {
                mat[row * dim + g.m] += pf.second[0];
                mat[row * dim + g.m + 1] += pf.second[1];
            }
            KTarget::Boundary(j) => mat[row * dim + j] += pf.second[0],
            KTarget::Interior(_) => {}
        }
    }
    determinant(&mut mat, dim) * s.jac_t * s.jac_z
}

/// Raw integral over C_{2,m}(H₊) with z₁ = i and orientation dt₁…dt_m dRe z₂ dIm z₂.
/// The 1/∏k! prefactor is not included.
pub fn kontsevich_weight_n2(g: &KGraph, params: &McParams) -> Estimate {
    if g.edges.len() != 2 || g.edge_count() != g.m + 2 {
        return Estimate::exact(0.0);
    }
    let m = g.m;
    let fact: f64 = (1..=m).map(|i| i as f64).product();
    let volume = (2.0 * PI).powi(m as i32) / fact;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    integrate(
        params,
        fnv1a(&g.key()),
        volume,
        |rng| {
            let mut alpha: Vec<f64> = (0..m).map(|_| 2.0 * PI * rng.random::<f64>()).collect();
            alpha.sort_by(f64::total_cmp);
            let mut t = Vec::with_capacity(m);
            let mut jac_t = 1.0;
            for &a in &alpha {
                let (ti, j) = circle_to_line(a);
                t.push(ti);
                jac_t *= j;
            }
            // singular points of the second vertex, in the Cayley disk
            let mut anchors = vec![one];
            for (src, tg) in g.flat_edges() {
                let a = match tg {
                    KTarget::Boundary(j) if src == 1 => Complex64::from_polar(1.0, alpha[j]),
                    KTarget::Interior(_) => Complex64::new(0.0, 0.0),
                    KTarget::Boundary(_) => continue,
                };
                if !anchors.contains(&a) {
                    anchors.push(a);
                }
            }
            let w = mixture_sample(rng, &anchors);
            if w.norm_sqr() >= 1.0 {
                return Some(HSample { t, jac_t: 0.0, z2: i, jac_z: 0.0 });
            }
            let z2 = i * (one + w) / (one - w);
            let mut pts: Vec<Complex64> = t.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            pts.push(i);
            pts.push(z2);
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    if (pts[a] - pts[b]).norm() < params.min_sep {
                        return None;
                    }
                }
            }
            if !z2.re.is_finite() || !jac_t.is_finite() {
                return None;
            }
            let jac_z = 4.0 / (one - w).norm_sqr().powi(2) / mixture_density(w, &anchors);
            Some(HSample { t, jac_t, z2, jac_z })
        },
        |s| integrand(g, s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        // each bivector vertex picks an ordered pair of distinct targets from {other vertex, b0, b1}
        let gs = u2_graphs([2, 2]);
        assert!(gs.iter().all(|g| g.m == 2 && g.edge_count() == 4));
        assert_eq!(gs.len(), 36);
    }

    #[test]
    fn line_map_is_increasing() {
        let (a, _) = circle_to_line(1.0);
        let (b, j) = circle_to_line(2.0);
        assert!(a < b && j > 0.0);
    }
}
