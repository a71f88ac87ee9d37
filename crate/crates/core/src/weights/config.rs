//! Points of C⁰_{n,m}(D) and the uniform sampler.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

/// n interior points and the m − 1 non-basepoint boundary angles in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigPoint {
    pub z: Vec<Complex64>,
    pub phi: Vec<f64>,
}

impl ConfigPoint {
    pub fn new(z: Vec<Complex64>, phi: Vec<f64>) -> Self {
        ConfigPoint { z, phi }
    }

    /// All points as positions in the plane, basepoint 1 included.
    fn positions(&self) -> Vec<Complex64> {
        let mut out = self.z.clone();
        out.push(Complex64::new(1.0, 0.0));
        out.extend(self.phi.iter().map(|&a| Complex64::from_polar(1.0, a)));
        out
    }

    /// Smallest pairwise distance among all points.
    pub fn min_separation(&self) -> f64 {
        let pos = self.positions();
        let mut best = f64::INFINITY;
        for a in 0..pos.len() {
            for b in a + 1..pos.len() {
                best = best.min((pos[a] - pos[b]).norm());
            }
        }
        best
    }
}

/// Lebesgue volume of the sampling region D^n × {0 < φ₁ < ⋯ < φ_{m−1} < 2π}.
pub fn region_volume(n: usize, m: usize) -> f64 {
    let k = m.saturating_sub(1);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    PI.powi(n as i32) * (2.0 * PI).powi(k as i32) / fact
}

pub fn uniform_disk<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r = rng.random::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
}

/// Uniform point of the sampling region; `None` when two points are closer than `min_sep`.
pub fn sample_config<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, min_sep: f64) -> Option<ConfigPoint> {
    let z = (0..n).map(|_| uniform_disk(rng)).collect();
    let mut phi: Vec<f64> = (1..m).map(|_| 2.0 * PI * rng.random::<f64>()).collect();
    phi.sort_by(f64::total_cmp);
    let p = ConfigPoint { z, phi };
    (p.min_separation() >= min_sep).then_some(p)
}

/// Radius of the radial proposal components; covers the closed disk from any anchor in it.
const RADIAL: f64 = 2.0;

/// Draws from the mixture of the uniform disk law and, for each anchor `a`,
/// the law with planar density 1/(4π √R |z − a|^{3/2}) on |z − a| < R.
///
/// The 3/2 power keeps the second moment finite when two 1/|z − a| singularities nearly coincide.
pub fn mixture_sample<R: Rng + ?Sized>(rng: &mut R, anchors: &[Complex64]) -> Complex64 {
    let c = rng.random_range(0..=anchors.len());
    if c == 0 {
        return uniform_disk(rng);
    }
    let s = rng.random::<f64>();
    let rho = RADIAL * s * s;
    anchors[c - 1] + Complex64::from_polar(rho, 2.0 * PI * rng.random::<f64>())
}

/// Planar density of [`mixture_sample`] at `z`.
pub fn mixture_density(z: Complex64, anchors: &[Complex64]) -> f64 {
    let mut q = if z.norm_sqr() < 1.0 { 1.0 / PI } else { 0.0 };
    for a in anchors {
        let r = (z - a).norm();
        if r < RADIAL && r > 0.0 {
            q += 1.0 / (4.0 * PI * RADIAL.sqrt() * r.powf(1.5));
        }
    }
    q / (anchors.len() + 1) as f64
}

/// A point of the disk that an interior point is drawn towards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Boundary(usize),
    Interior(usize),
}

/// A configuration together with the reciprocal of its proposal density.
#[derive(Clone, Debug, PartialEq)]
pub struct Weighted {
    pub point: ConfigPoint,
    pub weight: f64,
}

/// Sequential importance sampler on D^n × simplex: boundary angles uniform, then each
/// interior point from a mixture anchored at the earlier points it shares a propagator with.
#[derive(Clone, Debug, PartialEq)]
pub struct ImportanceSampler {
    pub n: usize,
    pub m: usize,
    pub anchors: Vec<Vec<Anchor>>,
    pub min_sep: f64,
}

impl ImportanceSampler {
    pub fn uniform(n: usize, m: usize, min_sep: f64) -> Self {
        ImportanceSampler { n, m, anchors: vec![Vec::new(); n], min_sep }
    }

    /// Anchors from edges `(source, target)`, where targets are interior or boundary vertices.
    pub fn for_edges(n: usize, m: usize, edges: &[(usize, crate::graphs::Target)], min_sep: f64) -> Self {
        use crate::graphs::Target;
        let mut s = Self::uniform(n, m, min_sep);
        for &(src, t) in edges {
            let (i, a) = match t {
                Target::Boundary(j) => (src, Anchor::Boundary(j)),
                Target::Interior(k) if k < src => (src, Anchor::Interior(k)),
                Target::Interior(k) => (k, Anchor::Interior(src)),
                Target::White(_) => continue,
            };
            if !s.anchors[i].contains(&a) {
                s.anchors[i].push(a);
            }
        }
        s
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Weighted> {
        let mut phi: Vec<f64> = (1..self.m).map(|_| 2.0 * PI * rng.random::<f64>()).collect();
        phi.sort_by(f64::total_cmp);
        let mut weight = region_volume(0, self.m);
        let mut z: Vec<Complex64> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let pos: Vec<Complex64> = self.anchors[i]
                .iter()
                .map(|a| match *a {
                    Anchor::Boundary(0) => Complex64::new(1.0, 0.0),
                    Anchor::Boundary(j) => Complex64::from_polar(1.0, phi[j - 1]),
                    Anchor::Interior(k) => z[k],
                })
                .collect();
            let zi = mixture_sample(rng, &pos);
            if zi.norm_sqr() >= 1.0 {
                weight = 0.0;
            } else {
                weight /= mixture_density(zi, &pos);
            }
            z.push(zi);
        }
        if weight == 0.0 {
            return Some(Weighted { point: ConfigPoint { z: vec![Complex64::new(0.0, 0.0); self.n], phi }, weight });
        }
        let point = ConfigPoint { z, phi };
        (point.min_separation() >= self.min_sep).then_some(Weighted { point, weight })
    }
}
