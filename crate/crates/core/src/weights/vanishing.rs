//! Fiber integrals over one extra interior point, used by the vanishing lemmas.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::{mixture_density, mixture_sample};
use super::forms::{propagator, Point};
use super::mc::{fnv1a, integrate_vec, Estimate, McParams};

/// Componentwise estimate of `∫_{w∈D} f(w) dA(w)`, sampling `w` towards the singular points
/// `anchors` and rejecting draws closer than `min_sep` to any of them.
pub fn mc_disk_integral<F>(params: &McParams, label: &str, anchors: &[Complex64], ncomp: usize, f: F) -> Vec<Estimate>
where
    F: Fn(Complex64) -> Vec<f64> + Sync,
{
    integrate_vec(
        params,
        fnv1a(label),
        1.0,
        ncomp,
        |rng| {
            let w = mixture_sample(rng, anchors);
            anchors.iter().all(|a| (w - a).norm() >= params.min_sep).then_some(w)
        },
        |w: &Complex64| {
            if w.norm_sqr() >= 1.0 {
                return vec![0.0; ncomp];
            }
            let q = mixture_density(*w, anchors);
            f(*w).into_iter().map(|v| v / q).collect()
        },
    )
}

fn position(p: Point) -> Complex64 {
    p.position()
}

/// `∫_w ω(z,w) φ(w,u)`: the 1-form in z with components (dRe z, dIm z), or (dφ, 0) on the boundary.
pub fn omega_phi_integral(z: Point, params: &McParams) -> Vec<Estimate> {
    mc_disk_integral(params, &format!("omega-phi {z:?}"), &[position(z)], 2, |w| {
        let pf = propagator(z, Point::Interior(w)).expect("rejected coincident sample");
        vec![pf.first[0] / PI, pf.first[1] / PI]
    })
}

/// `∫_w ω(z,w) ω(w,z')`: the dRe w ∧ dIm w part, a function of (z, z').
pub fn omega_omega_integral(z: Point, zp: Point, params: &McParams) -> Vec<Estimate> {
    mc_disk_integral(params, &format!("omega-omega {z:?} {zp:?}"), &[position(z), position(zp)], 1, |w| {
        let a = propagator(z, Point::Interior(w)).expect("rejected coincident sample").second;
        let b = propagator(Point::Interior(w), zp).expect("rejected coincident sample").first;
        vec![a[0] * b[1] - a[1] * b[0]]
    })
}
