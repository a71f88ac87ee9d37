//! Propagator, zero-mode form and Grassmann forms in configuration-space coordinates.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::{AdmissibleGraph, Target};

use super::config::ConfigPoint;

/// A point of the closed disk: interior (complex coordinate) or boundary (angle).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Interior(Complex64),
    Boundary(f64),
}

impl Point {
    pub fn position(self) -> Complex64 {
        match self {
            Point::Interior(z) => z,
            Point::Boundary(phi) => Complex64::from_polar(1.0, phi),
        }
    }
}

/// Components of a 1-form in the coordinates of a pair of points.
///
/// For an interior point the two entries are the `dRe z`, `dIm z` coefficients.
/// For a boundary point the first entry is the `dφ` coefficient and the second is 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairForm {
    pub first: [f64; 2],
    pub second: [f64; 2],
}

/// Pulls back `a dx + b dy` at a boundary point `e^{iφ}` to a multiple of `dφ`.
fn boundary_pullback(phi: f64, c: [f64; 2]) -> [f64; 2] {
    [-c[0] * phi.sin() + c[1] * phi.cos(), 0.0]
}

/// The disk propagator ω(z, w) as a 1-form in both arguments.
pub fn propagator(z: Point, w: Point) -> Result<PairForm> {
    let zc = z.position();
    let wc = w.position();
    let diff = zc - wc;
    if diff.norm() < 1e-300 {
        return Err(Error::CoincidentPoints);
    }
    let mut dz = [0.0; 2];
    let mut dw = [0.0; 2];
    // d arg(z − w)
    let c = diff.inv();
    dz[0] += c.im;
    dz[1] += c.re;
    dw[0] -= c.im;
    dw[1] -= c.re;
    // d arg(1 − z w̄)
    let a = Complex64::new(1.0, 0.0) - zc * wc.conj();
    if a.norm() > 1e-300 {
        let q = a.inv();
        let fz = -q * wc.conj();
        dz[0] += fz.im;
        dz[1] += fz.re;
        let fw = -q * zc;
        dw[0] += fw.im;
        dw[1] -= fw.re;
    }
    // y dx − x dy in the first argument
    dz[0] += zc.im;
    dz[1] -= zc.re;
    let s = 1.0 / (2.0 * PI);
    let mut first = [dz[0] * s, dz[1] * s];
    let mut second = [dw[0] * s, dw[1] * s];
    if let Point::Boundary(phi) = z {
        first = boundary_pullback(phi, first);
    }
    if let Point::Boundary(phi) = w {
        second = boundary_pullback(phi, second);
    }
    Ok(PairForm { first, second })
}

/// Zero-mode form φ(z,u) = (1/π) dRe z ∧ dIm z + u (1 − |z|²), returned as
/// (2-form coefficient, u coefficient).
pub fn zero_mode(z: Complex64) -> (f64, f64) {
    (1.0 / PI, 1.0 - z.norm_sqr())
}

/// Element of the exterior algebra on the configuration-space coordinate
/// differentials, polynomial in u. Keys are (u power, generator bitmask).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrassCoordForm {
    pub generators: usize,
    terms: BTreeMap<(u32, u64), f64>,
}

impl GrassCoordForm {
    pub fn zero(generators: usize) -> Self {
        GrassCoordForm { generators, terms: BTreeMap::new() }
    }

    pub fn one(generators: usize) -> Self {
        Self::scalar(generators, 0, 1.0)
    }

    pub fn scalar(generators: usize, upow: u32, c: f64) -> Self {
        let mut f = Self::zero(generators);
        f.add_term(upow, 0, c);
        f
    }

    /// Sum of `c_g dg` over generators `g`.
    pub fn one_form(generators: usize, comps: &[(usize, f64)]) -> Self {
        let mut f = Self::zero(generators);
        for &(g, c) in comps {
            f.add_term(0, 1 << g, c);
        }
        f
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u64, f64)> + '_ {
        self.terms.iter().map(|(&(u, m), &c)| (u, m, c))
    }

    pub fn add_term(&mut self, upow: u32, mask: u64, c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((upow, mask)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(upow, mask));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (u, m, c) in other.terms() {
            out.add_term(u, m, c);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.generators.max(other.generators));
        for (u1, m1, c1) in self.terms() {
            for (u2, m2, c2) in other.terms() {
                if m1 & m2 != 0 {
                    continue;
                }
                // sign of moving each generator of m2 past the higher generators of m1
                let mut swaps = 0;
                let mut rest = m2;
                while rest != 0 {
                    let g = rest.trailing_zeros();
                    swaps += (m1 >> g).count_ones();
                    rest &= rest - 1;
                }
                let s = if swaps % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(u1 + u2, m1 | m2, s * c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, r: u32) -> Self {
        (0..r).fold(Self::one(self.generators), |acc, _| acc.wedge(self))
    }

    /// Coefficient of u^upow times the volume word of all generators.
    pub fn top(&self, upow: u32) -> f64 {
        let full = if self.generators == 64 { u64::MAX } else { (1u64 << self.generators) - 1 };
        self.terms.get(&(upow, full)).copied().unwrap_or(0.0)
    }

    /// Map u power → top coefficient, for powers with a top component.
    pub fn top_components(&self) -> BTreeMap<u32, f64> {
        let full = if self.generators == 64 { u64::MAX } else { (1u64 << self.generators) - 1 };
        self.terms().filter(|&(_, m, _)| m == full).map(|(u, _, c)| (u, c)).collect()
    }
}

impl fmt::Display for GrassCoordForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (u, m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if u > 0 {
                write!(f, " u^{u}")?;
            }
            for g in 0..64 {
                if m >> g & 1 == 1 {
                    write!(f, " dg{g}")?;
                }
            }
        }
        Ok(())
    }
}

/// Generator layout of C⁰_{n,m}(D): dφ₁..dφ_{m−1}, then dRe z_i, dIm z_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub m: usize,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.m - 1 + 2 * self.n
    }

    pub fn phi(&self, j: usize) -> usize {
        debug_assert!(j >= 1 && j < self.m);
        j - 1
    }

    pub fn re(&self, i: usize) -> usize {
        self.m - 1 + 2 * i
    }

    pub fn im(&self, i: usize) -> usize {
        self.m + 2 * i
    }

    /// Generator indices and point for a black vertex.
    pub(crate) fn slots(&self, t: Target, p: &ConfigPoint) -> (Point, [Option<usize>; 2]) {
        match t {
            Target::Interior(i) => (Point::Interior(p.z[i]), [Some(self.re(i)), Some(self.im(i))]),
            Target::Boundary(0) => (Point::Boundary(0.0), [None, None]),
            Target::Boundary(j) => (Point::Boundary(p.phi[j - 1]), [Some(self.phi(j)), None]),
            Target::White(_) => unreachable!("white vertices carry no coordinates"),
        }
    }

    /// The propagator of an edge `i → t` as a [`GrassCoordForm`].
    pub fn edge_form(&self, i: usize, t: Target, p: &ConfigPoint) -> Result<GrassCoordForm> {
        let (zp, zs) = self.slots(Target::Interior(i), p);
        let (wp, ws) = self.slots(t, p);
        let pf = propagator(zp, wp)?;
        let mut comps = Vec::new();
        for (slots, vals) in [(zs, pf.first), (ws, pf.second)] {
            for (s, v) in slots.iter().zip(vals) {
                if let Some(g) = s {
                    comps.push((*g, v));
                }
            }
        }
        Ok(GrassCoordForm::one_form(self.dim(), &comps))
    }

    pub fn zero_mode_form(&self, i: usize, p: &ConfigPoint) -> GrassCoordForm {
        let (two, u) = zero_mode(p.z[i]);
        let mut f = GrassCoordForm::zero(self.dim());
        f.add_term(0, (1 << self.re(i)) | (1 << self.im(i)), two);
        f.add_term(1, 0, u);
        f
    }
}

/// The graph form: product of black-edge propagators in global edge order, then zero-mode powers.
pub fn graph_form(g: &AdmissibleGraph, p: &ConfigPoint) -> Result<GrassCoordForm> {
    if p.z.len() != g.n() || p.phi.len() + 1 != g.m {
        return Err(Error::DimensionMismatch {
            expected: g.m - 1 + 2 * g.n(),
            found: p.phi.len() + 2 * p.z.len(),
        });
    }
    let layout = Layout { n: g.n(), m: g.m };
    let mut form = GrassCoordForm::one(layout.dim());
    for e in g.black_edges() {
        form = form.wedge(&layout.edge_form(e.vertex, g.target(e), p)?);
    }
    for i in 0..g.n() {
        form = form.wedge(&layout.zero_mode_form(i, p).pow(g.r(i)));
    }
    Ok(form)
}
