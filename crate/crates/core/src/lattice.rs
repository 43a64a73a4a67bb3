//! Lattice sums attached to a rank-2 lattice L ⊂ C.
//!
//! The conditionally convergent sums G_k(x) = Σ′ (w+x)^{−k}|w+x|^{−s} at
//! s = 0 are evaluated by the Hecke trick: the Mellin integral is split at
//! t₀ = 1/area, the upper half is summed directly against an incomplete
//! gamma weight and the lower half after Poisson summation over the dual
//! lattice. Both series converge like Gaussians.
//!
//! ℘ and ζ are evaluated independently by q-series, so that the classical
//! identities E₂(u) = ℘(u) + G₂(0) and E₁(u) = ζ(u) − G₂(0)u − (π/A)ū give
//! a genuine cross-check rather than a tautology.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{gcd, Field, OElt};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Accuracy target for a single lattice-sum evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub eps: f64,
    pub max_terms: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { eps: 1e-10, max_terms: 1_000_000 }
    }
}

impl Precision {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {eps}")));
        }
        Ok(Precision { eps, ..Precision::default() })
    }

    /// Gaussian exponent beyond which terms are dropped. The margin covers
    /// the polynomial prefactors and the number of terms in a shell.
    pub fn exponent_cutoff(&self) -> f64 {
        -self.eps.ln() + 8.0
    }
}

/// The lattice Z·w1 + Z·w2 with Im(w1/w2) > 0.
#[derive(Debug)]
pub struct Lattice {
    pub w1: Complex64,
    pub w2: Complex64,
    pub area: f64,
    /// D(L) = w1·w̄2 − w̄1·w2, purely imaginary with |D(L)| = 2·area.
    pub dl: Complex64,
    /// Basis of the dual lattice {μ : Re(μλ̄) ∈ Z for all λ ∈ L}.
    pub dual: (Complex64, Complex64),
    g2_0: OnceLock<Complex64>,
}

impl Clone for Lattice {
    fn clone(&self) -> Self {
        let l = Lattice::new(self.w1, self.w2).expect("valid basis");
        if let Some(v) = self.g2_0.get() {
            let _ = l.g2_0.set(*v);
        }
        l
    }
}

impl Lattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        let det = w1.re * w2.im - w1.im * w2.re;
        if !(det.abs() > 1e-12) || !det.is_finite() {
            return Err(Error::InvalidInput("lattice basis is degenerate".into()));
        }
        if (w1 / w2).im <= 0.0 {
            return Err(Error::InvalidInput("basis must satisfy Im(w1/w2) > 0".into()));
        }
        let d1 = Complex64::new(w2.im, -w2.re) / det;
        let d2 = Complex64::new(-w1.im, w1.re) / det;
        Ok(Lattice {
            w1,
            w2,
            area: det.abs(),
            dl: w1 * w2.conj() - w1.conj() * w2,
            dual: (d1, d2),
            g2_0: OnceLock::new(),
        })
    }

    /// The lattice O = Z + Zω, with w1 = ω and w2 = 1.
    pub fn from_field(field: &Field) -> Self {
        Lattice::new(field.omega_complex(), Complex64::new(1.0, 0.0)).expect("O is a lattice")
    }

    /// Real coordinates (c1, c2) with z = c1·w1 + c2·w2.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let (d1, d2) = self.dual;
        ((z * d1.conj()).re, (z * d2.conj()).re)
    }

    /// Membership in L up to a coordinate tolerance.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (a, b) = self.coords(z);
        (a - a.round()).abs() < tol && (b - b.round()).abs() < tol
    }

    /// G₂(0), computed once per lattice at high accuracy.
    pub fn g2_0(&self) -> Complex64 {
        *self.g2_0.get_or_init(|| {
            let prec = Precision { eps: 1e-15, ..Precision::default() };
            hecke_sum(self, Complex64::new(0.0, 0.0), 2, &prec).expect("G2(0) within budget")
        })
    }

    /// Installs a previously computed G₂(0), e.g. from a cache; false if the
    /// value was already computed.
    pub fn seed_g2_0(&self, v: Complex64) -> bool {
        self.g2_0.set(v).is_ok()
    }

    /// E₂(0); the same number as G₂(0) under the prime-on-sum convention.
    pub fn e2_0(&self) -> Complex64 {
        self.g2_0()
    }
}

/// Points of the lattice b1·Z + b2·Z shifted by `shift`, of modulus at most
/// `radius`. Counts are bounded by `max_terms`.
fn shifted_points(
    b1: Complex64,
    b2: Complex64,
    shift: Complex64,
    radius: f64,
    max_terms: usize,
) -> Result<Vec<Complex64>> {
    let det = b1.re * b2.im - b1.im * b2.re;
    // coordinates of −shift
    let c1 = (-shift.re * b2.im + shift.im * b2.re) / det;
    let c2 = (-b1.re * shift.im + b1.im * shift.re) / det;
    let r1 = radius * b2.norm() / det.abs() + 1.0;
    let r2 = radius * b1.norm() / det.abs() + 1.0;
    let (i0, i1) = ((c1 - r1).floor() as i64, (c1 + r1).ceil() as i64);
    let (j0, j1) = ((c2 - r2).floor() as i64, (c2 + r2).ceil() as i64);
    let span = ((i1 - i0 + 1) as f64) * ((j1 - j0 + 1) as f64);
    if span > 4.0 * max_terms as f64 {
        return Err(Error::ToleranceNotMet(format!(
            "lattice sum needs about {span:.0} terms, budget {max_terms}"
        )));
    }
    let mut out = Vec::new();
    for i in i0..=i1 {
        for j in j0..=j1 {
            let p = b1 * i as f64 + b2 * j as f64 + shift;
            if p.norm() <= radius {
                out.push(p);
            }
        }
    }
    if out.len() > max_terms {
        return Err(Error::ToleranceNotMet(format!(
            "lattice sum needs {} terms, budget {max_terms}",
            out.len()
        )));
    }
    Ok(out)
}

/// Regularised upper incomplete gamma Γ(k, a)/Γ(k) for k = 1, 2.
fn upper_gamma_q(k: u32, a: f64) -> f64 {
    match k {
        1 => (-a).exp(),
        2 => (1.0 + a) * (-a).exp(),
        _ => unreachable!(),
    }
}

fn hecke_sum(l: &Lattice, x: Complex64, k: u32, prec: &Precision) -> Result<Complex64> {
    let t0 = 1.0 / l.area;
    let amax = prec.exponent_cutoff();
    let scale = 1e-12 * (l.w1.norm() + l.w2.norm());

    let r_direct = (amax / (PI * t0)).sqrt();
    let mut direct = Complex64::new(0.0, 0.0);
    for lam in shifted_points(l.w1, l.w2, x, r_direct, prec.max_terms)? {
        let n2 = lam.norm_sqr();
        if n2.sqrt() < scale {
            continue;
        }
        direct += lam.powi(-(k as i32)) * upper_gamma_q(k, PI * t0 * n2);
    }

    let (d1, d2) = l.dual;
    let r_dual = (amax * t0 / PI).sqrt();
    let mut dual = Complex64::new(0.0, 0.0);
    for mu in shifted_points(d1, d2, Complex64::new(0.0, 0.0), r_dual, prec.max_terms)? {
        let n2 = mu.norm_sqr();
        if n2 < 1e-24 {
            continue;
        }
        let phase = Complex64::from_polar(1.0, 2.0 * PI * (mu * x.conj()).re);
        dual += mu.conj().powi(k as i32) * phase * (-PI * n2 / t0).exp() / n2;
    }
    // Γ(1) = Γ(2) = 1
    let pre = PI.powi(k as i32 - 1) / l.area * (-I).powi(k as i32);
    Ok(direct + pre * dual)
}

/// G_k(x) = Σ′_{w∈L} (w+x)^{−k}|w+x|^{−s} at s = 0, for k ∈ {0, 1, 2}.
pub fn gk(x: Complex64, k: u32, l: &Lattice, prec: &Precision) -> Result<Complex64> {
    match k {
        // The continuation at s = 0 is the constant −1 on L and 0 off L:
        // only the excluded singular term survives the 1/Γ(s) factor.
        0 => Ok(Complex64::new(if l.contains(x, 1e-12) { -1.0 } else { 0.0 }, 0.0)),
        1 | 2 => hecke_sum(l, x, k, prec),
        _ => Err(Error::InvalidInput(format!("weight k = {k} is not supported"))),
    }
}

/// E_k(u) = Σ′ (w+u)^{−k}|w+u|^{−s} at s = 0.
pub fn ek(u: Complex64, k: u32, l: &Lattice, prec: &Precision) -> Result<Complex64> {
    gk(u, k, l, prec)
}

/// The auxiliary function E(u): E₂(0) on L, (℘(u) − E₁(u)²)/2 off L.
pub fn e_aux(u: Complex64, l: &Lattice, prec: &Precision) -> Result<Complex64> {
    if l.contains(u, 1e-12) {
        return Ok(l.e2_0());
    }
    let p = weierstrass_p(u, l, prec)?;
    let e1 = ek(u, 1, l, prec)?;
    Ok((p - e1 * e1) / 2.0)
}

/// (℘(u), ζ(u)) by q-expansions in τ = w1/w2 after reducing Im(u/w2).
pub fn weierstrass_p_zeta(u: Complex64, l: &Lattice, prec: &Precision) -> Result<(Complex64, Complex64)> {
    if l.contains(u, 1e-12) {
        return Err(Error::PoleAtLatticePoint);
    }
    let om = l.w2;
    let tau = l.w1 / om;
    let two_pi_i = 2.0 * PI * I;
    let q = (two_pi_i * tau).exp();
    let qa = q.norm();
    let tol = prec.eps * 1e-3;
    let nmax = ((tol.ln() / qa.ln()).ceil() as usize + 2).max(4);

    let mut e2 = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=nmax {
        qn *= q;
        e2 -= 24.0 * n as f64 * qn / (1.0 - qn);
    }
    let eta1 = PI * PI / 3.0 * e2;
    let eta2 = eta1 * tau - two_pi_i;

    let z = u / om;
    let shift = (z.im / tau.im).round();
    let z0 = z - tau * shift;
    let x = (two_pi_i * z0).exp();
    let xi = 1.0 / x;
    let mut zeta = eta1 * z0 + PI * I * (x + 1.0) / (x - 1.0);
    let mut wp = -eta1 + two_pi_i * two_pi_i * x / ((1.0 - x) * (1.0 - x));
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 1..=nmax + 2 {
        qn *= q;
        let a = qn * xi;
        let b = qn * x;
        zeta += two_pi_i * (a / (1.0 - a) - b / (1.0 - b));
        wp += two_pi_i * two_pi_i * (b / ((1.0 - b) * (1.0 - b)) + a / ((1.0 - a) * (1.0 - a)));
        if a.norm() + b.norm() < tol {
            break;
        }
    }
    zeta += eta2 * shift;
    let (wp, zeta) = (wp / (om * om), zeta / om);
    if !(wp.is_finite() && zeta.is_finite()) {
        return Err(Error::ToleranceNotMet("q-series overflow near a pole".into()));
    }
    Ok((wp, zeta))
}

pub fn weierstrass_p(u: Complex64, l: &Lattice, prec: &Precision) -> Result<Complex64> {
    weierstrass_p_zeta(u, l, prec).map(|v| v.0)
}

pub fn weierstrass_zeta(u: Complex64, l: &Lattice, prec: &Precision) -> Result<Complex64> {
    weierstrass_p_zeta(u, l, prec).map(|v| v.1)
}

/// A sublattice of Z² = O in Hermite normal form, with basis rows
/// (g, y1) and (0, h22); g, h22 > 0 and 0 ≤ y1 < h22.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hnf {
    pub g: i64,
    pub y1: i64,
    pub h22: i64,
}

fn ext_gcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd_i64(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl Hnf {
    /// HNF of the Z-span of the given vectors; must have rank 2.
    pub fn from_vectors(vs: &[(i64, i64)]) -> Result<Hnf> {
        let mut pivot = (0i64, 0i64);
        let mut rest: Vec<i64> = Vec::new();
        for &(x, y) in vs {
            if x == 0 {
                rest.push(y);
                continue;
            }
            if pivot.0 == 0 {
                pivot = (x, y);
                continue;
            }
            // Replace pivot by the combination with first entry gcd, keep
            // the complementary combination (first entry 0).
            let (g, s, t) = ext_gcd_i64(pivot.0, x);
            let new = (g, s * pivot.1 + t * y);
            let (a, b) = (pivot.0 / g, x / g);
            rest.push(b * pivot.1 - a * y);
            pivot = new;
        }
        let h22 = rest.iter().fold(0, |acc, &y| gcd(acc, y));
        if pivot.0 == 0 || h22 == 0 {
            return Err(Error::InvalidInput("generators do not span a full-rank lattice".into()));
        }
        let sign = pivot.0.signum();
        Ok(Hnf { g: pivot.0 * sign, y1: (pivot.1 * sign).rem_euclid(h22), h22 })
    }

    /// HNF of the ideal generated by `gens` in O.
    pub fn of_ideal(field: &Field, gens: &[OElt]) -> Result<Hnf> {
        let mut vs = Vec::with_capacity(2 * gens.len());
        for &x in gens {
            let xw = field.try_mul(x, OElt::OMEGA)?;
            vs.push((x.a, x.b));
            vs.push((xw.a, xw.b));
        }
        Hnf::from_vectors(&vs)
    }

    pub fn index(&self) -> i64 {
        self.g * self.h22
    }

    /// Canonical representative in the box 0 ≤ a < g, 0 ≤ b < h22.
    pub fn reduce(&self, x: OElt) -> OElt {
        let q = x.a.div_euclid(self.g);
        let b = x.b - q * self.y1;
        OElt::new(x.a - q * self.g, b.rem_euclid(self.h22))
    }

    pub fn contains(&self, x: OElt) -> bool {
        self.reduce(x).is_zero()
    }

    pub fn box_elements(&self) -> Vec<OElt> {
        let mut out = Vec::with_capacity(self.index() as usize);
        for a in 0..self.g {
            for b in 0..self.h22 {
                out.push(OElt::new(a, b));
            }
        }
        out
    }
}

/// A full residue system for O/cO (norm(c) elements, HNF box order).
pub fn residue_system(field: &Field, c: OElt) -> Result<Vec<OElt>> {
    if c.is_zero() {
        return Err(Error::InvalidInput("modulus must be nonzero".into()));
    }
    let h = Hnf::of_ideal(field, &[c])?;
    debug_assert_eq!(h.index(), field.norm(c));
    Ok(h.box_elements())
}

/// x / c as a complex number.
fn quotient(field: &Field, x: OElt, c: OElt) -> Complex64 {
    field.embed(x) / field.embed(c)
}

/// D(a, c) = (1/c) Σ_{r ∈ O/cO} G₁(ar/c)·G₁(r/c) for the lattice O.
pub fn d_sum(field: &Field, a: OElt, c: OElt, l: &Lattice, prec: &Precision) -> Result<Complex64> {
    let reps = residue_system(field, c)?;
    let mut s = Complex64::new(0.0, 0.0);
    for r in reps {
        let ar = field.try_mul(a, r)?;
        s += gk(quotient(field, ar, c), 1, l, prec)? * gk(quotient(field, r, c), 1, l, prec)?;
    }
    Ok(s / field.embed(c))
}

/// (t/s) = −1 + #{y mod sO : y² ≡ t mod sO}.
pub fn legendre_symbol(field: &Field, t: OElt, s: OElt) -> Result<i64> {
    let h = Hnf::of_ideal(field, &[s])?;
    let mut count = 0;
    for y in h.box_elements() {
        let y2 = field.try_mul(y, y)?;
        if h.contains(y2 - t) {
            count += 1;
        }
    }
    Ok(count - 1)
}
