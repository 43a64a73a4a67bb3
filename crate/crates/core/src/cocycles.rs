//! Ito's cocycle Φ on SL₂(O) with its harmonic potential H, Sczech's Ψ(u,v)
//! on parabolic elements of Γ₁(N), and the exact matrix of complex
//! conjugation on the basis {Ψ(u,v)}.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::bessel::bessel_k01;
use crate::cusps::cusp_classes;
use crate::cyclotomic::{cyclotomic_poly, evaluate, mul_acc, reduce_mod};
use crate::error::{Error, Result};
use crate::field::{factorize, Field, Mat2O, OElt, SplittingType};
use crate::h3::{mobius, Point3};
use crate::lattice::{d_sum, e_aux, ek, legendre_symbol, Hnf, Lattice, Precision};
use crate::residue::{residue_ring, ResElt, ResRing};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// How the Fourier–Bessel series of H uses the unit group.
///
/// The pair (εm, ε̄n) contributes ε̄² times the (m, n) term, so a full orbit
/// sums to Σε̄² times one term, which is 0 for Z[i] and Z[ω₃]. `Sign` only
/// pairs m with −m and sums everything else term by term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitFolding {
    #[default]
    Full,
    Sign,
}

/// H together with its partial derivatives ∂_z, ∂_z̄, ∂_t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HJet {
    pub h: Complex64,
    pub dz: Complex64,
    pub dzbar: Complex64,
    pub dt: Complex64,
    pub terms: usize,
}

/// Series controls for H: the Bessel argument cutoff follows from eps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub prec: Precision,
    pub folding: UnitFolding,
    /// Multiplies the Bessel argument cutoff; 1 is the default.
    pub cutoff_scale: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { prec: Precision::default(), folding: UnitFolding::Full, cutoff_scale: 1.0 }
    }
}

impl SeriesOptions {
    fn bessel_cutoff(&self) -> f64 {
        (-self.prec.eps.ln() + 12.0) * self.cutoff_scale
    }
}

fn unit_sum_sq(field: &Field) -> Complex64 {
    field.units().iter().map(|&u| { let e = field.embed(u).conj(); e * e }).sum()
}

/// Lattice points of O with |λ| ≤ r, excluding 0.
fn points_upto(field: &Field, r: f64) -> Vec<(OElt, Complex64)> {
    let w = field.omega_complex();
    let bmax = (r / w.im).floor() as i64 + 1;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        let x0 = -(b as f64) * w.re;
        let amin = (x0 - r).floor() as i64;
        let amax = (x0 + r).ceil() as i64;
        for a in amin..=amax {
            if a == 0 && b == 0 {
                continue;
            }
            let z = field.embed(OElt::new(a, b));
            if z.norm() <= r {
                out.push((OElt::new(a, b), z));
            }
        }
    }
    out
}

fn positive_half(x: OElt) -> bool {
    x.b > 0 || (x.b == 0 && x.a > 0)
}

/// H(u) = G₂(0)(z − z̄) − (4π/D(L))·t·Σ (m̄n/|mn|) K₁(4π|mn|t) e(mnz), with
/// m ∈ O∖0, n ∈ L′∖0, L′ = D(L)⁻¹·Ō and e(w) = exp(2πi(w + w̄)); together
/// with its first derivatives.
pub fn h_jet(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<HJet> {
    if !(u.t > 0.0) {
        return Err(Error::NonPositiveArgument(u.t));
    }
    let g2 = l.g2_0();
    let z = u.z;
    let mut jet = HJet {
        h: g2 * (z - z.conj()),
        dz: g2,
        dzbar: -g2,
        dt: Complex64::new(0.0, 0.0),
        terms: 0,
    };
    let (weight, half) = match opts.folding {
        UnitFolding::Sign => (Complex64::new(2.0, 0.0), true),
        UnitFolding::Full => {
            let s = unit_sum_sq(field);
            if s.norm() < 1e-12 {
                return Ok(jet);
            }
            // units are ±1 here, so the full orbit is the sign pair
            (s, true)
        }
    };
    let y_max = opts.bessel_cutoff();
    let dl = l.dl;
    let dl_abs = dl.norm();
    // |ν| = |m|·|nn|/|D(L)| ≤ y_max/(4πt)
    let nu_max = y_max / (4.0 * PI * u.t);
    let m_max = nu_max * dl_abs; // since |nn| ≥ 1
    let ms = points_upto(field, m_max);
    let budget = opts.prec.max_terms;
    let mut count = 0usize;
    let mut nn_all = points_upto(field, m_max);
    nn_all.sort_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
    let (mut s_h, mut s_z, mut s_zb, mut s_t) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
    for &(mo, m) in &ms {
        if half && !positive_half(mo) {
            continue;
        }
        let nn_max = nu_max * dl_abs / m.norm();
        for &(_, nn) in nn_all.iter().take_while(|p| p.1.norm() <= nn_max) {
            let n = nn.conj() / dl;
            let nu = m * n;
            let a = 4.0 * PI * nu.norm();
            let y = a * u.t;
            if y > y_max {
                continue;
            }
            count += 1;
            if count > budget {
                return Err(Error::ToleranceNotMet(format!(
                    "Fourier-Bessel series of H needs more than {budget} terms at t = {}",
                    u.t
                )));
            }
            let (k0, k1) = bessel_k01(y)?;
            let coef = m.conj() * n / nu.norm();
            let w = nu * z;
            let e = Complex64::from_polar(1.0, 2.0 * PI * 2.0 * w.re);
            let base = coef * e;
            s_h += base * (u.t * k1);
            s_z += base * (u.t * k1) * (2.0 * PI * I * nu);
            s_zb += base * (u.t * k1) * (2.0 * PI * I * nu.conj());
            s_t += base * (-a * u.t * k0);
        }
    }
    let pre = -4.0 * PI / dl * weight;
    jet.h += pre * s_h;
    jet.dz += pre * s_z;
    jet.dzbar += pre * s_zb;
    jet.dt += pre * s_t;
    jet.terms = count;
    Ok(jet)
}

pub fn h_eval(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<Complex64> {
    h_jet(field, l, u, opts).map(|j| j.h)
}

fn im_part(z: Complex64) -> Complex64 {
    z - z.conj()
}

/// Φ(A) = G₂(0)·I((a+d)/c) − D(a,c) for c ≠ 0 and G₂(0)·I(b/d) for c = 0,
/// where I(z) = z − z̄.
pub fn phi(field: &Field, l: &Lattice, m: &Mat2O, prec: &Precision) -> Result<Complex64> {
    if m.det(field) != OElt::ONE {
        return Err(Error::DetNotOne);
    }
    let g2 = l.g2_0();
    let [a, b, c, d] = m.embed(field);
    if m.c.is_zero() {
        Ok(g2 * im_part(b / d))
    } else {
        Ok(g2 * im_part((a + d) / c) - d_sum(field, m.a, m.c, l, prec)?)
    }
}

/// |H(Au) − H(u) − Φ(A)|.
pub fn coboundary_residual(
    field: &Field,
    l: &Lattice,
    m: &Mat2O,
    u: Point3,
    opts: &SeriesOptions,
) -> Result<f64> {
    if *m == Mat2O::identity() {
        return Ok(0.0);
    }
    let au = mobius(&m.embed(field), u);
    let lhs = h_eval(field, l, au, opts)? - h_eval(field, l, u, opts)?;
    Ok((lhs - phi(field, l, m, &opts.prec)?).norm())
}

/// Ψ(u,v)(A) on a parabolic A under both readings of its first coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    /// First coefficient read as the Legendre symbol (b̄/d).
    pub legendre: Complex64,
    /// First coefficient read as the field quotient b̄/d.
    pub quotient: Complex64,
}

/// Ψ(u,v)(A) = −(b̄/d)·E(u) − (b/d)·E₀(u)·E₂(v) for A = (a b; 0 d) in
/// Γ₁(N). The classes u, v ∈ (1/N)O/O are given by numerators u′, v′ ∈ O.
pub fn psi_parabolic(
    field: &Field,
    l: &Lattice,
    n: i64,
    u_num: OElt,
    v_num: OElt,
    m: &Mat2O,
    prec: &Precision,
) -> Result<PsiValue> {
    if n < 2 {
        return Err(Error::DegenerateLevel(n));
    }
    let is_one = |x: OElt| (x.a - 1) % n == 0 && x.b % n == 0;
    if !m.c.is_zero() || !is_one(m.a) || !is_one(m.d) {
        return Err(Error::NotParabolic);
    }
    if m.det(field) != OElt::ONE {
        return Err(Error::DetNotOne);
    }
    let u = field.embed(u_num) / n as f64;
    let v = field.embed(v_num) / n as f64;
    let [_, b, _, d] = m.embed(field);
    let e_u = e_aux(u, l, prec)?;
    let second = b / d * ek(u, 0, l, prec)? * ek(v, 2, l, prec)?;
    let leg = legendre_symbol(field, field.conj(m.b), m.d)? as f64;
    Ok(PsiValue {
        legendre: -leg * e_u - second,
        quotient: -(b.conj() / d) * e_u - second,
    })
}

/// The pairs (u, v) ∈ ((1/N)O/O)² ∖ {0} modulo ±1, with u reduced modulo
/// gcd(v, N), each stored by its numerators in O/NO.
#[derive(Debug, Clone)]
pub struct CocycleBasis {
    pub field: Field,
    pub n: i64,
    /// Canonical representative of each class.
    pub pairs: Vec<(OElt, OElt)>,
    /// Number of (u, v) numerator pairs in each class.
    pub class_sizes: Vec<usize>,
    class_of: Vec<u32>,
    ring: ResRing,
}

impl CocycleBasis {
    pub fn new(field: &Field, n: i64) -> Result<Self> {
        let ring = residue_ring(*field, n)?;
        let r = &ring;
        let size = r.size();
        let canon = |u: OElt, v: OElt| -> Result<(OElt, OElt)> {
            let h = Hnf::of_ideal(field, &[v, OElt::int(n)])?;
            let c1 = (h.reduce(u), v);
            let nu = r.to_o(r.neg(r.from_o(u)));
            let nv = r.to_o(r.neg(r.from_o(v)));
            let h2 = Hnf::of_ideal(field, &[nv, OElt::int(n)])?;
            let c2 = (h2.reduce(nu), nv);
            Ok(c1.min(c2))
        };
        let mut ids: HashMap<(OElt, OElt), u32> = HashMap::new();
        let mut class_of = vec![u32::MAX; size * size];
        let mut keys = Vec::new();
        for (iu, u) in r.elements().enumerate() {
            for (iv, v) in r.elements().enumerate() {
                if iu == 0 && iv == 0 {
                    continue;
                }
                let key = canon(r.to_o(u), r.to_o(v))?;
                let next = ids.len() as u32;
                let id = *ids.entry(key).or_insert_with(|| {
                    keys.push(key);
                    next
                });
                class_of[iu * size + iv] = id;
            }
        }
        // renumber in sorted key order for deterministic output
        let mut order: Vec<u32> = (0..keys.len() as u32).collect();
        order.sort_by_key(|&i| keys[i as usize]);
        let mut rank = vec![0u32; keys.len()];
        for (pos, &i) in order.iter().enumerate() {
            rank[i as usize] = pos as u32;
        }
        let mut class_sizes = vec![0usize; keys.len()];
        for c in class_of.iter_mut().skip(1) {
            *c = rank[*c as usize];
            class_sizes[*c as usize] += 1;
        }
        let pairs = order.iter().map(|&i| keys[i as usize]).collect();
        Ok(CocycleBasis { field: *field, n, pairs, class_sizes, class_of, ring })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ring(&self) -> &ResRing {
        &self.ring
    }

    /// Class of a numerator pair; None for (0, 0).
    pub fn class_of(&self, u: ResElt, v: ResElt) -> Option<usize> {
        let s = self.ring.size();
        let c = self.class_of[self.ring.index(u) * s + self.ring.index(v)];
        (c != u32::MAX).then_some(c as usize)
    }
}

/// The matrix of σ on {Ψ(u,v)}: σΨ_b = Σ_j M[b, j]Ψ_j with
/// M = K/den, K having entries in Z[x]/(x^N − 1) evaluated at ζ_N.
#[derive(Debug, Clone)]
pub struct SigmaMatrix {
    pub basis: CocycleBasis,
    /// Order of the roots of unity occurring in the entries.
    pub order: usize,
    pub den: i64,
    entries: Vec<i64>,
}

impl SigmaMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Numerator polynomial of entry (i, j).
    pub fn entry(&self, i: usize, j: usize) -> &[i64] {
        let (n, m) = (self.dim(), self.order);
        &self.entries[(i * n + j) * m..(i * n + j + 1) * m]
    }

    /// Entry (i, j) reduced modulo Φ_order.
    pub fn entry_reduced(&self, i: usize, j: usize) -> Vec<i64> {
        reduce_mod(self.entry(i, j), &cyclotomic_poly(self.order))
    }

    pub fn entry_complex(&self, i: usize, j: usize) -> Complex64 {
        evaluate(self.entry(i, j), self.order) / self.den as f64
    }

    /// Exact rational value of entry (i, j) if it lies in Q.
    pub fn entry_rational(&self, i: usize, j: usize) -> Option<Ratio<i64>> {
        rational_part(&self.entry_reduced(i, j)).map(|c| Ratio::new(c, self.den))
    }

    /// K² = den²·I in Z[ζ]: σ is an involution.
    pub fn squares_to_identity(&self) -> bool {
        let (n, m) = (self.dim(), self.order);
        let phi = cyclotomic_poly(m);
        let den2 = self.den * self.den;
        (0..n).into_par_iter().all(|i| {
            (0..n).all(|j| {
                let mut acc = vec![0i64; m];
                for k in 0..n {
                    mul_acc(&mut acc, self.entry(i, k), self.entry(k, j));
                }
                let r = reduce_mod(&acc, &phi);
                let want = if i == j { den2 } else { 0 };
                r[0] == want && r[1..].iter().all(|&c| c == 0)
            })
        })
    }

    /// Exact trace, when it is rational.
    pub fn trace(&self) -> Option<Ratio<i64>> {
        let mut acc = vec![0i64; self.order];
        for i in 0..self.dim() {
            for (a, b) in acc.iter_mut().zip(self.entry(i, i)) {
                *a += b;
            }
        }
        rational_part(&reduce_mod(&acc, &cyclotomic_poly(self.order))).map(|c| Ratio::new(c, self.den))
    }

    /// With m_b the class sizes, Ψ(0,0) = Σ_b m_b Ψ_b/(N² − 1) must satisfy
    /// σΨ(0,0) = −Ψ(0,0), i.e. Σ_b m_b·M[b, j] = −m_j.
    pub fn psi00_consistent(&self) -> bool {
        let (n, m) = (self.dim(), self.order);
        let phi = cyclotomic_poly(m);
        let sizes = &self.basis.class_sizes;
        (0..n).all(|j| {
            let mut acc = vec![0i64; m];
            for (b, &mb) in sizes.iter().enumerate() {
                for (a, x) in acc.iter_mut().zip(self.entry(b, j)) {
                    *a += mb as i64 * x;
                }
            }
            let r = reduce_mod(&acc, &phi);
            r[0] == -(sizes[j] as i64) * self.den && r[1..].iter().all(|&c| c == 0)
        })
    }
}

fn rational_part(r: &[i64]) -> Option<i64> {
    r[1..].iter().all(|&c| c == 0).then(|| r[0])
}

/// Prime-power level data (p, n) or an error.
pub fn prime_power(n: i64) -> Result<(i64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Ok((*p, *e)),
        _ => Err(Error::UnsupportedLevel(format!("N = {n} is not a prime power"))),
    }
}

/// Builds the σ-matrix: for the basis pair x = (u, v) and every
/// (s, t) ≠ (0, 0) the class of (s, t) receives
/// −1/(N²(N²−1)) − φ(sv̄ − tū)/N², with φ = ζ_N^e and e the ω-coordinate
/// of sv̄ − tū.
pub fn sigma_matrix(field: &Field, n: i64) -> Result<SigmaMatrix> {
    field.require_class_number_one()?;
    let (p, _) = prime_power(n)?;
    if field.splitting_type(p)? == SplittingType::Ramified {
        return Err(Error::UnsupportedLevel(format!("{p} ramifies in Q(sqrt(-{}))", field.d)));
    }
    let basis = CocycleBasis::new(field, n)?;
    let r = basis.ring();
    let dim = basis.len();
    let m = n as usize;
    let n2 = n * n;
    let den = n2 * (n2 - 1);
    let elems: Vec<ResElt> = r.elements().collect();
    let rows: Vec<Vec<i64>> = basis
        .pairs
        .par_iter()
        .map(|&(u, v)| {
            let (u, v) = (r.from_o(u), r.from_o(v));
            let (ub, vb) = (r.conj(u), r.conj(v));
            let mut row = vec![0i64; dim * m];
            for &s in &elems {
                for &t in &elems {
                    let Some(j) = basis.class_of(s, t) else { continue };
                    let e = r.sub(r.mul(s, vb), r.mul(t, ub)).b as usize;
                    row[j * m] -= 1;
                    row[j * m + e] -= n2 - 1;
                }
            }
            row
        })
        .collect();
    Ok(SigmaMatrix { basis, order: m, den, entries: rows.concat() })
}

/// Trace of σ on H¹_Eis together with the closed-form expectation
/// −2·#C/(p² − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceH1 {
    pub value: Ratio<i64>,
    pub formula_value: Ratio<i64>,
    pub cusp_count: usize,
    pub basis_dim: usize,
    pub agrees: bool,
}

pub fn trace_sigma_h1(field: &Field, n: i64) -> Result<TraceH1> {
    let (p, _) = prime_power(n)?;
    if field.splitting_type(p)? != SplittingType::Inert {
        return Err(Error::UnsupportedLevel(format!("{p} is not inert in Q(sqrt(-{}))", field.d)));
    }
    let sm = sigma_matrix(field, n)?;
    let value = sm.trace().ok_or_else(|| {
        Error::InvalidInput("trace of the sigma matrix is not rational".into())
    })?;
    let cusps = cusp_classes(field, n)?.count();
    let formula_value = Ratio::new(-2 * cusps as i64, p * p - 1);
    Ok(TraceH1 {
        value,
        formula_value,
        cusp_count: cusps,
        basis_dim: sm.dim(),
        agrees: value == formula_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn pt(x: f64, y: f64, t: f64) -> Point3 {
        Point3::new(Complex64::new(x, y), t).unwrap()
    }

    #[test]
    fn h_for_gaussian_integers_folds_to_zero() {
        let f = make_field(1).unwrap();
        let l = Lattice::from_field(&f);
        let u = pt(0.2, 0.1, 0.9);
        let full = h_eval(&f, &l, u, &SeriesOptions::default()).unwrap();
        assert!(full.norm() < 1e-10);
        let raw = SeriesOptions { folding: UnitFolding::Sign, ..Default::default() };
        let jet = h_jet(&f, &l, u, &raw).unwrap();
        assert!(jet.terms > 0);
        assert!(jet.h.norm() < 1e-9, "{}", jet.h);
    }

    #[test]
    fn h_is_periodic() {
        let f = make_field(2).unwrap();
        let l = Lattice::from_field(&f);
        let o = SeriesOptions::default();
        let u = pt(0.2, 0.1, 0.6);
        let h0 = h_eval(&f, &l, u, &o).unwrap();
        for w in [Complex64::new(1.0, 0.0), l.w1] {
            let h1 = h_eval(&f, &l, Point3 { z: u.z + w, t: u.t }, &o).unwrap();
            assert!((h1 - h0 - l.g2_0() * (w - w.conj())).norm() < 1e-8);
        }
    }

    #[test]
    fn h_collapses_at_large_height() {
        let f = make_field(7).unwrap();
        let l = Lattice::from_field(&f);
        let u = pt(0.3, 0.4, 10.0);
        let h = h_eval(&f, &l, u, &SeriesOptions::default()).unwrap();
        assert!((h - l.g2_0() * (u.z - u.z.conj())).norm() < 1e-12);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let f = make_field(2).unwrap();
        let l = Lattice::from_field(&f);
        let o = SeriesOptions { prec: Precision { eps: 1e-13, ..Default::default() }, ..Default::default() };
        let u = pt(0.2, 0.1, 0.5);
        let j = h_jet(&f, &l, u, &o).unwrap();
        let h = 1e-5;
        let at = |dx: f64, dy: f64, dt: f64| h_eval(&f, &l, pt(0.2 + dx, 0.1 + dy, 0.5 + dt), &o).unwrap();
        let hx = (at(h, 0.0, 0.0) - at(-h, 0.0, 0.0)) / (2.0 * h);
        let hy = (at(0.0, h, 0.0) - at(0.0, -h, 0.0)) / (2.0 * h);
        let ht = (at(0.0, 0.0, h) - at(0.0, 0.0, -h)) / (2.0 * h);
        assert!((j.dz - (hx - I * hy) / 2.0).norm() < 1e-6);
        assert!((j.dzbar - (hx + I * hy) / 2.0).norm() < 1e-6);
        assert!((j.dt - ht).norm() < 1e-6);
    }

    #[test]
    fn phi_examples() {
        let f = make_field(1).unwrap();
        let l = Lattice::from_field(&f);
        let p = Precision::default();
        let t = Mat2O::from_ints(1, 1, 0, 1);
        let uu = Mat2O::new(OElt::ONE, OElt::OMEGA, OElt::ZERO, OElt::ONE);
        let s = Mat2O::from_ints(0, -1, 1, 0);
        for m in [t, uu, s] {
            assert!(phi(&f, &l, &m, &p).unwrap().norm() < 1e-12);
        }
        assert_eq!(phi(&f, &l, &Mat2O::from_ints(1, 1, 1, 1), &p), Err(Error::DetNotOne));
    }

    #[test]
    fn coboundary_for_sqrt_minus_two() {
        let f = make_field(2).unwrap();
        let l = Lattice::from_field(&f);
        let o = SeriesOptions::default();
        let w = OElt::OMEGA;
        let mats = [
            Mat2O::from_ints(0, -1, 1, 0),
            Mat2O::from_ints(1, 0, 1, 1),
            Mat2O::new(OElt::ONE, OElt::ZERO, w, OElt::ONE),
            Mat2O::from_ints(2, 1, 3, 2),
        ];
        let u = pt(0.2, 0.1, 1.3);
        for m in mats {
            let r = coboundary_residual(&f, &l, &m, u, &o).unwrap();
            assert!(r < 1e-6, "{m}: {r}");
        }
    }

    #[test]
    fn psi_examples() {
        let f = make_field(1).unwrap();
        let l = Lattice::from_field(&f);
        let p = Precision::default();
        let id = Mat2O::identity();
        let v = psi_parabolic(&f, &l, 3, OElt::new(1, 2), OElt::new(2, 0), &id, &p).unwrap();
        assert!(v.legendre.norm() < 1e-12 && v.quotient.norm() < 1e-12);
        let t = Mat2O::from_ints(1, 1, 0, 1);
        let a = psi_parabolic(&f, &l, 3, OElt::new(1, 2), OElt::new(2, 1), &t, &p).unwrap();
        let b = psi_parabolic(&f, &l, 3, OElt::new(-1, -2), OElt::new(-2, -1), &t, &p).unwrap();
        assert!((a.legendre - b.legendre).norm() < 1e-9);
        assert!((a.quotient - b.quotient).norm() < 1e-9);
        let bad = Mat2O::from_ints(1, 0, 3, 1);
        assert_eq!(psi_parabolic(&f, &l, 3, OElt::ONE, OElt::ONE, &bad, &p), Err(Error::NotParabolic));
    }

    #[test]
    fn basis_sizes() {
        let f = make_field(1).unwrap();
        assert_eq!(CocycleBasis::new(&f, 3).unwrap().len(), 8);
        let b = CocycleBasis::new(&f, 7).unwrap();
        assert_eq!(b.len(), 48);
        assert_eq!(b.class_sizes.iter().sum::<usize>(), 49 * 49 - 1);
    }

    #[test]
    fn sigma_matrix_at_three() {
        let f = make_field(1).unwrap();
        let s = sigma_matrix(&f, 3).unwrap();
        assert!(s.squares_to_identity());
        assert_eq!(s.trace(), Some(Ratio::from_integer(-2)));
        for i in 0..s.dim() {
            assert_eq!(s.entry_rational(i, i), Some(Ratio::new(-2, 8)));
        }
        assert!(s.psi00_consistent());
    }

    #[test]
    fn sigma_matrix_rejects_bad_levels() {
        let f = make_field(1).unwrap();
        assert!(matches!(sigma_matrix(&f, 6), Err(Error::UnsupportedLevel(_))));
        assert!(matches!(sigma_matrix(&f, 2), Err(Error::UnsupportedLevel(_))));
        assert!(matches!(trace_sigma_h1(&f, 5), Err(Error::UnsupportedLevel(_))));
    }
}
