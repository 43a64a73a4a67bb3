//! Ito's Eisenstein differential ω = dH on H³, its Hodge dual, quadrature
//! of *ω over the face B₀, and the coefficients F(g) = ∫_{B₀} *ω[g] of the
//! Eisenstein cycle Σ F(g)·{g0, g∞} over Γ₁(N)\SL₂(Z[i]).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cocycles::{h_jet, SeriesOptions, UnitFolding};
use crate::error::{Error, Result};
use crate::field::{gcd, make_field, Field, Mat2O, OElt};
use crate::h3::{form2_euclidean, hodge_star, mobius, Face, Form1Sample, Point3};
use crate::lattice::Lattice;
use crate::quad::integrate;
use crate::residue::{residue_ring, ResElt};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Points at least this high are evaluated without reduction.
const DIRECT_HEIGHT: f64 = 0.5;

/// Moves u towards the standard fundamental domain by translations and
/// S = (0 −1; 1 0), returning A ∈ SL₂(O) and A·u. For norm-Euclidean O this
/// ends with |z − λ|² + t² ≥ 1 for every λ ∈ O.
pub fn reduce_point(field: &Field, l: &Lattice, u: Point3) -> (Mat2O, Point3) {
    let s = Mat2O::from_ints(0, -1, 1, 0);
    let mut a = Mat2O::identity();
    let mut v = u;
    for _ in 0..200 {
        let (c1, c2) = l.coords(v.z);
        let (r1, r2) = (c1.round() as i64, c2.round() as i64);
        let mut best = (f64::INFINITY, OElt::ZERO);
        for db in -1..=1 {
            for da in -1..=1 {
                let lam = OElt::new(r2 + da, r1 + db);
                let dist = (v.z - field.embed(lam)).norm_sqr();
                if dist < best.0 {
                    best = (dist, lam);
                }
            }
        }
        let tr = Mat2O::new(OElt::ONE, -best.1, OElt::ZERO, OElt::ONE);
        a = tr.mul(field, &a);
        v = mobius(&a.embed(field), u);
        if v.z.norm_sqr() + v.t * v.t >= 1.0 - 1e-12 {
            break;
        }
        a = s.mul(field, &a);
        v = mobius(&a.embed(field), u);
    }
    (a, v)
}

/// ∂(x′, y′, t′)/∂(x, y, t) of u ↦ A·u, by central differences.
pub fn mobius_jacobian(m: &[Complex64; 4], u: Point3) -> [[f64; 3]; 3] {
    let h = 1e-5 * u.t;
    let coords = |p: Point3| [p.z.re, p.z.im, p.t];
    let mut jac = [[0.0; 3]; 3];
    for j in 0..3 {
        let shift = |sgn: f64| {
            let mut p = u;
            match j {
                0 => p.z.re += sgn * h,
                1 => p.z.im += sgn * h,
                _ => p.t += sgn * h,
            }
            coords(mobius(m, p))
        };
        let (hi, lo) = (shift(1.0), shift(-1.0));
        for i in 0..3 {
            jac[i][j] = (hi[i] - lo[i]) / (2.0 * h);
        }
    }
    jac
}

/// Real gradient (H_x, H_y, H_t) of H at u; low points are first mapped up
/// by [`reduce_point`], using that H∘A − H is constant. That only holds for
/// the fully folded series (or when the units are ±1), so a sign-folded
/// series over a larger unit group is always summed directly.
pub fn grad_h(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<[Complex64; 3]> {
    let from_jet = |p: Point3| -> Result<[Complex64; 3]> {
        let j = h_jet(field, l, p, opts)?;
        Ok([j.dz + j.dzbar, I * (j.dz - j.dzbar), j.dt])
    };
    let invariant = opts.folding == UnitFolding::Full || field.units().len() == 2;
    if u.t >= DIRECT_HEIGHT || !invariant {
        return from_jet(u);
    }
    let (a, v) = reduce_point(field, l, u);
    if a == Mat2O::identity() {
        return from_jet(u);
    }
    pull_back(&mobius_jacobian(&a.embed(field), u), &from_jet(v)?)
}

fn pull_back(jac: &[[f64; 3]; 3], g: &[Complex64; 3]) -> Result<[Complex64; 3]> {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (j, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            *o += g[i] * jac[i][j];
        }
    }
    Ok(out)
}

/// β-coefficients (F₀, F₁, F₂) = (−tH_z, tH_t, tH_z̄) of dH.
pub fn form_from_gradient(g: &[Complex64; 3], t: f64) -> [Complex64; 3] {
    let hz = (g[0] - I * g[1]) / 2.0;
    let hzb = (g[0] + I * g[1]) / 2.0;
    [-t * hz, t * g[2], t * hzb]
}

/// ω = dH at u as a 1-form on the β-basis.
pub fn omega_eval(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<Form1Sample> {
    let g = grad_h(field, l, u, opts)?;
    Ok(Form1Sample { point: u, f: form_from_gradient(&g, u.t) })
}

fn offset(u: Point3, axis: usize, h: f64) -> Point3 {
    let mut p = u;
    match axis {
        0 => p.z.re += h,
        1 => p.z.im += h,
        _ => p.t += h,
    }
    p
}

/// Laplace–Beltrami residual t²ΔH − tH_t, by differencing the gradient.
pub fn harmonicity_residual(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<f64> {
    let h = 1e-4 * u.t.min(1.0);
    let g0 = grad_h(field, l, u, opts)?;
    let mut lap = Complex64::new(0.0, 0.0);
    for axis in 0..3 {
        let gp = grad_h(field, l, offset(u, axis, h), opts)?;
        let gm = grad_h(field, l, offset(u, axis, -h), opts)?;
        lap += (gp[axis] - gm[axis]) / (2.0 * h);
    }
    Ok((u.t * u.t * lap - u.t * g0[2]).norm())
}

/// Largest component of the curl of (H_x, H_y, H_t): ω is closed.
pub fn omega_closedness_residual(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<f64> {
    let h = 1e-4 * u.t.min(1.0);
    let mut d = [[Complex64::new(0.0, 0.0); 3]; 3]; // d[axis][component]
    for (axis, row) in d.iter_mut().enumerate() {
        let gp = grad_h(field, l, offset(u, axis, h), opts)?;
        let gm = grad_h(field, l, offset(u, axis, -h), opts)?;
        for c in 0..3 {
            row[c] = (gp[c] - gm[c]) / (2.0 * h);
        }
    }
    let curl = [d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]];
    Ok(curl.iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// Euclidean coefficients (dx∧dy, dy∧dt, dt∧dx) of *ω at u.
pub fn star_omega_euclidean(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<[Complex64; 3]> {
    let w = omega_eval(field, l, u, opts)?;
    Ok(form2_euclidean(&hodge_star(&w.f), u.t))
}

/// |d(*ω)|: the coefficient of dx∧dy∧dt of the exterior derivative.
pub fn star_closedness_residual(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<f64> {
    let h = 1e-4 * u.t.min(1.0);
    // P dx∧dy + Q dy∧dt + R dt∧dx ↦ (P_t + Q_x + R_y) dx∧dy∧dt
    let comp = [(2, 0), (0, 1), (1, 2)]; // (axis, coefficient)
    let mut div = Complex64::new(0.0, 0.0);
    for (axis, c) in comp {
        let p = star_omega_euclidean(field, l, offset(u, axis, h), opts)?;
        let m = star_omega_euclidean(field, l, offset(u, axis, -h), opts)?;
        div += (p[c] - m[c]) / (2.0 * h);
    }
    Ok(div.norm())
}

/// Controls for the face quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceOptions {
    /// Cut-off height h; the integral is computed on t ≥ h, h/2, h/4.
    pub t_floor: f64,
    /// Absolute tolerance of each nested one-dimensional quadrature.
    pub tol: f64,
    /// Largest acceptable Richardson spread.
    pub spread_tol: f64,
    pub max_panels: usize,
}

impl Default for FaceOptions {
    fn default() -> Self {
        FaceOptions { t_floor: 0.05, tol: 1e-10, spread_tol: 1e-3, max_panels: 400 }
    }
}

impl FaceOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_floor > 0.0 && self.t_floor <= 0.1) {
            return Err(Error::InvalidInput(format!("t_floor must lie in (0, 0.1], got {}", self.t_floor)));
        }
        if !(self.tol > 0.0 && self.spread_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// A face integral with its extrapolation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceIntegral {
    pub value: Complex64,
    /// |R₂ − R₁|, the change made by the last extrapolation step.
    pub spread: f64,
    /// Truncated integrals at h, h/2, h/4.
    pub levels: [Complex64; 3],
}

/// ∫ of a 2-form over B₀ ∩ {t ≥ h}. The planar triangle 0 ≤ x ≤ y ≤ ½ is
/// mapped to the square by x = s·y, and on the graph t = √(1 − x² − (y−1)²)
/// the form P dx∧dy + Q dy∧dt + R dt∧dx pulls back to
/// (P + Q·x/t + R·(y−1)/t) dx∧dy.
pub fn face_integral_truncated<F>(form: &F, h: f64, opts: &FaceOptions) -> Result<Complex64>
where
    F: Fn(Point3) -> Result<[Complex64; 3]> + Sync,
{
    let outer = |s: f64| -> Result<Complex64> {
        let k = 1.0 + s * s;
        let y_min = (1.0 - (1.0 - k * h * h).max(0.0).sqrt()) / k;
        let inner = |y: f64| -> Result<Complex64> {
            let x = s * y;
            let t = Face::height(x, y);
            let [p, q, r] = form(Point3 { z: Complex64::new(x, y), t })?;
            Ok((p + q * (x / t) + r * ((y - 1.0) / t)) * y)
        };
        integrate(inner, y_min, 0.5, opts.tol, opts.max_panels)
    };
    integrate(outer, 0.0, 1.0, opts.tol, opts.max_panels)
}

/// Face integral over B₀ extrapolated to t_floor → 0. The truncation error
/// is even in h, so the Richardson steps use exponents 2 and 4.
pub fn integrate_face_b0<F>(form: F, opts: &FaceOptions) -> Result<FaceIntegral>
where
    F: Fn(Point3) -> Result<[Complex64; 3]> + Sync,
{
    integrate_face_b0_regularized(form, Complex64::new(0.0, 0.0), opts)
}

/// As [`integrate_face_b0`] for a form whose truncated integral grows like
/// c·ln(1/h) at the cusp vertex: extrapolates F(h) − c·ln(1/h).
pub fn integrate_face_b0_regularized<F>(form: F, c: Complex64, opts: &FaceOptions) -> Result<FaceIntegral>
where
    F: Fn(Point3) -> Result<[Complex64; 3]> + Sync,
{
    opts.validate()?;
    let h = opts.t_floor;
    let hs = [h, h / 2.0, h / 4.0];
    let levels: Vec<Complex64> = hs
        .par_iter()
        .map(|&hh| Ok(face_integral_truncated(&form, hh, opts)? + c * hh.ln()))
        .collect::<Result<_>>()?;
    let r1a = (4.0 * levels[1] - levels[0]) / 3.0;
    let r1b = (4.0 * levels[2] - levels[1]) / 3.0;
    let r2 = (16.0 * r1b - r1a) / 15.0;
    let spread = (r2 - r1b).norm();
    let out = FaceIntegral { value: r2, spread, levels: [levels[0], levels[1], levels[2]] };
    if !(spread <= opts.spread_tol) {
        return Err(Error::QuadratureNotConverged { spread, tol: opts.spread_tol });
    }
    Ok(out)
}

/// Growth rate c of ∫_{B₀ ∩ t≥h} *ω ~ c·ln(1/h). S carries the corner of B₀
/// at the cusp 0 to the strip −½ ≤ x ≤ 0 of the plane y = ½, where ω tends to
/// its constant term 2iG₂(0)·dy; so c = i·G₂(0), which vanishes for Z[i].
pub fn cusp_log_coefficient(l: &Lattice) -> Complex64 {
    I * l.g2_0().conj()
}

/// The starred, pulled-back differential g*(*ω) = *(g*ω) in Euclidean
/// coefficients at p.
pub fn pulled_back_star_omega(
    field: &Field,
    l: &Lattice,
    g: &Mat2O,
    p: Point3,
    opts: &SeriesOptions,
) -> Result<[Complex64; 3]> {
    let m = g.embed(field);
    let gp = mobius(&m, p);
    let grad = pull_back(&mobius_jacobian(&m, p), &grad_h(field, l, gp, opts)?)?;
    let f = form_from_gradient(&grad, p.t);
    Ok(form2_euclidean(&hodge_star(&f), p.t))
}

/// ∫_{B₀} g*(*ω) for a single matrix g ∈ SL₂(O). When G₂(0) ≠ 0 the
/// integral diverges logarithmically and the regularized value is returned.
pub fn face_coefficient(
    field: &Field,
    l: &Lattice,
    g: &Mat2O,
    series: &SeriesOptions,
    face: &FaceOptions,
) -> Result<FaceIntegral> {
    let c = cusp_log_coefficient(l);
    integrate_face_b0_regularized(|p| pulled_back_star_omega(field, l, g, p, series), c, face)
}

/// A representative of Γ₁(N)\SL₂(Z[i]) with its bottom row mod N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetRep {
    pub row: (ResElt, ResElt),
    pub g: Mat2O,
}

/// Lifts a unimodular pair mod N to a coprime pair in O and completes it
/// to a matrix of SL₂(O), as the bottom row (`bottom`) or first column.
fn lift_pair(field: &Field, n: i64, x: OElt, y: OElt, bottom: bool) -> Result<Mat2O> {
    let mut shifts: Vec<OElt> = (-2..=2)
        .flat_map(|a| (-2..=2).map(move |b| OElt::new(a, b)))
        .collect();
    shifts.sort_by_key(|s| (field.norm(*s), *s));
    for &sx in &shifts {
        for &sy in &shifts {
            let (c, d) = (x + OElt::new(n * sx.a, n * sx.b), y + OElt::new(n * sy.a, n * sy.b));
            if c.is_zero() && d.is_zero() {
                continue;
            }
            let (g, s, t) = field.ext_gcd(c, d)?;
            let Some(gi) = field.unit_inverse(g) else { continue };
            // s·c + t·d = g, so (t/g)·d − (−s/g)·c = 1
            let (a, b) = (field.mul(t, gi), -field.mul(s, gi));
            let m = if bottom { Mat2O::new(a, b, c, d) } else { complete_column(field, c, d, s, t, gi) };
            debug_assert_eq!(m.det(field), OElt::ONE);
            return Ok(m);
        }
    }
    Err(Error::InvalidInput(format!("no coprime lift of ({x}, {y}) mod {n}")))
}

fn complete_column(field: &Field, a: OElt, c: OElt, s: OElt, t: OElt, gi: OElt) -> Mat2O {
    // s·a + t·c = g: (a −t/g; c s/g) has determinant (s·a + t·c)/g = 1
    Mat2O::new(a, -field.mul(t, gi), c, field.mul(s, gi))
}

/// Γ₁(N)\SL₂(Z[i]) ↔ unimodular bottom rows (c, d) mod N.
pub fn coset_reps(n: i64) -> Result<Vec<CosetRep>> {
    let field = make_field(1)?;
    let ring = residue_ring(field, n)?;
    let mut out = Vec::new();
    for c in ring.elements() {
        for d in ring.elements() {
            if !ring.is_unimodular(c, d) {
                continue;
            }
            let g = lift_pair(&field, n, ring.to_o(c), ring.to_o(d), true)?;
            out.push(CosetRep { row: (c, d), g });
        }
    }
    Ok(out)
}

/// Lift to SL₂(Z[i]) of a matrix whose first column is (a, c) mod N; it
/// carries ∞ to the cusp a/c.
pub fn scaling_matrix(n: i64, a: OElt, c: OElt) -> Result<Mat2O> {
    let field = make_field(1)?;
    lift_pair(&field, n, a, c, false)
}

/// x/y in Q(i) as a reduced string, "infinity" when y = 0.
pub fn gaussian_fraction(x: OElt, y: OElt) -> String {
    if y.is_zero() {
        return "infinity".into();
    }
    let f = make_field(1).expect("Q(i)");
    let num = f.mul(x, f.conj(y));
    let den = f.norm(y);
    let g = gcd(gcd(num.a, num.b), den);
    let (a, b, den) = (num.a / g, num.b / g, den / g);
    let n = match (a, b) {
        (a, 0) => format!("{a}"),
        (0, 1) => "i".into(),
        (0, -1) => "-i".into(),
        (0, b) => format!("{b}i"),
        (a, 1) => format!("{a}+i"),
        (a, -1) => format!("{a}-i"),
        (a, b) if b < 0 => format!("{a}{b}i"),
        (a, b) => format!("{a}+{b}i"),
    };
    if den == 1 {
        n
    } else if b != 0 && a != 0 {
        format!("({n})/{den}")
    } else {
        format!("{n}/{den}")
    }
}

/// One coefficient F(g) of the Eisenstein cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleEntry {
    pub rep: CosetRep,
    /// The Manin symbol {g0, g∞} = {b/d, a/c}.
    pub eta: (String, String),
    pub value: Complex64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleCoeffs {
    pub n: i64,
    /// Cusp label: index of the cusp class and its scaling matrix.
    pub cusp: usize,
    pub scaling: Mat2O,
    pub entries: Vec<CycleEntry>,
}

/// F_ξ(g) = ∫_{B₀} *ω_ξ[g] for every coset g, where ω_ξ[g] is the pullback
/// of Ito's differential for Z[i] by g composed with the scaling matrix of
/// the cusp class ξ of Γ₁(N).
pub fn eisenstein_cycle(n: i64, cusp: usize, series: &SeriesOptions, face: &FaceOptions) -> Result<CycleCoeffs> {
    let field = make_field(1)?;
    let l = Lattice::from_field(&field);
    let table = crate::cusps::cusp_classes(&field, n)?;
    let class = table
        .classes
        .get(cusp)
        .ok_or_else(|| Error::InvalidInput(format!("cusp index {cusp} out of range (0..{})", table.count())))?;
    let r = table.ring();
    let scaling = scaling_matrix(n, r.to_o(class.rep.a), r.to_o(class.rep.c))?;
    let reps = coset_reps(n)?;
    let entries = reps
        .par_iter()
        .map(|rep| {
            let fi = face_coefficient(&field, &l, &rep.g.mul(&field, &scaling), series, face)?;
            let g = rep.g;
            Ok(CycleEntry {
                rep: *rep,
                eta: (gaussian_fraction(g.b, g.d), gaussian_fraction(g.a, g.c)),
                value: fi.value,
                spread: fi.spread,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycleCoeffs { n, cusp, scaling, entries })
}
