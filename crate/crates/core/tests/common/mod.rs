//! Independent reference computations shared by the integration tests.
//! Nothing here calls the library's numerical routines.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// K_ν(y) = ∫₀^∞ e^{−y cosh s} cosh(νs) ds by the trapezoid rule, which
/// converges geometrically for this analytic, doubly decaying integrand.
pub fn bessel_k_trapezoid(nu: f64, y: f64) -> f64 {
    let h: f64 = 0.02;
    let mut sum = 0.5 * (-y).exp();
    let mut s: f64 = h;
    loop {
        let term = (-y * s.cosh()).exp() * (nu * s).cosh();
        sum += term;
        if term < 1e-300 || (y * s.cosh() > 750.0) {
            break;
        }
        s += h;
    }
    sum * h
}

/// Σ′_{w ∈ L} (w+u)^{−k} e^{−δ|w+u|²}, with the π/(Aδ) integral term
/// subtracted for k = 0. L = w1·Z + w2·Z.
pub fn regulated_sum(w1: Complex64, w2: Complex64, u: Complex64, k: i32, delta: f64) -> Complex64 {
    let area = (w1.conj() * w2).im.abs();
    let r = (40.0 / delta).sqrt();
    let nb = (r * w2.norm() / area).ceil() as i64 + 2;
    let na = (r * w1.norm() / area).ceil() as i64 + 2;
    let mut s = Complex64::new(0.0, 0.0);
    for b in -nb..=nb {
        for a in -na..=na {
            let x = w1 * b as f64 + w2 * a as f64 + u;
            let r2 = x.norm_sqr();
            if r2 < 1e-20 || r2 > r * r {
                continue;
            }
            s += x.powi(-k) * (-delta * r2).exp();
        }
    }
    if k == 0 {
        s -= PI / (area * delta);
    }
    s
}

/// The δ → 0 limit of [`regulated_sum`], by Richardson extrapolation over
/// δ, δ/2, δ/4 assuming an expansion in integer powers of δ.
pub fn regulated_limit(w1: Complex64, w2: Complex64, u: Complex64, k: i32) -> Complex64 {
    let d = 0.02;
    let s: Vec<Complex64> = [d, d / 2.0, d / 4.0]
        .iter()
        .map(|&x| regulated_sum(w1, w2, u, k, x))
        .collect();
    let r1a = 2.0 * s[1] - s[0];
    let r1b = 2.0 * s[2] - s[1];
    (4.0 * r1b - r1a) / 3.0
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton's method.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                let w = 2.0 / ((1.0 - x * x) * dp * dp);
                out.push((x, w));
                break;
            }
        }
    }
    out
}

/// ∫∫ dx dy / t² over the planar triangle {0, ½+½i, ½i} with the face
/// height t² = 2y − x² − y², by tensor Gauss–Legendre in polar
/// coordinates (r, θ) about the cusp: the Jacobian r cancels the 1/r of
/// 1/t² = 1/(r(2 sin θ − r)), leaving a smooth integrand.
pub fn face_area_oracle() -> f64 {
    let nodes = gauss_legendre(40);
    let (a, b) = (PI / 4.0, PI / 2.0);
    let mut total = 0.0;
    for &(xt, wt) in &nodes {
        let th = 0.5 * (b - a) * xt + 0.5 * (b + a);
        let s = th.sin();
        let rmax = 0.5 / s;
        let mut inner = 0.0;
        for &(xr, wr) in &nodes {
            let r = 0.5 * rmax * (xr + 1.0);
            inner += wr / (2.0 * s - r);
        }
        total += wt * inner * 0.5 * rmax;
    }
    total * 0.5 * (b - a)
}

/// ∫_{π/4}^{π/2} −ln(1 − 1/(4 sin²θ)) dθ, the same area in closed inner form.
pub const FACE_AREA: f64 = 0.305_321_864_725_739_74;
