//! Modified Bessel functions K₀ and K₁ of real positive argument.
//!
//! Power series for y ≤ 2; above that, Steed's evaluation of the Temme
//! continued fraction (CF2), which converges quickly once y is moderate.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// (K₀(y), K₁(y)) for y > 0.
pub fn bessel_k01(y: f64) -> Result<(f64, f64)> {
    if !(y > 0.0) {
        return Err(Error::NonPositiveArgument(y));
    }
    Ok(if y <= 2.0 { series(y) } else { steed(y) })
}

/// K_order(y) for order 0 or 1.
pub fn bessel_k(order: u32, y: f64) -> Result<f64> {
    let (k0, k1) = bessel_k01(y)?;
    match order {
        0 => Ok(k0),
        1 => Ok(k1),
        _ => Err(Error::InvalidInput(format!("order {order} not supported"))),
    }
}

fn series(y: f64) -> (f64, f64) {
    let q = y * y / 4.0;
    let l = (y / 2.0).ln();
    // term_k = q^k / (k!)^2, term1_k = q^k / (k!(k+1)!)
    let (mut term, mut term1) = (1.0, 1.0);
    let (mut i0, mut i1s) = (0.0, 0.0);
    let (mut harm, mut s0) = (0.0, 0.0);
    let mut psi_k1 = -EULER_GAMMA; // ψ(k+1)
    let mut s1 = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            term *= q / (kf * kf);
            term1 *= q / (kf * (kf + 1.0));
            harm += 1.0 / kf;
            psi_k1 += 1.0 / kf;
        }
        let psi_k2 = psi_k1 + 1.0 / (kf + 1.0);
        i0 += term;
        i1s += term1;
        s0 += harm * term;
        s1 += (psi_k1 + psi_k2) * term1;
        if term < 1e-18 * i0 && k > 2 {
            break;
        }
    }
    let i1 = y / 2.0 * i1s;
    let k0 = -(l + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / y + i1 * l - y / 4.0 * s1;
    (k0, k1)
}

fn steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
