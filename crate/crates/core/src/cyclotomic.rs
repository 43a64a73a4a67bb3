//! Integer polynomials modulo x^M − 1, i.e. Z-combinations of M-th roots of
//! unity, with reduction modulo the cyclotomic polynomial Φ_M when exact
//! equality in Z[ζ_M] is needed.

/// The cyclotomic polynomial Φ_n, coefficients in increasing degree.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let (mut r, dl) = (num.to_vec(), den.len());
    let lead = *den.last().unwrap();
    debug_assert_eq!(lead, 1);
    let mut q = vec![0i64; r.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = r[i + dl - 1];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Remainder of `p` modulo the monic polynomial `m`.
pub fn reduce_mod(p: &[i64], m: &[i64]) -> Vec<i64> {
    let dl = m.len();
    let mut r = p.to_vec();
    if r.len() < dl {
        r.resize(dl - 1, 0);
        return r;
    }
    for i in (dl - 1..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                r[i + 1 - dl + j] -= c * mj;
            }
        }
    }
    r.truncate(dl - 1);
    r
}

/// Product in Z[x]/(x^M − 1), accumulated into `out`.
pub fn mul_acc(out: &mut [i64], a: &[i64], b: &[i64]) {
    let m = out.len();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                out[(i + j) % m] += ai * bj;
            }
        }
    }
}

/// Value at ζ_M = e^{2πi/M}.
pub fn evaluate(p: &[i64], m: usize) -> num_complex::Complex64 {
    p.iter()
        .enumerate()
        .map(|(k, &c)| {
            num_complex::Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / m as f64)
        })
        .sum()
}
