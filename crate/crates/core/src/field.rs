//! Exact arithmetic in the ring of integers O = Z[ω] of K = Q(√−d).
//!
//! Elements are stored as coefficient pairs in the basis {1, ω}. The only
//! structure the ring needs is the minimal polynomial of ω, written here as
//! ω² = p + q·ω: (p, q) = (−d, 0) when ω = √−d and (−(1+d)/4, 1) when
//! ω = (1+√−d)/2.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Discriminants of the imaginary quadratic fields with class number one.
pub const CLASS_NUMBER_ONE: [i64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// Which generator ω is used for O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaCase {
    /// ω = √−d (d ≡ 1, 2 mod 4).
    Sqrt,
    /// ω = (1+√−d)/2 (d ≡ 3 mod 4).
    Half,
}

/// How a rational prime decomposes in O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// An imaginary quadratic field Q(√−d) together with its ring of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    pub d: i64,
    pub disc: i64,
    pub omega_case: OmegaCase,
    pub t_ram: u32,
    pub class_number_assumed_one: bool,
    /// ω² = omega_sq.0 + omega_sq.1·ω
    omega_sq: (i64, i64),
}

/// The element a + b·ω of O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OElt {
    pub a: i64,
    pub b: i64,
}

impl OElt {
    pub const ZERO: OElt = OElt { a: 0, b: 0 };
    pub const ONE: OElt = OElt { a: 1, b: 0 };
    pub const OMEGA: OElt = OElt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        OElt { a, b }
    }

    pub const fn int(a: i64) -> Self {
        OElt { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for OElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "w"),
            (0, -1) => write!(f, "-w"),
            (0, b) => write!(f, "{b}w"),
            (a, 1) => write!(f, "{a}+w"),
            (a, -1) => write!(f, "{a}-w"),
            (a, b) if b < 0 => write!(f, "{a}{b}w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

impl std::ops::Add for OElt {
    type Output = OElt;
    fn add(self, o: OElt) -> OElt {
        OElt::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for OElt {
    type Output = OElt;
    fn sub(self, o: OElt) -> OElt {
        OElt::new(self.a - o.a, self.b - o.b)
    }
}

impl std::ops::Neg for OElt {
    type Output = OElt;
    fn neg(self) -> OElt {
        OElt::new(-self.a, -self.b)
    }
}

/// Checks squarefreeness by trial division.
pub fn is_squarefree(n: i64) -> bool {
    if n < 1 {
        return false;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Prime factorisation as (prime, exponent) pairs in increasing order.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut m = n.abs();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// Kronecker-style residue test for odd p: returns 1, −1 or 0.
fn legendre_rational(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut r = 1i64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Builds the field Q(√−d) for positive squarefree `d`.
pub fn make_field(d: i64) -> Result<Field> {
    if !is_squarefree(d) {
        return Err(Error::NonSquarefree(d));
    }
    let (disc, omega_case, omega_sq) = if d % 4 == 3 {
        (-d, OmegaCase::Half, (-(1 + d) / 4, 1))
    } else {
        (-4 * d, OmegaCase::Sqrt, (-d, 0))
    };
    Ok(Field {
        d,
        disc,
        omega_case,
        t_ram: factorize(disc).len() as u32,
        class_number_assumed_one: CLASS_NUMBER_ONE.contains(&d),
        omega_sq,
    })
}

impl Field {
    /// ω² = p + q·ω, returned as (p, q).
    pub fn omega_sq(&self) -> (i64, i64) {
        self.omega_sq
    }

    /// Trace of ω (0 or 1).
    pub fn omega_trace(&self) -> i64 {
        self.omega_sq.1
    }

    pub fn require_class_number_one(&self) -> Result<()> {
        if self.class_number_assumed_one {
            Ok(())
        } else {
            Err(Error::ClassNumberNotOne(self.d))
        }
    }

    pub fn try_mul(&self, x: OElt, y: OElt) -> Result<OElt> {
        let (p, q) = self.omega_sq;
        let m = |u: i64, v: i64| u.checked_mul(v).ok_or(Error::Overflow);
        let ac = m(x.a, y.a)?;
        let bd = m(x.b, y.b)?;
        let a = ac.checked_add(m(p, bd)?).ok_or(Error::Overflow)?;
        let b = m(x.a, y.b)?
            .checked_add(m(x.b, y.a)?)
            .and_then(|s| s.checked_add(q * bd))
            .ok_or(Error::Overflow)?;
        Ok(OElt::new(a, b))
    }

    /// Product in O. Panics on i64 overflow; use [`Field::try_mul`] where
    /// magnitudes are not bounded by construction.
    pub fn mul(&self, x: OElt, y: OElt) -> OElt {
        self.try_mul(x, y).expect("overflow in O multiplication")
    }

    /// Complex conjugation σ.
    pub fn conj(&self, x: OElt) -> OElt {
        OElt::new(x.a + x.b * self.omega_sq.1, -x.b)
    }

    /// x·σ(x), a non-negative rational integer.
    pub fn norm(&self, x: OElt) -> i64 {
        let (p, q) = self.omega_sq;
        x.a * x.a + q * x.a * x.b - p * x.b * x.b
    }

    pub fn trace(&self, x: OElt) -> i64 {
        2 * x.a + self.omega_sq.1 * x.b
    }

    pub fn omega_complex(&self) -> Complex64 {
        let s = (self.d as f64).sqrt();
        match self.omega_case {
            OmegaCase::Sqrt => Complex64::new(0.0, s),
            OmegaCase::Half => Complex64::new(0.5, s / 2.0),
        }
    }

    /// The embedding O → C sending ω to the root in the upper half plane.
    pub fn embed(&self, x: OElt) -> Complex64 {
        Complex64::new(x.a as f64, 0.0) + self.omega_complex() * x.b as f64
    }

    /// Decomposition type of the rational prime p.
    pub fn splitting_type(&self, p: i64) -> Result<SplittingType> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.disc % p == 0 {
            return Ok(SplittingType::Ramified);
        }
        let split = if p == 2 {
            self.disc.rem_euclid(8) == 1
        } else {
            legendre_rational(self.disc, p) == 1
        };
        Ok(if split {
            SplittingType::Split
        } else {
            SplittingType::Inert
        })
    }

    /// Units of O (roots of unity).
    pub fn units(&self) -> Vec<OElt> {
        match self.d {
            1 => vec![OElt::int(1), OElt::new(0, 1), OElt::int(-1), OElt::new(0, -1)],
            3 => vec![
                OElt::int(1),
                OElt::new(0, 1),
                OElt::new(-1, 1),
                OElt::int(-1),
                OElt::new(0, -1),
                OElt::new(1, -1),
            ],
            _ => vec![OElt::int(1), OElt::int(-1)],
        }
    }

    /// Whether `y` divides `x` in O.
    pub fn divides(&self, y: OElt, x: OElt) -> bool {
        if y.is_zero() {
            return x.is_zero();
        }
        let n = self.norm(y);
        let num = self.mul(x, self.conj(y));
        num.a % n == 0 && num.b % n == 0
    }

    /// Exact quotient x / y, if y | x.
    pub fn div_exact(&self, x: OElt, y: OElt) -> Option<OElt> {
        if y.is_zero() {
            return None;
        }
        let n = self.norm(y);
        let num = self.mul(x, self.conj(y));
        (num.a % n == 0 && num.b % n == 0).then(|| OElt::new(num.a / n, num.b / n))
    }

    fn is_euclidean(&self) -> bool {
        matches!(self.d, 1 | 2 | 3 | 7 | 11)
    }

    /// Division with remainder x = q·y + r, N(r) < N(y) (Euclidean fields only).
    pub fn div_rem(&self, x: OElt, y: OElt) -> Result<(OElt, OElt)> {
        if !self.is_euclidean() {
            return Err(Error::NotEuclidean(self.d));
        }
        if y.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let n = self.norm(y) as f64;
        let num = self.mul(x, self.conj(y));
        let (qa, qb) = ((num.a as f64 / n).round() as i64, (num.b as f64 / n).round() as i64);
        let mut best: Option<(OElt, OElt)> = None;
        for da in -1..=1 {
            for db in -1..=1 {
                let q = OElt::new(qa + da, qb + db);
                let r = x - self.mul(q, y);
                if best.is_none_or(|(_, br)| self.norm(r) < self.norm(br)) {
                    best = Some((q, r));
                }
            }
        }
        let (q, r) = best.expect("non-empty search");
        debug_assert!(self.norm(r) < self.norm(y));
        Ok((q, r))
    }

    /// Extended Euclid: returns (g, s, t) with s·x + t·y = g.
    pub fn ext_gcd(&self, x: OElt, y: OElt) -> Result<(OElt, OElt, OElt)> {
        let (mut r0, mut r1) = (x, y);
        let (mut s0, mut s1) = (OElt::ONE, OElt::ZERO);
        let (mut t0, mut t1) = (OElt::ZERO, OElt::ONE);
        while !r1.is_zero() {
            let (q, r) = self.div_rem(r0, r1)?;
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s0 - self.mul(q, s1));
            (t0, t1) = (t1, t0 - self.mul(q, t1));
        }
        Ok((r0, s0, t0))
    }

    pub fn is_unit(&self, x: OElt) -> bool {
        self.norm(x) == 1
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self, x: OElt) -> Option<OElt> {
        self.is_unit(x).then(|| self.conj(x))
    }
}

/// A 2×2 matrix over O, entries (a b; c d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2O {
    pub a: OElt,
    pub b: OElt,
    pub c: OElt,
    pub d: OElt,
}

impl Mat2O {
    pub const fn new(a: OElt, b: OElt, c: OElt, d: OElt) -> Self {
        Mat2O { a, b, c, d }
    }

    pub const fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2O::new(OElt::int(a), OElt::int(b), OElt::int(c), OElt::int(d))
    }

    pub const fn identity() -> Self {
        Mat2O::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self, f: &Field) -> OElt {
        f.mul(self.a, self.d) - f.mul(self.b, self.c)
    }

    pub fn mul(&self, f: &Field, o: &Mat2O) -> Mat2O {
        Mat2O::new(
            f.mul(self.a, o.a) + f.mul(self.b, o.c),
            f.mul(self.a, o.b) + f.mul(self.b, o.d),
            f.mul(self.c, o.a) + f.mul(self.d, o.c),
            f.mul(self.c, o.b) + f.mul(self.d, o.d),
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> Mat2O {
        Mat2O::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn embed(&self, f: &Field) -> [Complex64; 4] {
        [f.embed(self.a), f.embed(self.b), f.embed(self.c), f.embed(self.d)]
    }
}

impl fmt::Display for Mat2O {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f = make_field(1).unwrap();
        assert_eq!((f.disc, f.omega_case, f.t_ram), (-4, OmegaCase::Sqrt, 1));
        let f = make_field(3).unwrap();
        assert_eq!((f.disc, f.omega_case, f.t_ram), (-3, OmegaCase::Half, 1));
        assert_eq!(make_field(12), Err(Error::NonSquarefree(12)));
        assert_eq!(make_field(0), Err(Error::NonSquarefree(0)));
        assert_eq!(make_field(2).unwrap().t_ram, 1);
        assert_eq!(make_field(5).unwrap().t_ram, 2);
        assert!(!make_field(5).unwrap().class_number_assumed_one);
    }

    #[test]
    fn conj_examples() {
        let gi = make_field(1).unwrap();
        assert_eq!(gi.conj(OElt::new(2, 0)), OElt::new(2, 0));
        assert_eq!(gi.conj(OElt::new(0, 1)), OElt::new(0, -1));
        let f3 = make_field(3).unwrap();
        assert_eq!(f3.conj(OElt::new(0, 1)), OElt::new(1, -1));
        let z = f3.embed(f3.conj(OElt::OMEGA));
        assert!((z - f3.embed(OElt::OMEGA).conj()).norm() < 1e-15);
    }

    #[test]
    fn embed_examples() {
        let gi = make_field(1).unwrap();
        assert_eq!(gi.embed(OElt::ONE), Complex64::new(1.0, 0.0));
        assert_eq!(gi.embed(OElt::OMEGA), Complex64::new(0.0, 1.0));
        let f3 = make_field(3).unwrap();
        let w = f3.embed(OElt::OMEGA);
        assert!((w - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn omega_relation_holds_in_embedding() {
        for d in [1, 2, 3, 7, 11, 19] {
            let f = make_field(d).unwrap();
            let w = f.embed(OElt::OMEGA);
            let sq = f.embed(f.mul(OElt::OMEGA, OElt::OMEGA));
            assert!((w * w - sq).norm() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn splitting_examples() {
        let gi = make_field(1).unwrap();
        assert_eq!(gi.splitting_type(3), Ok(SplittingType::Inert));
        assert_eq!(gi.splitting_type(5), Ok(SplittingType::Split));
        assert_eq!(gi.splitting_type(2), Ok(SplittingType::Ramified));
        assert_eq!(gi.splitting_type(9), Err(Error::NotPrime(9)));
        let f7 = make_field(7).unwrap();
        assert_eq!(f7.splitting_type(2), Ok(SplittingType::Split));
        let f3 = make_field(3).unwrap();
        assert_eq!(f3.splitting_type(2), Ok(SplittingType::Inert));
        assert_eq!(f3.splitting_type(5), Ok(SplittingType::Inert));
        assert_eq!(f3.splitting_type(7), Ok(SplittingType::Split));
    }

    #[test]
    fn splitting_matches_factor_count() {
        // p splits iff x² − tr(ω)x + N(ω) has a root mod p (for p ∤ disc).
        for d in [1, 2, 3, 7, 11] {
            let f = make_field(d).unwrap();
            let (p0, q0) = f.omega_sq();
            for p in (2..=100).filter(|&p| is_prime(p)) {
                let st = f.splitting_type(p).unwrap();
                assert_eq!(st == SplittingType::Ramified, f.disc % p == 0);
                if st != SplittingType::Ramified {
                    let roots = (0..p).filter(|x| (x * x - q0 * x - p0).rem_euclid(p) == 0).count();
                    assert_eq!(st == SplittingType::Split, roots == 2, "d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn euclid_in_gaussian_integers() {
        let gi = make_field(1).unwrap();
        let x = OElt::new(7, 3);
        let y = OElt::new(2, -5);
        let (g, s, t) = gi.ext_gcd(x, y).unwrap();
        assert_eq!(gi.mul(s, x) + gi.mul(t, y), g);
        assert!(gi.divides(g, x) && gi.divides(g, y));
        for d in [2, 3, 7, 11] {
            let f = make_field(d).unwrap();
            let (_, r) = f.div_rem(OElt::new(17, 9), OElt::new(3, 2)).unwrap();
            assert!(f.norm(r) < f.norm(OElt::new(3, 2)));
        }
        assert!(make_field(19).unwrap().div_rem(OElt::ONE, OElt::ONE).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(OElt::new(1, 2).to_string(), "1+2w");
        assert_eq!(OElt::new(0, -1).to_string(), "-w");
        assert_eq!(OElt::new(3, -2).to_string(), "3-2w");
        assert_eq!(OElt::new(-4, 0).to_string(), "-4");
    }
}
