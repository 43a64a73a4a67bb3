//! Lefschetz numbers of σ on Γ₁(N), Euler characteristics, the index
//! [Γ₁ᵉ(N) : Γ₁ᵉ(N) ∩ Γ′], the trace of σ on H²_Eis and lower bounds for
//! cuspidal dimensions. Everything here is exact rational arithmetic.

use num_rational::Ratio;
use num_traits::Signed;

use crate::cocycles::{prime_power, trace_sigma_h1};
use crate::cusps::{cusp_classes, fixed_cusps, Involution};
use crate::error::{Error, Result};
use crate::field::{factorize, make_field, Field, SplittingType};
use crate::residue::{fixed_units, residue_ring};

pub type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn pow2(e: i64) -> Q {
    if e >= 0 {
        q(1 << e)
    } else {
        Q::new(1, 1 << -e)
    }
}

/// Input data for the Lefschetz number of σ on Γ₁(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzInput {
    pub d: i64,
    pub n: i64,
    pub factors: Vec<(i64, u32)>,
    pub k: u32,
    /// Number of distinct prime divisors of the discriminant.
    pub t: u32,
    /// Number of odd primes dividing both the discriminant and N.
    pub s: u32,
    /// 2-adic valuation of N.
    pub j2: u32,
}

impl LefschetzInput {
    pub fn new(field: &Field, n: i64, k: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::DegenerateLevel(n));
        }
        let factors = factorize(n);
        let s = factorize(field.disc)
            .iter()
            .filter(|(p, _)| *p != 2 && n % p == 0)
            .count() as u32;
        let j2 = factors.iter().find(|(p, _)| *p == 2).map_or(0, |f| f.1);
        Ok(LefschetzInput { d: field.d, n, factors, k, t: field.t_ram, s, j2 })
    }
}

/// Numbers of translates A, B of the two kinds of fixed surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RohlfsCounts {
    pub a: Q,
    pub b: Q,
}

/// Rohlfs' table, indexed by d mod 4 and j₂.
pub fn rohlfs_ab(input: &LefschetzInput) -> Result<RohlfsCounts> {
    let e = input.t as i64 - input.s as i64;
    let (a, b) = match (input.d.rem_euclid(4), input.j2) {
        (1, _) => (pow2(e), q(0)),
        (2, 0 | 1) => (pow2(e), pow2(e - 1)),
        (2, 2) => (q(8) * pow2(e), q(0)),
        (2, _) => (q(8) * pow2(e - 1), q(0)),
        (3, 0) => (pow2(e), pow2(e - 1)),
        (3, 1) => (pow2(e), q(0)),
        (3, 2) => (q(8) * pow2(e), q(0)),
        (3, j) if j % 2 == 1 => (pow2(e - 1), q(0)),
        (3, _) => (q(8) * pow2(e - 1), q(0)),
        (m, j2) => return Err(Error::UnsupportedRow { d_mod4: m, j2 }),
    };
    Ok(RohlfsCounts { a, b })
}

fn euler_phi(n: i64) -> i64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// −N²/12·∏_{p|N}(1 − p⁻²).
fn volume_term(n: i64) -> Q {
    factorize(n)
        .iter()
        .fold(Q::new(-n * n, 12), |acc, &(p, _)| acc * (q(1) - Q::new(1, p * p)))
}

/// χ(Y₁(N)) = −N²/12·∏(1 − p⁻²).
pub fn euler_char_y1(n: i64) -> Result<Q> {
    if n < 1 {
        return Err(Error::DegenerateLevel(n));
    }
    Ok(volume_term(n))
}

/// Number of cusps of X₁(N): ½·Σ_{d|N} φ(d)φ(N/d).
pub fn cusp_count_y1(n: i64) -> Result<Q> {
    if n < 1 {
        return Err(Error::DegenerateLevel(n));
    }
    let s: i64 = divisors(n).iter().map(|&d| euler_phi(d) * euler_phi(n / d)).sum();
    Ok(Q::new(s, 2))
}

pub fn euler_char_x1(n: i64) -> Result<Q> {
    Ok(euler_char_y1(n)? + cusp_count_y1(n)?)
}

/// The closed form (N+1)/2 for odd N and (N+2)/2 for even N.
pub fn index_gamma_prime(n: i64) -> Result<i64> {
    if n < 2 {
        return Err(Error::DegenerateLevel(n));
    }
    Ok(if n % 2 == 1 { (n + 1) / 2 } else { (n + 2) / 2 })
}

/// The index from the images of Γ₁ᵉ(N) and Γ₁ᵉ(N) ∩ Γ′ (b even) in
/// SL₂(Z/2N); both groups contain Γ(2N).
pub fn index_oracle(n: i64) -> Result<Q> {
    if n < 2 {
        return Err(Error::DegenerateLevel(n));
    }
    if n > 60 {
        return Err(Error::LevelTooLarge { level: n, reason: "index oracle enumerates (Z/2N)^4".into() });
    }
    let m = 2 * n;
    let (mut all, mut even) = (0i64, 0i64);
    for a in (1..m).step_by(n as usize) {
        for d in (1..m).step_by(n as usize) {
            for c in (0..m).step_by(n as usize) {
                for b in 0..m {
                    if (a * d - b * c - 1).rem_euclid(m) == 0 {
                        all += 1;
                        if b % 2 == 0 {
                            even += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(Q::new(all, even))
}

/// L(σ, Γ₁(N), E_{k,k}) = (A + i·B)·(−N²/12)∏(1 − p⁻²)·(k+1), with i the
/// closed form of [`index_gamma_prime`].
pub fn lefschetz_gamma1(input: &LefschetzInput) -> Result<Q> {
    if input.n <= 2 {
        return Err(Error::DegenerateLevel(input.n));
    }
    let ab = rohlfs_ab(input)?;
    let idx = q(index_gamma_prime(input.n)?);
    Ok((ab.a + idx * ab.b) * volume_term(input.n) * q(input.k as i64 + 1))
}

/// Closed form for N = pⁿ, p odd and unramified.
pub fn lefschetz_pn(d: i64, p: i64, n: u32, k: u32, t: u32) -> Result<Q> {
    if p == 2 || n == 0 {
        return Err(Error::InvalidInput(format!("need an odd prime power, got {p}^{n}")));
    }
    if make_field(d)?.disc % p == 0 {
        return Err(Error::InvalidInput(format!("{p} ramifies in Q(sqrt(-{d}))")));
    }
    let pn = p.checked_pow(n).ok_or(Error::Overflow)?;
    let core = Q::new(pn * pn - pn * pn / (p * p), 12) * q(k as i64 + 1);
    Ok(match d.rem_euclid(4) {
        1 => -pow2(t as i64) * core,
        2 | 3 => -pow2(t as i64 - 2) * q(pn + 5) * core,
        m => return Err(Error::UnsupportedRow { d_mod4: m, j2: 0 }),
    })
}

/// Levels N ≤ 3 may have torsion; the numbers are then orbifold values.
pub fn is_orbifold(n: i64) -> bool {
    n <= 3
}

/// Trace of ρ on H²_Eis(Γ₁(N), E_{k,k}), with the closed form alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceH2 {
    /// #(C_Γ)^ρ + δ(0,k), by enumeration.
    pub value: i64,
    pub fixed_cusps: usize,
    pub delta: i64,
    /// α^ρ = #(Γ₁(N)/Γ(N))^ρ, counted over upper unipotents (1 b; 0 1).
    pub alpha: usize,
    /// α^ρ·2^{t−r−1}·∏(p^{2n} − p^{2n−2}) + δ(0,k), r the number of primes of N.
    pub formula_value: Q,
    pub agrees: bool,
    pub orbifold: bool,
}

pub fn trace_sigma_h2(field: &Field, n: i64, k: u32, rho: Involution) -> Result<TraceH2> {
    if n % 2 == 0 {
        return Err(Error::UnsupportedLevel(format!("N = {n} must be odd")));
    }
    let factors = factorize(n);
    for &(p, _) in &factors {
        if field.splitting_type(p)? == SplittingType::Ramified {
            return Err(Error::UnsupportedLevel(format!("{p} ramifies in Q(sqrt(-{}))", field.d)));
        }
    }
    let table = cusp_classes(field, n)?;
    let fixed = fixed_cusps(&table.classes, rho);
    let delta = i64::from(k == 0);
    let ring = residue_ring(*field, n)?;
    let alpha = match rho {
        Involution::Identity => ring.size(),
        Involution::Sigma => ring.elements().filter(|&b| ring.conj(b) == b).count(),
        Involution::Tau => ring.elements().filter(|&b| ring.tau(b) == b).count(),
    };
    let prod = factors.iter().fold(q(1), |acc, &(p, e)| {
        let pe = p.pow(e);
        acc * q(pe * pe - pe * pe / (p * p))
    });
    let formula_value =
        q(alpha as i64) * pow2(field.t_ram as i64 - factors.len() as i64 - 1) * prod + q(delta);
    let value = fixed as i64 + delta;
    Ok(TraceH2 {
        value,
        fixed_cusps: fixed,
        delta,
        alpha,
        formula_value,
        agrees: formula_value == q(value),
        orbifold: is_orbifold(n),
    })
}

/// #(C_G)^ρ = 2^{t−1} for the full group G = SL₂(O).
pub fn full_group_fixed_cusps(field: &Field) -> Q {
    pow2(field.t_ram as i64 - 1)
}

/// σ-fixed units of O/NO; equals pⁿ − pⁿ⁻¹ for p inert.
pub fn sigma_fixed_units(field: &Field, n: i64) -> Result<usize> {
    let ring = residue_ring(*field, n)?;
    fixed_units(&ring, |x| ring.conj(x))
}

/// Lower bound for dim H¹_cusp(Γ₁(pⁿ), E_{k,k}) with its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspdimBound {
    pub lefschetz: Q,
    /// Exact trace on H¹_Eis at k = 0; at k > 0 only |tr| ≤ #C is used.
    pub trace_h1: Option<Q>,
    pub trace_h2: i64,
    pub cusps: usize,
    pub bound: Q,
}

/// The trace of σ on H¹_cusp is ±½(L + tr¹_Eis − tr²_Eis), so its absolute
/// value bounds the dimension. For k > 0 the trace on H¹_Eis is only bounded,
/// by dim H¹_Eis = #C.
pub fn cuspdim_lower_bound(field: &Field, n: i64, k: u32) -> Result<CuspdimBound> {
    prime_power(n)?;
    let lefschetz = lefschetz_gamma1(&LefschetzInput::new(field, n, k)?)?;
    let h2 = trace_sigma_h2(field, n, k, Involution::Sigma)?;
    let cusps = cusp_classes(field, n)?.count();
    let tr2 = q(h2.value);
    let (trace_h1, bound) = if k == 0 {
        let tr1 = trace_sigma_h1(field, n)?.value;
        (Some(tr1), ((lefschetz + tr1 - tr2) / q(2)).abs())
    } else {
        let slack = (lefschetz - tr2).abs() - q(cusps as i64);
        (None, slack.max(q(0)) / q(2))
    };
    Ok(CuspdimBound { lefschetz, trace_h1, trace_h2: h2.value, cusps, bound })
}
