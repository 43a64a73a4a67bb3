//! Congruence subgroups, cusp classes of Γ₁(N) as double cosets
//! P̄₊\SL₂(O/NO)/P̄, fixed cusps under σ and τ, and Eisenstein dimensions.

use crate::error::{Error, Result};
use crate::field::{Field, Mat2O, OElt, SplittingType};
use crate::residue::{
    double_coset_orbits, residue_ring_with_caps, Action, Caps, Mat2R, OrbitTable, ResRing,
    Sl2Index,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceKind {
    Full(i64),
    Gamma1(i64),
    Gamma0(i64),
}

/// An involution of the symmetric space and of the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    Identity,
    Sigma,
    Tau,
}

impl Involution {
    pub fn apply(&self, ring: &ResRing, m: &Mat2R) -> Mat2R {
        match self {
            Involution::Identity => *m,
            Involution::Sigma => ring.mat_sigma(m),
            Involution::Tau => ring.mat_tau(m),
        }
    }
}

/// Membership of a determinant-one matrix over O in a congruence subgroup.
pub fn is_member(field: &Field, kind: CongruenceKind, m: &Mat2O) -> Result<bool> {
    if m.det(field) != OElt::ONE {
        return Err(Error::DetNotOne);
    }
    let n = match kind {
        CongruenceKind::Full(n) | CongruenceKind::Gamma1(n) | CongruenceKind::Gamma0(n) => n,
    };
    if n < 1 {
        return Err(Error::DegenerateLevel(n));
    }
    let zero = |x: OElt| x.a % n == 0 && x.b % n == 0;
    let one = |x: OElt| zero(x - OElt::ONE);
    Ok(match kind {
        CongruenceKind::Full(_) => one(m.a) && zero(m.b) && zero(m.c) && one(m.d),
        CongruenceKind::Gamma1(_) => one(m.a) && zero(m.c) && one(m.d),
        CongruenceKind::Gamma0(_) => zero(m.c),
    })
}

/// One double coset P̄₊·M·P̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuspClass {
    pub orbit_id: usize,
    pub rep: Mat2R,
    pub sigma_fixed: bool,
    pub tau_fixed: bool,
}

/// The cusp classes of Γ₁(N) together with the data they were computed from.
#[derive(Debug, Clone)]
pub struct CuspTable {
    pub field: Field,
    pub n: i64,
    pub sl2: Sl2Index,
    pub orbits: OrbitTable,
    pub classes: Vec<CuspClass>,
    pub warnings: Vec<String>,
}

impl CuspTable {
    pub fn ring(&self) -> &ResRing {
        &self.sl2.ring
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// Orbit id of an arbitrary determinant-one matrix.
    pub fn class_of(&self, m: &Mat2R) -> Option<usize> {
        self.sl2.index(m).map(|i| self.orbits.orbit_of[i] as usize)
    }

    /// The permutation an involution induces on cusp classes.
    pub fn permutation(&self, rho: Involution) -> Result<Vec<usize>> {
        let ring = self.ring();
        self.orbits
            .induced(|i| self.sl2.index(&rho.apply(ring, &self.sl2.matrix(i))))
    }
}

/// Torsion warnings for small levels.
pub fn level_warnings(n: i64) -> Vec<String> {
    if (2..=3).contains(&n) {
        vec![format!(
            "N = {n}: Gamma1(N) may have torsion; values are orbifold quantities"
        )]
    } else {
        Vec::new()
    }
}

pub fn cusp_classes(field: &Field, n: i64) -> Result<CuspTable> {
    cusp_classes_with_caps(field, n, Caps::default())
}

pub fn cusp_classes_with_caps(field: &Field, n: i64, caps: Caps) -> Result<CuspTable> {
    let ring = residue_ring_with_caps(*field, n, caps)?;
    let sl2 = Sl2Index::with_caps(&ring, caps)?;
    let r = &ring;
    let orbits = {
        let js = [r.one(), r.omega()];
        let idx = |m: Mat2R| sl2.index(&m).expect("action preserves SL2");
        let left: Vec<Box<dyn Fn(usize) -> usize + '_>> = js
            .iter()
            .map(|&j| {
                let sl2 = &sl2;
                Box::new(move |i: usize| {
                    let m = sl2.matrix(i);
                    idx(r.mat(r.add(m.a, r.mul(j, m.c)), r.add(m.b, r.mul(j, m.d)), m.c, m.d))
                }) as Box<dyn Fn(usize) -> usize>
            })
            .collect();
        let mut right: Vec<Box<dyn Fn(usize) -> usize + '_>> = js
            .iter()
            .map(|&j| {
                let sl2 = &sl2;
                Box::new(move |i: usize| {
                    let m = sl2.matrix(i);
                    idx(r.mat(m.a, r.add(r.mul(m.a, j), m.b), m.c, r.add(r.mul(m.c, j), m.d)))
                }) as Box<dyn Fn(usize) -> usize>
            })
            .collect();
        right.push(Box::new(|i: usize| idx(r.mat_neg(&sl2.matrix(i)))));
        let lrefs: Vec<Action> = left.iter().map(|b| b.as_ref()).collect();
        let rrefs: Vec<Action> = right.iter().map(|b| b.as_ref()).collect();
        double_coset_orbits(sl2.len(), &lrefs, &rrefs)
    };

    let classes = orbits
        .reps
        .iter()
        .enumerate()
        .map(|(id, &rep)| {
            let m = sl2.matrix(rep);
            let fixed = |rho: Involution| {
                sl2.index(&rho.apply(r, &m))
                    .is_some_and(|j| orbits.orbit_of[j] as usize == id)
            };
            CuspClass {
                orbit_id: id,
                rep: m,
                sigma_fixed: fixed(Involution::Sigma),
                tau_fixed: fixed(Involution::Tau),
            }
        })
        .collect();
    Ok(CuspTable {
        field: *field,
        n,
        warnings: level_warnings(n),
        sl2,
        orbits,
        classes,
    })
}

/// Number of cusp classes fixed by ρ.
pub fn fixed_cusps(classes: &[CuspClass], rho: Involution) -> usize {
    classes
        .iter()
        .filter(|c| match rho {
            Involution::Identity => true,
            Involution::Sigma => c.sigma_fixed,
            Involution::Tau => c.tau_fixed,
        })
        .count()
}

/// Dimensions of H⁰, H¹, H² of the Eisenstein cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EisDims {
    pub dim0: usize,
    pub dim1: usize,
    pub dim2: usize,
    /// Set for k = 0, where the constants restrict nontrivially and the
    /// restriction to H²(∂) has a one-dimensional cokernel.
    pub cokernel_corrected: bool,
}

pub fn eis_dims(field: &Field, n: i64, k: u32) -> Result<EisDims> {
    let c = cusp_classes(field, n)?.count();
    Ok(eis_dims_from_count(c, k))
}

pub fn eis_dims_from_count(cusps: usize, k: u32) -> EisDims {
    if k > 0 {
        EisDims { dim0: 0, dim1: cusps, dim2: cusps, cokernel_corrected: false }
    } else {
        EisDims { dim0: 1, dim1: cusps, dim2: cusps - 1, cokernel_corrected: true }
    }
}

/// Pairs (u, v) ∈ (O/P)² \ {0} left unmoved by every matrix of `mats`,
/// acting on rows (u, v) ↦ (ua + vc, ub + vd) modulo P.
pub fn unmoved_torsion_pairs(field: &Field, p: i64, mats: &[Mat2O]) -> Result<Vec<(OElt, OElt)>> {
    let ring = residue_ring_with_caps(*field, p, Caps { max_level: i64::MAX, ..Caps::default() })?;
    let r = &ring;
    let mats: Vec<Mat2R> = mats.iter().map(|m| r.mat_from_o(m)).collect();
    let mut out = Vec::new();
    for u in r.elements() {
        for v in r.elements() {
            if u == r.zero() && v == r.zero() {
                continue;
            }
            let fixed_by_all = mats.iter().all(|m| {
                r.add(r.mul(u, m.a), r.mul(v, m.c)) == u && r.add(r.mul(u, m.b), r.mul(v, m.d)) == v
            });
            if fixed_by_all {
                out.push((r.to_o(u), r.to_o(v)));
            }
        }
    }
    Ok(out)
}

/// Matrices of Γ₀(P) that together move every nonzero (u, v) ∈ ((1/P)O/O)².
///
/// Candidates are tried smallest set first; for odd P the matrix −I alone
/// already works.
pub fn gamma0_stabilizer_witness(field: &Field, p: i64) -> Result<Vec<Mat2O>> {
    let st = field.splitting_type(p)?;
    if st != SplittingType::Inert {
        return Err(Error::UnsupportedLevel(format!("{p} is not inert")));
    }
    let w = OElt::OMEGA;
    let o = OElt::ONE;
    let z = OElt::ZERO;
    let mut candidates = vec![
        Mat2O::new(o, o, z, o),
        Mat2O::new(o, w, z, o),
        Mat2O::new(o, z, OElt::int(p), o),
        Mat2O::from_ints(-1, 0, 0, -1),
    ];
    for u in field.units() {
        if u != o && u != -o {
            candidates.push(Mat2O::new(u, z, z, field.conj(u)));
        }
    }
    for m in &candidates {
        debug_assert!(is_member(field, CongruenceKind::Gamma0(p), m)?);
        if unmoved_torsion_pairs(field, p, std::slice::from_ref(m))?.is_empty() {
            return Ok(vec![*m]);
        }
    }
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            let set = [candidates[i], candidates[j]];
            if unmoved_torsion_pairs(field, p, &set)?.is_empty() {
                return Ok(set.to_vec());
            }
        }
    }
    Err(Error::InvalidInput(format!("no witness found for P = {p}")))
}
