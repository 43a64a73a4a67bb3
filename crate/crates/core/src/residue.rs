//! The finite ring R = O/NO, SL₂(R), P¹(R) and a generic orbit engine.
//!
//! SL₂(R) is never filtered out of R⁴. Every determinant-one matrix is
//! `(a, −y + λa; c, x + λc)` for a unique unimodular column (a, c), a fixed
//! Bézout pair x·a + y·c = 1 and a unique λ ∈ R. That gives an O(1) bijection
//! between SL₂(R) and `0..|SL₂(R)|`, which the orbit engine works on.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{factorize, mod_inv, Field, OElt};

/// Resource limits for combinatorial operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caps {
    pub max_level: i64,
    /// Refuse SL₂ enumerations whose estimated size N⁶ exceeds this.
    pub max_sl2: f64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_level: 50, max_sl2: 1e8 }
    }
}

/// The residue ring O/NO.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResRing {
    pub field: Field,
    pub n: i64,
    /// ω² = p + q·ω with p reduced mod N.
    p: i64,
    q: i64,
}

/// The residue a + b·ω with 0 ≤ a, b < N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ResElt {
    pub a: u32,
    pub b: u32,
}

/// A 2×2 matrix over R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2R {
    pub a: ResElt,
    pub b: ResElt,
    pub c: ResElt,
    pub d: ResElt,
}

/// A point of P¹(R): the lexicographically least member of a unit orbit of
/// unimodular columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Class {
    pub a: ResElt,
    pub c: ResElt,
}

pub fn residue_ring(field: Field, n: i64) -> Result<ResRing> {
    residue_ring_with_caps(field, n, Caps::default())
}

pub fn residue_ring_with_caps(field: Field, n: i64, caps: Caps) -> Result<ResRing> {
    if n < 2 {
        return Err(Error::DegenerateLevel(n));
    }
    if n > caps.max_level {
        return Err(Error::LevelTooLarge {
            level: n,
            reason: format!("N > {}", caps.max_level),
        });
    }
    let (p, q) = field.omega_sq();
    Ok(ResRing { field, n, p: p.rem_euclid(n), q })
}

impl ResRing {
    pub fn size(&self) -> usize {
        (self.n * self.n) as usize
    }

    pub fn elt(&self, a: i64, b: i64) -> ResElt {
        ResElt {
            a: a.rem_euclid(self.n) as u32,
            b: b.rem_euclid(self.n) as u32,
        }
    }

    pub fn from_o(&self, x: OElt) -> ResElt {
        self.elt(x.a, x.b)
    }

    /// The representative with coefficients in [0, N).
    pub fn to_o(&self, x: ResElt) -> OElt {
        OElt::new(x.a as i64, x.b as i64)
    }

    pub fn zero(&self) -> ResElt {
        ResElt::default()
    }

    pub fn one(&self) -> ResElt {
        self.elt(1, 0)
    }

    pub fn omega(&self) -> ResElt {
        self.elt(0, 1)
    }

    pub fn index(&self, x: ResElt) -> usize {
        x.a as usize + self.n as usize * x.b as usize
    }

    pub fn from_index(&self, i: usize) -> ResElt {
        let n = self.n as usize;
        ResElt { a: (i % n) as u32, b: (i / n) as u32 }
    }

    pub fn elements(&self) -> impl Iterator<Item = ResElt> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, x: ResElt, y: ResElt) -> ResElt {
        self.elt(x.a as i64 + y.a as i64, x.b as i64 + y.b as i64)
    }

    pub fn sub(&self, x: ResElt, y: ResElt) -> ResElt {
        self.elt(x.a as i64 - y.a as i64, x.b as i64 - y.b as i64)
    }

    pub fn neg(&self, x: ResElt) -> ResElt {
        self.elt(-(x.a as i64), -(x.b as i64))
    }

    pub fn mul(&self, x: ResElt, y: ResElt) -> ResElt {
        let (xa, xb, ya, yb) = (x.a as i64, x.b as i64, y.a as i64, y.b as i64);
        let bd = xb * yb % self.n;
        self.elt(xa * ya + self.p * bd, xa * yb + xb * ya + self.q * bd)
    }

    /// Multiplication by a rational integer.
    pub fn scale(&self, k: i64, x: ResElt) -> ResElt {
        self.elt(k * x.a as i64, k * x.b as i64)
    }

    pub fn conj(&self, x: ResElt) -> ResElt {
        self.elt(x.a as i64 + self.q * x.b as i64, -(x.b as i64))
    }

    /// The τ-image of a ring element: x ↦ −σ(x).
    pub fn tau(&self, x: ResElt) -> ResElt {
        self.neg(self.conj(x))
    }

    pub fn norm_mod(&self, x: ResElt) -> i64 {
        let (a, b) = (x.a as i64, x.b as i64);
        (a * a + self.q * a * b - self.p * b * b).rem_euclid(self.n)
    }

    pub fn is_unit(&self, x: ResElt) -> bool {
        mod_inv(self.norm_mod(x), self.n).is_some()
    }

    /// x⁻¹ = σ(x)·N(x)⁻¹ when N(x) is a unit mod N.
    pub fn inv(&self, x: ResElt) -> Option<ResElt> {
        mod_inv(self.norm_mod(x), self.n).map(|k| self.scale(k, self.conj(x)))
    }

    pub fn identity(&self) -> Mat2R {
        let (z, o) = (self.zero(), self.one());
        Mat2R { a: o, b: z, c: z, d: o }
    }

    pub fn mat(&self, a: ResElt, b: ResElt, c: ResElt, d: ResElt) -> Mat2R {
        Mat2R { a, b, c, d }
    }

    pub fn mat_from_o(&self, m: &crate::field::Mat2O) -> Mat2R {
        self.mat(self.from_o(m.a), self.from_o(m.b), self.from_o(m.c), self.from_o(m.d))
    }

    pub fn det(&self, m: &Mat2R) -> ResElt {
        self.sub(self.mul(m.a, m.d), self.mul(m.b, m.c))
    }

    pub fn mat_mul(&self, x: &Mat2R, y: &Mat2R) -> Mat2R {
        Mat2R {
            a: self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            c: self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            d: self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        }
    }

    pub fn mat_neg(&self, m: &Mat2R) -> Mat2R {
        Mat2R { a: self.neg(m.a), b: self.neg(m.b), c: self.neg(m.c), d: self.neg(m.d) }
    }

    /// Entrywise complex conjugation.
    pub fn mat_sigma(&self, m: &Mat2R) -> Mat2R {
        Mat2R { a: self.conj(m.a), b: self.conj(m.b), c: self.conj(m.c), d: self.conj(m.d) }
    }

    /// Entrywise conjugation followed by b ↦ −b, c ↦ −c.
    pub fn mat_tau(&self, m: &Mat2R) -> Mat2R {
        Mat2R {
            a: self.conj(m.a),
            b: self.neg(self.conj(m.b)),
            c: self.neg(self.conj(m.c)),
            d: self.conj(m.d),
        }
    }

    /// Whether the ideal generated by a and c is all of R.
    ///
    /// aR + cR is the Z/N-span of the columns a, aω, c, cω; it is everything
    /// iff the 2×2 minors of that 2×4 matrix generate the unit ideal mod N.
    pub fn is_unimodular(&self, a: ResElt, c: ResElt) -> bool {
        let cols = self.span_columns(a, c);
        let mut g = self.n;
        for i in 0..4 {
            for j in (i + 1)..4 {
                g = crate::field::gcd(g, minor(&cols, i, j));
                if g == 1 {
                    return true;
                }
            }
        }
        false
    }

    fn span_columns(&self, a: ResElt, c: ResElt) -> [(i64, i64); 4] {
        let w = self.omega();
        let co = |x: ResElt| (x.a as i64, x.b as i64);
        [co(a), co(self.mul(a, w)), co(c), co(self.mul(c, w))]
    }

    /// Solves x·a + y·c = 1 in R, prime power by prime power, joined by CRT.
    pub fn bezout(&self, a: ResElt, c: ResElt) -> Option<(ResElt, ResElt)> {
        let cols = self.span_columns(a, c);
        let mut v = [0i64; 4];
        for (p, e) in factorize(self.n) {
            let q = p.pow(e);
            let (i, j) = (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .find(|&(i, j)| minor(&cols, i, j).rem_euclid(p) != 0)?;
            let det_inv = mod_inv(minor(&cols, i, j), q)?;
            // [ci cj]·(vi, vj)ᵀ = (1, 0)ᵀ  ⇒  (vi, vj) = det⁻¹·(cj.1, −ci.1)
            let vi = (cols[j].1 * det_inv).rem_euclid(q);
            let vj = (-cols[i].1 * det_inv).rem_euclid(q);
            let m = self.n / q;
            let lift = m * mod_inv(m, q).unwrap_or(1) % self.n;
            v[i] = (v[i] + vi * lift) % self.n;
            v[j] = (v[j] + vj * lift) % self.n;
        }
        let x = self.elt(v[0], v[1]);
        let y = self.elt(v[2], v[3]);
        debug_assert_eq!(self.add(self.mul(x, a), self.mul(y, c)), self.one());
        Some((x, y))
    }

    /// Estimated |SL₂(R)| ≈ N⁶, checked against the cap.
    pub fn check_sl2_cap(&self, caps: Caps) -> Result<()> {
        let est = (self.n as f64).powi(6);
        if est > caps.max_sl2 {
            return Err(Error::LevelTooLarge {
                level: self.n,
                reason: format!("estimated |SL2(R)| = {est:.3e} > {:.0e}", caps.max_sl2),
            });
        }
        Ok(())
    }
}

fn minor(cols: &[(i64, i64); 4], i: usize, j: usize) -> i64 {
    cols[i].0 * cols[j].1 - cols[j].0 * cols[i].1
}

/// The invertible elements of R.
pub fn units(ring: &ResRing) -> Vec<ResElt> {
    ring.elements().filter(|&x| ring.is_unit(x)).collect()
}

/// P¹(R) with a lookup from any unimodular column to its class.
#[derive(Debug, Clone)]
pub struct P1Table {
    pub classes: Vec<P1Class>,
    /// pair index a·|R| + c → class id, `u32::MAX` for non-unimodular pairs.
    class_of_pair: Vec<u32>,
    size: usize,
}

impl P1Table {
    pub fn new(ring: &ResRing) -> Self {
        let size = ring.size();
        let us = units(ring);
        let mut class_of_pair = vec![u32::MAX; size * size];
        let mut classes = Vec::new();
        for ai in 0..size {
            for ci in 0..size {
                if class_of_pair[ai * size + ci] != u32::MAX {
                    continue;
                }
                let (a, c) = (ring.from_index(ai), ring.from_index(ci));
                if !ring.is_unimodular(a, c) {
                    continue;
                }
                let id = classes.len() as u32;
                let mut best = (a, c);
                for &u in &us {
                    let (ua, uc) = (ring.mul(u, a), ring.mul(u, c));
                    class_of_pair[ring.index(ua) * size + ring.index(uc)] = id;
                    best = best.min((ua, uc));
                }
                classes.push(P1Class { a: best.0, c: best.1 });
            }
        }
        P1Table { classes, class_of_pair, size }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, ring: &ResRing, a: ResElt, c: ResElt) -> Option<usize> {
        let id = self.class_of_pair[ring.index(a) * self.size + ring.index(c)];
        (id != u32::MAX).then_some(id as usize)
    }

    /// Number of classes fixed by an involution acting on columns.
    pub fn fixed_by(
        &self,
        ring: &ResRing,
        inv: impl Fn(ResElt) -> ResElt,
    ) -> Result<usize> {
        fixed_points(self.len(), |i| {
            let cl = self.classes[i];
            self.class_of(ring, inv(cl.a), inv(cl.c))
        })
    }
}

/// The classes of unimodular columns of R under unit scaling.
pub fn p1(ring: &ResRing) -> Vec<P1Class> {
    P1Table::new(ring).classes
}

/// A bijection between SL₂(R) and `0..len()`.
#[derive(Debug, Clone)]
pub struct Sl2Index {
    pub ring: ResRing,
    cols: Vec<(ResElt, ResElt)>,
    /// Bézout pair (x, y) for each column: x·a + y·c = 1.
    bez: Vec<(ResElt, ResElt)>,
    col_of_pair: Vec<u32>,
}

impl Sl2Index {
    pub fn new(ring: &ResRing) -> Result<Self> {
        Self::with_caps(ring, Caps::default())
    }

    pub fn with_caps(ring: &ResRing, caps: Caps) -> Result<Self> {
        ring.check_sl2_cap(caps)?;
        let size = ring.size();
        let table = P1Table::new(ring);
        let us = units(ring);
        let mut cols = Vec::with_capacity(table.len() * us.len());
        let mut bez = Vec::with_capacity(cols.capacity());
        let mut col_of_pair = vec![u32::MAX; size * size];
        for cl in &table.classes {
            let (x0, y0) = ring.bezout(cl.a, cl.c).ok_or_else(|| {
                Error::InvalidInput("P1 representative is not unimodular".into())
            })?;
            for &u in &us {
                let ui = ring.inv(u).expect("unit");
                let col = (ring.mul(u, cl.a), ring.mul(u, cl.c));
                col_of_pair[ring.index(col.0) * size + ring.index(col.1)] = cols.len() as u32;
                cols.push(col);
                bez.push((ring.mul(ui, x0), ring.mul(ui, y0)));
            }
        }
        Ok(Sl2Index { ring: ring.clone(), cols, bez, col_of_pair })
    }

    pub fn len(&self) -> usize {
        self.cols.len() * self.ring.size()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn column_count(&self) -> usize {
        self.cols.len()
    }

    pub fn matrix(&self, id: usize) -> Mat2R {
        let r = &self.ring;
        let (col, li) = (id / r.size(), id % r.size());
        let (a, c) = self.cols[col];
        let (x, y) = self.bez[col];
        let lam = r.from_index(li);
        Mat2R {
            a,
            b: r.add(r.neg(y), r.mul(lam, a)),
            c,
            d: r.add(x, r.mul(lam, c)),
        }
    }

    /// Inverse of [`Sl2Index::matrix`]; `None` unless det(m) = 1.
    pub fn index(&self, m: &Mat2R) -> Option<usize> {
        let r = &self.ring;
        if r.det(m) != r.one() {
            return None;
        }
        let col = self.col_of_pair[r.index(m.a) * r.size() + r.index(m.c)];
        if col == u32::MAX {
            return None;
        }
        let (x, y) = self.bez[col as usize];
        let lam = r.add(r.mul(x, m.b), r.mul(y, m.d));
        Some(col as usize * r.size() + r.index(lam))
    }

    pub fn iter(&self) -> impl Iterator<Item = Mat2R> + '_ {
        (0..self.len()).map(move |i| self.matrix(i))
    }

    /// Folds over SL₂(R) in parallel, partitioned by first column.
    pub fn par_fold<T, F, R>(&self, init: T, fold: F, reduce: R) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(T, Mat2R) -> T + Send + Sync,
        R: Fn(T, T) -> T + Send + Sync,
    {
        let size = self.ring.size();
        (0..self.cols.len())
            .into_par_iter()
            .map(|col| {
                (0..size).fold(init.clone(), |acc, li| fold(acc, self.matrix(col * size + li)))
            })
            .reduce(|| init.clone(), &reduce)
    }
}

/// Streams every element of SL₂(R) exactly once.
pub fn enumerate_sl2(ring: &ResRing) -> Result<impl Iterator<Item = Mat2R>> {
    let idx = Sl2Index::new(ring)?;
    Ok((0..idx.len()).map(move |i| idx.matrix(i)))
}

/// A partition of `0..n` into orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTable {
    pub orbit_of: Vec<u32>,
    /// Smallest element of each orbit.
    pub reps: Vec<usize>,
}

impl OrbitTable {
    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    /// Number of orbits mapped to themselves by an involution on elements.
    pub fn fixed_orbits(&self, inv: impl Fn(usize) -> Option<usize>) -> Result<usize> {
        fixed_points(self.reps.len(), |o| {
            inv(self.reps[o]).map(|img| self.orbit_of[img] as usize)
        })
    }

    /// Permutation induced on orbits by a map on elements.
    pub fn induced(&self, map: impl Fn(usize) -> Option<usize>) -> Result<Vec<usize>> {
        self.reps
            .iter()
            .map(|&r| {
                map(r)
                    .map(|img| self.orbit_of[img] as usize)
                    .ok_or(Error::InvolutionNotClosed(r))
            })
            .collect()
    }
}

/// An action on `0..n`.
pub type Action<'a> = &'a dyn Fn(usize) -> usize;

/// Orbits of `0..n` under the group generated by left and right actions.
///
/// Breadth-first closure with an explicit queue. Scanning seeds in increasing
/// order makes each orbit's first element its minimum, so the result does not
/// depend on generator order.
pub fn double_coset_orbits(n: usize, left_gens: &[Action], right_gens: &[Action]) -> OrbitTable {
    let mut orbit_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..n {
        if orbit_of[seed] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(seed);
        orbit_of[seed] = id;
        queue.push_back(seed);
        while let Some(x) = queue.pop_front() {
            for g in left_gens.iter().chain(right_gens) {
                let y = g(x);
                if orbit_of[y] == u32::MAX {
                    orbit_of[y] = id;
                    queue.push_back(y);
                }
            }
        }
    }
    OrbitTable { orbit_of, reps }
}

/// Counts i ∈ 0..n with inv(i) = i; `None` means the image left the set.
pub fn fixed_points(n: usize, inv: impl Fn(usize) -> Option<usize>) -> Result<usize> {
    let mut count = 0;
    for i in 0..n {
        match inv(i) {
            Some(j) if j == i => count += 1,
            Some(_) => {}
            None => return Err(Error::InvolutionNotClosed(i)),
        }
    }
    Ok(count)
}

/// Number of units fixed by an involution on R.
pub fn fixed_units(ring: &ResRing, inv: impl Fn(ResElt) -> ResElt) -> Result<usize> {
    let us = units(ring);
    fixed_points(us.len(), |i| us.iter().position(|&u| u == inv(us[i])))
}
