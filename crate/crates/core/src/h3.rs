//! Hyperbolic 3-space H³ = {z + jt : t > 0}: the Möbius action, the
//! coframe β = (−dz/t, dt/t, dz̄/t), its Hodge star, and the face B₀ of the
//! octahedron for SL₂(Z[i]).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The quaternion z + jt with t > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub z: Complex64,
    pub t: f64,
}

impl Point3 {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(t > 0.0) || !z.is_finite() || !t.is_finite() {
            return Err(Error::NonPositiveArgument(t));
        }
        Ok(Point3 { z, t })
    }
}

/// (a b; c d) acting by u ↦ (au + b)(cu + d)⁻¹.
pub fn mobius(m: &[Complex64; 4], u: Point3) -> Point3 {
    let [a, b, c, d] = *m;
    let cz = c * u.z + d;
    let den = cz.norm_sqr() + c.norm_sqr() * u.t * u.t;
    Point3 {
        z: ((a * u.z + b) * cz.conj() + a * c.conj() * u.t * u.t) / den,
        t: u.t / den,
    }
}

pub fn mat_mul(x: &[Complex64; 4], y: &[Complex64; 4]) -> [Complex64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// A 1-form F₀β₀ + F₁β₁ + F₂β₂ sampled at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Form1Sample {
    pub point: Point3,
    pub f: [Complex64; 3],
}

/// Coefficients of a 2-form on (β₀∧β₂, β₁∧β₂, β₀∧β₁).
pub type Form2 = [Complex64; 3];

/// *(F·β) = −½i F̄₁ β₀∧β₂ + i F̄₀ β₁∧β₂ + i F̄₂ β₀∧β₁.
pub fn hodge_star(f: &[Complex64; 3]) -> Form2 {
    let i = Complex64::new(0.0, 1.0);
    [-0.5 * i * f[1].conj(), i * f[0].conj(), i * f[2].conj()]
}

/// Rewrites a 2-form on the β-basis in Euclidean coordinates, returning the
/// coefficients of (dx∧dy, dy∧dt, dt∧dx).
pub fn form2_euclidean(c: &Form2, t: f64) -> [Complex64; 3] {
    let i = Complex64::new(0.0, 1.0);
    let t2 = t * t;
    // β₀∧β₂ = −dz∧dz̄/t² = 2i dx∧dy/t², β₁∧β₂ = dt∧dz̄/t², β₀∧β₁ = −dz∧dt/t²
    [2.0 * i * c[0] / t2, i * (c[1] - c[2]) / t2, (c[1] + c[2]) / t2]
}

/// The face B₀ = {0, P₂, P₃} of the fundamental octahedron of SL₂(Z[i]).
///
/// Its vertices lie on the hemisphere |z − i|² + t² = 1, over the planar
/// triangle with corners 0, ½ + ½i and ½i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    /// Vertices as (x, y, t²) with rational entries stored as (num, den).
    pub vertices: [[(i64, i64); 3]; 3],
}

pub const B0: Face = Face {
    vertices: [
        [(0, 1), (0, 1), (0, 1)],
        [(1, 2), (1, 2), (1, 2)],
        [(0, 1), (1, 2), (3, 4)],
    ],
};

impl Face {
    /// Checks x² + (y − 1)² + t² = 1 exactly for every vertex.
    pub fn on_sphere_exact(&self) -> bool {
        use num_rational::Ratio;
        self.vertices.iter().all(|v| {
            let r = |(n, d): (i64, i64)| Ratio::new(n, d);
            let (x, y, t2) = (r(v[0]), r(v[1]), r(v[2]));
            let one = Ratio::from_integer(1);
            x * x + (y - one) * (y - one) + t2 == one
        })
    }

    pub fn points(&self) -> [Point3; 3] {
        let f = |(n, d): (i64, i64)| n as f64 / d as f64;
        self.vertices.map(|v| Point3 { z: Complex64::new(f(v[0]), f(v[1])), t: f(v[2]).sqrt() })
    }

    /// Height of the face above the planar point (x, y).
    pub fn height(x: f64, y: f64) -> f64 {
        (1.0 - x * x - (y - 1.0) * (y - 1.0)).max(0.0).sqrt()
    }
}
