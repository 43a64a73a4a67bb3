//! Eisenstein cohomology invariants of congruence subgroups Γ₁(N) of Bianchi
//! groups SL₂(O), O the ring of integers of an imaginary quadratic field.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: exact arithmetic in O.
//! - [`residue`]: O/NO, SL₂(O/NO), P¹(O/NO) and a generic orbit engine.
//! - [`cusps`]: cusp classes of Γ₁(N) and their σ/τ-fixed counts.
//! - [`lattice`]: analytically continued lattice sums, ℘ and ζ.
//! - [`bessel`]: K₀ and K₁.
//! - [`cocycles`]: Ito's cocycle Φ and potential H, Sczech's Ψ on parabolics,
//!   and the exact conjugation matrix on the Ψ basis.
//! - [`traces`]: Lefschetz numbers, Euler characteristics, trace formulas.
//! - [`h3`] and [`cycles`]: hyperbolic 3-space, Hodge star, face quadrature
//!   and Eisenstein-cycle coefficients over Z[i].

pub mod error;
pub mod field;
pub mod residue;
pub mod cusps;
pub mod bessel;
pub mod lattice;
pub mod cyclotomic;
pub mod h3;
pub mod cocycles;
pub mod traces;
pub mod quad;
pub mod cycles;

pub use error::{Error, Result};
