//! Exterior calculus on Minkowski space for null electromagnetic fields.
//!
//! The crate builds the null frame `F = A∧ζ` of a field given by two
//! amplitude functions `(u, p)`, evaluates its stress-energy-momentum tensor,
//! the strain tensors `L_Āη` and `L_Ā*η`, the Frobenius curvature `R`, and the
//! closed-form helical solution family with its energy and action integrals.
//! Every quantity is computed from exact first-order jets; finite differences
//! and flow integration exist as independent oracles.

pub mod error;
pub mod exterior;
pub mod field;
pub mod frobenius;
pub mod numerics;
pub mod random;
pub mod solutions;
pub mod strain;
pub mod stress_energy;

pub use error::{Error, Result};

/// A point `(x, y, z, ξ)` of Minkowski space.
pub type Point = [f64; 4];
