//! Exact computations for almost canonical cut-and-project sets.
//!
//! The crate is `no_std` and only needs `alloc`. Every geometric quantity is
//! an element of a real quadratic field `Q(sqrt(d))`, so all decisions
//! (window membership, cone feasibility, lattice membership, patch equality)
//! are exact.
//!
//! * [`exact`]: quadratic-field scalars, Hermite normal form, Fourier-Motzkin
//!   elimination and unit-disk root counting.
//! * [`cps`]: cut-and-project schemes, model-set generation, torus reduction.
//! * [`arrangement`]: cut types, point types, transformation types and cones.
//! * [`ellis`]: the finite idempotent monoid and the Ellis semigroup of the
//!   transversal system.
//! * [`dynamics`]: patches, the hull metric, proximality and coincidence rank.
//! * [`substitution`]: one-dimensional substitutions and their spectral type.
#![no_std]

extern crate alloc;

pub mod arrangement;
pub mod cps;
pub mod dynamics;
pub mod ellis;
mod error;
pub mod exact;
pub mod substitution;

pub use error::{Error, Result};
pub use exact::field::FieldScalar;
