//! Exact arithmetic kernel.

pub mod field;
pub mod fm;
pub mod hnf;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod schur;

pub use field::FieldScalar;
pub use fm::{fm_feasible, Feasibility, LinearForm, Relation};
pub use hnf::{hnf, hnf_membership, IntMatrix, LatticeMembership};
pub use poly::{minimal_polynomial_of_perron, IntPolynomial};
pub use schur::{schur_cohn_unit_disk_count, UnitDiskCount};
