//! Cut-and-project schemes, exact model-set generation and torus coordinates.

mod generate;
mod geometry;
mod pattern;
mod scheme;
mod torus;
mod validate;

pub use generate::{generate_model_set, generate_with_window, BoundaryConvention, BoundaryPolicy};
pub use geometry::{covering_check, flc_census, meyer_witness, min_sq_distance, CoveringReport, MeyerWitness};
pub use pattern::{LatticeFrame, PointPattern, Provenance, FILTER_MARGIN};
pub use scheme::{fibonacci, octagonal, parse_vector, Hyperplane, Scheme, SchemeDescription, Window};
pub use torus::{centered_lift, torus_eq, torus_reduce};
pub use validate::{validate_scheme, Check, Status, ValidationReport};

pub(crate) use geometry::sqrt_f64;
pub(crate) use validate::{fmt_vec, form_image_lattice};
