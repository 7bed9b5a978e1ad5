//! The Ellis semigroup of the singular extension: the idempotent monoid of
//! transformation types, its product and action, and the structure report.

mod convergence;
mod elements;
mod monoid;

pub use convergence::{convergence_check, ConvergenceReport, ConvergenceStep, Verdict, MIN_TAIL};
pub use elements::{
    compatible_elements, compatible_points, ellis_action, ellis_product, group_label, lattice_samples, EllisElement,
    XiPoint,
};
pub use monoid::{monoid_product, product_signs, Monoid, Order};

use alloc::string::String;
use alloc::vec::Vec;

use crate::arrangement::{Arrangement, SignVector};
use crate::Result;

/// One row of the structure report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeGroup {
    pub signs: SignVector,
    pub cone_dim: usize,
    /// The group `(span C_t + Gamma)/Delta` in the internal torus.
    pub internal_group: String,
    /// The matching group of the suspension, between `R^N` and the full torus.
    pub suspension_group: String,
    pub minimal: bool,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub groups: Vec<TypeGroup>,
    pub monoid: Monoid,
    pub minimal_ideal: Vec<usize>,
    pub hasse: Vec<(usize, usize)>,
}

impl StructureReport {
    /// Cayley table rows `(row, column, product)` as sign strings.
    pub fn cayley_rows(&self) -> Vec<[SignVector; 3]> {
        let types = self.monoid.types();
        let mut out = Vec::with_capacity(types.len() * types.len());
        for (a, ta) in types.iter().enumerate() {
            for (b, tb) in types.iter().enumerate() {
                let p = &types[self.monoid.product(a, b)];
                out.push([ta.signs.clone(), tb.signs.clone(), p.signs.clone()]);
            }
        }
        out
    }
}

/// Builds the monoid, verifies its minimal ideal and order against the cone
/// picture, and lists the group attached to each type.
pub fn structure_report(arr: &Arrangement) -> Result<StructureReport> {
    let monoid = Monoid::new(arr)?;
    let minimal_ideal = monoid.minimal_ideal()?;
    for a in 0..monoid.len() {
        for b in 0..monoid.len() {
            monoid.order(arr, a, b)?;
        }
    }
    let dim = arr.dim();
    let groups = monoid
        .types()
        .iter()
        .enumerate()
        .map(|(k, t)| TypeGroup {
            signs: t.signs.clone(),
            cone_dim: t.cone_dim,
            internal_group: group_label(t, dim),
            suspension_group: if t.cone_dim == 0 {
                String::from("R^N")
            } else if t.cone_dim == dim {
                String::from("T")
            } else {
                alloc::format!("R^N + {}", group_label(t, dim))
            },
            minimal: minimal_ideal.contains(&k),
        })
        .collect();
    let hasse = monoid.hasse_edges();
    Ok(StructureReport {
        groups,
        monoid,
        minimal_ideal,
        hasse,
    })
}
