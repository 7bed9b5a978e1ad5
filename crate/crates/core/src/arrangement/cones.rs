//! Polyhedral cones given as constraint lists.

use alloc::vec::Vec;

use crate::error::input_err;
use crate::exact::fm::{fm_feasible, LinearForm, Relation};
use crate::exact::{linalg, FieldScalar};
use crate::Result;

/// Tangent cone at `x` of the closure of the set cut out by `cone`.
///
/// Equalities are kept, active inequalities become non-strict and
/// homogeneous, inactive ones are dropped.
pub fn tangent_cone(cone: &[LinearForm], x: &[FieldScalar]) -> Result<Vec<LinearForm>> {
    let mut out = Vec::new();
    for c in cone {
        if c.dim() != x.len() {
            return Err(input_err!("constraint of dimension {} at a point of dimension {}", c.dim(), x.len()));
        }
        if !c.closure().is_satisfied_by(x) {
            return Err(input_err!("point {} lies outside the closure of the cone", crate::cps::fmt_vec(x)));
        }
        let active = c.value(x).is_zero();
        match c.relation {
            Relation::Equal => out.push(LinearForm::new(c.coefficients.clone(), Relation::Equal)),
            Relation::Positive | Relation::NonNegative if active => {
                out.push(LinearForm::new(c.coefficients.clone(), Relation::NonNegative))
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Whether every point satisfying `inner` satisfies `outer`, decided by
/// checking that `inner` and the negation of each outer constraint are
/// jointly infeasible.
pub fn cone_contains(outer: &[LinearForm], inner: &[LinearForm], dim: usize) -> Result<bool> {
    for c in outer {
        for part in c.complement() {
            let mut system = inner.to_vec();
            system.push(part);
            if fm_feasible(&system, dim)?.is_feasible() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The closure of a cone: every strict inequality relaxed.
pub fn closure(cone: &[LinearForm]) -> Vec<LinearForm> {
    cone.iter().map(LinearForm::closure).collect()
}

/// Dimension of the subspace cut out by the equalities of `cone`.
pub fn equality_span_dim(cone: &[LinearForm], dim: usize) -> usize {
    let eqs: Vec<Vec<FieldScalar>> = cone
        .iter()
        .filter(|c| c.relation == Relation::Equal)
        .map(|c| c.coefficients.clone())
        .collect();
    dim - linalg::rank(&eqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f(x: i64) -> FieldScalar {
        FieldScalar::from_integer(x)
    }

    fn ge(a: i64, b: i64) -> LinearForm {
        LinearForm::new(vec![f(a), f(b)], Relation::NonNegative)
    }

    fn gt(a: i64, b: i64) -> LinearForm {
        LinearForm::new(vec![f(a), f(b)], Relation::Positive)
    }

    fn eq(a: i64, b: i64) -> LinearForm {
        LinearForm::new(vec![f(a), f(b)], Relation::Equal)
    }

    #[test]
    fn tangent_cone_examples() {
        let sector = vec![ge(0, 1), ge(1, -1)];
        assert!(tangent_cone(&sector, &[f(2), f(1)]).unwrap().is_empty());
        assert_eq!(tangent_cone(&sector, &[f(0), f(0)]).unwrap(), sector);
        assert_eq!(tangent_cone(&sector, &[f(1), f(0)]).unwrap(), vec![ge(0, 1)]);
        assert!(tangent_cone(&sector, &[f(-1), f(0)]).is_err());
        // a strict cone's closure contains its boundary
        assert_eq!(tangent_cone(&[gt(0, 1)], &[f(1), f(0)]).unwrap(), vec![ge(0, 1)]);
    }

    #[test]
    fn containment() {
        // sector (0 deg, 45 deg) and (45 deg, 90 deg), the positive x-axis
        let low = vec![gt(0, 1), gt(1, -1), gt(1, 0), gt(1, 1)];
        let high = vec![gt(0, 1), gt(-1, 1), gt(1, 0), gt(1, 1)];
        let axis = vec![eq(0, 1), gt(1, -1), gt(1, 0), gt(1, 1)];
        assert!(cone_contains(&closure(&low), &axis, 2).unwrap());
        assert!(!cone_contains(&closure(&high), &axis, 2).unwrap());
        assert!(!cone_contains(&low, &axis, 2).unwrap());
        assert!(cone_contains(&low, &low, 2).unwrap());
        assert!(cone_contains(&[], &high, 2).unwrap());
        assert!(cone_contains(&axis, &[eq(1, 0), eq(0, 1)], 2).is_ok());
    }

    #[test]
    fn span_dimension() {
        assert_eq!(equality_span_dim(&[eq(0, 1), gt(1, 0)], 2), 1);
        assert_eq!(equality_span_dim(&[eq(0, 1), eq(1, 1)], 2), 0);
        assert_eq!(equality_span_dim(&[], 2), 2);
    }
}
