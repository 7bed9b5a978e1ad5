use alloc::vec::Vec;

use super::scheme::Scheme;
use crate::exact::FieldScalar;

/// Canonical representative of `h` modulo Delta: every Delta coordinate in `[0, 1)`.
pub fn torus_reduce(s: &Scheme, h: &[FieldScalar]) -> Vec<FieldScalar> {
    let c: Vec<FieldScalar> = s
        .delta_coordinates(h)
        .iter()
        .map(|x| x - &FieldScalar::from_bigint(x.floor()))
        .collect();
    s.from_delta_coordinates(&c)
}

/// Representative of `h` modulo Delta with every Delta coordinate in `[-1/2, 1/2)`.
pub fn centered_lift(s: &Scheme, h: &[FieldScalar]) -> Vec<FieldScalar> {
    let half = FieldScalar::ratio(1, 2);
    let c: Vec<FieldScalar> = s
        .delta_coordinates(h)
        .iter()
        .map(|x| x - &FieldScalar::from_bigint((x + &half).floor()))
        .collect();
    s.from_delta_coordinates(&c)
}

/// Whether `a - b` lies in Delta.
pub fn torus_eq(s: &Scheme, a: &[FieldScalar], b: &[FieldScalar]) -> bool {
    torus_reduce(s, a) == torus_reduce(s, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::scheme::{fibonacci, octagonal};
    use crate::exact::linalg;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn delta_vector_reduces_to_zero() {
        let s = octagonal();
        for d in s.delta_basis().clone() {
            assert!(linalg::is_zero(&torus_reduce(&s, &d)));
        }
    }

    #[test]
    fn sqrt_two_reduces() {
        let s = octagonal();
        let h = vec![FieldScalar::sqrt(2), FieldScalar::zero()];
        let expected = vec![FieldScalar::sqrt(2) - FieldScalar::one(), FieldScalar::zero()];
        assert_eq!(torus_reduce(&s, &h), expected);
    }

    #[test]
    fn centered_lift_range() {
        let s = fibonacci();
        let h = vec![FieldScalar::ratio(1, 2)];
        assert_eq!(centered_lift(&s, &h), vec![FieldScalar::ratio(-1, 2)]);
        let h = vec![FieldScalar::ratio(7, 3)];
        assert_eq!(centered_lift(&s, &h), vec![FieldScalar::ratio(1, 3)]);
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_congruent(a in -20i64..20, b in -20i64..20, c in 1i64..7, d in -20i64..20) {
            let s = octagonal();
            let h = vec![FieldScalar::quadratic(a, c, b, c, 2), FieldScalar::quadratic(d, c, a, 3, 2)];
            let r = torus_reduce(&s, &h);
            prop_assert_eq!(torus_reduce(&s, &r), r.clone());
            let diff = s.delta_coordinates(&linalg::sub(&h, &r));
            prop_assert!(diff.iter().all(|x| x == &FieldScalar::from_bigint(x.floor())));
            for x in s.delta_coordinates(&r) {
                prop_assert!(!x.is_negative() && x < FieldScalar::one());
            }
            let l = centered_lift(&s, &h);
            prop_assert!(torus_eq(&s, &l, &h));
        }
    }
}
