//! Exact count of polynomial roots inside, on and outside the unit circle.
//!
//! Roots shared with the reciprocal polynomial are split off first; what
//! remains is handled by the Schur-Cohn Hermitian form, whose inertia is
//! computed by exact symmetric elimination. The shared part is
//! self-reciprocal, and its roots on the circle are counted through the
//! substitution `w = z + 1/z` and a Sturm sequence on `(-2, 2)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::qpoly::{self, QPoly};
use super::poly::IntPolynomial;
use crate::error::input_err;
use crate::Result;

/// Root counts with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnitDiskCount {
    pub inside: usize,
    pub on_circle: usize,
    pub outside: usize,
}

impl UnitDiskCount {
    pub fn has_roots_on_circle(&self) -> bool {
        self.on_circle > 0
    }

    pub fn degree(&self) -> usize {
        self.inside + self.on_circle + self.outside
    }
}

pub fn schur_cohn_unit_disk_count(p: &IntPolynomial) -> Result<UnitDiskCount> {
    let Some(deg) = p.degree() else {
        return Err(input_err!("unit-disk count of the zero polynomial"));
    };
    let coeffs = p.to_rational();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let core: QPoly = coeffs[zeros..].to_vec();

    let reciprocal: QPoly = core.iter().rev().cloned().collect();
    let g = qpoly::gcd(&core, &reciprocal);
    let h = qpoly::divrem(&core, &g).0;

    let inside_h = schur_cohn_regular(&h);
    let g_deg = qpoly::degree(&g).unwrap_or(0);
    let on = on_circle_self_reciprocal(&g);
    let inside = zeros + inside_h + (g_deg - on) / 2;
    Ok(UnitDiskCount {
        inside,
        on_circle: on,
        outside: deg - inside - on,
    })
}

/// Roots inside the circle for a polynomial coprime to its reciprocal.
fn schur_cohn_regular(h: &[BigRational]) -> usize {
    let n = qpoly::degree(h).unwrap_or(0);
    if n == 0 {
        return 0;
    }
    // A: lower-triangular Toeplitz of (a_0..a_{n-1}); B: that of (a_n..a_1)
    let toeplitz = |first: &dyn Fn(usize) -> BigRational| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if j <= i { first(i - j) } else { BigRational::zero() })
                    .collect()
            })
            .collect()
    };
    let a = toeplitz(&|k| h[k].clone());
    let b = toeplitz(&|k| h[n - k].clone());
    let mut s = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in s.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..n).map(|k| &a[k][i] * &a[k][j] - &b[k][i] * &b[k][j]).sum();
        }
    }
    let (neg, _pos, zero) = inertia(s);
    debug_assert_eq!(zero, 0, "Schur-Cohn form singular for a regular polynomial");
    neg
}

/// (negative, positive, zero) eigenvalue counts of a symmetric rational matrix
/// via congruence transformations.
pub fn inertia(mut s: Vec<Vec<BigRational>>) -> (usize, usize, usize) {
    let n = s.len();
    let (mut neg, mut pos) = (0, 0);
    for k in 0..n {
        if s[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !s[i][i].is_zero()) {
                s.swap(k, p);
                for row in s.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !s[k][j].is_zero()) {
                // row_k += row_j, col_k += col_j makes the pivot 2 s_kj
                for c in 0..n {
                    let v = s[j][c].clone();
                    s[k][c] += v;
                }
                for r in 0..n {
                    let v = s[r][j].clone();
                    s[r][k] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = s[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if s[i][k].is_zero() {
                continue;
            }
            let f = &s[i][k] / &pivot;
            for c in k..n {
                let v = &f * &s[k][c];
                s[i][c] -= v;
            }
        }
        for i in k + 1..n {
            s[k][i] = BigRational::zero();
            s[i][k] = BigRational::zero();
        }
    }
    (neg, pos, n - neg - pos)
}

/// Roots on the unit circle, with multiplicity, of a self-reciprocal polynomial.
fn on_circle_self_reciprocal(g: &[BigRational]) -> usize {
    let mut count = 0;
    for (idx, factor) in qpoly::square_free_decomposition(g).iter().enumerate() {
        count += (idx + 1) * on_circle_square_free(factor);
    }
    count
}

fn on_circle_square_free(f: &[BigRational]) -> usize {
    let one = BigRational::one();
    let mut rest: QPoly = f.to_vec();
    let mut count = 0;
    for root in [one.clone(), -one.clone()] {
        if qpoly::degree(&rest).unwrap_or(0) > 0 && qpoly::eval(&rest, &root).is_zero() {
            rest = qpoly::divrem(&rest, &[-root.clone(), one.clone()]).0;
            count += 1;
        }
    }
    let deg = qpoly::degree(&rest).unwrap_or(0);
    if deg == 0 {
        return count;
    }
    debug_assert!(deg.is_multiple_of(2), "self-reciprocal factor without +-1 roots has even degree");
    let m = deg / 2;
    // z^-m f(z) = c_m + sum_j c_{m+j} D_j(w) with D_j(z + 1/z) = z^j + z^-j
    let w: QPoly = vec![BigRational::zero(), one.clone()];
    let mut dickson: Vec<QPoly> = vec![vec![BigRational::from_integer(BigInt::from(2))], w.clone()];
    for j in 1..m {
        let next = qpoly::sub(&qpoly::mul(&w, &dickson[j]), &dickson[j - 1]);
        dickson.push(next);
    }
    let mut q: QPoly = vec![rest[m].clone()];
    for j in 1..=m {
        q = qpoly::add(&q, &qpoly::scale(&dickson[j], &rest[m + j]));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    // w = +-2 are excluded because the +-1 roots were removed
    count + 2 * qpoly::sturm_count(&q, &-two.clone(), &two)
}
