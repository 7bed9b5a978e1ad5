//! Dense vectors and matrices over the quadratic field.
//!
//! Sizes are tiny (at most a handful of rows), so plain `Vec`s and Gaussian
//! elimination are all that is needed.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use super::field::FieldScalar;

pub type Vector = Vec<FieldScalar>;
pub type Matrix = Vec<Vec<FieldScalar>>;

pub fn zeros(n: usize) -> Vector {
    vec![FieldScalar::zero(); n]
}

pub fn dot(u: &[FieldScalar], v: &[FieldScalar]) -> FieldScalar {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn add(u: &[FieldScalar], v: &[FieldScalar]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[FieldScalar], v: &[FieldScalar]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale(k: &FieldScalar, v: &[FieldScalar]) -> Vector {
    v.iter().map(|a| k * a).collect()
}

pub fn neg(v: &[FieldScalar]) -> Vector {
    v.iter().map(|a| -a).collect()
}

pub fn norm_sq(v: &[FieldScalar]) -> FieldScalar {
    dot(v, v)
}

pub fn is_zero(v: &[FieldScalar]) -> bool {
    v.iter().all(FieldScalar::is_zero)
}

pub fn mat_vec(m: &[Vec<FieldScalar>], v: &[FieldScalar]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `m * z` for an integer vector `z`.
pub fn mat_int_vec(m: &[Vec<FieldScalar>], z: &[i64]) -> Vector {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(z)
                .filter(|(_, &k)| k != 0)
                .map(|(a, &k)| a * &FieldScalar::from_integer(k))
                .sum()
        })
        .collect()
}

pub fn column(m: &[Vec<FieldScalar>], j: usize) -> Vector {
    m.iter().map(|row| row[j].clone()).collect()
}

pub fn transpose(m: &[Vec<FieldScalar>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| column(m, j)).collect()
}

/// Row-reduces a copy of `m` and returns (reduced matrix, pivot columns).
pub fn row_reduce(m: &[Vec<FieldScalar>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero pivot");
        a[r] = scale(&inv, &a[r]);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<FieldScalar>]) -> usize {
    row_reduce(m).1.len()
}

pub fn determinant(m: &[Vec<FieldScalar>]) -> FieldScalar {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut det = FieldScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return FieldScalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inverse().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

pub fn inverse(m: &[Vec<FieldScalar>]) -> Option<Matrix> {
    let n = m.len();
    let augmented: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| FieldScalar::from_integer((i == j) as i64)));
            r
        })
        .collect();
    let (reduced, pivots) = row_reduce(&augmented);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(reduced.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m x = b` when `m` is square and invertible.
pub fn solve(m: &[Vec<FieldScalar>], b: &[FieldScalar]) -> Option<Vector> {
    inverse(m).map(|inv| mat_vec(&inv, b))
}

/// Basis of the null space `{x : m x = 0}`.
pub fn null_space(m: &[Vec<FieldScalar>], cols: usize) -> Vec<Vector> {
    if m.is_empty() {
        return (0..cols)
            .map(|j| (0..cols).map(|i| FieldScalar::from_integer((i == j) as i64)).collect())
            .collect();
    }
    let (reduced, pivots) = row_reduce(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(cols);
            v[f] = FieldScalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&reduced[r][f];
            }
            v
        })
        .collect()
}

/// Coordinates over `Q` of a field vector: `[a_1, b_1, a_2, b_2, ...]`.
pub fn rational_coordinates(v: &[FieldScalar]) -> Vec<BigRational> {
    v.iter()
        .flat_map(|x| [x.rational_part().clone(), x.radical_part().clone()])
        .collect()
}

/// Rank over `Q` of a list of rational vectors.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let lifted: Matrix = rows
        .iter()
        .map(|r| r.iter().cloned().map(FieldScalar::from_rational).collect())
        .collect();
    rank(&lifted)
}

pub fn is_rational_zero(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}
