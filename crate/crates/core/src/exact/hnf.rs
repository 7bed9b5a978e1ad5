//! Hermite normal form over the integers and lattice membership.
//!
//! Generators are stored as rows. [`hnf`] returns `(H, U)` with `U` unimodular,
//! `H = U * A`, `H` in row echelon form with positive pivots and the entries
//! above each pivot reduced into `[0, pivot)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::common_denominator;
use crate::error::input_err;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(input_err!("ragged integer matrix"));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let lifted: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&lifted).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] -= k * row[source]
    fn sub_row(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = k * &self.entries[source * self.cols + j];
            self.entries[target * self.cols + j] -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.entries[i * self.cols + j];
            *v = -core::mem::take(v);
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Row Hermite normal form: returns `(H, U)` with `H = U * A`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            // smallest nonzero entry of column c at or below row r
            let pick = (r..a.rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&i, &j| h[(i, c)].abs().cmp(&h[(j, c)].abs()));
            let Some(p) = pick else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..a.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.sub_row(i, r, &q);
                u.sub_row(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            h.sub_row(i, r, &q);
            u.sub_row(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// The subgroup of `Q^m` generated by finitely many rational vectors, with a
/// cached Hermite normal form for repeated membership queries.
#[derive(Clone, Debug)]
pub struct LatticeMembership {
    dim: usize,
    scale: BigInt,
    h: IntMatrix,
    u: IntMatrix,
    pivots: Vec<(usize, usize)>,
}

impl LatticeMembership {
    pub fn new(generators: &[Vec<BigRational>]) -> Result<Self> {
        let dim = generators.first().map_or(0, Vec::len);
        if generators.iter().any(|g| g.len() != dim) {
            return Err(input_err!("generators of different dimensions"));
        }
        let scale = common_denominator(generators.iter().flatten());
        let scaled: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| (x * BigRational::from_integer(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        let a = if generators.is_empty() {
            IntMatrix::zeros(0, dim)
        } else {
            IntMatrix::from_rows(&scaled)?
        };
        let (h, u) = hnf(&a);
        let mut pivots = Vec::new();
        for i in 0..h.rows() {
            if let Some(c) = (0..dim).find(|&c| !h[(i, c)].is_zero()) {
                pivots.push((i, c));
            }
        }
        Ok(LatticeMembership {
            dim,
            scale,
            h,
            u,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn hermite_form(&self) -> &IntMatrix {
        &self.h
    }

    pub fn transform(&self) -> &IntMatrix {
        &self.u
    }

    /// Integer coefficients `c` with `sum c_k g_k = target`, if any exist.
    pub fn coefficients(&self, target: &[BigRational]) -> Result<Option<Vec<BigInt>>> {
        if target.len() != self.dim {
            return Err(input_err!(
                "target has dimension {}, generators {}",
                target.len(),
                self.dim
            ));
        }
        let scale = BigRational::from_integer(self.scale.clone());
        let mut residual = Vec::with_capacity(self.dim);
        for x in target {
            let y = x * &scale;
            if !y.is_integer() {
                return Ok(None);
            }
            residual.push(y.to_integer());
        }
        let mut hcoef = vec![BigInt::zero(); self.h.rows()];
        let mut next_col = 0;
        for &(row, col) in &self.pivots {
            if residual[next_col..col].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let (q, rem) = residual[col].div_rem(&self.h[(row, col)]);
            if !rem.is_zero() {
                return Ok(None);
            }
            for j in col..self.dim {
                let delta = &q * &self.h[(row, j)];
                residual[j] -= delta;
            }
            hcoef[row] = q;
            next_col = col + 1;
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let coeffs = (0..self.u.cols())
            .map(|k| {
                hcoef
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| c * &self.u[(i, k)])
                    .sum()
            })
            .collect();
        Ok(Some(coeffs))
    }

    pub fn contains(&self, target: &[BigRational]) -> Result<bool> {
        Ok(self.coefficients(target)?.is_some())
    }

    /// Basis of the integer relations `{c : sum c_k g_k = 0}`.
    pub fn relations(&self) -> Vec<Vec<BigInt>> {
        let rank = self.rank();
        (rank..self.h.rows()).map(|i| self.u.row(i).to_vec()).collect()
    }
}

/// Decides whether `target` lies in the integer span of `generators`; when it
/// does, returns coefficients that reconstruct it exactly.
pub fn hnf_membership(
    generators: &[Vec<BigRational>],
    target: &[BigRational],
) -> Result<Option<Vec<BigInt>>> {
    LatticeMembership::new(generators)?.coefficients(target)
}
