//! Finite exact point sets and the filtered distance predicate.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::input_err;
use crate::exact::linalg::{self, Matrix};
use crate::exact::FieldScalar;
use crate::Result;

/// Floating-point decisions closer than this to a threshold are redone exactly.
pub const FILTER_MARGIN: f64 = 1e-7;

/// Where a pattern came from; echoed in reports.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Provenance {
    pub source: String,
    pub shift: Vec<FieldScalar>,
    pub boundary: String,
}

/// Integer coordinates of every point with respect to the columns of `p1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFrame {
    pub p1: Matrix,
    pub coords: Vec<Vec<i64>>,
}

/// A finite point set inside the closed ball of radius `radius` about 0.
#[derive(Clone, Debug)]
pub struct PointPattern {
    dim: usize,
    points: Vec<Vec<FieldScalar>>,
    approx: Vec<Vec<f64>>,
    lattice: Option<LatticeFrame>,
    radius: FieldScalar,
    provenance: Provenance,
}

impl PartialEq for PointPattern {
    /// Set equality of the points.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sorted_points() == other.sorted_points()
    }
}

impl PointPattern {
    /// Checks dimensions, duplicates and `|p|^2 <= radius^2`, then sorts
    /// the points lexicographically.
    pub fn new(
        dim: usize,
        mut points: Vec<Vec<FieldScalar>>,
        radius: FieldScalar,
        provenance: Provenance,
    ) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(input_err!("point of dimension {} in a {dim}-dimensional pattern", p.len()));
        }
        if radius.is_negative() {
            return Err(input_err!("negative radius {radius}"));
        }
        let r2 = radius.square();
        if let Some(p) = points.iter().find(|p| linalg::norm_sq(p) > r2) {
            return Err(input_err!("point {:?} lies outside the radius {radius}", p));
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(input_err!("duplicate point in pattern"));
        }
        let approx = points.iter().map(|p| super::scheme::approx_vec(p)).collect();
        Ok(PointPattern {
            dim,
            points,
            approx,
            lattice: None,
            radius,
            provenance,
        })
    }

    /// Built by the generator: points are distinct, inside the radius, and
    /// ordered by lattice coordinates.
    pub(crate) fn from_lattice(
        dim: usize,
        points: Vec<Vec<FieldScalar>>,
        approx: Vec<Vec<f64>>,
        frame: LatticeFrame,
        radius: FieldScalar,
        provenance: Provenance,
    ) -> Self {
        PointPattern {
            dim,
            points,
            approx,
            lattice: Some(frame),
            radius,
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<FieldScalar>] {
        &self.points
    }

    pub fn approx(&self) -> &[Vec<f64>] {
        &self.approx
    }

    pub fn lattice(&self) -> Option<&LatticeFrame> {
        self.lattice.as_ref()
    }

    pub fn radius(&self) -> &FieldScalar {
        &self.radius
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn sorted_points(&self) -> Vec<Vec<FieldScalar>> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    pub fn contains(&self, p: &[FieldScalar]) -> bool {
        let a = super::scheme::approx_vec(p);
        self.approx
            .iter()
            .zip(&self.points)
            .any(|(q, exact)| sq_dist_f64(q, &a) < FILTER_MARGIN && exact.as_slice() == p)
    }

    /// Indices of the points `p` with `|p - center| <= r`, decided exactly.
    pub fn indices_within(&self, center: &[FieldScalar], r: &FieldScalar) -> Vec<usize> {
        let c = super::scheme::approx_vec(center);
        let r2 = r.square();
        let r2f = r2.to_f64();
        (0..self.len())
            .filter(|&i| {
                cmp_sq_dist(&self.approx[i], &c, r2f, || {
                    linalg::norm_sq(&linalg::sub(&self.points[i], center)).cmp(&r2)
                }) != Ordering::Greater
            })
            .collect()
    }

    /// The subpattern inside the closed ball of radius `r` about 0, keeping lattice data.
    pub fn restricted(&self, r: &FieldScalar) -> PointPattern {
        let zero = linalg::zeros(self.dim);
        let keep = self.indices_within(&zero, r);
        self.select(&keep, r.clone())
    }

    pub(crate) fn select(&self, keep: &[usize], radius: FieldScalar) -> PointPattern {
        PointPattern {
            dim: self.dim,
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
            approx: keep.iter().map(|&i| self.approx[i].clone()).collect(),
            lattice: self.lattice.as_ref().map(|f| LatticeFrame {
                p1: f.p1.clone(),
                coords: keep.iter().map(|&i| f.coords[i].clone()).collect(),
            }),
            radius,
            provenance: self.provenance.clone(),
        }
    }

    /// `self + t`, keeping only the points inside the new radius.
    pub fn translated(&self, t: &[FieldScalar], radius: FieldScalar) -> Result<PointPattern> {
        let r2 = radius.square();
        let points: Vec<_> = self
            .points
            .iter()
            .map(|p| linalg::add(p, t))
            .filter(|p| linalg::norm_sq(p) <= r2)
            .collect();
        PointPattern::new(self.dim, points, radius, self.provenance.clone())
    }
}

pub(crate) fn sq_dist_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Compares `|a - b|^2` with `r2`, using `exact` only near the threshold.
pub(crate) fn cmp_sq_dist(a: &[f64], b: &[f64], r2: f64, exact: impl FnOnce() -> Ordering) -> Ordering {
    let d = sq_dist_f64(a, b);
    let margin = FILTER_MARGIN * (1.0 + r2);
    if d < r2 - margin {
        Ordering::Less
    } else if d > r2 + margin {
        Ordering::Greater
    } else {
        exact()
    }
}

/// Uniform grid over point approximations for neighbourhood queries.
pub(crate) struct Grid {
    cell: f64,
    cells: BTreeMap<Vec<i64>, Vec<usize>>,
}

impl Grid {
    pub fn new(points: &[Vec<f64>], cell: f64) -> Self {
        let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(p, cell)).or_default().push(i);
        }
        Grid { cell, cells }
    }

    fn key(p: &[f64], cell: f64) -> Vec<i64> {
        p.iter().map(|x| floor_f64(x / cell) as i64).collect()
    }

    /// Indices of points possibly within `r` of `c`.
    pub fn near(&self, c: &[f64], r: f64) -> Vec<usize> {
        let lo: Vec<i64> = c.iter().map(|x| floor_f64((x - r) / self.cell) as i64).collect();
        let hi: Vec<i64> = c.iter().map(|x| floor_f64((x + r) / self.cell) as i64).collect();
        let mut out = Vec::new();
        let mut key = lo.clone();
        loop {
            if let Some(v) = self.cells.get(&key) {
                out.extend_from_slice(v);
            }
            let mut k = 0;
            loop {
                if k == key.len() {
                    out.sort_unstable();
                    return out;
                }
                if key[k] < hi[k] {
                    key[k] += 1;
                    break;
                }
                key[k] = lo[k];
                k += 1;
            }
        }
    }
}

/// `f64::floor` is not available without `std`.
pub(crate) fn floor_f64(x: f64) -> f64 {
    let t = x as i64 as f64;
    if t > x {
        t - 1.0
    } else {
        t
    }
}

pub(crate) fn ceil_f64(x: f64) -> f64 {
    -floor_f64(-x)
}
