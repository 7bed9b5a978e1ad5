//! Delone and Meyer diagnostics on finite patterns.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::pattern::{cmp_sq_dist, sq_dist_f64, Grid, PointPattern, FILTER_MARGIN};
use super::scheme::approx_vec;
use crate::error::input_err;
use crate::exact::linalg;
use crate::exact::FieldScalar;
use crate::Result;

/// Exact identity of a combination of pattern points: integer lattice
/// coordinates when available, exact coordinates otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Key {
    Lattice(Vec<i64>),
    Exact(Vec<FieldScalar>),
}

/// `sum(plus) - sum(minus)` of pattern points, as a [`Key`].
pub(crate) fn combination_key(p: &PointPattern, plus: &[usize], minus: &[usize]) -> Key {
    match p.lattice() {
        Some(frame) => {
            let n = frame.coords.first().map_or(0, Vec::len);
            let mut v = vec![0i64; n];
            for &i in plus {
                v.iter_mut().zip(&frame.coords[i]).for_each(|(a, b)| *a += b);
            }
            for &i in minus {
                v.iter_mut().zip(&frame.coords[i]).for_each(|(a, b)| *a -= b);
            }
            Key::Lattice(v)
        }
        None => Key::Exact(combination(p, plus, minus)),
    }
}

pub(crate) fn combination(p: &PointPattern, plus: &[usize], minus: &[usize]) -> Vec<FieldScalar> {
    let mut v = linalg::zeros(p.dim());
    for &i in plus {
        v = linalg::add(&v, &p.points()[i]);
    }
    for &i in minus {
        v = linalg::sub(&v, &p.points()[i]);
    }
    v
}

fn combination_f64(p: &PointPattern, plus: &[usize], minus: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; p.dim()];
    for &i in plus {
        v.iter_mut().zip(&p.approx()[i]).for_each(|(a, b)| *a += b);
    }
    for &i in minus {
        v.iter_mut().zip(&p.approx()[i]).for_each(|(a, b)| *a -= b);
    }
    v
}

fn norm_f64(v: &[f64]) -> f64 {
    sq_dist_f64(v, &vec![0.0; v.len()]).sqrt_approx()
}

trait SqrtApprox {
    fn sqrt_approx(self) -> f64;
}

impl SqrtApprox for f64 {
    /// Newton iteration; `f64::sqrt` needs `std`.
    fn sqrt_approx(self) -> f64 {
        if self <= 0.0 {
            return 0.0;
        }
        let mut x = if self > 1.0 { self } else { 1.0 };
        for _ in 0..64 {
            let next = 0.5 * (x + self / x);
            if (next - x).abs() <= 1e-15 * x {
                return next;
            }
            x = next;
        }
        x
    }
}

pub(crate) fn sqrt_f64(x: f64) -> f64 {
    x.sqrt_approx()
}

/// Smallest squared distance between two distinct points, exactly.
pub fn min_sq_distance(p: &PointPattern) -> Option<FieldScalar> {
    if p.len() < 2 {
        return None;
    }
    let mut cell = 1.0;
    loop {
        let grid = Grid::new(p.approx(), cell);
        let mut best = f64::INFINITY;
        for i in 0..p.len() {
            for j in grid.near(&p.approx()[i], cell) {
                if j > i {
                    best = best.min(sq_dist_f64(&p.approx()[i], &p.approx()[j]));
                }
            }
        }
        if best <= cell * cell {
            let cutoff = best + FILTER_MARGIN * (1.0 + best);
            let mut exact: Option<FieldScalar> = None;
            for i in 0..p.len() {
                for j in grid.near(&p.approx()[i], cell) {
                    if j > i && sq_dist_f64(&p.approx()[i], &p.approx()[j]) <= cutoff {
                        let d = linalg::norm_sq(&linalg::sub(&p.points()[i], &p.points()[j]));
                        if exact.as_ref().is_none_or(|e| d < *e) {
                            exact = Some(d);
                        }
                    }
                }
            }
            return exact;
        }
        cell *= 2.0;
    }
}

/// Result of the relative-density check on a sample grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    pub sample_points: usize,
    pub uncovered: Vec<Vec<FieldScalar>>,
}

impl CoveringReport {
    pub fn holds(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Checks that every point of `step * Z^N` inside `B_{R - rc}` has a pattern
/// point within distance `rc`.
pub fn covering_check(p: &PointPattern, rc: &FieldScalar, step: &BigRational) -> Result<CoveringReport> {
    if !rc.is_positive() || step <= &BigRational::from_integer(BigInt::from(0)) {
        return Err(input_err!("covering radius and grid step must be positive"));
    }
    let inner = p.radius() - rc;
    if inner.is_negative() {
        return Ok(CoveringReport {
            sample_points: 0,
            uncovered: Vec::new(),
        });
    }
    let stepf = crate::exact::rational::to_f64(step);
    let kmax = (inner.to_f64() / stepf) as i64 + 1;
    let inner2 = inner.square();
    let rc2 = rc.square();
    let rc2f = rc2.to_f64();
    let grid = Grid::new(p.approx(), rc.to_f64().max(0.25));
    let dim = p.dim();
    let mut sample_points = 0;
    let mut uncovered = Vec::new();
    let mut idx = vec![-kmax; dim];
    let step_fs = FieldScalar::from_rational(step.clone());
    loop {
        let g: Vec<FieldScalar> = idx.iter().map(|&k| &step_fs * &FieldScalar::from_integer(k)).collect();
        let gf = approx_vec(&g);
        let inside = cmp_sq_dist(&gf, &vec![0.0; dim], inner2.to_f64(), || linalg::norm_sq(&g).cmp(&inner2));
        if inside != Ordering::Greater {
            sample_points += 1;
            let covered = grid.near(&gf, sqrt_f64(rc2f) + FILTER_MARGIN).into_iter().any(|j| {
                cmp_sq_dist(&p.approx()[j], &gf, rc2f, || {
                    linalg::norm_sq(&linalg::sub(&p.points()[j], &g)).cmp(&rc2)
                }) != Ordering::Greater
            });
            if !covered {
                uncovered.push(g);
            }
        }
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(CoveringReport {
                    sample_points,
                    uncovered,
                });
            }
            if idx[k] < kmax {
                idx[k] += 1;
                break;
            }
            idx[k] = -kmax;
            k += 1;
        }
    }
}

/// Number of translation classes of `r`-patches centred at pattern points
/// whose patch lies inside the generation ball.
pub fn flc_census(p: &PointPattern, r: &FieldScalar) -> usize {
    let reliable = p.radius() - r;
    if reliable.is_negative() {
        return 0;
    }
    let zero = linalg::zeros(p.dim());
    let centres = p.indices_within(&zero, &reliable);
    let grid = Grid::new(p.approx(), r.to_f64().max(0.5));
    let r2 = r.square();
    let r2f = r2.to_f64();
    let mut classes: BTreeSet<Vec<Key>> = BTreeSet::new();
    for &c in &centres {
        let mut patch: Vec<Key> = grid
            .near(&p.approx()[c], r.to_f64() + FILTER_MARGIN)
            .into_iter()
            .filter(|&j| {
                cmp_sq_dist(&p.approx()[j], &p.approx()[c], r2f, || {
                    linalg::norm_sq(&linalg::sub(&p.points()[j], &p.points()[c])).cmp(&r2)
                }) != Ordering::Greater
            })
            .map(|j| combination_key(p, &[j], &[c]))
            .collect();
        patch.sort();
        classes.insert(patch);
    }
    classes.len()
}

/// `F = (P - P - P) ∩ B_K` and the check `(P - P) ∩ B_{R-K} ⊆ P + F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeyerWitness {
    pub f: Vec<Vec<FieldScalar>>,
    pub checked_differences: usize,
    pub failures: Vec<Vec<FieldScalar>>,
    pub reliable_radius: FieldScalar,
    pub warnings: Vec<String>,
}

impl MeyerWitness {
    pub fn inclusion_holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn meyer_witness(p: &PointPattern, k: &FieldScalar) -> Result<MeyerWitness> {
    if p.is_empty() {
        return Err(input_err!("Meyer witness of an empty pattern"));
    }
    if k.is_negative() {
        return Err(input_err!("negative radius K = {k}"));
    }
    let mut warnings = Vec::new();
    let radius = p.radius().clone();
    if (k * &FieldScalar::from_integer(2)) > radius {
        warnings.push(format!(
            "K = {k} exceeds half the generation radius {radius}; F may miss differences realised farther out"
        ));
    }
    let n = p.len();
    let kf = k.to_f64();
    let k2 = k.square();
    let k2f = k2.to_f64();
    let grid = Grid::new(p.approx(), kf.max(0.5));

    // distinct differences that can lie within K of a pattern point
    let reach = radius.to_f64() + kf + 1e-6;
    let mut differences: BTreeMap<Key, (usize, usize)> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if norm_f64(&combination_f64(p, &[a], &[b])) <= reach {
                differences.entry(combination_key(p, &[a], &[b])).or_insert((a, b));
            }
        }
    }

    let reliable_radius = &radius - k;
    let rel2 = reliable_radius.square();
    let rel2f = rel2.to_f64();
    let zero = vec![0.0; p.dim()];
    let mut f: BTreeMap<Key, Vec<FieldScalar>> = BTreeMap::new();
    let mut checked = 0;
    let mut failures = Vec::new();
    for &(a, b) in differences.values() {
        let d = combination_f64(p, &[a], &[b]);
        let mut covered = false;
        for q in grid.near(&d, kf + FILTER_MARGIN) {
            let close = cmp_sq_dist(&p.approx()[q], &d, k2f, || {
                linalg::norm_sq(&combination(p, &[a], &[b, q])).cmp(&k2)
            });
            if close != Ordering::Greater {
                covered = true;
                f.entry(combination_key(p, &[a], &[b, q]))
                    .or_insert_with(|| combination(p, &[a], &[b, q]));
            }
        }
        let testable = !reliable_radius.is_negative()
            && cmp_sq_dist(&d, &zero, rel2f, || linalg::norm_sq(&combination(p, &[a], &[b])).cmp(&rel2))
                != Ordering::Greater;
        if testable {
            checked += 1;
            if !covered {
                failures.push(combination(p, &[a], &[b]));
            }
        }
    }
    let mut f: Vec<Vec<FieldScalar>> = f.into_values().collect();
    f.sort();
    Ok(MeyerWitness {
        f,
        checked_differences: checked,
        failures,
        reliable_radius,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::pattern::Provenance;

    fn square_lattice(r: i64) -> PointPattern {
        let mut pts = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                if x * x + y * y <= r * r {
                    pts.push(vec![FieldScalar::from_integer(x), FieldScalar::from_integer(y)]);
                }
            }
        }
        PointPattern::new(2, pts, FieldScalar::from_integer(r), Provenance::default()).unwrap()
    }

    #[test]
    fn lattice_meyer_witness_has_nine_vectors() {
        let p = square_lattice(10);
        let w = meyer_witness(&p, &FieldScalar::ratio(3, 2)).unwrap();
        assert_eq!(w.f.len(), 9);
        assert!(w.inclusion_holds());
        assert!(w.warnings.is_empty());
    }

    #[test]
    fn single_point_witness() {
        let p = PointPattern::new(2, vec![linalg::zeros(2)], FieldScalar::one(), Provenance::default()).unwrap();
        let w = meyer_witness(&p, &FieldScalar::ratio(1, 2)).unwrap();
        assert_eq!(w.f, vec![linalg::zeros(2)]);
        assert!(w.inclusion_holds());
    }

    #[test]
    fn lattice_geometry() {
        let p = square_lattice(6);
        assert_eq!(min_sq_distance(&p), Some(FieldScalar::one()));
        let half = BigRational::new(BigInt::from(1), BigInt::from(4));
        let rc = FieldScalar::quadratic(0, 1, 1, 2, 2);
        assert!(covering_check(&p, &rc, &half).unwrap().holds());
        let too_small = FieldScalar::ratio(1, 2);
        assert!(!covering_check(&p, &too_small, &half).unwrap().holds());
        assert_eq!(flc_census(&p, &FieldScalar::from_integer(2)), 1);
    }

    #[test]
    fn newton_sqrt() {
        assert!((sqrt_f64(2.0) - core::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(sqrt_f64(0.0), 0.0);
        assert!((sqrt_f64(0.25) - 0.5).abs() < 1e-15);
    }
}
