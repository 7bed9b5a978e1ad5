use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::patch::{require_cover, same_window, shared_lattice, window_key, PatchKey};
use crate::cps::PointPattern;
use crate::error::input_err;
use crate::exact::{linalg, FieldScalar};
use crate::Result;

/// Outcome of a strong-proximality search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximalSearch {
    /// A translate `t` with `B_R[p1 - t] = B_R[p2 - t]`, if one was found.
    pub witness: Option<Vec<FieldScalar>>,
    pub candidates_checked: usize,
}

/// Candidate translates: the origin, pattern points of `p`, then grid
/// midpoints `(k + 1/2)/4`, all inside the box `[-half_side, half_side]^N`.
pub fn witness_candidates(p: &PointPattern, half_side: &BigRational, seed: Option<u64>) -> Vec<Vec<FieldScalar>> {
    let dim = p.dim();
    let b = FieldScalar::from_rational(half_side.clone());
    let in_box = |v: &[FieldScalar]| v.iter().all(|x| x.abs() <= b);
    let mut out: Vec<Vec<FieldScalar>> = alloc::vec![linalg::zeros(dim)];
    out.extend(p.points().iter().filter(|v| in_box(v)).cloned());
    let kmax = (half_side * BigRational::from_integer(4.into())).floor().to_integer().to_i64().unwrap_or(0);
    let mut z = alloc::vec![-kmax; dim];
    loop {
        let v: Vec<FieldScalar> = z.iter().map(|&k| FieldScalar::ratio(2 * k + 1, 8)).collect();
        if in_box(&v) {
            out.push(v);
        }
        let mut k = 0;
        loop {
            if k == dim {
                if let Some(seed) = seed {
                    out[1..].shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                }
                return out;
            }
            if z[k] < kmax {
                z[k] += 1;
                break;
            }
            z[k] = -kmax;
            k += 1;
        }
    }
}

/// Searches for `t` in the box with `B_R[p1 - t] = B_R[p2 - t]`.
pub fn strong_proximal_witness(
    p1: &PointPattern,
    p2: &PointPattern,
    r: &FieldScalar,
    half_side: &BigRational,
    seed: Option<u64>,
) -> Result<ProximalSearch> {
    if p1.dim() != p2.dim() {
        return Err(input_err!("patterns of dimensions {} and {}", p1.dim(), p2.dim()));
    }
    if half_side.is_negative() {
        return Err(input_err!("negative search box"));
    }
    let corner = alloc::vec![FieldScalar::from_rational(half_side.clone()); p1.dim()];
    require_cover(p1, &corner, r)?;
    require_cover(p2, &corner, r)?;
    let mut checked = 0;
    for t in witness_candidates(p1, half_side, seed) {
        checked += 1;
        if same_window(p1, p2, &t, r) {
            return Ok(ProximalSearch {
                witness: Some(t),
                candidates_checked: checked,
            });
        }
    }
    Ok(ProximalSearch {
        witness: None,
        candidates_checked: checked,
    })
}

/// Symmetric-difference counts and densities on the balls `B_R(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub radii: Vec<FieldScalar>,
    pub counts: Vec<usize>,
    pub densities: Vec<f64>,
}

impl DensityEstimate {
    pub fn is_monotone_decreasing(&self) -> bool {
        self.densities.windows(2).all(|w| w[1] < w[0])
    }
}

/// Volume of the Euclidean `dim`-ball of radius `r`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    const PI: f64 = core::f64::consts::PI;
    let unit = match dim {
        0 => 1.0,
        1 => 2.0,
        _ => {
            let mut v = if dim.is_multiple_of(2) { 1.0 } else { 2.0 };
            let mut n = if dim.is_multiple_of(2) { 2 } else { 3 };
            while n <= dim {
                v *= 2.0 * PI / n as f64;
                n += 2;
            }
            v
        }
    };
    let mut rn = 1.0;
    for _ in 0..dim {
        rn *= r;
    }
    unit * rn
}

pub fn statistical_coincidence(p1: &PointPattern, p2: &PointPattern, radii: &[FieldScalar]) -> Result<DensityEstimate> {
    if p1.dim() != p2.dim() {
        return Err(input_err!("patterns of dimensions {} and {}", p1.dim(), p2.dim()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii.first().is_some_and(|r| r.is_negative()) {
        return Err(input_err!("radii must be nonnegative and strictly increasing"));
    }
    let origin = linalg::zeros(p1.dim());
    let lattice = shared_lattice(p1, p2);
    let mut counts = Vec::with_capacity(radii.len());
    let mut densities = Vec::with_capacity(radii.len());
    for r in radii {
        require_cover(p1, &origin, r)?;
        require_cover(p2, &origin, r)?;
        let count = match (window_key(p1, &origin, r, lattice), window_key(p2, &origin, r, lattice)) {
            (PatchKey::Lattice(a), PatchKey::Lattice(b)) => symmetric_difference(a, b),
            (PatchKey::Exact(a), PatchKey::Exact(b)) => symmetric_difference(a, b),
            _ => unreachable!("both keys use the same representation"),
        };
        counts.push(count);
        densities.push(count as f64 / ball_volume(p1.dim(), r.to_f64()));
    }
    Ok(DensityEstimate {
        radii: radii.to_vec(),
        counts,
        densities,
    })
}

fn symmetric_difference<T: Ord>(a: Vec<T>, b: Vec<T>) -> usize {
    let a: BTreeSet<T> = a.into_iter().collect();
    let b: BTreeSet<T> = b.into_iter().collect();
    a.symmetric_difference(&b).count()
}
