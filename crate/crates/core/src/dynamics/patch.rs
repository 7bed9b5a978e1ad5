use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cps::{PointPattern, Provenance};
use crate::error::{input_err, reliability_err};
use crate::exact::{linalg, FieldScalar};
use crate::Result;

/// Errors unless `B_r(center)` lies inside the generation ball of `p`.
pub(crate) fn require_cover(p: &PointPattern, center: &[FieldScalar], r: &FieldScalar) -> Result<()> {
    let slack = p.radius() - r;
    if slack.is_negative() || linalg::norm_sq(center) > slack.square() {
        return Err(reliability_err!(
            "ball of radius {r} about {} leaves the generation radius {}",
            crate::cps::fmt_vec(center),
            p.radius()
        ));
    }
    Ok(())
}

/// `(p - center) ∩ B_r(0)`, exactly.
pub fn ball_patch(p: &PointPattern, center: &[FieldScalar], r: &FieldScalar) -> Result<PointPattern> {
    if center.len() != p.dim() {
        return Err(input_err!("center has {} coordinates, pattern dimension {}", center.len(), p.dim()));
    }
    require_cover(p, center, r)?;
    let points = p
        .indices_within(center, r)
        .into_iter()
        .map(|i| linalg::sub(&p.points()[i], center))
        .collect();
    let provenance = Provenance {
        source: alloc::format!("patch of {}", p.provenance().source),
        ..p.provenance().clone()
    };
    PointPattern::new(p.dim(), points, r.clone(), provenance)
}

/// Points of `p` in `B_r(center)`, as sorted lattice coordinates when `p`
/// carries them and sorted exact points otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum PatchKey {
    Lattice(Vec<Vec<i64>>),
    Exact(Vec<Vec<FieldScalar>>),
}

/// Whether two patterns agree on `B_r(center)` (same translate for both).
pub(crate) fn window_key(p: &PointPattern, center: &[FieldScalar], r: &FieldScalar, lattice: bool) -> PatchKey {
    let idx = p.indices_within(center, r);
    match p.lattice() {
        Some(frame) if lattice => {
            let mut v: Vec<Vec<i64>> = idx.iter().map(|&i| frame.coords[i].clone()).collect();
            v.sort();
            PatchKey::Lattice(v)
        }
        _ => {
            let mut v: Vec<Vec<FieldScalar>> = idx.iter().map(|&i| p.points()[i].clone()).collect();
            v.sort();
            PatchKey::Exact(v)
        }
    }
}

/// Lattice coordinates are comparable only when both frames use the same `p1`.
pub(crate) fn shared_lattice(a: &PointPattern, b: &PointPattern) -> bool {
    matches!((a.lattice(), b.lattice()), (Some(x), Some(y)) if x.p1 == y.p1)
}

pub(crate) fn same_window(a: &PointPattern, b: &PointPattern, center: &[FieldScalar], r: &FieldScalar) -> bool {
    let lattice = shared_lattice(a, b);
    window_key(a, center, r, lattice) == window_key(b, center, r, lattice)
}

/// Result of the grid search for the hull metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricBound {
    /// `eps / (eps + 1)` for the best match, or 1 when none was found.
    pub bound: BigRational,
    pub epsilon: Option<BigRational>,
    pub t: Vec<BigRational>,
    pub t_prime: Vec<BigRational>,
    /// Values of `eps` skipped because `1/eps + eps` exceeds a generation radius.
    pub skipped: usize,
    pub tested_pairs: usize,
}

impl MetricBound {
    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::NAN)
    }
}

/// Upper bound on the hull distance: the least `eps/(eps+1)` over
/// `eps = k * step <= max_epsilon` for which some grid vectors `t, t'` with
/// `|t|, |t'| <= eps` give `B_{1/eps}[p1 - t] = B_{1/eps}[p2 - t']`.
pub fn hull_metric_upper(
    p1: &PointPattern,
    p2: &PointPattern,
    step: &BigRational,
    max_epsilon: &BigRational,
) -> Result<MetricBound> {
    if p1.dim() != p2.dim() {
        return Err(input_err!("patterns of dimensions {} and {}", p1.dim(), p2.dim()));
    }
    if !step.is_positive() {
        return Err(input_err!("grid step must be positive, got {step}"));
    }
    let dim = p1.dim();
    let mut skipped = 0;
    let mut tested = 0;
    let mut k = BigRational::one();
    loop {
        let eps = &k * step;
        if &eps > max_epsilon {
            break;
        }
        k += BigRational::one();
        let r = FieldScalar::from_rational(eps.recip());
        let reach = &r + &FieldScalar::from_rational(eps.clone());
        if &reach > p1.radius() || &reach > p2.radius() {
            skipped += 1;
            continue;
        }
        let grid = grid_in_ball(dim, step, &eps);
        let sig = |p: &PointPattern, t: &[BigRational]| -> (Vec<i64>, Vec<Vec<FieldScalar>>) {
            let c: Vec<FieldScalar> = t.iter().cloned().map(FieldScalar::from_rational).collect();
            let mut pts: Vec<Vec<FieldScalar>> = p
                .indices_within(&c, &r)
                .into_iter()
                .map(|i| linalg::sub(&p.points()[i], &c))
                .collect();
            pts.sort_by(|a, b| cmp_approx(a, b));
            let key = pts
                .iter()
                .flat_map(|q| q.iter().map(|x| round_key(x.to_f64())))
                .collect();
            (key, pts)
        };
        let mut left: BTreeMap<Vec<i64>, Vec<(usize, Vec<Vec<FieldScalar>>)>> = BTreeMap::new();
        for (i, t) in grid.iter().enumerate() {
            let (key, pts) = sig(p1, t);
            left.entry(key).or_default().push((i, pts));
        }
        for (j, tp) in grid.iter().enumerate() {
            let (key, mut pts) = sig(p2, tp);
            let Some(cands) = left.get(&key) else { continue };
            pts.sort();
            for (i, lp) in cands {
                tested += 1;
                let mut lp = lp.clone();
                lp.sort();
                if lp == pts {
                    let bound = &eps / (&eps + BigRational::one());
                    return Ok(MetricBound {
                        bound,
                        epsilon: Some(eps),
                        t: grid[*i].clone(),
                        t_prime: grid[j].clone(),
                        skipped,
                        tested_pairs: tested,
                    });
                }
            }
        }
    }
    Ok(MetricBound {
        bound: BigRational::one(),
        epsilon: None,
        t: Vec::new(),
        t_prime: Vec::new(),
        skipped,
        tested_pairs: tested,
    })
}

fn round_key(x: f64) -> i64 {
    let y = x * 1e6;
    (if y >= 0.0 { y + 0.5 } else { y - 0.5 }) as i64
}

fn cmp_approx(a: &[FieldScalar], b: &[FieldScalar]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = round_key(x.to_f64()).cmp(&round_key(y.to_f64()));
        if o.is_ne() {
            return o;
        }
    }
    core::cmp::Ordering::Equal
}

/// Grid vectors `step * z` with `|step * z| <= eps`, ordered by norm then lexicographically.
fn grid_in_ball(dim: usize, step: &BigRational, eps: &BigRational) -> Vec<Vec<BigRational>> {
    let kmax = (eps / step).floor().to_integer().to_i64().unwrap_or(0);
    let eps2 = eps * eps;
    let mut out = Vec::new();
    let mut z = alloc::vec![-kmax; dim];
    loop {
        let v: Vec<BigRational> = z.iter().map(|&c| step * BigRational::from_integer(c.into())).collect();
        let n2: BigRational = v.iter().map(|x| x * x).fold(BigRational::zero(), |a, b| a + b);
        if n2 <= eps2 {
            out.push((n2, v));
        }
        let mut k = 0;
        loop {
            if k == dim {
                out.sort();
                return out.into_iter().map(|(_, v)| v).collect();
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
