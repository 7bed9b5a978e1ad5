use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::patch::{shared_lattice, window_key};
use crate::arrangement::{Arrangement, CutType, PointType};
use crate::cps::{generate_model_set, torus_reduce, BoundaryConvention, BoundaryPolicy, PointPattern};
use crate::error::{input_err, unsupported_err};
use crate::exact::{linalg, FieldScalar};
use crate::Result;

/// Default radius at which patches are compared for the coincidence rank.
pub const DEFAULT_PROBE_RADIUS: i64 = 5;

/// One element of a fiber: a point type and the boundary rule realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberElement {
    pub point_type: PointType,
    pub policy: BoundaryPolicy,
}

/// The patterns over a torus point `xi`, one per point type with domain `I(xi)`.
#[derive(Clone, Debug)]
pub struct FiberSet {
    pub xi: Vec<FieldScalar>,
    pub cut_type: CutType,
    pub elements: Vec<FiberElement>,
    arrangement: Arrangement,
}

impl FiberSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Every element generated to `radius`, in element order.
    pub fn patterns(&self, radius: &FieldScalar) -> Result<Vec<PointPattern>> {
        self.elements
            .iter()
            .map(|e| generate_model_set(self.arrangement.scheme(), &self.xi, radius, &e.policy))
            .collect()
    }
}

pub fn fiber_elements(arr: &Arrangement, xi: &[FieldScalar], convention: BoundaryConvention) -> Result<FiberSet> {
    if !arr.is_minimal_complexity() {
        return Err(unsupported_err!("fibers need an arrangement of minimal complexity"));
    }
    if xi.len() != arr.dim() {
        return Err(input_err!("xi has {} coordinates, expected {}", xi.len(), arr.dim()));
    }
    let xi = torus_reduce(arr.scheme(), xi);
    let cut_type = arr.cut_type(&xi)?;
    let elements = arr
        .all_point_types()
        .iter()
        .filter(|p| p.domain() == cut_type)
        .map(|p| FiberElement {
            point_type: p.clone(),
            policy: BoundaryPolicy::ConeLimit {
                direction: p.witness.clone(),
                convention,
            },
        })
        .collect();
    Ok(FiberSet {
        xi,
        cut_type,
        elements,
        arrangement: arr.clone(),
    })
}

/// Number of distinct `r`-patches at 0 among `patterns`.
pub fn distinct_patches(patterns: &[PointPattern], center: &[FieldScalar], r: &FieldScalar) -> usize {
    let lattice = patterns.windows(2).all(|w| shared_lattice(&w[0], &w[1]));
    patterns
        .iter()
        .map(|p| window_key(p, center, r, lattice))
        .collect::<BTreeSet<_>>()
        .len()
}

/// `n_R(xi)`: distinct `R`-patches at 0 across the fiber.
pub fn n_r(fiber: &FiberSet, r: &FieldScalar) -> Result<usize> {
    let patterns = fiber.patterns(r)?;
    Ok(distinct_patches(&patterns, &linalg::zeros(fiber.arrangement.dim()), r))
}

/// Sampled evidence for the coincidence rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceEstimate {
    /// Largest set of patterns pairwise non-coincident on every sampled
    /// translate; an upper bound, since more samples can only lower it.
    pub estimate: usize,
    pub clique: Vec<usize>,
    /// `(i, j, t)` with equal `R`-patches of patterns `i` and `j` at `t`.
    pub witnesses: Vec<(usize, usize, Vec<FieldScalar>)>,
    /// Translates at which every pattern shows the same `R`-patch.
    pub single_patch_translates: usize,
    pub samples: usize,
}

impl CoincidenceEstimate {
    pub fn single_patch_fraction(&self) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.single_patch_translates as f64 / self.samples as f64
    }
}

/// Coincidence-rank evidence over explicit patterns; each must cover every
/// `B_r(t)` for the sampled `t`.
pub fn coincidence_from_patterns(
    patterns: &[PointPattern],
    r: &FieldScalar,
    samples: &[Vec<FieldScalar>],
) -> Result<CoincidenceEstimate> {
    for p in patterns {
        for t in samples {
            super::patch::require_cover(p, t, r)?;
        }
    }
    let n = patterns.len();
    let lattice = patterns.windows(2).all(|w| shared_lattice(&w[0], &w[1]));
    let mut witnesses: Vec<Option<Vec<FieldScalar>>> = alloc::vec![None; n * n];
    let mut single = 0;
    for t in samples {
        let keys: Vec<_> = patterns.iter().map(|p| window_key(p, t, r, lattice)).collect();
        if keys.windows(2).all(|w| w[0] == w[1]) {
            single += 1;
        }
        for i in 0..n {
            for j in i + 1..n {
                if witnesses[i * n + j].is_none() && keys[i] == keys[j] {
                    witnesses[i * n + j] = Some(t.clone());
                }
            }
        }
    }
    let apart = |i: usize, j: usize| witnesses[i.min(j) * n + i.max(j)].is_none();
    let clique = max_clique(n, apart);
    let witnesses = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| witnesses[i * n + j].clone().map(|t| (i, j, t)))
        .collect();
    Ok(CoincidenceEstimate {
        estimate: clique.len(),
        clique,
        witnesses,
        single_patch_translates: single,
        samples: samples.len(),
    })
}

/// Coincidence-rank estimate for a fiber, generating its patterns far
/// enough to cover every sampled ball.
pub fn coincidence_rank_estimate(fiber: &FiberSet, r: &FieldScalar, samples: &[Vec<FieldScalar>]) -> Result<CoincidenceEstimate> {
    let reach = samples
        .iter()
        .map(|t| linalg::norm_sq(t).to_f64())
        .fold(0.0, f64::max);
    let radius = FieldScalar::from_integer(crate::cps::sqrt_f64(reach) as i64 + 1) + r.clone();
    let patterns = fiber.patterns(&radius)?;
    coincidence_from_patterns(&patterns, r, samples)
}

/// Comparison of one fiber element with the window-limit oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCheck {
    pub point_type: PointType,
    /// Whether the oracle patterns for all requested `k` agree with each other.
    pub oracle_stable: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionReport {
    /// The convention that matched the oracle, or the last one tried.
    pub convention: BoundaryConvention,
    pub flipped: bool,
    pub checks: Vec<OracleCheck>,
}

impl ConventionReport {
    pub fn validated(&self) -> bool {
        self.checks.iter().all(|c| c.oracle_stable && c.matches)
    }
}

/// Compares each cone-limit fiber pattern on `B_r` with the exact pattern of
/// the open window `xi + 2^-k c + W` for every `k` in `ks` (largest last). On
/// a mismatch against a stable oracle the convention is flipped once and the
/// comparison repeated.
pub fn validate_convention(arr: &Arrangement, xi: &[FieldScalar], r: &FieldScalar, ks: &[u32]) -> Result<ConventionReport> {
    if ks.is_empty() || ks.iter().any(|&k| k > 62) {
        return Err(input_err!("oracle exponents must be nonempty and at most 62"));
    }
    let run = |convention: BoundaryConvention| -> Result<Vec<OracleCheck>> {
        let fiber = fiber_elements(arr, xi, convention)?;
        fiber
            .elements
            .iter()
            .map(|e| {
                let oracles = ks
                    .iter()
                    .map(|&k| {
                        let eps = FieldScalar::ratio(1, 1i64 << k);
                        let y = linalg::add(&fiber.xi, &linalg::scale(&eps, &e.point_type.witness));
                        generate_model_set(arr.scheme(), &y, r, &BoundaryPolicy::Open).map(|p| p.sorted_points())
                    })
                    .collect::<Result<Vec<_>>>()?;
                let pattern = generate_model_set(arr.scheme(), &fiber.xi, r, &e.policy)?.sorted_points();
                let limit = oracles.last().expect("nonempty exponents");
                Ok(OracleCheck {
                    point_type: e.point_type.clone(),
                    oracle_stable: oracles.iter().all(|o| o == limit),
                    matches: &pattern == limit,
                })
            })
            .collect()
    };
    let forward = BoundaryConvention::Forward;
    let checks = run(forward)?;
    if checks.iter().all(|c| c.matches || !c.oracle_stable) {
        return Ok(ConventionReport {
            convention: forward,
            flipped: false,
            checks,
        });
    }
    Ok(ConventionReport {
        convention: forward.flipped(),
        flipped: true,
        checks: run(forward.flipped())?,
    })
}

/// Largest vertex set in which every pair satisfies `edge`; exhaustive.
fn max_clique(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mut best: Vec<usize> = alloc::vec![0];
    let mut current = Vec::new();
    fn grow(start: usize, n: usize, edge: &dyn Fn(usize, usize) -> bool, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for v in start..n {
            if current.iter().all(|&u| edge(u, v)) {
                current.push(v);
                grow(v + 1, n, edge, current, best);
                current.pop();
            }
        }
    }
    grow(0, n, &edge, &mut current, &mut best);
    best
}

/// `count` translates with coordinates `k/1000` uniform in `[-half_side, half_side]`.
pub fn sample_translates(dim: usize, half_side: i64, count: usize, seed: u64) -> Vec<Vec<FieldScalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = half_side * 1000;
    (0..count)
        .map(|_| (0..dim).map(|_| FieldScalar::ratio(rng.gen_range(-m..=m), 1000)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::{octagonal, Provenance};
    use alloc::string::ToString;
    use alloc::vec;

    fn q(a: i64, b: i64) -> FieldScalar {
        FieldScalar::ratio(a, b)
    }

    #[test]
    fn fiber_sizes() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let size = |xi: Vec<FieldScalar>| fiber_elements(&arr, &xi, BoundaryConvention::Forward).unwrap().len();
        assert_eq!(size(vec![q(1, 3), q(1, 5)]), 1);
        assert_eq!(size(vec![q(1, 3), q(0, 1)]), 2);
        assert_eq!(size(vec![q(1, 2), q(-1, 2)]), 4);
        assert_eq!(size(vec![q(0, 1), q(0, 1)]), 8);
    }

    #[test]
    fn worm_flip_patterns() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let fiber = fiber_elements(&arr, &[q(1, 3), q(0, 1)], BoundaryConvention::Forward).unwrap();
        assert_eq!(fiber.cut_type.to_string(), "{1}");
        let five = FieldScalar::from_integer(5);
        assert_eq!(n_r(&fiber, &five).unwrap(), 2);
        assert_eq!(n_r(&fiber, &FieldScalar::ratio(1, 2)).unwrap(), 1);
        let generic = fiber_elements(&arr, &[q(1, 3), q(1, 5)], BoundaryConvention::Forward).unwrap();
        assert_eq!(n_r(&generic, &five).unwrap(), 1);
    }

    #[test]
    fn forward_convention_matches_the_oracle() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let r = FieldScalar::from_integer(6);
        let report = validate_convention(&arr, &[q(1, 2), q(0, 1)], &r, &[6, 7, 8]).unwrap();
        assert!(!report.flipped);
        assert!(report.validated());
        assert_eq!(report.checks.len(), 2);
        // the flipped convention gives the other element of the pair
        let back = fiber_elements(&arr, &[q(1, 2), q(0, 1)], BoundaryConvention::Backward).unwrap();
        let fwd = fiber_elements(&arr, &[q(1, 2), q(0, 1)], BoundaryConvention::Forward).unwrap();
        let (b, f) = (back.patterns(&r).unwrap(), fwd.patterns(&r).unwrap());
        assert_eq!(b[0].sorted_points(), f[1].sorted_points());
    }

    #[test]
    fn cliques() {
        assert_eq!(max_clique(4, |_, _| false).len(), 1);
        assert_eq!(max_clique(4, |_, _| true).len(), 4);
        assert_eq!(max_clique(5, |a, b| (a + b) % 2 == 1).len(), 2);
        assert!(max_clique(0, |_, _| true).is_empty());
    }

    #[test]
    fn shifted_square_lattices_have_rank_two() {
        let pattern = |off: i64| {
            let r = FieldScalar::from_integer(12);
            let mut pts = Vec::new();
            for x in -13..=13 {
                for y in -13..=13 {
                    let p = vec![&FieldScalar::from_integer(x) + &q(off, 2), &FieldScalar::from_integer(y) + &q(off, 2)];
                    if linalg::norm_sq(&p) <= r.square() {
                        pts.push(p);
                    }
                }
            }
            PointPattern::new(2, pts, r, Provenance::default()).unwrap()
        };
        let ps = [pattern(0), pattern(1)];
        let samples = sample_translates(2, 4, 50, 1);
        let est = coincidence_from_patterns(&ps, &FieldScalar::from_integer(3), &samples).unwrap();
        assert_eq!(est.estimate, 2);
        assert!(est.witnesses.is_empty());
        assert_eq!(est.single_patch_translates, 0);
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_translates(2, 20, 5, 9), sample_translates(2, 20, 5, 9));
        assert_ne!(sample_translates(2, 20, 5, 9), sample_translates(2, 20, 5, 10));
        assert!(sample_translates(2, 20, 50, 9)
            .iter()
            .flatten()
            .all(|x| x.abs() <= FieldScalar::from_integer(20)));
    }
}
