//! Exhaustive model-set enumeration.
//!
//! Candidates `z` come from an integer sweep over the box obtained by pulling
//! the ball and the window box back through `[p1; p2]^-1`; the innermost
//! coordinate is solved for directly. Membership is decided in `f64` when the
//! answer is clear by a wide margin and exactly otherwise.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::pattern::{ceil_f64, cmp_sq_dist, floor_f64, LatticeFrame, PointPattern, Provenance, FILTER_MARGIN};
use super::scheme::{approx_vec, Scheme, Window};
use super::validate::fmt_vec;
use crate::error::{input_err, invariant_err};
use crate::exact::linalg;
use crate::exact::FieldScalar;
use crate::Result;

/// Which limit the cone-limit policy reproduces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BoundaryConvention {
    /// Limit of the windows `y + eps*c + W` as `eps -> 0+`: a point on a face
    /// with outward normal `n` is kept iff `<n, c> >= 0`.
    #[default]
    Forward,
    /// Limit of `y - eps*c + W`: kept iff `<n, c> <= 0`.
    Backward,
}

impl BoundaryConvention {
    pub fn flipped(self) -> Self {
        match self {
            BoundaryConvention::Forward => BoundaryConvention::Backward,
            BoundaryConvention::Backward => BoundaryConvention::Forward,
        }
    }

    fn keeps(self, sign: i8) -> bool {
        match self {
            BoundaryConvention::Forward => sign >= 0,
            BoundaryConvention::Backward => sign <= 0,
        }
    }
}

/// How lattice points whose internal image lies on the window boundary are treated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryPolicy {
    Open,
    Closed,
    /// Boundary points decided by a direction `c` from the cone of a point type.
    ConeLimit {
        direction: Vec<FieldScalar>,
        convention: BoundaryConvention,
    },
}

impl BoundaryPolicy {
    pub fn cone_limit(direction: Vec<FieldScalar>) -> Self {
        BoundaryPolicy::ConeLimit {
            direction,
            convention: BoundaryConvention::Forward,
        }
    }

    pub fn label(&self) -> String {
        match self {
            BoundaryPolicy::Open => "window-open".to_string(),
            BoundaryPolicy::Closed => "window-closed".to_string(),
            BoundaryPolicy::ConeLimit { direction, convention } => {
                format!("cone-limit{} {:?}", fmt_vec(direction), convention)
            }
        }
    }
}

/// Upper limit on swept candidates before the box is declared degenerate.
const MAX_CANDIDATES: f64 = 5e8;

/// `{p1(z) : |p1(z)| <= R, p2(z) in y + W*}` with `W*` chosen by `policy`.
pub fn generate_model_set(
    s: &Scheme,
    y: &[FieldScalar],
    radius: &FieldScalar,
    policy: &BoundaryPolicy,
) -> Result<PointPattern> {
    generate_with_window(s, s.window(), y, radius, policy)
}

/// As [`generate_model_set`] with an explicit window in place of the scheme's.
pub fn generate_with_window(
    s: &Scheme,
    window: &Window,
    y: &[FieldScalar],
    radius: &FieldScalar,
    policy: &BoundaryPolicy,
) -> Result<PointPattern> {
    let (dp, di, n) = (s.physical_dim(), s.internal_dim(), s.lattice_rank());
    if y.len() != di {
        return Err(input_err!("shift has {} coordinates, expected {di}", y.len()));
    }
    if window.normals.iter().any(|v| v.len() != di) || window.normals.len() != window.offsets.len() {
        return Err(input_err!("window does not match internal dimension {di}"));
    }
    if radius.is_negative() {
        return Err(input_err!("negative radius {radius}"));
    }
    if let BoundaryPolicy::ConeLimit { direction, .. } = policy {
        if direction.len() != di {
            return Err(input_err!("cone direction has {} coordinates, expected {di}", direction.len()));
        }
    }
    let vertices = window.vertices(di);
    if vertices.is_empty() {
        return Err(input_err!("window has no vertices"));
    }

    let rf = radius.to_f64();
    let r2 = radius.square();
    let r2f = r2.to_f64();
    let yf = approx_vec(y);
    let mut lo = vec![-rf; n];
    let mut hi = vec![rf; n];
    for c in 0..di {
        let vals = vertices.iter().map(|v| v[c].to_f64());
        lo[dp + c] = vals.clone().fold(f64::INFINITY, f64::min) + yf[c];
        hi[dp + c] = vals.fold(f64::NEG_INFINITY, f64::max) + yf[c];
    }
    for c in 0..n {
        lo[c] -= FILTER_MARGIN;
        hi[c] += FILTER_MARGIN;
    }
    let inv = &s.approx.inverse;
    let mut zlo = vec![0i64; n];
    let mut zhi = vec![0i64; n];
    let mut volume = 1.0;
    for k in 0..n {
        let (mut a, mut b) = (0.0, 0.0);
        for j in 0..n {
            let (u, v) = (inv[k][j] * lo[j], inv[k][j] * hi[j]);
            a += u.min(v);
            b += u.max(v);
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(invariant_err!("unbounded enumeration box"));
        }
        zlo[k] = ceil_f64(a - FILTER_MARGIN) as i64;
        zhi[k] = floor_f64(b + FILTER_MARGIN) as i64;
        volume *= (zhi[k] - zlo[k] + 1).max(0) as f64;
    }
    if volume > MAX_CANDIDATES {
        return Err(invariant_err!("enumeration box of {volume:.3e} candidates is too large"));
    }

    let columns: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut c = s.approx.p1_columns[k].clone();
            c.extend_from_slice(&s.approx.p2_columns[k]);
            c
        })
        .collect();
    // suffix[k][c]: range of sum_{j >= k} z_j col_j[c]
    let mut suffix = vec![vec![(0.0f64, 0.0f64); n]; n + 1];
    for k in (0..n).rev() {
        for c in 0..n {
            let (u, v) = (columns[k][c] * zlo[k] as f64, columns[k][c] * zhi[k] as f64);
            suffix[k][c] = (suffix[k + 1][c].0 + u.min(v), suffix[k + 1][c].1 + u.max(v));
        }
    }

    let sweep = Sweep {
        n,
        lo: &lo,
        hi: &hi,
        zlo: &zlo,
        zhi: &zhi,
        columns: &columns,
        suffix: &suffix,
    };
    let mut candidates = Vec::new();
    let mut z = vec![0i64; n];
    sweep.run(0, &mut z, &mut vec![0.0; n], &mut candidates);

    let normals_f: Vec<Vec<f64>> = window.normals.iter().map(|v| approx_vec(v)).collect();
    let offsets_f: Vec<f64> = window.offsets.iter().map(FieldScalar::to_f64).collect();
    let mut points = Vec::new();
    let mut approx = Vec::new();
    let mut coords = Vec::new();
    let origin = vec![0.0; dp];
    for z in candidates {
        let x_f = combine(&s.approx.p1_columns, &z, dp);
        let in_ball = cmp_sq_dist(&x_f, &origin, r2f, || linalg::norm_sq(&s.physical(&z)).cmp(&r2));
        if in_ball == Ordering::Greater {
            continue;
        }
        let h_f = combine(&s.approx.p2_columns, &z, di);
        let h_rel: Vec<f64> = h_f.iter().zip(&yf).map(|(a, b)| a - b).collect();
        let mut exact_h: Option<Vec<FieldScalar>> = None;
        let mut active = Vec::new();
        let mut outside = false;
        for j in 0..window.faces() {
            let approx_slack: f64 =
                normals_f[j].iter().zip(&h_rel).map(|(a, b)| a * b).sum::<f64>() - offsets_f[j];
            let scale = 1.0 + offsets_f[j].abs();
            let sign = if approx_slack > FILTER_MARGIN * scale {
                1
            } else if approx_slack < -FILTER_MARGIN * scale {
                -1
            } else {
                let h = exact_h.get_or_insert_with(|| linalg::sub(&s.internal(&z), y));
                window.slack(j, h).signum()
            };
            match sign {
                1 => {
                    outside = true;
                    break;
                }
                0 => active.push(j),
                _ => {}
            }
        }
        if outside || !boundary_keeps(policy, window, &active) {
            continue;
        }
        points.push(s.physical(&z));
        approx.push(x_f);
        coords.push(z);
    }
    let frame = LatticeFrame {
        p1: s.description().p1.clone(),
        coords,
    };
    let provenance = Provenance {
        source: s.name().to_string(),
        shift: y.to_vec(),
        boundary: policy.label(),
    };
    Ok(PointPattern::from_lattice(dp, points, approx, frame, radius.clone(), provenance))
}

fn boundary_keeps(policy: &BoundaryPolicy, window: &Window, active: &[usize]) -> bool {
    if active.is_empty() {
        return true;
    }
    match policy {
        BoundaryPolicy::Open => false,
        BoundaryPolicy::Closed => true,
        BoundaryPolicy::ConeLimit { direction, convention } => active
            .iter()
            .all(|&j| convention.keeps(linalg::dot(&window.normals[j], direction).signum())),
    }
}

fn combine(columns: &[Vec<f64>], z: &[i64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (col, &k) in columns.iter().zip(z) {
        if k != 0 {
            for (o, c) in out.iter_mut().zip(col) {
                *o += c * k as f64;
            }
        }
    }
    out
}

struct Sweep<'a> {
    n: usize,
    lo: &'a [f64],
    hi: &'a [f64],
    zlo: &'a [i64],
    zhi: &'a [i64],
    columns: &'a [Vec<f64>],
    suffix: &'a [Vec<(f64, f64)>],
}

impl Sweep<'_> {
    fn run(&self, k: usize, z: &mut Vec<i64>, partial: &mut Vec<f64>, out: &mut Vec<Vec<i64>>) {
        let n = self.n;
        for c in 0..n {
            let (a, b) = self.suffix[k][c];
            if partial[c] + b < self.lo[c] || partial[c] + a > self.hi[c] {
                return;
            }
        }
        if k + 1 == n {
            let (mut a, mut b) = (self.zlo[k] as f64, self.zhi[k] as f64);
            for c in 0..n {
                let col = self.columns[k][c];
                if col.abs() < 1e-12 {
                    continue;
                }
                let (u, v) = ((self.lo[c] - partial[c]) / col, (self.hi[c] - partial[c]) / col);
                a = a.max(u.min(v));
                b = b.min(u.max(v));
            }
            let (a, b) = (ceil_f64(a - FILTER_MARGIN) as i64, floor_f64(b + FILTER_MARGIN) as i64);
            for v in a.max(self.zlo[k])..=b.min(self.zhi[k]) {
                z[k] = v;
                out.push(z.clone());
            }
            return;
        }
        for v in self.zlo[k]..=self.zhi[k] {
            z[k] = v;
            for c in 0..n {
                partial[c] += self.columns[k][c] * v as f64;
            }
            self.run(k + 1, z, partial, out);
            for c in 0..n {
                partial[c] -= self.columns[k][c] * v as f64;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::scheme::{fibonacci, octagonal};
    use alloc::collections::BTreeSet;

    fn f(x: i64) -> FieldScalar {
        FieldScalar::from_integer(x)
    }

    /// Independent brute force over the full integer box, all decisions exact.
    fn brute(s: &Scheme, y: &[FieldScalar], r: i64, closed: bool, bound: i64) -> BTreeSet<Vec<FieldScalar>> {
        let n = s.lattice_rank();
        let mut out = BTreeSet::new();
        let total = (2 * bound + 1).pow(n as u32);
        for idx in 0..total {
            let mut rem = idx;
            let z: Vec<i64> = (0..n)
                .map(|_| {
                    let v = rem % (2 * bound + 1) - bound;
                    rem /= 2 * bound + 1;
                    v
                })
                .collect();
            let x = s.physical(&z);
            if linalg::norm_sq(&x) > f(r * r) {
                continue;
            }
            let h = linalg::sub(&s.internal(&z), y);
            let inside = if closed {
                s.window().contains_closed(&h)
            } else {
                s.window().contains_open(&h)
            };
            if inside {
                out.insert(x);
            }
        }
        out
    }

    #[test]
    fn octagonal_matches_brute_force() {
        let s = octagonal();
        let y = vec![FieldScalar::ratio(1, 5), FieldScalar::ratio(1, 7)];
        let p = generate_model_set(&s, &y, &f(3), &BoundaryPolicy::Closed).unwrap();
        let expected = brute(&s, &y, 3, true, 4);
        let got: BTreeSet<_> = p.points().iter().cloned().collect();
        assert_eq!(got, expected);
        assert!(!got.is_empty());
    }

    #[test]
    fn singular_shift_open_and_closed_differ() {
        let s = octagonal();
        let y = vec![f(0), f(0)];
        let open = generate_model_set(&s, &y, &f(3), &BoundaryPolicy::Open).unwrap();
        let closed = generate_model_set(&s, &y, &f(3), &BoundaryPolicy::Closed).unwrap();
        let brute_open = brute(&s, &y, 3, false, 4);
        let brute_closed = brute(&s, &y, 3, true, 4);
        assert_eq!(open.points().iter().cloned().collect::<BTreeSet<_>>(), brute_open);
        assert_eq!(closed.points().iter().cloned().collect::<BTreeSet<_>>(), brute_closed);
        assert!(open.len() < closed.len());
    }

    #[test]
    fn fibonacci_from_origin() {
        let s = fibonacci();
        let p = generate_model_set(&s, &[f(0)], &f(6), &BoundaryPolicy::Closed).unwrap();
        let phi = FieldScalar::quadratic(1, 2, 1, 2, 5);
        let one = FieldScalar::one();
        let positive: Vec<_> = p.points().iter().filter(|v| !v[0].is_negative()).map(|v| v[0].clone()).collect();
        let mut sorted = positive.clone();
        sorted.sort();
        let expected = [f(0),
            phi.clone(),
            &phi + &one,
            &(&phi * &f(2)) + &one,
            &(&phi * &f(3)) + &one];
        assert_eq!(&sorted[..5], &expected[..]);
    }

    #[test]
    fn output_is_in_lattice_order() {
        let s = octagonal();
        let p = generate_model_set(&s, &[FieldScalar::ratio(1, 3), f(0)], &f(4), &BoundaryPolicy::Open).unwrap();
        let coords = &p.lattice().unwrap().coords;
        assert!(coords.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_shift_dimension() {
        let s = octagonal();
        assert!(generate_model_set(&s, &[f(0)], &f(2), &BoundaryPolicy::Open).is_err());
    }
}
