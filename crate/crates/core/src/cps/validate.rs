use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::scheme::SchemeDescription;
use crate::exact::fm::{fm_feasible, LinearForm, Relation};
use crate::exact::linalg::{self, Matrix};
use crate::exact::{FieldScalar, LatticeMembership};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub scheme: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn status(&self, name: &str) -> Option<Status> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn overall(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }
}

/// Lattice of rational coordinates of `form(Gamma)`, one generator per basis vector.
pub(crate) fn form_image_lattice(gamma: &[Vec<FieldScalar>], form: &[FieldScalar]) -> Result<LatticeMembership> {
    let gens: Vec<_> = gamma
        .iter()
        .map(|g| linalg::rational_coordinates(&[linalg::dot(form, g)]))
        .collect();
    LatticeMembership::new(&gens)
}

/// Runs every structural and geometric check on a scheme description.
///
/// Only malformed input is an error; mathematical defects are reported as
/// `FAIL` entries.
pub fn validate_scheme(desc: &SchemeDescription) -> Result<ValidationReport> {
    desc.check_shapes()?;
    let n = desc.lattice_rank();
    let di = desc.internal_dim;
    let mut checks = Vec::new();
    let mut push = |name, status, detail: String| checks.push(Check { name, status, detail });

    let stacked: Matrix = desc.p1.iter().chain(&desc.p2).cloned().collect();
    let det = linalg::determinant(&stacked);
    push(
        "determinant",
        if det.is_zero() { Status::Fail } else { Status::Pass },
        format!("det [p1; p2] = {det}"),
    );

    let columns = |m: &Matrix| (0..n).map(|k| linalg::column(m, k)).collect::<Vec<_>>();
    let p1_coords: Vec<_> = columns(&desc.p1)
        .iter()
        .map(|c| linalg::rational_coordinates(c))
        .collect();
    let q_rank = linalg::rational_rank(&p1_coords);
    push(
        "injectivity",
        if q_rank == n { Status::Pass } else { Status::Fail },
        format!("rational rank of p1 on the lattice basis is {q_rank} of {n}"),
    );

    let gamma = columns(&desc.p2);
    let p2_coords: Vec<_> = gamma.iter().map(|c| linalg::rational_coordinates(c)).collect();
    let gamma_q_rank = linalg::rational_rank(&p2_coords);
    let real_rank = linalg::rank(&desc.p2);
    let (status, detail) = if gamma_q_rank == 2 * di {
        (
            Status::Pass,
            format!("Gamma has rational rank {gamma_q_rank} = 2 x internal_dim, so it is dense"),
        )
    } else if real_rank < di {
        (
            Status::Fail,
            format!("p2 has rank {real_rank} < {di}; the image lies in a proper subspace"),
        )
    } else {
        (
            Status::Warn,
            format!("Gamma has rational rank {gamma_q_rank} < {}; density not decided", 2 * di),
        )
    };
    push("density", status, detail);

    let interior = fm_feasible(&desc.window.constraints(Relation::Positive), di)?;
    push(
        "window_interior",
        if interior.is_feasible() { Status::Pass } else { Status::Fail },
        match interior.witness() {
            Some(w) => format!("interior point {}", fmt_vec(w)),
            None => "window has empty interior".to_string(),
        },
    );

    let recession: Vec<LinearForm> = desc
        .window
        .normals
        .iter()
        .map(|nv| LinearForm::new(linalg::neg(nv), Relation::NonNegative))
        .collect();
    let mut unbounded = None;
    'dirs: for k in 0..di {
        for sign in [1i64, -1] {
            let mut cs = recession.clone();
            let mut e = linalg::zeros(di);
            e[k] = FieldScalar::from_integer(sign);
            cs.push(LinearForm::new(e, Relation::Positive));
            if let Some(w) = fm_feasible(&cs, di)?.witness() {
                unbounded = Some(w.to_vec());
                break 'dirs;
            }
        }
    }
    push(
        "window_bounded",
        if unbounded.is_none() { Status::Pass } else { Status::Fail },
        match unbounded {
            None => "recession cone is {0}".to_string(),
            Some(w) => format!("unbounded along {}", fmt_vec(&w)),
        },
    );

    let delta: Matrix = desc.transversal.iter().map(|d| linalg::mat_int_vec(&desc.p2, d)).collect();
    let delta_rank = linalg::rank(&delta);
    push(
        "transversal",
        if delta_rank == di { Status::Pass } else { Status::Fail },
        format!("Delta = p2(D) has rank {delta_rank} of {di}"),
    );

    let (status, detail) = almost_canonical(desc, &gamma)?;
    push("almost_canonical", status, detail);

    Ok(ValidationReport {
        scheme: desc.name.clone(),
        checks,
    })
}

/// Every window face must lie in some `a_i + ker(l_i) + Gamma`.
fn almost_canonical(desc: &SchemeDescription, gamma: &[Vec<FieldScalar>]) -> Result<(Status, String)> {
    if desc.hyperplanes.is_empty() {
        return Ok((Status::Warn, "no singular hyperplanes declared".to_string()));
    }
    let mut lattices = Vec::new();
    for hp in &desc.hyperplanes {
        lattices.push(form_image_lattice(gamma, &hp.form)?);
    }
    let w = &desc.window;
    for (j, (normal, offset)) in w.normals.iter().zip(&w.offsets).enumerate() {
        let mut found = false;
        for (hp, lat) in desc.hyperplanes.iter().zip(&lattices) {
            let Some(kappa) = parallel_factor(&hp.form, normal) else {
                continue;
            };
            let value = &(&kappa * offset) - &linalg::dot(&hp.form, &hp.offset_point);
            if lat.contains(&linalg::rational_coordinates(&[value]))? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok((
                Status::Warn,
                format!("window face {j} lies in no declared hyperplane family"),
            ));
        }
    }
    Ok((
        Status::Pass,
        format!("all {} window faces lie in declared hyperplane families", w.faces()),
    ))
}

/// `kappa` with `form = kappa * normal`, when the two are parallel.
pub(crate) fn parallel_factor(form: &[FieldScalar], normal: &[FieldScalar]) -> Option<FieldScalar> {
    let k = normal.iter().position(|x| !x.is_zero())?;
    let kappa = &form[k] / &normal[k];
    (linalg::scale(&kappa, normal) == form).then_some(kappa)
}

pub(crate) fn fmt_vec(v: &[FieldScalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::scheme::{fibonacci, octagonal};

    #[test]
    fn builtins_pass_everything() {
        for s in [octagonal(), fibonacci()] {
            let r = validate_scheme(s.description()).unwrap();
            for c in &r.checks {
                assert_eq!(c.status, Status::Pass, "{}: {} {}", s.name(), c.name, c.detail);
            }
        }
    }

    #[test]
    fn zero_internal_projection_fails_density() {
        let mut d = octagonal().description().clone();
        for row in d.p2.iter_mut() {
            for x in row.iter_mut() {
                *x = FieldScalar::zero();
            }
        }
        let r = validate_scheme(&d).unwrap();
        assert_eq!(r.status("density"), Some(Status::Fail));
        assert_eq!(r.status("determinant"), Some(Status::Fail));
    }

    #[test]
    fn rational_internal_projection_is_inconclusive() {
        let mut d = fibonacci().description().clone();
        d.p2 = alloc::vec![alloc::vec![FieldScalar::one(), FieldScalar::ratio(1, 2)]];
        let r = validate_scheme(&d).unwrap();
        assert_eq!(r.status("density"), Some(Status::Warn));
    }

    #[test]
    fn half_plane_window_is_unbounded() {
        let mut d = octagonal().description().clone();
        d.window.normals.truncate(1);
        d.window.offsets.truncate(1);
        let r = validate_scheme(&d).unwrap();
        assert_eq!(r.status("window_bounded"), Some(Status::Fail));
        assert_eq!(r.status("window_interior"), Some(Status::Pass));
    }
}
