//! Exact Fourier-Motzkin elimination with strict/non-strict bookkeeping.

use alloc::vec::Vec;

use super::field::FieldScalar;
use super::linalg::dot;
use crate::error::input_err;
use crate::Result;

/// How a linear expression is compared with zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `expr = 0`
    Equal,
    /// `expr > 0`
    Positive,
    /// `expr >= 0`
    NonNegative,
}

/// The constraint `coefficients . x + constant  (relation)  0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coefficients: Vec<FieldScalar>,
    pub constant: FieldScalar,
    pub relation: Relation,
}

impl LinearForm {
    pub fn new(coefficients: Vec<FieldScalar>, relation: Relation) -> Self {
        LinearForm {
            coefficients,
            constant: FieldScalar::zero(),
            relation,
        }
    }

    pub fn affine(coefficients: Vec<FieldScalar>, constant: FieldScalar, relation: Relation) -> Self {
        LinearForm {
            coefficients,
            constant,
            relation,
        }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(FieldScalar::is_zero)
    }

    pub fn value(&self, x: &[FieldScalar]) -> FieldScalar {
        &dot(&self.coefficients, x) + &self.constant
    }

    pub fn is_satisfied_by(&self, x: &[FieldScalar]) -> bool {
        holds(self.relation, self.value(x).signum())
    }

    /// The same constraint with `>` relaxed to `>=`.
    pub fn closure(&self) -> Self {
        let relation = match self.relation {
            Relation::Positive => Relation::NonNegative,
            r => r,
        };
        LinearForm {
            relation,
            ..self.clone()
        }
    }

    /// Constraints whose union is the complement of this one.
    pub fn complement(&self) -> Vec<LinearForm> {
        let neg = LinearForm {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
            constant: -&self.constant,
            relation: Relation::Positive,
        };
        match self.relation {
            Relation::Positive => alloc::vec![LinearForm {
                relation: Relation::NonNegative,
                ..neg
            }],
            Relation::NonNegative => alloc::vec![neg],
            Relation::Equal => alloc::vec![
                LinearForm {
                    relation: Relation::Positive,
                    ..self.clone()
                },
                neg
            ],
        }
    }
}

fn holds(relation: Relation, sign: i8) -> bool {
    match relation {
        Relation::Equal => sign == 0,
        Relation::Positive => sign > 0,
        Relation::NonNegative => sign >= 0,
    }
}

/// Outcome of a feasibility query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<FieldScalar>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[FieldScalar]> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides whether the conjunction of `constraints` has a solution in
/// `R^dim`, returning a witness that satisfies every constraint exactly.
pub fn fm_feasible(constraints: &[LinearForm], dim: usize) -> Result<Feasibility> {
    if let Some(bad) = constraints.iter().find(|c| c.dim() != dim) {
        return Err(input_err!(
            "constraint of dimension {} in a {dim}-dimensional system",
            bad.dim()
        ));
    }
    let system: Vec<LinearForm> = constraints.iter().map(normalized).collect();
    let Some(witness) = eliminate(system, dim) else {
        return Ok(Feasibility::Infeasible);
    };
    debug_assert!(constraints.iter().all(|c| c.is_satisfied_by(&witness)));
    Ok(Feasibility::Feasible(witness))
}

/// Scales so that the first nonzero coefficient has absolute value one.
fn normalized(c: &LinearForm) -> LinearForm {
    let Some(lead) = c.coefficients.iter().find(|x| !x.is_zero()) else {
        return c.clone();
    };
    let k = lead.abs().inverse().expect("nonzero");
    LinearForm {
        coefficients: c.coefficients.iter().map(|x| x * &k).collect(),
        constant: &c.constant * &k,
        relation: c.relation,
    }
}

fn dedup(system: &mut Vec<LinearForm>) {
    let mut out: Vec<LinearForm> = Vec::with_capacity(system.len());
    for c in system.drain(..) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    *system = out;
}

fn eliminate(mut system: Vec<LinearForm>, vars: usize) -> Option<Vec<FieldScalar>> {
    // constant constraints are decided immediately
    let mut kept = Vec::with_capacity(system.len());
    for c in system.drain(..) {
        if c.is_trivial() {
            if !holds(c.relation, c.constant.signum()) {
                return None;
            }
        } else {
            kept.push(c);
        }
    }
    system = kept;
    dedup(&mut system);
    if vars == 0 {
        return Some(Vec::new());
    }
    let k = vars - 1;

    if let Some(pos) = system
        .iter()
        .position(|c| c.relation == Relation::Equal && !c.coefficients[k].is_zero())
    {
        let eq = system.swap_remove(pos);
        let inv = eq.coefficients[k].inverse().expect("nonzero");
        // x_k = -(rest + constant) / e_k
        let sub_coeffs: Vec<FieldScalar> = eq.coefficients[..k].iter().map(|c| -(c * &inv)).collect();
        let sub_const = -(&eq.constant * &inv);
        let reduced: Vec<LinearForm> = system
            .iter()
            .map(|c| {
                let a = &c.coefficients[k];
                LinearForm {
                    coefficients: c.coefficients[..k]
                        .iter()
                        .zip(&sub_coeffs)
                        .map(|(x, s)| x + &(a * s))
                        .collect(),
                    constant: &c.constant + &(a * &sub_const),
                    relation: c.relation,
                }
            })
            .map(|c| normalized(&c))
            .collect();
        let mut x = eliminate(reduced, k)?;
        let xk = &dot(&sub_coeffs, &x) + &sub_const;
        x.push(xk);
        return Some(x);
    }

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut next = Vec::new();
    for c in system {
        match c.coefficients[k].signum() {
            0 => next.push(LinearForm {
                coefficients: c.coefficients[..k].to_vec(),
                constant: c.constant,
                relation: c.relation,
            }),
            s => {
                // x_k REL  -(rest + constant) / a, a bound as (coeffs, constant, strict)
                let inv = c.coefficients[k].inverse().expect("nonzero");
                let bound = Bound {
                    coefficients: c.coefficients[..k].iter().map(|x| -(x * &inv)).collect(),
                    constant: -(&c.constant * &inv),
                    strict: c.relation == Relation::Positive,
                };
                if s > 0 {
                    lower.push(bound);
                } else {
                    upper.push(bound);
                }
            }
        }
    }
    for lo in &lower {
        for hi in &upper {
            next.push(normalized(&LinearForm {
                coefficients: hi
                    .coefficients
                    .iter()
                    .zip(&lo.coefficients)
                    .map(|(h, l)| h - l)
                    .collect(),
                constant: &hi.constant - &lo.constant,
                relation: if lo.strict || hi.strict {
                    Relation::Positive
                } else {
                    Relation::NonNegative
                },
            }));
        }
    }
    let mut x = eliminate(next, k)?;
    let xk = choose(&lower, &upper, &x);
    x.push(xk);
    Some(x)
}

struct Bound {
    coefficients: Vec<FieldScalar>,
    constant: FieldScalar,
    strict: bool,
}

fn tightest(bounds: &[Bound], x: &[FieldScalar], want_max: bool) -> Option<FieldScalar> {
    bounds
        .iter()
        .map(|b| &dot(&b.coefficients, x) + &b.constant)
        .reduce(|a, b| if (b > a) == want_max { b } else { a })
}

fn choose(lower: &[Bound], upper: &[Bound], x: &[FieldScalar]) -> FieldScalar {
    let one = FieldScalar::one();
    match (tightest(lower, x, true), tightest(upper, x, false)) {
        (None, None) => FieldScalar::zero(),
        (Some(l), None) => {
            let f = FieldScalar::from_bigint(l.floor());
            &f + &one
        }
        (None, Some(u)) => {
            let c = -FieldScalar::from_bigint((-&u).floor());
            &c - &one
        }
        (Some(l), Some(u)) if l == u => l,
        (Some(l), Some(u)) => {
            // prefer an integer strictly inside the interval
            let candidate = FieldScalar::from_bigint(l.floor()) + one;
            if candidate < u {
                candidate
            } else {
                &(&l + &u) * &FieldScalar::ratio(1, 2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f(x: i64) -> FieldScalar {
        FieldScalar::from_integer(x)
    }

    fn form(c: &[i64], rel: Relation) -> LinearForm {
        LinearForm::new(c.iter().map(|&x| f(x)).collect(), rel)
    }

    #[test]
    fn contradictory_pair() {
        let cs = [form(&[1], Relation::Positive), form(&[-1], Relation::Positive)];
        assert_eq!(fm_feasible(&cs, 1).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn octagonal_half_line_is_feasible() {
        // y = 0, y - x < 0, x > 0, y + x > 0 in coordinates (x, y)
        let cs = [
            form(&[0, 1], Relation::Equal),
            form(&[1, -1], Relation::Positive),
            form(&[1, 0], Relation::Positive),
            form(&[1, 1], Relation::Positive),
        ];
        let res = fm_feasible(&cs, 2).unwrap();
        let w = res.witness().unwrap();
        assert!(w[0].is_positive());
        assert!(w[1].is_zero());
        assert!(cs.iter().all(|c| c.is_satisfied_by(w)));
    }

    #[test]
    fn two_lines_meet_only_at_origin() {
        let cs = [
            form(&[0, 1], Relation::Equal),
            form(&[-1, 1], Relation::Equal),
            form(&[1, 0], Relation::Positive),
            form(&[1, 1], Relation::Positive),
        ];
        assert!(!fm_feasible(&cs, 2).unwrap().is_feasible());
    }

    #[test]
    fn strictness_propagates() {
        // x >= 0, x <= 0 feasible; x > 0, x <= 0 not
        let a = [form(&[1], Relation::NonNegative), form(&[-1], Relation::NonNegative)];
        assert_eq!(fm_feasible(&a, 1).unwrap(), Feasibility::Feasible(vec![f(0)]));
        let b = [form(&[1], Relation::Positive), form(&[-1], Relation::NonNegative)];
        assert!(!fm_feasible(&b, 1).unwrap().is_feasible());
    }

    #[test]
    fn affine_window_interior() {
        // 0 < x < 1/3 with an irrational bound sqrt(2) - 1 < y < 1/2
        let cs = [
            LinearForm::affine(vec![f(1), f(0)], f(0), Relation::Positive),
            LinearForm::affine(vec![f(-1), f(0)], FieldScalar::ratio(1, 3), Relation::Positive),
            LinearForm::affine(vec![f(0), f(1)], f(1) - FieldScalar::sqrt(2), Relation::Positive),
            LinearForm::affine(vec![f(0), f(-1)], FieldScalar::ratio(1, 2), Relation::Positive),
        ];
        let res = fm_feasible(&cs, 2).unwrap();
        assert!(cs.iter().all(|c| c.is_satisfied_by(res.witness().unwrap())));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(fm_feasible(&[form(&[1, 2], Relation::Equal)], 3).is_err());
    }

    #[test]
    fn complement_splits_equalities() {
        let c = form(&[1, -1], Relation::Equal);
        let parts = c.complement();
        assert_eq!(parts.len(), 2);
        let x = [f(2), f(1)];
        assert!(!c.is_satisfied_by(&x));
        assert!(parts.iter().any(|p| p.is_satisfied_by(&x)));
    }
}
