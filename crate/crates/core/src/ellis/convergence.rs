use alloc::vec::Vec;
use core::fmt;

use crate::arrangement::{closure, cone_contains, tangent_cone, Arrangement};
use crate::cps::centered_lift;
use crate::exact::{linalg, FieldScalar};
use crate::Result;

use super::elements::EllisElement;

/// Fewer compliant trailing terms than this give an inconclusive verdict.
pub const MIN_TAIL: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceStep {
    /// `xi_n - xi`, lifted with Delta coordinates in `[-1/2, 1/2)`.
    pub difference: Vec<FieldScalar>,
    /// `xi_n - xi` lies in `C_t`.
    pub in_cone: bool,
    /// The tangent cone of `closure(C_{t_n})` at 0 lies in that of
    /// `closure(C_t)` at the difference; false when `in_cone` fails.
    pub tangent_inclusion: bool,
}

impl ConvergenceStep {
    pub fn holds(&self) -> bool {
        self.in_cone && self.tangent_inclusion
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Both conditions hold from `threshold` on, for at least `MIN_TAIL` terms.
    Converges { threshold: usize },
    /// The last term violates a condition.
    Violated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converges { threshold } => write!(f, "CONVERGES from index {threshold}"),
            Verdict::Violated => f.write_str("VIOLATED"),
            Verdict::Inconclusive => f.write_str("INCONCLUSIVE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub steps: Vec<ConvergenceStep>,
    pub verdict: Verdict,
}

/// Evaluates the sequence criterion for `(xi_n, t_n) -> (xi, t)` term by term.
pub fn convergence_check(arr: &Arrangement, sequence: &[EllisElement], limit: &EllisElement) -> Result<ConvergenceReport> {
    let dim = arr.dim();
    let limit_cone = &limit.transformation.cone;
    let limit_closure = closure(limit_cone);
    let mut steps = Vec::with_capacity(sequence.len());
    for e in sequence {
        let difference = centered_lift(arr.scheme(), &linalg::sub(&e.xi, &limit.xi));
        let in_cone = limit_cone.iter().all(|c| c.is_satisfied_by(&difference));
        let tangent_inclusion = in_cone && {
            let outer = tangent_cone(&limit_closure, &difference)?;
            let inner = closure(&e.transformation.cone);
            cone_contains(&outer, &inner, dim)?
        };
        steps.push(ConvergenceStep {
            difference,
            in_cone,
            tangent_inclusion,
        });
    }
    let tail = steps.iter().rev().take_while(|s| s.holds()).count();
    let verdict = if tail >= MIN_TAIL {
        Verdict::Converges {
            threshold: steps.len() - tail,
        }
    } else if steps.last().is_some_and(|s| !s.holds()) {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvergenceReport { steps, verdict })
}
