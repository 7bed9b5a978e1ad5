use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::spectral::{fixed_point_prefix, perron_pisot};
use super::{substitution_matrix, Substitution1D};
use crate::cps::{PointPattern, Provenance};
use crate::error::{input_err, invariant_err, unsupported_err};
use crate::exact::{linalg, FieldScalar};
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Lengths {
    /// Entries of the left Perron eigenvector, scaled so the shortest tile has length 1.
    #[default]
    Natural,
    Unit,
}

/// Where each tile carries its puncture.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PunctureRule {
    /// The tile midpoint.
    #[default]
    Midpoint,
    /// The same distance from the left endpoint in every tile; must be
    /// interior to the shortest tile.
    Offset(FieldScalar),
}

/// Natural tile lengths, exact when the Perron root has degree at most 2.
pub fn natural_lengths(s: &Substitution1D) -> Result<Vec<FieldScalar>> {
    let pp = perron_pisot(s)?;
    let c = pp.minpoly.coefficients();
    let lambda = match c.len() {
        2 => FieldScalar::from_bigint(-&c[0]),
        3 => {
            let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0];
            let (m, d) = square_part(&disc)?;
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let rational = BigRational::from_integer(-&c[1]) * &half;
            FieldScalar::new(rational, BigRational::from_integer(m) * half, d)?
        }
        _ => {
            return Err(unsupported_err!(
                "exact lengths need a Perron root of degree <= 2, got {}",
                pp.minpoly
            ))
        }
    };
    let m = substitution_matrix(s);
    let n = s.len();
    let rows: Vec<Vec<FieldScalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let entry = FieldScalar::from_bigint(m[(j, i)].clone());
                    if i == j {
                        &entry - &lambda
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    let kernel = linalg::null_space(&rows, n);
    let [v] = kernel.as_slice() else {
        return Err(invariant_err!("Perron eigenspace of {s} has dimension {}", kernel.len()));
    };
    let v: Vec<FieldScalar> = v.iter().map(FieldScalar::abs).collect();
    let min = v.iter().min().cloned().filter(|x| x.is_positive()).ok_or_else(|| invariant_err!("Perron vector of {s} is not positive"))?;
    let inv = min.inverse().expect("positive");
    Ok(v.iter().map(|x| x * &inv).collect())
}

/// `disc = m^2 d` with `d` square-free.
fn square_part(disc: &BigInt) -> Result<(BigInt, u32)> {
    let mut d = disc
        .to_u64()
        .filter(|&x| x >= 2)
        .ok_or_else(|| input_err!("discriminant {disc} is not an integer >= 2"))?;
    let mut m = 1u64;
    let mut p = 2u64;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            m *= p;
        }
        p += 1;
    }
    let d = u32::try_from(d).map_err(|_| unsupported_err!("discriminant {disc} is too large"))?;
    Ok((BigInt::from(m), d))
}

/// Punctures of the first `prefix_length` tiles of a one-sided fixed point,
/// laid out from 0.
pub fn punctures_fixed_point(
    s: &Substitution1D,
    prefix_length: usize,
    lengths: Lengths,
    rule: &PunctureRule,
) -> Result<PointPattern> {
    let lengths = match lengths {
        Lengths::Natural => natural_lengths(s)?,
        Lengths::Unit => alloc::vec![FieldScalar::one(); s.len()],
    };
    if let PunctureRule::Offset(c) = rule {
        if !c.is_positive() || lengths.iter().any(|l| c >= l) {
            return Err(input_err!("puncture offset {c} is not interior to every tile"));
        }
    }
    let (word, _) = fixed_point_prefix(s, prefix_length)?;
    let half = FieldScalar::ratio(1, 2);
    let mut left = FieldScalar::zero();
    let mut points = Vec::with_capacity(prefix_length);
    for &a in &word[..prefix_length] {
        let offset = match rule {
            PunctureRule::Midpoint => &lengths[a] * &half,
            PunctureRule::Offset(c) => c.clone(),
        };
        points.push(alloc::vec![&left + &offset]);
        left += &lengths[a];
    }
    let provenance = Provenance {
        source: format!("substitution {s}, {prefix_length} tiles"),
        shift: Vec::new(),
        boundary: "one-sided fixed point from 0".into(),
    };
    PointPattern::new(1, points, left, provenance)
}
