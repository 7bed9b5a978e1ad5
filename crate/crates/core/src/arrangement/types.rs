use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::input_err;
use crate::exact::fm::{LinearForm, Relation};
use crate::exact::linalg;
use crate::exact::FieldScalar;
use crate::{Error, Result};

/// One entry of a sign vector. Point types use `Plus`, `Minus`, `Infinity`;
/// transformation types use `Plus`, `Minus`, `Zero`. The derived order is
/// the table order `+ < - < 0 < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
    Infinity,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Infinity => '*',
        }
    }

    /// The constraint `sign(form(h))` as a linear form, or `None` for `Infinity`.
    pub fn constraint(self, form: &[FieldScalar]) -> Option<LinearForm> {
        match self {
            Sign::Plus => Some(LinearForm::new(form.to_vec(), Relation::Positive)),
            Sign::Minus => Some(LinearForm::new(linalg::neg(form), Relation::Positive)),
            Sign::Zero => Some(LinearForm::new(form.to_vec(), Relation::Equal)),
            Sign::Infinity => None,
        }
    }
}

/// A vector of signs, written as a string such as `0-++` or `*+*-`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    /// Indices whose entry is neither `Zero` nor `Infinity`.
    pub fn domain(&self) -> CutType {
        CutType(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, s)| matches!(s, Sign::Plus | Sign::Minus))
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn cone(&self, forms: &[Vec<FieldScalar>]) -> Vec<LinearForm> {
        self.0
            .iter()
            .zip(forms)
            .filter_map(|(s, f)| s.constraint(f))
            .collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                '0' => Ok(Sign::Zero),
                '*' | '∞' => Ok(Sign::Infinity),
                other => Err(input_err!("unknown sign '{other}' in '{s}'")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignVector(signs))
    }
}

/// A subset of the hyperplane index set, stored sorted and zero-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutType(pub Vec<usize>);

impl CutType {
    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One-based members, as displayed.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for CutType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointType {
    pub signs: SignVector,
    pub cone: Vec<LinearForm>,
    pub witness: Vec<FieldScalar>,
}

impl PointType {
    pub fn domain(&self) -> CutType {
        self.signs.domain()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Effectiveness {
    Effective,
    Ineffective,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationType {
    pub signs: SignVector,
    pub cone: Vec<LinearForm>,
    pub witness: Vec<FieldScalar>,
    /// Dimension of the linear span of the cone.
    pub cone_dim: usize,
    pub effectiveness: Effectiveness,
    pub note: String,
}

impl TransformationType {
    pub fn domain(&self) -> CutType {
        self.signs.domain()
    }

    pub fn is_effective(&self) -> bool {
        self.effectiveness == Effectiveness::Effective
    }

    /// Indices with sign `0`.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.signs.len())
            .filter(|&i| self.signs.get(i) == Sign::Zero)
            .collect()
    }

    pub fn is_full_domain(&self) -> bool {
        self.zero_set().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn sign_vector_round_trip() {
        let v: SignVector = "0-+*".parse().unwrap();
        assert_eq!(v.0, [Sign::Zero, Sign::Minus, Sign::Plus, Sign::Infinity]);
        assert_eq!(v.to_string(), "0-+*");
        assert_eq!("∞+".parse::<SignVector>().unwrap().to_string(), "*+");
        assert!("x".parse::<SignVector>().is_err());
        assert_eq!(v.domain(), CutType(alloc::vec![1, 2]));
        assert_eq!(v.domain().to_string(), "{2,3}");
    }

    #[test]
    fn table_order() {
        assert!(Sign::Plus < Sign::Minus && Sign::Minus < Sign::Zero && Sign::Zero < Sign::Infinity);
    }
}
