//! Small helpers around `BigRational`.

use alloc::string::String;
use core::fmt::Write;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::input_err;
use crate::Result;

pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parses `p`, `p/q`, or a decimal such as `-0.125` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(input_err!("empty rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_int(num)?;
        let den = parse_int(den)?;
        if den.is_zero() {
            return Err(input_err!("zero denominator in `{text}`"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(input_err!("malformed decimal `{text}`"));
        }
        let whole_val = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(whole_digits)?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_val = parse_int(frac)?;
        let mut value = BigRational::new(whole_val * &scale + frac_val, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    Ok(BigRational::from_integer(parse_int(s)?))
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.trim_start_matches(['-', '+']);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(input_err!("malformed integer `{s}`"));
    }
    BigInt::from_str(t.trim_start_matches('+')).map_err(|_| input_err!("malformed integer `{s}`"))
}

/// `p` or `p/q`, denominator omitted when it is one.
pub fn format_rational(value: &BigRational) -> String {
    let mut out = String::new();
    if value.denom().is_one() {
        let _ = write!(out, "{}", value.numer());
    } else {
        let _ = write!(out, "{}/{}", value.numer(), value.denom());
    }
    out
}

pub fn floor(value: &BigRational) -> BigInt {
    value.numer().div_floor(value.denom())
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a BigRational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn to_f64(value: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
