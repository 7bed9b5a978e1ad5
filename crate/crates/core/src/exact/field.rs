//! Elements `a + b*sqrt(d)` of a real quadratic field.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{format_rational, parse_rational};
use crate::error::input_err;
use crate::{Error, Result};

/// An exact real number `a + b*sqrt(d)` with rational `a`, `b` and a
/// square-free discriminant `d >= 2`.
///
/// Rational values carry no discriminant (`d` is stored as 0), so a rational
/// combines with scalars of any field. Combining two irrational scalars with
/// different discriminants panics; schemes reject mixed radicals when they
/// are loaded.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    a: BigRational,
    b: BigRational,
    d: u32,
}

pub fn is_square_free(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut k: u32 = 2;
    while (k as u64) * (k as u64) <= d as u64 {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

impl FieldScalar {
    pub fn new(rational: BigRational, radical: BigRational, discriminant: u32) -> Result<Self> {
        if !radical.is_zero() && !is_square_free(discriminant) {
            return Err(input_err!(
                "discriminant {discriminant} is not a square-free integer >= 2"
            ));
        }
        Ok(Self::raw(rational, radical, discriminant))
    }

    fn raw(a: BigRational, b: BigRational, d: u32) -> Self {
        let d = if b.is_zero() { 0 } else { d };
        FieldScalar { a, b, d }
    }

    pub fn zero() -> Self {
        Self::raw(BigRational::zero(), BigRational::zero(), 0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_bigint(value: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(value))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self::raw(value, BigRational::zero(), 0)
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: u32) -> Self {
        assert!(is_square_free(d), "sqrt({d}) is not a quadratic irrational");
        Self::raw(BigRational::zero(), BigRational::one(), d)
    }

    /// `p/q + (r/s)*sqrt(d)`.
    pub fn quadratic(p: i64, q: i64, r: i64, s: i64, d: u32) -> Self {
        let a = BigRational::new(BigInt::from(p), BigInt::from(q));
        let b = BigRational::new(BigInt::from(r), BigInt::from(s));
        Self::new(a, b, d).expect("valid discriminant")
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    /// The discriminant, or `None` for a rational value.
    pub fn discriminant(&self) -> Option<u32> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn common_d(&self, other: &Self) -> u32 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixed radicals sqrt({d}) and sqrt({e})"),
        }
    }

    /// Exact sign of the real number: -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self::raw(self.a.clone(), -&self.b, self.d)
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::raw(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.numer().div_floor(self.a.denom());
        }
        // value = (A + B sqrt d) / C with integers A, B and C > 0
        let c = self.a.denom() * self.b.denom();
        let big_a = self.a.numer() * self.b.denom();
        let big_b = self.b.numer() * self.a.denom();
        let squared: BigUint = (&big_b * &big_b * BigInt::from(self.d))
            .to_biguint()
            .expect("square is nonnegative");
        let root = BigInt::from(squared.sqrt());
        // B sqrt(d) is irrational, so its floor is isqrt or -isqrt - 1.
        let floor_b = if big_b.is_positive() { root } else { -root - 1 };
        (big_a + floor_b).div_floor(&c)
    }

    /// Nearest `f64`, for plotting and floating-point prefilters only.
    pub fn to_f64(&self) -> f64 {
        let a = super::rational::to_f64(&self.a);
        if self.b.is_zero() {
            return a;
        }
        a + super::rational::to_f64(&self.b) * sqrt_f64(self.d)
    }

    fn parse_with(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(input_err!("empty field scalar"));
        }
        let mut rest = compact.as_str();
        let mut acc = FieldScalar::zero();
        let mut first = true;
        while !rest.is_empty() {
            let mut negative = false;
            let mut saw_sign = false;
            while let Some(c) = rest.chars().next() {
                match c {
                    '+' => {}
                    '-' => negative = !negative,
                    _ => break,
                }
                saw_sign = true;
                rest = &rest[1..];
            }
            if !first && !saw_sign {
                return Err(input_err!("expected `+` or `-` in `{text}`"));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            let mut value = parse_term(term, text)?;
            if negative {
                value = -value;
            }
            if value.d != 0 && acc.d != 0 && value.d != acc.d {
                return Err(input_err!("mixed radicals in `{text}`"));
            }
            acc = acc + value;
        }
        Ok(acc)
    }
}

fn parse_term(term: &str, whole: &str) -> Result<FieldScalar> {
    if term.is_empty() {
        return Err(input_err!("dangling sign in `{whole}`"));
    }
    let Some(pos) = term.find("sqrt(") else {
        return Ok(FieldScalar::from_rational(parse_rational(term)?));
    };
    if !term.ends_with(')') {
        return Err(input_err!("unclosed sqrt in `{whole}`"));
    }
    let radicand: u32 = term[pos + 5..term.len() - 1]
        .parse()
        .map_err(|_| input_err!("malformed radicand in `{whole}`"))?;
    if !is_square_free(radicand) {
        return Err(input_err!("radicand {radicand} is not square-free in `{whole}`"));
    }
    let coefficient = match &term[..pos] {
        "" => BigRational::one(),
        prefix => {
            let Some(c) = prefix.strip_suffix('*') else {
                return Err(input_err!("expected `*` before sqrt in `{whole}`"));
            };
            parse_rational(c)?
        }
    };
    FieldScalar::new(BigRational::zero(), coefficient, radicand)
}

fn sign_of(x: &BigRational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn sqrt_f64(d: u32) -> f64 {
    // isqrt(d * 2^104) / 2^52 carries a full double mantissa
    let scaled = BigUint::from(d) << 104u32;
    let root = scaled.sqrt();
    root.to_f64().unwrap_or(f64::NAN) / 4_503_599_627_370_496.0
}

impl FromStr for FieldScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            f.write_str(&format_rational(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                format_rational(&self.a),
                format_rational(&self.b),
                self.d
            )
        }
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b.is_zero() && other.b.is_zero() {
            return self.a.cmp(&other.a);
        }
        (self - other).signum().cmp(&0)
    }
}

impl Default for FieldScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldScalar {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl From<BigRational> for FieldScalar {
    fn from(value: BigRational) -> Self {
        Self::from_rational(value)
    }
}

impl<'a> Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        let d = self.common_d(rhs);
        FieldScalar::raw(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        let d = self.common_d(rhs);
        FieldScalar::raw(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        if self.b.is_zero() {
            return FieldScalar::raw(&self.a * &rhs.a, &self.a * &rhs.b, rhs.d);
        }
        if rhs.b.is_zero() {
            return FieldScalar::raw(&self.a * &rhs.a, &self.b * &rhs.a, self.d);
        }
        let d = self.common_d(rhs);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        FieldScalar::raw(a, b, d)
    }
}

impl<'a> Div<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn div(self, rhs: &FieldScalar) -> FieldScalar {
        let inv = rhs.inverse().expect("division by zero field scalar");
        self * &inv
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::raw(-&self.a, -&self.b, self.d)
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::raw(-self.a, -self.b, self.d)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: &FieldScalar) -> FieldScalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<FieldScalar> for &'a FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, rhs: &FieldScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, rhs: &FieldScalar) {
        *self = &*self - rhs;
    }
}

impl core::iter::Sum for FieldScalar {
    fn sum<I: Iterator<Item = FieldScalar>>(iter: I) -> Self {
        iter.fold(FieldScalar::zero(), |acc, x| acc + x)
    }
}

/// Sign of a field scalar as -1, 0 or +1.
pub fn field_sign(x: &FieldScalar) -> i8 {
    x.signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn s(text: &str) -> FieldScalar {
        text.parse().unwrap()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(field_sign(&FieldScalar::zero()), 0);
        assert_eq!(field_sign(&s("3 - 2*sqrt(2)")), 1);
        assert_eq!(field_sign(&s("1 - 3/4*sqrt(2)")), -1);
        assert_eq!(field_sign(&s("-1 + 3/4*sqrt(2)")), 1);
        assert_eq!(field_sign(&s("-sqrt(5)")), -1);
    }

    #[test]
    fn parse_and_display() {
        let x = s(" 1/2 + -3/4 * sqrt(2) ");
        assert_eq!(x.rational_part(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(x.to_string(), "1/2 + -3/4*sqrt(2)");
        assert_eq!(s("1/2 - 3/4*sqrt(2)"), x);
        assert_eq!(s("sqrt(2)"), FieldScalar::sqrt(2));
        assert_eq!(s("-2/4").to_string(), "-1/2");
        assert_eq!(s("0 + 0*sqrt(2)"), FieldScalar::zero());
        assert!("1 + sqrt(4)".parse::<FieldScalar>().is_err());
        assert!("1 + sqrt(2) + sqrt(3)".parse::<FieldScalar>().is_err());
    }

    #[test]
    fn floor_of_irrationals() {
        assert_eq!(FieldScalar::sqrt(2).floor(), BigInt::from(1));
        assert_eq!((-FieldScalar::sqrt(2)).floor(), BigInt::from(-2));
        assert_eq!(s("1/2 + 1/2*sqrt(5)").floor(), BigInt::from(1));
        assert_eq!(s("7/3").floor(), BigInt::from(2));
        assert_eq!(s("-7/3 + 1/100*sqrt(2)").floor(), BigInt::from(-3));
    }

    #[test]
    fn inverse_and_norm() {
        let phi = s("1/2 + 1/2*sqrt(5)");
        assert_eq!(phi.norm(), BigRational::from_integer((-1).into()));
        assert_eq!(&phi * &phi.inverse().unwrap(), FieldScalar::one());
        assert_eq!(&phi * &phi, &phi + &FieldScalar::one());
    }

    fn scalar() -> impl Strategy<Value = FieldScalar> {
        (-50i64..50, 1i64..12, -50i64..50, 1i64..12)
            .prop_map(|(p, q, r, t)| FieldScalar::quadratic(p, q, r, t, 2))
    }

    proptest! {
        #[test]
        fn sign_is_odd(x in scalar()) {
            let sx = field_sign(&x) as i32;
            prop_assert_eq!(sx * field_sign(&-&x) as i32, -(sx * sx));
            prop_assert!(field_sign(&(&x * &x)) >= 0);
        }

        #[test]
        fn sign_matches_real_embedding(x in scalar()) {
            let approx = x.to_f64();
            if approx.abs() > 1e-9 {
                prop_assert_eq!(field_sign(&x) as f64, approx.signum());
            }
        }

        #[test]
        fn display_round_trips(x in scalar()) {
            prop_assert_eq!(x.to_string().parse::<FieldScalar>().unwrap(), x);
        }

        #[test]
        fn floor_brackets_value(x in scalar()) {
            let f = FieldScalar::from_bigint(x.floor());
            prop_assert!(f <= x);
            prop_assert!(x < &f + &FieldScalar::one());
        }
    }
}
