//! Integer and rational univariate polynomials.
//!
//! Coefficients are stored lowest degree first. The rational helpers in
//! [`qpoly`] work on plain `Vec<BigRational>` and are shared with the
//! unit-disk root counter.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hnf::IntMatrix;
use crate::error::{input_err, unsupported_err};
use crate::Result;

/// Largest degree of an irreducible factor search (after removing rational roots).
pub const MAX_FACTOR_DEGREE: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x - r`
    pub fn linear(root: &BigInt) -> Self {
        Self::new(vec![-root.clone(), BigInt::one()])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// `x^deg p(1/x)`
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coefficients.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        qpoly::eval(&self.to_rational(), x)
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coefficients
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Primitive integer multiple of a rational polynomial with positive leading coefficient.
    pub fn from_rational(p: &[BigRational]) -> Self {
        let p = qpoly::trimmed(p.to_vec());
        if p.is_empty() {
            return Self::new(Vec::new());
        }
        let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().expect("nonempty").is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        Self::new(ints.iter().map(|c| c / &content * &sign).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}")?,
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &IntMatrix) -> Result<IntPolynomial> {
    let n = a.rows();
    if a.cols() != n {
        return Err(input_err!("characteristic polynomial of a {}x{} matrix", n, a.cols()));
    }
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        let am = a.mul(&next);
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        c[n - k] = -trace / BigInt::from(k);
        m = next;
    }
    Ok(IntPolynomial::new(c))
}

/// The monic irreducible factor of `charpoly` having the Perron root as a root,
/// together with an isolating interval `(lo, hi]` for that root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronRoot {
    pub minimal_polynomial: IntPolynomial,
    pub lower: BigRational,
    pub upper: BigRational,
}

impl PerronRoot {
    pub fn approx(&self) -> f64 {
        let mid = (&self.lower + &self.upper) / BigRational::from_integer(BigInt::from(2));
        super::rational::to_f64(&mid)
    }
}

/// Largest real root of `charpoly`, returned with its minimal polynomial.
pub fn minimal_polynomial_of_perron(charpoly: &IntPolynomial) -> Result<IntPolynomial> {
    perron_root(charpoly).map(|r| r.minimal_polynomial)
}

pub fn perron_root(charpoly: &IntPolynomial) -> Result<PerronRoot> {
    if !charpoly.is_monic() {
        return Err(input_err!("characteristic polynomial {charpoly} is not monic"));
    }
    let p = charpoly.to_rational();
    let sf = qpoly::square_free_part(&p);
    let (lower, upper) = qpoly::isolate_largest_real_root(&sf)
        .ok_or_else(|| input_err!("{charpoly} has no real root"))?;
    let mut rest = IntPolynomial::from_rational(&sf);
    for r in integer_roots(&rest) {
        let linear = IntPolynomial::linear(&r);
        let q = BigRational::from_integer(r.clone());
        if lower < q && q <= upper {
            return Ok(PerronRoot {
                minimal_polynomial: linear,
                lower: q.clone(),
                upper: q,
            });
        }
        rest = divide_exact(&rest, &linear);
    }
    let factors = split_without_linear(&rest)?;
    for f in factors {
        let fq = f.to_rational();
        if qpoly::sturm_count(&fq, &lower, &upper) == 1 {
            return Ok(PerronRoot {
                minimal_polynomial: f,
                lower,
                upper,
            });
        }
    }
    Err(crate::error::invariant_err!("Perron root of {charpoly} not found in any factor"))
}

fn divide_exact(p: &IntPolynomial, d: &IntPolynomial) -> IntPolynomial {
    let (q, r) = qpoly::divrem(&p.to_rational(), &d.to_rational());
    debug_assert!(r.is_empty());
    IntPolynomial::from_rational(&q)
}

/// Integer roots of a monic integer polynomial, without multiplicity.
fn integer_roots(p: &IntPolynomial) -> Vec<BigInt> {
    let c = p.coefficients();
    if c.is_empty() {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    if zeros > 0 {
        roots.push(BigInt::zero());
    }
    let a0 = c[zeros].abs();
    for d in divisors(&a0) {
        for cand in [d.clone(), -d] {
            if p.eval(&BigRational::from_integer(cand.clone())).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let other = n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Splits a monic square-free polynomial without rational roots into
/// irreducible factors, supported while every piece has degree at most four.
fn split_without_linear(p: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg > MAX_FACTOR_DEGREE {
        return Err(unsupported_err!(
            "factoring {p}: degree {deg} exceeds the supported limit {MAX_FACTOR_DEGREE}"
        ));
    }
    if deg <= 3 {
        return Ok(vec![p.clone()]);
    }
    match quadratic_factor(p) {
        Some(q) => {
            let other = divide_exact(p, &q);
            Ok(vec![q, other])
        }
        None => Ok(vec![p.clone()]),
    }
}

/// A monic factor `x^2 + b x + c`, searched with `c | a0` and `|b| <= 2B`
/// where `B` is the Cauchy root bound.
fn quadratic_factor(p: &IntPolynomial) -> Option<IntPolynomial> {
    let c = p.coefficients();
    let bound: BigInt = c[..c.len() - 1].iter().map(|x| x.abs()).max().unwrap_or_default() + BigInt::one();
    let b_max: BigInt = &bound * 2u32;
    let pq = p.to_rational();
    for cc in divisors(&c[0].abs()) {
        for c0 in [cc.clone(), -cc] {
            let mut b = -b_max.clone();
            while b <= b_max {
                let cand = IntPolynomial::new(vec![c0.clone(), b.clone(), BigInt::one()]);
                if qpoly::divrem(&pq, &cand.to_rational()).1.is_empty() {
                    return Some(cand);
                }
                b += 1;
            }
        }
    }
    None
}

pub mod qpoly {
    //! Dense rational polynomials as coefficient vectors, lowest degree first.

    use super::*;

    pub type QPoly = Vec<BigRational>;

    pub fn trimmed(mut p: QPoly) -> QPoly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &[BigRational]) -> Option<usize> {
        p.len().checked_sub(1)
    }

    pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
        p.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(p: &[BigRational], q: &[BigRational]) -> QPoly {
        let n = p.len().max(q.len());
        let z = BigRational::zero();
        trimmed(
            (0..n)
                .map(|i| p.get(i).unwrap_or(&z) + q.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(p: &[BigRational], q: &[BigRational]) -> QPoly {
        let n = p.len().max(q.len());
        let z = BigRational::zero();
        trimmed(
            (0..n)
                .map(|i| p.get(i).unwrap_or(&z) - q.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(p: &[BigRational], q: &[BigRational]) -> QPoly {
        if p.is_empty() || q.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        trimmed(out)
    }

    pub fn scale(p: &[BigRational], k: &BigRational) -> QPoly {
        trimmed(p.iter().map(|c| c * k).collect())
    }

    pub fn derivative(p: &[BigRational]) -> QPoly {
        trimmed(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(p: &[BigRational], d: &[BigRational]) -> (QPoly, QPoly) {
        let d = trimmed(d.to_vec());
        let lead = d.last().expect("division by the zero polynomial").clone();
        let mut r = trimmed(p.to_vec());
        if r.len() < d.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - d.len() + 1];
        while r.len() >= d.len() {
            let shift = r.len() - d.len();
            let f = r.last().expect("nonempty") / &lead;
            for (i, c) in d.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            r = trimmed(r);
        }
        (trimmed(q), r)
    }

    pub fn monic(p: &[BigRational]) -> QPoly {
        match p.last() {
            None => Vec::new(),
            Some(l) => scale(p, &l.recip()),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(p: &[BigRational], q: &[BigRational]) -> QPoly {
        let mut a = trimmed(p.to_vec());
        let mut b = trimmed(q.to_vec());
        while !b.is_empty() {
            let r = divrem(&a, &b).1;
            a = b;
            b = r;
        }
        monic(&a)
    }

    pub fn square_free_part(p: &[BigRational]) -> QPoly {
        let g = gcd(p, &derivative(p));
        monic(&divrem(p, &g).0)
    }

    /// Yun's algorithm: returns `(a_1, a_2, ...)` with `p = c * prod a_i^i`,
    /// each `a_i` monic and square-free.
    pub fn square_free_decomposition(p: &[BigRational]) -> Vec<QPoly> {
        let p = trimmed(p.to_vec());
        if degree(&p).unwrap_or(0) == 0 {
            return Vec::new();
        }
        let dp = derivative(&p);
        let a = gcd(&p, &dp);
        let mut b = divrem(&p, &a).0;
        let mut c = divrem(&dp, &a).0;
        let mut d = sub(&c, &derivative(&b));
        let mut out = Vec::new();
        loop {
            let ai = gcd(&b, &d);
            b = divrem(&b, &ai).0;
            c = divrem(&d, &ai).0;
            out.push(ai);
            if degree(&b).unwrap_or(0) == 0 {
                break;
            }
            d = sub(&c, &derivative(&b));
        }
        while out.last().is_some_and(|f| f.len() <= 1) {
            out.pop();
        }
        out
    }

    pub fn sturm_sequence(p: &[BigRational]) -> Vec<QPoly> {
        let mut seq = vec![trimmed(p.to_vec()), derivative(p)];
        while seq.last().is_some_and(|s| !s.is_empty()) {
            let n = seq.len();
            let r = divrem(&seq[n - 2], &seq[n - 1]).1;
            seq.push(r.iter().map(|c| -c).collect());
        }
        seq.pop();
        seq
    }

    fn variations(seq: &[QPoly], x: &BigRational) -> usize {
        let signs: Vec<bool> = seq
            .iter()
            .map(|s| eval(s, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(lo, hi]` of a nonzero polynomial.
    pub fn sturm_count(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
        let seq = sturm_sequence(p);
        variations(&seq, lo).saturating_sub(variations(&seq, hi))
    }

    /// Cauchy bound: every root has modulus strictly below it.
    pub fn root_bound(p: &[BigRational]) -> BigRational {
        let lead = p.last().expect("nonzero polynomial").abs();
        let m = p[..p.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    /// An interval `(lo, hi]` containing the largest real root and no other
    /// root, of width below `2^-40`.
    pub fn isolate_largest_real_root(p: &[BigRational]) -> Option<(BigRational, BigRational)> {
        let p = square_free_part(p);
        if p.len() < 2 {
            return None;
        }
        let seq = sturm_sequence(&p);
        let count = |a: &BigRational, b: &BigRational| variations(&seq, a).saturating_sub(variations(&seq, b));
        let bound = root_bound(&p);
        let mut lo = -bound.clone();
        let mut hi = bound;
        if count(&lo, &hi) == 0 {
            return None;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let eps = BigRational::new(BigInt::one(), BigInt::one() << 40);
        while count(&lo, &hi) > 1 || &hi - &lo > eps {
            let mid = (&lo + &hi) / &two;
            if count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo, hi))
    }

    /// Rational roots of a nonzero polynomial, without multiplicity.
    pub fn rational_roots(p: &[BigRational]) -> Vec<BigRational> {
        let ip = IntPolynomial::from_rational(p);
        let c = ip.coefficients();
        if c.len() < 2 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let zeros = c.iter().take_while(|x| x.is_zero()).count();
        if zeros > 0 {
            roots.push(BigRational::zero());
        }
        let a0 = c[zeros].abs();
        let an = c[c.len() - 1].abs();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                let r = BigRational::new(num.clone(), den);
                for cand in [r.clone(), -r] {
                    if eval(p, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

impl IntPolynomial {
    /// Coefficients as `f64`, lowest degree first.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}
