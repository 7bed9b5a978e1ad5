use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::arrangement::{Arrangement, PointType, Sign, SignVector, TransformationType};
use crate::cps::{fmt_vec, torus_reduce};
use crate::error::{input_err, invariant_err};
use crate::exact::{linalg, FieldScalar};
use crate::Result;

use super::monoid::monoid_product;

/// A point `(xi, p)` of the singular extension: `xi` canonical mod Delta and
/// `dom p` equal to the cut type of `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPoint {
    pub xi: Vec<FieldScalar>,
    pub point_type: PointType,
}

impl XiPoint {
    pub fn new(arr: &Arrangement, xi: &[FieldScalar], signs: SignVector) -> Result<Self> {
        let xi = torus_reduce(arr.scheme(), xi);
        let cut = arr.cut_type(&xi)?;
        if signs.domain() != cut {
            return Err(input_err!(
                "point type {signs} has domain {} but the cut type of {} is {cut}",
                signs.domain(),
                fmt_vec(&xi)
            ));
        }
        let point_type = arr
            .make_point_type(signs.clone())?
            .ok_or_else(|| input_err!("point type {signs} has an empty cone"))?;
        Ok(XiPoint { xi, point_type })
    }

    /// Parses `"<xi>;<signs>"`, e.g. `"1/3,0;-***"`.
    pub fn parse(arr: &Arrangement, text: &str) -> Result<Self> {
        let (xi, signs) = split_pair(arr, text)?;
        Self::new(arr, &xi, signs)
    }
}

impl fmt::Display for XiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", join(&self.xi), self.point_type.signs)
    }
}

/// An element `(xi, t)` of the Ellis semigroup of the singular extension,
/// with integer coefficients `z` such that `l_i(xi - p2(z)) = 0` for every
/// index where `t` vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllisElement {
    pub xi: Vec<FieldScalar>,
    pub transformation: TransformationType,
    pub certificate: Vec<BigInt>,
}

impl EllisElement {
    pub fn new(arr: &Arrangement, xi: &[FieldScalar], signs: &SignVector) -> Result<Self> {
        let t = arr
            .transformation_type(signs)
            .ok_or_else(|| input_err!("{signs} is not a transformation type of this scheme"))?;
        if !t.is_effective() {
            return Err(input_err!("transformation type {signs} is not known to be effective"));
        }
        let xi = torus_reduce(arr.scheme(), xi);
        let certificate = arr
            .membership_certificate(t, &xi)?
            .ok_or_else(|| input_err!("{} does not lie in the group of {signs}", fmt_vec(&xi)))?;
        Ok(EllisElement {
            xi,
            transformation: t.clone(),
            certificate,
        })
    }

    pub fn parse(arr: &Arrangement, text: &str) -> Result<Self> {
        let (xi, signs) = split_pair(arr, text)?;
        Self::new(arr, &xi, &signs)
    }

    /// `(gamma, o)` for the internal image of a lattice vector.
    pub fn translation(arr: &Arrangement, z: &[i64]) -> Result<Self> {
        let o = SignVector(alloc::vec![Sign::Zero; arr.len()]);
        Self::new(arr, &arr.scheme().internal(z), &o)
    }

    pub fn signs(&self) -> &SignVector {
        &self.transformation.signs
    }
}

impl fmt::Display for EllisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", join(&self.xi), self.transformation.signs)
    }
}

/// `a,b,...` in the syntax accepted by the parsers.
fn join(v: &[FieldScalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| alloc::format!("{x}")).collect();
    parts.join(",")
}

fn split_pair(arr: &Arrangement, text: &str) -> Result<(Vec<FieldScalar>, SignVector)> {
    let (xi, signs) = text
        .split_once(';')
        .ok_or_else(|| input_err!("expected '<xi>;<signs>', got '{text}'"))?;
    Ok((arr.scheme().parse_internal(xi)?, signs.parse()?))
}

/// `(xi, t)(xi', t') = (xi + xi', t t')` with a fresh certificate.
pub fn ellis_product(arr: &Arrangement, e: &EllisElement, f: &EllisElement) -> Result<EllisElement> {
    let t = monoid_product(arr, &e.transformation, &f.transformation)?;
    let xi = torus_reduce(arr.scheme(), &linalg::add(&e.xi, &f.xi));
    let certificate = arr.membership_certificate(&t, &xi)?.ok_or_else(|| {
        invariant_err!("{} . {}: sum leaves the group of {}", e, f, t.signs)
    })?;
    Ok(EllisElement {
        xi,
        transformation: t,
        certificate,
    })
}

/// The action of `(xi, t)` on `(xi', p)`: the new point type takes `t(i)`
/// where `t` is nonzero and `p(i)` where it vanishes, on the cut type of
/// `xi + xi'`, and `∞` elsewhere.
pub fn ellis_action(arr: &Arrangement, e: &EllisElement, x: &XiPoint) -> Result<XiPoint> {
    let xi = torus_reduce(arr.scheme(), &linalg::add(&e.xi, &x.xi));
    let cut = arr.cut_type(&xi)?;
    let signs = SignVector(
        (0..arr.len())
            .map(|i| {
                if !cut.contains(i) {
                    Sign::Infinity
                } else if e.transformation.signs.get(i) != Sign::Zero {
                    e.transformation.signs.get(i)
                } else {
                    x.point_type.signs.get(i)
                }
            })
            .collect(),
    );
    if signs.domain() != cut {
        return Err(invariant_err!("{e} acting on {x} gives {signs}, whose domain is not {cut}"));
    }
    let point_type = arr
        .make_point_type(signs.clone())?
        .ok_or_else(|| invariant_err!("{e} acting on {x} gives the empty point type {signs}"))?;
    Ok(XiPoint { xi, point_type })
}

/// Exact sample points `p2(z) / q` for `q` in `1..=q_max` and `|z|_inf <= bound`,
/// reduced mod Delta and deduplicated, in a fixed order.
pub fn lattice_samples(arr: &Arrangement, bound: i64, q_max: i64) -> Vec<Vec<FieldScalar>> {
    let s = arr.scheme();
    let n = s.lattice_rank();
    let mut out: Vec<Vec<FieldScalar>> = Vec::new();
    let mut z = alloc::vec![-bound; n];
    loop {
        let g = s.internal(&z);
        for q in 1..=q_max {
            let h = torus_reduce(s, &linalg::scale(&FieldScalar::ratio(1, q), &g));
            if !out.contains(&h) {
                out.push(h);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if z[k] < bound {
                z[k] += 1;
                break;
            }
            z[k] = -bound;
            k += 1;
        }
    }
}

/// Every Ellis element `(xi, t)` over the given sample points, in order.
pub fn compatible_elements(arr: &Arrangement, samples: &[Vec<FieldScalar>]) -> Result<Vec<EllisElement>> {
    let mut out = Vec::new();
    for xi in samples {
        for t in arr.transformation_types().iter().filter(|t| t.is_effective()) {
            if let Some(certificate) = arr.membership_certificate(t, xi)? {
                out.push(EllisElement {
                    xi: xi.clone(),
                    transformation: t.clone(),
                    certificate,
                });
            }
        }
    }
    Ok(out)
}

/// Every point `(xi, p)` over the given samples with a listed point type.
pub fn compatible_points(arr: &Arrangement, samples: &[Vec<FieldScalar>]) -> Result<Vec<XiPoint>> {
    let mut out = Vec::new();
    for xi in samples {
        let cut = arr.cut_type(xi)?;
        for p in arr.point_types().iter().filter(|p| p.domain() == cut) {
            out.push(XiPoint {
                xi: xi.clone(),
                point_type: p.clone(),
            });
        }
    }
    Ok(out)
}

/// A short label such as `Gamma/Delta` for the group attached to a type.
pub fn group_label(t: &TransformationType, dim: usize) -> String {
    if t.cone_dim == 0 {
        String::from("Gamma/Delta")
    } else if t.cone_dim == dim {
        String::from("T_perp")
    } else {
        let zeros: Vec<String> = t.zero_set().iter().map(|i| alloc::format!("{}", i + 1)).collect();
        alloc::format!("(H0_{{{}}} + Gamma)/Delta", zeros.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::octagonal;
    use alloc::string::ToString;
    use num_traits::ToPrimitive;

    fn q(a: i64, b: i64) -> FieldScalar {
        FieldScalar::ratio(a, b)
    }

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    fn arr() -> Arrangement {
        Arrangement::new(&octagonal()).unwrap()
    }

    #[test]
    fn point_construction_checks_the_domain() {
        let a = arr();
        assert!(XiPoint::new(&a, &[q(1, 3), q(0, 1)], sv("-***")).is_ok());
        assert!(XiPoint::new(&a, &[q(1, 3), q(0, 1)], sv("****")).is_err());
        assert!(XiPoint::parse(&a, "1/3,1/5;****").is_ok());
        assert!(XiPoint::parse(&a, "1/3,1/5").is_err());
    }

    #[test]
    fn element_construction_checks_membership() {
        let a = arr();
        assert!(EllisElement::new(&a, &[q(1, 3), q(0, 1)], &sv("0000")).is_err());
        assert!(EllisElement::new(&a, &[q(1, 3), q(0, 1)], &sv("0-++")).is_ok());
        assert!(EllisElement::new(&a, &[q(1, 3), q(1, 5)], &sv("0-++")).is_err());
        let e = EllisElement::parse(&a, "1/3,1/5;+-++").unwrap();
        assert_eq!(e.to_string(), "1/3,-4/5;+-++");
        assert_eq!(EllisElement::parse(&a, &e.to_string()).unwrap(), e);
        let t = EllisElement::translation(&a, &[1, 1, 0, 0]).unwrap();
        let z: Vec<i64> = t.certificate.iter().map(|c| c.to_i64().unwrap()).collect();
        assert!(crate::cps::torus_eq(a.scheme(), &a.scheme().internal(&z), &t.xi));
    }

    #[test]
    fn unit_and_translations() {
        let a = arr();
        let unit = EllisElement::translation(&a, &[0, 0, 0, 0]).unwrap();
        let e = EllisElement::parse(&a, "1/3,1/5;+-++").unwrap();
        assert_eq!(ellis_product(&a, &unit, &e).unwrap(), e);
        let g = EllisElement::translation(&a, &[1, 0, 2, 0]).unwrap();
        let h = EllisElement::translation(&a, &[0, 1, 0, -1]).unwrap();
        let gh = EllisElement::translation(&a, &[1, 1, 2, -1]).unwrap();
        assert_eq!(ellis_product(&a, &g, &h).unwrap(), gh);
    }

    #[test]
    fn half_line_times_sector() {
        let a = arr();
        let e1 = EllisElement::parse(&a, "1/3,0;0-++").unwrap();
        let e2 = EllisElement::parse(&a, "1/7,1/5;++++").unwrap();
        let p = ellis_product(&a, &e1, &e2).unwrap();
        assert_eq!(p.signs().to_string(), "+-++");
        assert_eq!(p.xi, torus_reduce(a.scheme(), &[q(10, 21), q(1, 5)]));
    }

    #[test]
    fn documented_actions() {
        let a = arr();
        let x = XiPoint::parse(&a, "1/3,0;-***").unwrap();
        let flip = EllisElement::parse(&a, "0,0;+-++").unwrap();
        let y = ellis_action(&a, &flip, &x).unwrap();
        assert_eq!(y.xi, x.xi);
        assert_eq!(y.point_type.signs.to_string(), "+***");
        let g = EllisElement::translation(&a, &[2, -1, 0, 1]).unwrap();
        let moved = ellis_action(&a, &g, &x).unwrap();
        assert_eq!(moved.point_type.signs, x.point_type.signs);
        assert_eq!(moved.xi, torus_reduce(a.scheme(), &linalg::add(&x.xi, &g.xi)));
    }

    #[test]
    fn action_law_and_well_definedness_on_samples() {
        let a = arr();
        let samples = lattice_samples(&a, 1, 3);
        let elements = compatible_elements(&a, &samples).unwrap();
        let points = compatible_points(&a, &samples).unwrap();
        assert!(elements.len() >= 100 && points.len() >= 100);
        let step_e = elements.len() / 37 + 1;
        let step_p = points.len() / 11 + 1;
        let mut triples = 0;
        for (k, e) in elements.iter().step_by(step_e).enumerate() {
            for f in elements.iter().skip(k).step_by(step_e * 3).take(4) {
                let ef = ellis_product(&a, e, f).unwrap();
                for x in points.iter().skip(k).step_by(step_p).take(3) {
                    let lhs = ellis_action(&a, &ef, x).unwrap();
                    let rhs = ellis_action(&a, e, &ellis_action(&a, f, x).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs.xi, torus_reduce(a.scheme(), &linalg::add(&e.xi, &linalg::add(&f.xi, &x.xi))));
                    triples += 1;
                }
            }
        }
        assert!(triples >= 100, "{triples}");
    }
}
