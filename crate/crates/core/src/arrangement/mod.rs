//! The singular hyperplane arrangement of an almost canonical scheme: cut
//! types, point types, transformation types and their cones.

mod cones;
mod types;

pub use cones::{closure, cone_contains, equality_span_dim, tangent_cone};
pub use types::{CutType, Effectiveness, PointType, Sign, SignVector, TransformationType};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cps::{form_image_lattice, torus_reduce, validate_scheme, Scheme, Status};
use crate::error::invariant_err;
use crate::exact::fm::{fm_feasible, Feasibility, LinearForm};
use crate::exact::{linalg, FieldScalar, LatticeMembership};
use crate::Result;

/// Cut type of a torus point, decided by one lattice membership test per
/// hyperplane family. Prefer [`Arrangement::cut_type`] for repeated queries.
pub fn cut_type(s: &Scheme, xi: &[FieldScalar]) -> Result<CutType> {
    let lattices = form_lattices(s)?;
    cut_type_with(s, &lattices, xi)
}

fn form_lattices(s: &Scheme) -> Result<Vec<LatticeMembership>> {
    let gamma = s.gamma_generators();
    s.hyperplanes()
        .iter()
        .map(|h| form_image_lattice(&gamma, &h.form))
        .collect()
}

fn cut_type_with(s: &Scheme, lattices: &[LatticeMembership], xi: &[FieldScalar]) -> Result<CutType> {
    let mut members = Vec::new();
    for (i, (h, lat)) in s.hyperplanes().iter().zip(lattices).enumerate() {
        let v = linalg::dot(&h.form, &linalg::sub(xi, &h.offset_point));
        if lat.contains(&linalg::rational_coordinates(&[v]))? {
            members.push(i);
        }
    }
    Ok(CutType(members))
}

/// Every sign vector over `alphabet`, in lexicographic order.
fn sign_vectors(alphabet: [Sign; 3], len: usize) -> Vec<SignVector> {
    let mut out = vec![SignVector(Vec::new())];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                alphabet.iter().map(move |s| {
                    let mut w = v.0.clone();
                    w.push(*s);
                    SignVector(w)
                })
            })
            .collect();
    }
    out
}

/// The arrangement of a scheme with every table precomputed.
#[derive(Clone, Debug)]
pub struct Arrangement {
    scheme: Scheme,
    forms: Vec<Vec<FieldScalar>>,
    lattices: Vec<LatticeMembership>,
    cut_types: Vec<CutType>,
    all_point_types: Vec<PointType>,
    point_types: Vec<PointType>,
    transformation_types: Vec<TransformationType>,
}

impl Arrangement {
    pub fn new(scheme: &Scheme) -> Result<Self> {
        let forms: Vec<_> = scheme.hyperplanes().iter().map(|h| h.form.clone()).collect();
        let lattices = form_lattices(scheme)?;
        let mut arr = Arrangement {
            scheme: scheme.clone(),
            forms,
            lattices,
            cut_types: Vec::new(),
            all_point_types: Vec::new(),
            point_types: Vec::new(),
            transformation_types: Vec::new(),
        };
        arr.cut_types = arr.census()?;
        arr.all_point_types = arr.feasible_point_types()?;
        let realized: BTreeSet<&CutType> = arr.cut_types.iter().collect();
        arr.point_types = arr
            .all_point_types
            .iter()
            .filter(|p| realized.contains(&p.domain()))
            .cloned()
            .collect();
        arr.transformation_types = arr.feasible_transformation_types()?;
        Ok(arr)
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn forms(&self) -> &[Vec<FieldScalar>] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.scheme.internal_dim()
    }

    pub fn cut_type(&self, xi: &[FieldScalar]) -> Result<CutType> {
        cut_type_with(&self.scheme, &self.lattices, xi)
    }

    /// Realized cut types, ordered by size and then members.
    pub fn cut_types(&self) -> &[CutType] {
        &self.cut_types
    }

    /// Point types whose domain is a realized cut type.
    pub fn point_types(&self) -> &[PointType] {
        &self.point_types
    }

    /// Every sign vector over `{+, -, *}` with a nonempty cone.
    pub fn all_point_types(&self) -> &[PointType] {
        &self.all_point_types
    }

    pub fn transformation_types(&self) -> &[TransformationType] {
        &self.transformation_types
    }

    pub fn point_type(&self, signs: &SignVector) -> Option<&PointType> {
        self.all_point_types.iter().find(|p| &p.signs == signs)
    }

    pub fn transformation_type(&self, signs: &SignVector) -> Option<&TransformationType> {
        self.transformation_types.iter().find(|t| &t.signs == signs)
    }

    pub fn transformation_index(&self, signs: &SignVector) -> Option<usize> {
        self.transformation_types.iter().position(|t| &t.signs == signs)
    }

    /// All transformation types are effective.
    pub fn is_minimal_complexity(&self) -> bool {
        self.transformation_types.iter().all(TransformationType::is_effective)
    }

    /// A point type with the given signs, checked for feasibility.
    pub fn make_point_type(&self, signs: SignVector) -> Result<Option<PointType>> {
        self.check_len(&signs)?;
        if signs.0.contains(&Sign::Zero) {
            return Err(crate::error::input_err!("point type '{signs}' uses the sign 0"));
        }
        let cone = signs.cone(&self.forms);
        Ok(match fm_feasible(&cone, self.dim())? {
            Feasibility::Feasible(witness) => Some(PointType { signs, cone, witness }),
            Feasibility::Infeasible => None,
        })
    }

    fn check_len(&self, signs: &SignVector) -> Result<()> {
        if signs.len() != self.len() {
            return Err(crate::error::input_err!(
                "sign vector '{signs}' has {} entries, the arrangement has {}",
                signs.len(),
                self.len()
            ));
        }
        Ok(())
    }

    fn census(&self) -> Result<Vec<CutType>> {
        let s = &self.scheme;
        let n = s.lattice_rank();
        let mut samples: Vec<Vec<FieldScalar>> = Vec::new();
        let mut z = vec![-1i64; n];
        loop {
            let g = s.internal(&z);
            for q in 1..=3 {
                samples.push(linalg::scale(&FieldScalar::ratio(1, q), &g));
            }
            if !advance(&mut z, -1, 1) {
                break;
            }
        }
        samples.extend(s.hyperplanes().iter().map(|h| h.offset_point.clone()));
        samples.push(
            (0..s.internal_dim())
                .map(|k| FieldScalar::ratio(1, 2 * k as i64 + 3))
                .collect(),
        );
        let mut found = BTreeSet::new();
        for h in samples {
            found.insert(self.cut_type(&torus_reduce(s, &h))?);
        }
        let mut out: Vec<CutType> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn feasible_point_types(&self) -> Result<Vec<PointType>> {
        let mut out = Vec::new();
        for signs in sign_vectors([Sign::Plus, Sign::Minus, Sign::Infinity], self.len()) {
            if let Some(p) = self.make_point_type(signs)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    fn feasible_transformation_types(&self) -> Result<Vec<TransformationType>> {
        let density = validate_scheme(self.scheme.description())?.status("density");
        let mut out = Vec::new();
        for signs in sign_vectors([Sign::Plus, Sign::Minus, Sign::Zero], self.len()) {
            let cone = signs.cone(&self.forms);
            let Feasibility::Feasible(witness) = fm_feasible(&cone, self.dim())? else {
                continue;
            };
            let cone_dim = equality_span_dim(&cone, self.dim());
            let (effectiveness, note) = if cone_dim == 0 {
                (Effectiveness::Effective, String::from("zero cone"))
            } else if cone_dim == self.dim() {
                match density {
                    Some(Status::Pass) => (Effectiveness::Effective, String::from("Gamma is dense")),
                    _ => (Effectiveness::Unsupported, String::from("density of Gamma undecided")),
                }
            } else if cone_dim == 1 {
                self.line_effectiveness(&signs, &witness)?
            } else {
                (
                    Effectiveness::Unsupported,
                    format!("cone of dimension {cone_dim} is neither a line nor full"),
                )
            };
            out.push(TransformationType {
                signs,
                cone,
                witness,
                cone_dim,
                effectiveness,
                note,
            });
        }
        if !out.iter().any(|t| t.signs.0.iter().all(|s| *s == Sign::Zero)) {
            return Err(invariant_err!("the zero transformation type is missing"));
        }
        Ok(out)
    }

    /// Joint lattice of `(l_i(gamma))_{i in zeros}` over the generators of Gamma.
    pub(crate) fn joint_lattice(&self, zeros: &[usize]) -> Result<LatticeMembership> {
        let gens: Vec<_> = self
            .scheme
            .gamma_generators()
            .iter()
            .map(|g| self.joint_coordinates(zeros, g))
            .collect();
        LatticeMembership::new(&gens)
    }

    pub(crate) fn joint_coordinates(&self, zeros: &[usize], h: &[FieldScalar]) -> Vec<num_rational::BigRational> {
        let values: Vec<_> = zeros.iter().map(|&i| linalg::dot(&self.forms[i], h)).collect();
        linalg::rational_coordinates(&values)
    }

    /// A line through 0 meets Gamma densely iff the points of Gamma on it
    /// have parameters of rational rank at least two.
    fn line_effectiveness(&self, signs: &SignVector, direction: &[FieldScalar]) -> Result<(Effectiveness, String)> {
        let zeros: Vec<usize> = (0..signs.len()).filter(|&i| signs.get(i) == Sign::Zero).collect();
        let kernel = self.joint_lattice(&zeros)?.relations();
        let j = direction
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| invariant_err!("zero witness for a line cone"))?;
        let mut params = Vec::new();
        for z in &kernel {
            let z: Vec<i64> = z
                .iter()
                .map(|c| c.to_i64().ok_or_else(|| invariant_err!("kernel coefficient too large")))
                .collect::<Result<_>>()?;
            let g = self.scheme.internal(&z);
            let t = &g[j] / &direction[j];
            if linalg::scale(&t, direction) != g {
                return Err(invariant_err!("lattice kernel vector leaves the line"));
            }
            params.push(linalg::rational_coordinates(&[t]));
        }
        let rank = linalg::rational_rank(&params);
        Ok(if rank >= 2 {
            (Effectiveness::Effective, format!("Gamma meets the line in rank {rank}"))
        } else {
            (Effectiveness::Ineffective, format!("Gamma meets the line discretely (rank {rank})"))
        })
    }

    /// Whether `xi` lies in `(span C_t + Gamma) / Delta`; returns integer
    /// coefficients `z` with `l_i(xi - p2(z)) = 0` for every zero index.
    pub fn membership_certificate(&self, t: &TransformationType, xi: &[FieldScalar]) -> Result<Option<Vec<BigInt>>> {
        let zeros = t.zero_set();
        if zeros.is_empty() {
            return Ok(Some(vec![BigInt::from(0); self.scheme.lattice_rank()]));
        }
        let lattice = self.joint_lattice(&zeros)?;
        lattice.coefficients(&self.joint_coordinates(&zeros, xi))
    }

    /// The cone `C_t` used in geometric tests: the transformation cone
    /// itself, which equals the effective cone in the minimal-complexity case.
    pub fn cone_of(&self, t: &TransformationType) -> Vec<LinearForm> {
        t.cone.clone()
    }
}

/// Odometer step over `[lo, hi]^n`; false after the last vector.
fn advance(z: &mut [i64], lo: i64, hi: i64) -> bool {
    for x in z.iter_mut() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::{fibonacci, octagonal};
    use alloc::string::ToString;
    use alloc::vec::Vec;

    fn q(a: i64, b: i64) -> FieldScalar {
        FieldScalar::ratio(a, b)
    }

    fn sv(s: &str) -> SignVector {
        s.parse().unwrap()
    }

    #[test]
    fn octagonal_cut_types() {
        let s = octagonal();
        let arr = Arrangement::new(&s).unwrap();
        let c = |v: Vec<FieldScalar>| arr.cut_type(&torus_reduce(&s, &v)).unwrap().to_string();
        assert_eq!(c(vec![q(0, 1), q(0, 1)]), "{1,2,3,4}");
        assert_eq!(c(vec![q(1, 2), q(-1, 2)]), "{2,4}");
        assert_eq!(c(vec![q(0, 1), FieldScalar::quadratic(0, 1, 1, 2, 2)]), "{1,3}");
        assert_eq!(c(vec![q(1, 3), q(0, 1)]), "{1}");
        assert_eq!(c(vec![q(1, 3), q(1, 5)]), "{}");
        let names: Vec<_> = arr.cut_types().iter().map(ToString::to_string).collect();
        assert_eq!(
            names,
            ["{}", "{1}", "{2}", "{3}", "{4}", "{1,3}", "{2,4}", "{1,2,3,4}"]
        );
        // the free function agrees
        assert_eq!(cut_type(&s, &[q(1, 3), q(0, 1)]).unwrap().to_string(), "{1}");
    }

    #[test]
    fn octagonal_point_types() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        assert_eq!(arr.all_point_types().len(), 65);
        assert_eq!(arr.point_types().len(), 25);
        let count = |d: &str| {
            arr.point_types()
                .iter()
                .filter(|p| p.domain().to_string() == d)
                .count()
        };
        assert_eq!(count("{1}"), 2);
        assert_eq!(count("{2,4}"), 4);
        assert_eq!(count("{1,2,3,4}"), 8);
        assert_eq!(count("{}"), 1);
        assert!(arr.point_type(&sv("****")).is_some());
        for p in arr.all_point_types() {
            assert!(p.cone.iter().all(|c| c.is_satisfied_by(&p.witness)));
        }
        // + < - < * ordering
        assert_eq!(arr.point_types()[0].signs.to_string(), "++++");
    }

    #[test]
    fn octagonal_transformation_types() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let ts = arr.transformation_types();
        assert_eq!(ts.len(), 17);
        assert_eq!(ts.iter().filter(|t| t.cone_dim == 2).count(), 8);
        assert_eq!(ts.iter().filter(|t| t.cone_dim == 1).count(), 8);
        let o = arr.transformation_type(&sv("0000")).unwrap();
        assert_eq!(o.cone_dim, 0);
        assert!(ts.iter().all(TransformationType::is_effective));
        assert!(arr.is_minimal_complexity());
        let axis = arr.transformation_type(&sv("0-++")).unwrap();
        assert!(axis.witness[0].is_positive() && axis.witness[1].is_zero());
        for t in ts {
            assert!(t.cone.iter().all(|c| c.is_satisfied_by(&t.witness)));
        }
    }

    #[test]
    fn same_domain_point_cones_are_disjoint() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let ps = arr.point_types();
        for (a, p) in ps.iter().enumerate() {
            for r in &ps[a + 1..] {
                if p.domain() == r.domain() {
                    let mut both = p.cone.clone();
                    both.extend(r.cone.iter().cloned());
                    assert!(!fm_feasible(&both, 2).unwrap().is_feasible());
                }
            }
        }
    }

    #[test]
    fn full_domain_cones_cover_a_grid() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let full: Vec<_> = arr.point_types().iter().filter(|p| p.domain().len() == 4).collect();
        for x in -3..=3 {
            for y in -3..=3 {
                let h = [q(x, 2), q(y, 3)];
                let on_plane = arr.forms().iter().any(|f| linalg::dot(f, &h).is_zero());
                let hits = full
                    .iter()
                    .filter(|p| p.cone.iter().all(|c| c.is_satisfied_by(&h)))
                    .count();
                assert_eq!(hits, usize::from(!on_plane), "sample ({x}/2, {y}/3)");
            }
        }
    }

    #[test]
    fn cut_type_is_gamma_invariant() {
        let s = octagonal();
        let arr = Arrangement::new(&s).unwrap();
        let samples = [
            vec![q(1, 3), q(0, 1)],
            vec![q(1, 2), q(-1, 2)],
            vec![q(1, 3), q(1, 5)],
            vec![q(0, 1), FieldScalar::quadratic(0, 1, 1, 2, 2)],
        ];
        let shifts: [[i64; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [1, -2, 3, 1], [0, 0, -1, 5]];
        for h in &samples {
            let base = arr.cut_type(&torus_reduce(&s, h)).unwrap();
            for z in &shifts {
                let moved = torus_reduce(&s, &linalg::add(h, &s.internal(z)));
                assert_eq!(arr.cut_type(&moved).unwrap(), base);
            }
        }
    }

    #[test]
    fn fibonacci_arrangement() {
        let arr = Arrangement::new(&fibonacci()).unwrap();
        assert_eq!(arr.cut_types().len(), 2);
        assert_eq!(arr.point_types().len(), 3);
        assert_eq!(arr.transformation_types().len(), 3);
        assert!(arr.is_minimal_complexity());
    }

    #[test]
    fn certificates() {
        let s = octagonal();
        let arr = Arrangement::new(&s).unwrap();
        let o = arr.transformation_type(&sv("0000")).unwrap();
        let g = s.internal(&[1, 2, -1, 0]);
        let z = arr.membership_certificate(o, &g).unwrap().unwrap();
        let z: Vec<i64> = z.iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(s.internal(&z), g);
        assert!(arr.membership_certificate(o, &[q(1, 3), q(0, 1)]).unwrap().is_none());
        // (1/3, 0) lies on H_1 + Gamma, the x-axis family
        let axis = arr.transformation_type(&sv("0-++")).unwrap();
        assert!(arr.membership_certificate(axis, &[q(1, 3), q(0, 1)]).unwrap().is_some());
        assert!(arr.membership_certificate(axis, &[q(1, 3), q(1, 5)]).unwrap().is_none());
        let sector = arr.transformation_type(&sv("+-++")).unwrap();
        assert!(arr.membership_certificate(sector, &[q(1, 3), q(1, 5)]).unwrap().is_some());
    }

    #[test]
    fn wrong_length_is_rejected() {
        let arr = Arrangement::new(&octagonal()).unwrap();
        assert!(arr.make_point_type(sv("+-")).is_err());
        assert!(arr.make_point_type(sv("0+++")).is_err());
        assert!(arr.make_point_type(sv("*+*+")).unwrap().is_some());
    }
}
