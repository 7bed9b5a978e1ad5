use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::arrangement::{closure, cone_contains, Arrangement, Sign, SignVector, TransformationType};
use crate::error::invariant_err;
use crate::Result;

/// `(t t')(i) = t(i)` unless `t(i) = 0`, in which case `t'(i)`.
pub fn product_signs(t: &SignVector, u: &SignVector) -> SignVector {
    SignVector(
        t.0.iter()
            .zip(&u.0)
            .map(|(a, b)| if *a == Sign::Zero { *b } else { *a })
            .collect(),
    )
}

/// The product of two transformation types of `arr`, which must again be
/// one of its types.
pub fn monoid_product(arr: &Arrangement, t: &TransformationType, u: &TransformationType) -> Result<TransformationType> {
    let signs = product_signs(&t.signs, &u.signs);
    arr.transformation_type(&signs)
        .cloned()
        .ok_or_else(|| invariant_err!("product {} . {} = {signs} is not a transformation type", t.signs, u.signs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Equal,
    /// The first argument is above the second: `t t' = t' t = t'`.
    Greater,
    Less,
    Incomparable,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Equal => "=",
            Order::Greater => ">=",
            Order::Less => "<=",
            Order::Incomparable => "incomparable",
        })
    }
}

/// The finite idempotent monoid of transformation types with its Cayley table.
#[derive(Clone, Debug)]
pub struct Monoid {
    types: Vec<TransformationType>,
    table: Vec<Vec<usize>>,
    unit: usize,
}

impl Monoid {
    pub fn new(arr: &Arrangement) -> Result<Self> {
        let types = arr.transformation_types().to_vec();
        let mut table = Vec::with_capacity(types.len());
        for t in &types {
            let row = types
                .iter()
                .map(|u| {
                    let signs = product_signs(&t.signs, &u.signs);
                    arr.transformation_index(&signs).ok_or_else(|| {
                        invariant_err!("product {} . {} = {signs} is not a transformation type", t.signs, u.signs)
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        let unit = types
            .iter()
            .position(|t| t.signs.0.iter().all(|s| *s == Sign::Zero))
            .ok_or_else(|| invariant_err!("no zero transformation type"))?;
        Ok(Monoid { types, table, unit })
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn types(&self) -> &[TransformationType] {
        &self.types
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, signs: &SignVector) -> Option<usize> {
        self.types.iter().position(|t| &t.signs == signs)
    }

    /// The full-domain types, after checking that they form the unique
    /// minimal left ideal.
    pub fn minimal_ideal(&self) -> Result<Vec<usize>> {
        let ideal: Vec<usize> = (0..self.len()).filter(|&a| self.types[a].is_full_domain()).collect();
        for &a in &ideal {
            for b in 0..self.len() {
                if self.product(a, b) != a {
                    return Err(invariant_err!("{} . {} leaves the full-domain type", self.types[a].signs, self.types[b].signs));
                }
                if !ideal.contains(&self.product(b, a)) {
                    return Err(invariant_err!("full-domain types are not a left ideal"));
                }
            }
        }
        // the minimal left ideals are the minimal principal ones T t
        let principal: Vec<BTreeSet<usize>> = (0..self.len())
            .map(|a| (0..self.len()).map(|b| self.product(b, a)).collect())
            .collect();
        let minimal: BTreeSet<&BTreeSet<usize>> = principal
            .iter()
            .filter(|p| !principal.iter().any(|q| q.len() < p.len() && q.is_subset(p)))
            .collect();
        let expected: BTreeSet<usize> = ideal.iter().copied().collect();
        if minimal.len() != 1 || !minimal.contains(&expected) {
            return Err(invariant_err!("the minimal left ideal is not unique or not the full-domain types"));
        }
        if ideal.is_empty() {
            return Err(invariant_err!("no full-domain transformation type"));
        }
        Ok(ideal)
    }

    /// Algebraic order `t >= t'` iff `t t' = t' t = t'`.
    pub fn algebraic_order(&self, a: usize, b: usize) -> Order {
        if a == b {
            Order::Equal
        } else if self.product(a, b) == b && self.product(b, a) == b {
            Order::Greater
        } else if self.product(a, b) == a && self.product(b, a) == a {
            Order::Less
        } else {
            Order::Incomparable
        }
    }

    /// The algebraic order, cross-checked against `C_t ⊆ closure(C_t')`.
    pub fn order(&self, arr: &Arrangement, a: usize, b: usize) -> Result<Order> {
        let alg = self.algebraic_order(a, b);
        let dim = arr.dim();
        let (ta, tb) = (&self.types[a], &self.types[b]);
        let geo_ge = cone_contains(&closure(&tb.cone), &ta.cone, dim)?;
        let geo_le = cone_contains(&closure(&ta.cone), &tb.cone, dim)?;
        let geo = match (geo_ge, geo_le) {
            (true, true) => Order::Equal,
            (true, false) => Order::Greater,
            (false, true) => Order::Less,
            (false, false) => Order::Incomparable,
        };
        if geo != alg {
            return Err(invariant_err!(
                "order of {} and {}: algebraic {alg}, geometric {geo}",
                ta.signs,
                tb.signs
            ));
        }
        Ok(alg)
    }

    /// Covering pairs `(upper, lower)` of the order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let above = |a: usize, b: usize| self.algebraic_order(a, b) == Order::Greater;
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if above(a, b) && !(0..n).any(|c| above(a, c) && above(c, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::octagonal;
    use alloc::string::ToString;

    fn setup() -> (Arrangement, Monoid) {
        let arr = Arrangement::new(&octagonal()).unwrap();
        let m = Monoid::new(&arr).unwrap();
        (arr, m)
    }

    fn idx(m: &Monoid, s: &str) -> usize {
        m.index_of(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn unit_idempotency_associativity() {
        let (_, m) = setup();
        let n = m.len();
        for a in 0..n {
            assert_eq!(m.product(m.unit(), a), a);
            assert_eq!(m.product(a, m.unit()), a);
            assert_eq!(m.product(a, a), a);
            for b in 0..n {
                let dom = m.types()[m.product(a, b)].domain();
                let mut union = m.types()[a].domain().0;
                union.extend(m.types()[b].domain().0);
                union.sort_unstable();
                union.dedup();
                assert_eq!(dom.0, union);
                for c in 0..n {
                    assert_eq!(m.product(m.product(a, b), c), m.product(a, m.product(b, c)));
                }
            }
        }
    }

    #[test]
    fn documented_products() {
        let (arr, m) = setup();
        assert_eq!(m.product(idx(&m, "0-++"), idx(&m, "+-++")), idx(&m, "+-++"));
        let t = arr.transformation_type(&"+-++".parse().unwrap()).unwrap();
        let u = arr.transformation_type(&"0-++".parse().unwrap()).unwrap();
        assert_eq!(monoid_product(&arr, t, u).unwrap().signs.to_string(), "+-++");
        assert_eq!(monoid_product(&arr, u, t).unwrap().signs.to_string(), "+-++");
    }

    #[test]
    fn minimal_ideal_is_the_eight_sectors() {
        let (_, m) = setup();
        let ideal = m.minimal_ideal().unwrap();
        assert_eq!(ideal.len(), 8);
        assert!(ideal.iter().all(|&a| m.types()[a].cone_dim == 2));
    }

    #[test]
    fn orders() {
        let (arr, m) = setup();
        let o = m.unit();
        for a in 0..m.len() {
            let expected = if a == o { Order::Equal } else { Order::Greater };
            assert_eq!(m.order(&arr, o, a).unwrap(), expected);
        }
        assert_eq!(m.order(&arr, idx(&m, "0-++"), idx(&m, "+-++")).unwrap(), Order::Greater);
        assert_eq!(m.order(&arr, idx(&m, "+-++"), idx(&m, "0-++")).unwrap(), Order::Less);
        assert_eq!(m.order(&arr, idx(&m, "+-++"), idx(&m, "++++")).unwrap(), Order::Incomparable);
        // every pair agrees with the cone picture
        for a in 0..m.len() {
            for b in 0..m.len() {
                m.order(&arr, a, b).unwrap();
            }
        }
    }

    #[test]
    fn hasse_diagram() {
        let (_, m) = setup();
        let edges = m.hasse_edges();
        // unit covers the 8 half-lines; each half-line covers its 2 sectors
        assert_eq!(edges.len(), 8 + 16);
        assert_eq!(edges.iter().filter(|(a, _)| *a == m.unit()).count(), 8);
    }
}
