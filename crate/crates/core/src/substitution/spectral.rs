use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use super::{primitivity, substitution_matrix, Substitution1D};
use crate::error::{input_err, unsupported_err};
use crate::exact::poly::{characteristic_polynomial, perron_root};
use crate::exact::{schur_cohn_unit_disk_count, IntPolynomial, UnitDiskCount};
use crate::Result;

/// Minimum number of substitution steps behind the periodicity probe.
pub const APERIODICITY_POWER: usize = 6;
const PROBE_LENGTH: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct PerronPisot {
    pub charpoly: IntPolynomial,
    pub minpoly: IntPolynomial,
    pub perron_approx: f64,
    /// Root location of the minimal polynomial.
    pub unit_disk: UnitDiskCount,
    pub pisot: bool,
}

/// Perron root data; Pisot iff every conjugate lies strictly inside the unit circle.
pub fn perron_pisot(s: &Substitution1D) -> Result<PerronPisot> {
    if !primitivity(s) {
        return Err(input_err!("substitution {s} is not primitive"));
    }
    let charpoly = characteristic_polynomial(&substitution_matrix(s))?;
    let root = perron_root(&charpoly)?;
    let minpoly = root.minimal_polynomial.clone();
    let unit_disk = schur_cohn_unit_disk_count(&minpoly)?;
    let deg = minpoly.degree().unwrap_or(0);
    let pisot = unit_disk.on_circle == 0 && unit_disk.inside + 1 == deg && unit_disk.outside == 1;
    Ok(PerronPisot {
        charpoly,
        minpoly,
        perron_approx: root.approx(),
        unit_disk,
        pisot,
    })
}

/// Least cardinality reachable from the full alphabet under the column maps
/// `S -> {rule(a)[j] : a in S}`.
pub fn column_number(s: &Substitution1D) -> Result<usize> {
    let q = s
        .constant_length()
        .ok_or_else(|| unsupported_err!("column number of the non-constant-length substitution {s}"))?;
    let start: Vec<usize> = (0..s.len()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    let mut best = s.len();
    while let Some(set) = queue.pop_front() {
        best = best.min(set.len());
        for j in 0..q {
            let mut next: Vec<usize> = set.iter().map(|&a| s.rules()[a][j]).collect();
            next.sort_unstable();
            next.dedup();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(best)
}

/// A prefix of at least `min_len` letters of a one-sided fixed point of
/// some power `s^k`, `k <= |A|`, together with that `k`.
pub(crate) fn fixed_point_prefix(s: &Substitution1D, min_len: usize) -> Result<(Vec<usize>, usize)> {
    for k in 1..=s.len() {
        let p = s.power(k)?;
        let seed = (0..s.len()).find(|&a| p.rules()[a][0] == a && p.rules()[a].len() > 1);
        if let Some(a) = seed {
            let mut w = vec![a];
            while w.len() < min_len {
                w = p.apply(&w);
            }
            return Ok((w, k));
        }
    }
    Err(input_err!("no power s^k, k <= {}, has a growing letter fixed at position 0", s.len()))
}

/// Dekking's height: the largest `n` coprime to `q` dividing every return
/// time of the first letter of the fixed point.
pub fn height(s: &Substitution1D) -> Result<usize> {
    let q = s
        .constant_length()
        .ok_or_else(|| unsupported_err!("height of the non-constant-length substitution {s}"))?;
    let (u, _) = fixed_point_prefix(s, PROBE_LENGTH)?;
    let g = (1..u.len()).filter(|&k| u[k] == u[0]).fold(0usize, |g, k| g.gcd(&k));
    Ok((1..=g.max(1)).rev().find(|n| g % n == 0 && n.gcd(&q) == 1).unwrap_or(1))
}

/// Probe: the fixed-point prefix after at least [`APERIODICITY_POWER`]
/// steps has no period up to a quarter of its length.
pub fn is_aperiodic(s: &Substitution1D) -> Result<bool> {
    let (mut u, k) = fixed_point_prefix(s, PROBE_LENGTH)?;
    let p = s.power(k)?;
    let mut steps = 0;
    while steps * k < APERIODICITY_POWER || u.len() < PROBE_LENGTH {
        u = p.apply(&u);
        steps += 1;
    }
    let n = u.len().min(1 << 16);
    let u = &u[..n];
    Ok(!(1..=n / 4).any(|period| (period..n).all(|i| u[i] == u[i - period])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoincidenceRank {
    Known(usize),
    Unknown(String),
}

impl fmt::Display for CoincidenceRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoincidenceRank::Known(n) => write!(f, "cr={n}"),
            CoincidenceRank::Unknown(_) => f.write_str("cr=UNKNOWN"),
        }
    }
}

/// A classification statement and the fact it rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralVerdict {
    pub claim: String,
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub substitution: String,
    pub primitive: bool,
    pub constant_length: Option<usize>,
    pub perron: PerronPisot,
    pub aperiodic: bool,
    pub height: Option<usize>,
    pub column_number: Option<usize>,
    pub coincidence_rank: CoincidenceRank,
    pub meyer: bool,
    /// `None` when the chain does not decide the spectral type.
    pub pure_point: Option<bool>,
    pub verdicts: Vec<SpectralVerdict>,
    pub caveats: Vec<String>,
}

impl SpectralReport {
    pub fn pisot(&self) -> bool {
        self.perron.pisot
    }

    /// No claim appears together with its negation, and the flags agree with the claims.
    pub fn is_consistent(&self) -> bool {
        let claims: BTreeSet<&str> = self.verdicts.iter().map(|v| v.claim.as_str()).collect();
        let negated = claims.iter().any(|c| claims.contains(format!("not {c}").as_str()))
            || (claims.contains("maximal equicontinuous factor trivial")
                && claims.contains("maximal equicontinuous factor nontrivial"));
        let pure_ok = match (self.pure_point, &self.coincidence_rank) {
            (Some(pp), CoincidenceRank::Known(n)) => pp == (*n == 1),
            (Some(_), CoincidenceRank::Unknown(_)) => false,
            (None, _) => true,
        };
        !negated && pure_ok && self.meyer == self.perron.pisot
    }
}

fn verdict(claim: &str, basis: &str) -> SpectralVerdict {
    SpectralVerdict {
        claim: claim.to_string(),
        basis: basis.to_string(),
    }
}

pub fn classify(s: &Substitution1D) -> Result<SpectralReport> {
    let perron = perron_pisot(s)?;
    let constant_length = s.constant_length();
    let aperiodic = is_aperiodic(s)?;
    let mut verdicts = Vec::new();
    let mut caveats = Vec::new();
    let root = format!("Perron root {:.6} with minimal polynomial {}", perron.perron_approx, perron.minpoly);
    if perron.pisot {
        let basis = format!("{root} is a Pisot number");
        verdicts.push(verdict("Meyer", &basis));
        verdicts.push(verdict("eigenvalue group dense", &basis));
        verdicts.push(verdict("maximal equicontinuous factor nontrivial", &basis));
    } else {
        let basis = format!("{root} has a conjugate of modulus >= 1");
        verdicts.push(verdict("not Meyer", &basis));
        verdicts.push(verdict("trivial point spectrum (weakly mixing)", &basis));
        verdicts.push(verdict("maximal equicontinuous factor trivial", &basis));
        caveats.push("the non-Meyer verdict assumes the 1-dimensional expansion hypotheses".to_string());
    }
    if !aperiodic {
        verdicts.push(verdict("periodic", "fixed-point prefix has a short period"));
    }

    let (height, column_number, coincidence_rank) = match constant_length {
        None => (
            None,
            None,
            CoincidenceRank::Unknown("no column criterion for non-constant length".to_string()),
        ),
        Some(_) => {
            let h = height(s)?;
            let c = column_number(s)?;
            let cr = if !aperiodic {
                CoincidenceRank::Unknown("periodic fixed point".to_string())
            } else if h > 1 {
                CoincidenceRank::Unknown(format!("height {h} > 1"))
            } else if !perron.pisot {
                CoincidenceRank::Unknown("Perron root is not Pisot".to_string())
            } else {
                CoincidenceRank::Known(c)
            };
            (Some(h), Some(c), cr)
        }
    };
    let pure_point = match &coincidence_rank {
        CoincidenceRank::Known(n) => {
            caveats.push(
                "cr is identified with the column number for primitive aperiodic height-1 constant-length substitutions"
                    .to_string(),
            );
            let basis = format!("cr={n}; pure point iff cr = 1");
            if *n == 1 {
                verdicts.push(verdict("pure point spectrum", &basis));
            } else {
                verdicts.push(verdict("not pure point spectrum", &basis));
            }
            Some(*n == 1)
        }
        CoincidenceRank::Unknown(_) => None,
    };
    Ok(SpectralReport {
        substitution: s.to_string(),
        primitive: true,
        constant_length,
        meyer: perron.pisot,
        perron,
        aperiodic,
        height,
        column_number,
        coincidence_rank,
        pure_point,
        verdicts,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    fn subst(s: &str) -> Substitution1D {
        s.parse().unwrap()
    }

    /// Numeric oracle: moduli of the roots of a monic quadratic or linear polynomial.
    fn conjugate_moduli(p: &IntPolynomial) -> Vec<f64> {
        let c: Vec<f64> = p.coefficients().iter().map(|x| x.to_string().parse().unwrap()).collect();
        match c.len() {
            2 => vec![(-c[0]).abs()],
            3 => {
                let disc = c[1] * c[1] - 4.0 * c[0];
                if disc >= 0.0 {
                    let r = disc.sqrt();
                    vec![((-c[1] + r) / 2.0).abs(), ((-c[1] - r) / 2.0).abs()]
                } else {
                    vec![c[0].sqrt(); 2]
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn perron_data() {
        let f = perron_pisot(&subst("a:ab,b:a")).unwrap();
        assert_eq!(f.minpoly, IntPolynomial::from_i64(&[-1, -1, 1]));
        assert!(f.pisot);
        let g = perron_pisot(&subst("a:abbb,b:a")).unwrap();
        assert_eq!(g.minpoly, IntPolynomial::from_i64(&[-3, -1, 1]));
        assert!(!g.pisot);
        let d = perron_pisot(&subst("a:aa")).unwrap();
        assert_eq!(d.minpoly, IntPolynomial::from_i64(&[-2, 1]));
        assert!(d.pisot);
        let tm = perron_pisot(&subst("0:01,1:10")).unwrap();
        assert_eq!(tm.minpoly, IntPolynomial::from_i64(&[-2, 1]));
        assert!(matches!(perron_pisot(&subst("a:a,b:b")), Err(Error::Input(_))));
        // the unit root is not Pisot
        assert!(!perron_pisot(&subst("a:a")).unwrap().pisot);
        for (rules, pisot) in [("a:ab,b:a", true), ("a:abbb,b:a", false), ("0:01,1:10", true), ("a:abb,b:ba", true)] {
            let p = perron_pisot(&subst(rules)).unwrap();
            let moduli = conjugate_moduli(&p.minpoly);
            let small = moduli.iter().filter(|&&m| m < 1.0 - 1e-9).count();
            assert_eq!(p.pisot, small + 1 == moduli.len(), "{rules}");
            assert_eq!(p.pisot, pisot, "{rules}");
        }
    }

    #[test]
    fn column_numbers() {
        assert_eq!(column_number(&subst("0:01,1:10")).unwrap(), 2);
        assert_eq!(column_number(&subst("a:ab,b:aa")).unwrap(), 1);
        assert_eq!(column_number(&subst("a:abc,b:acb,c:aab")).unwrap(), 1);
        assert!(matches!(column_number(&subst("a:ab,b:a")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn heights_and_periodicity() {
        assert_eq!(height(&subst("0:01,1:10")).unwrap(), 1);
        assert_eq!(height(&subst("a:ab,b:aa")).unwrap(), 1);
        // every return time of a is even; 2 is coprime to q = 3
        assert_eq!(height(&subst("a:aba,b:bab")).unwrap(), 2);
        assert!(is_aperiodic(&subst("0:01,1:10")).unwrap());
        assert!(is_aperiodic(&subst("a:ab,b:a")).unwrap());
        assert!(!is_aperiodic(&subst("a:aa")).unwrap());
        assert!(!is_aperiodic(&subst("a:ab,b:ab")).unwrap());
        assert!(fixed_point_prefix(&subst("a:b,b:a"), 4).is_err());
        // the seed is b, the first letter fixed at position 0
        let (u, k) = fixed_point_prefix(&subst("a:ba,b:ba"), 8).unwrap();
        assert_eq!((u[0], k), (1, 1));
    }

    #[test]
    fn classification_chain() {
        let tm = classify(&subst("0:01,1:10")).unwrap();
        assert_eq!(tm.constant_length, Some(2));
        assert!(tm.pisot() && tm.meyer);
        assert_eq!(tm.coincidence_rank, CoincidenceRank::Known(2));
        assert_eq!(tm.pure_point, Some(false));
        assert!(tm.is_consistent());
        let pd = classify(&subst("a:ab,b:aa")).unwrap();
        assert_eq!(pd.coincidence_rank, CoincidenceRank::Known(1));
        assert_eq!(pd.pure_point, Some(true));
        let fib = classify(&subst("a:ab,b:a")).unwrap();
        assert!(fib.meyer);
        assert!(matches!(fib.coincidence_rank, CoincidenceRank::Unknown(_)));
        assert!(fib.verdicts.iter().any(|v| v.claim == "eigenvalue group dense"));
        let np = classify(&subst("a:abbb,b:a")).unwrap();
        assert!(!np.meyer);
        assert!(np.verdicts.iter().any(|v| v.claim == "maximal equicontinuous factor trivial"));
        for r in [&tm, &pd, &fib, &np] {
            assert!(r.is_consistent());
        }
        let h2 = classify(&subst("a:aba,b:bab")).unwrap();
        assert_eq!(h2.height, Some(2));
        assert!(matches!(h2.coincidence_rank, CoincidenceRank::Unknown(_)));
        assert_eq!(tm.coincidence_rank.to_string(), "cr=2");
    }

    #[test]
    fn invariant_under_squaring() {
        for rules in ["0:01,1:10", "a:ab,b:aa", "a:abc,b:acb,c:aab", "a:ab,b:a", "a:abbb,b:a", "a:abb,b:ba"] {
            let s = subst(rules);
            let s2 = s.power(2).unwrap();
            if s.constant_length().is_some() {
                assert_eq!(column_number(&s).unwrap(), column_number(&s2).unwrap(), "{rules}");
            }
            assert_eq!(perron_pisot(&s).unwrap().pisot, perron_pisot(&s2).unwrap().pisot, "{rules}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn column_number_bounds(words in proptest::collection::vec("[abc]{3}", 3)) {
            let s = subst(&format!("a:{},b:{},c:{}", words[0], words[1], words[2]));
            let c = column_number(&s).unwrap();
            prop_assert!((1..=3).contains(&c));
            prop_assert_eq!(c, column_number(&s.power(2).unwrap()).unwrap());
        }
    }
}
