//! One-dimensional substitutions: parsing, the substitution matrix,
//! primitivity, spectral classification and puncture sets of fixed points.

mod punctures;
mod spectral;

pub use punctures::{natural_lengths, punctures_fixed_point, Lengths, PunctureRule};
pub use spectral::{
    classify, column_number, height, is_aperiodic, perron_pisot, CoincidenceRank, PerronPisot, SpectralReport,
    SpectralVerdict, APERIODICITY_POWER,
};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::input_err;
use crate::exact::IntMatrix;
use crate::{Error, Result};

/// A substitution on a finite alphabet of single ASCII alphanumeric letters.
/// Letters are indexed in the order their rules were given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution1D {
    alphabet: Vec<char>,
    rules: Vec<Vec<usize>>,
}

impl Substitution1D {
    pub fn new(alphabet: Vec<char>, rules: Vec<Vec<usize>>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(input_err!("empty alphabet"));
        }
        if rules.len() != alphabet.len() {
            return Err(input_err!("{} rules for {} letters", rules.len(), alphabet.len()));
        }
        for (i, &c) in alphabet.iter().enumerate() {
            if !c.is_ascii_alphanumeric() {
                return Err(input_err!("letter {c:?} is not ASCII alphanumeric"));
            }
            if alphabet[..i].contains(&c) {
                return Err(input_err!("letter {c} has two rules"));
            }
        }
        for (a, w) in rules.iter().enumerate() {
            if w.is_empty() {
                return Err(input_err!("rule for {} is empty", alphabet[a]));
            }
            if w.iter().any(|&b| b >= alphabet.len()) {
                return Err(input_err!("rule for {} uses a letter outside the alphabet", alphabet[a]));
            }
        }
        Ok(Substitution1D { alphabet, rules })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Vec<usize>] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&x| x == c)
    }

    /// Image of a word.
    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&a| self.rules[a].iter().copied()).collect()
    }

    /// The `k`-fold composite, `k >= 1`.
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(input_err!("substitution power must be at least 1"));
        }
        let rules = (0..self.len())
            .map(|a| (1..k).fold(self.rules[a].clone(), |w, _| self.apply(&w)))
            .collect();
        Ok(Substitution1D {
            alphabet: self.alphabet.clone(),
            rules,
        })
    }

    /// The common rule length, if there is one.
    pub fn constant_length(&self) -> Option<usize> {
        let q = self.rules[0].len();
        self.rules.iter().all(|w| w.len() == q).then_some(q)
    }

    pub fn word(&self, letters: &[usize]) -> String {
        letters.iter().map(|&a| self.alphabet[a]).collect()
    }
}

impl FromStr for Substitution1D {
    type Err = Error;

    /// Comma-separated `letter:word` rules, e.g. `a:ab,b:a`.
    fn from_str(s: &str) -> Result<Self> {
        let mut alphabet = Vec::new();
        let mut words = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (head, word) = part
                .split_once(':')
                .ok_or_else(|| input_err!("rule {part:?} is not of the form letter:word"))?;
            let mut head = head.trim().chars();
            let (Some(letter), None) = (head.next(), head.next()) else {
                return Err(input_err!("rule {part:?} must start with a single letter"));
            };
            alphabet.push(letter);
            words.push(word.trim());
        }
        let index = |c: char| {
            alphabet
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| input_err!("letter {c:?} has no rule"))
        };
        let rules = words
            .iter()
            .map(|w| w.chars().map(index).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Substitution1D::new(alphabet, rules)
    }
}

impl fmt::Display for Substitution1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, w) in self.rules.iter().enumerate() {
            if a > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", self.alphabet[a], self.word(w))?;
        }
        Ok(())
    }
}

/// `M[a][b]` = number of occurrences of `a` in the image of `b`.
pub fn substitution_matrix(s: &Substitution1D) -> IntMatrix {
    let n = s.len();
    let mut m = IntMatrix::zeros(n, n);
    for (b, w) in s.rules.iter().enumerate() {
        for &a in w {
            m[(a, b)] += 1;
        }
    }
    m
}

/// Whether some power `M^k`, `k <= (n-1)^2 + 1`, is strictly positive.
pub fn primitivity(s: &Substitution1D) -> bool {
    let m = substitution_matrix(s);
    let n = s.len();
    let bound = (n - 1) * (n - 1) + 1;
    let mut p = m.clone();
    for k in 1..=bound {
        if (0..n).all(|i| (0..n).all(|j| p[(i, j)] > 0.into())) {
            return true;
        }
        if k < bound {
            p = p.mul(&m);
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn subst(s: &str) -> Substitution1D {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        let f = subst("a:ab,b:a");
        assert_eq!(f.alphabet(), ['a', 'b']);
        assert_eq!(f.rules(), [vec![0, 1], vec![0]]);
        assert_eq!(f.to_string(), "a:ab,b:a");
        assert_eq!(subst(" 0 : 01 , 1:10").to_string(), "0:01,1:10");
        for bad in ["a:ab,b:c", "a:,b:a", "ab:a", "a:a,a:a", "a-b", "é:é"] {
            assert!(matches!(bad.parse::<Substitution1D>(), Err(Error::Input(_))), "{bad}");
        }
    }

    #[test]
    fn matrices_and_primitivity() {
        let f = subst("a:ab,b:a");
        assert_eq!(substitution_matrix(&f), IntMatrix::from_i64(&[&[1, 1], &[1, 0]]));
        assert!(primitivity(&f));
        assert!(primitivity(&subst("0:01,1:10")));
        assert!(!primitivity(&subst("a:a,b:b")));
        assert!(!primitivity(&subst("a:ab,b:b")));
        assert!(primitivity(&subst("a:a")));
        // needs the full (n-1)^2 + 1 = 5 steps
        assert!(primitivity(&subst("a:b,b:c,c:ac")));
    }

    #[test]
    fn powers() {
        let f = subst("a:ab,b:a");
        assert_eq!(f.power(3).unwrap().to_string(), "a:abaab,b:aba");
        assert_eq!(f.power(1).unwrap(), f);
        assert!(f.power(0).is_err());
        assert_eq!(subst("0:01,1:10").power(2).unwrap().constant_length(), Some(4));
        assert_eq!(f.constant_length(), None);
    }

    proptest! {
        #[test]
        fn matrix_of_power_is_power_of_matrix(words in proptest::collection::vec("[ab]{1,3}", 2), k in 1usize..4) {
            let s = subst(&alloc::format!("a:{},b:{}", words[0], words[1]));
            let direct = substitution_matrix(&s.power(k).unwrap());
            let m = substitution_matrix(&s);
            let mut p = m.clone();
            for _ in 1..k {
                p = p.mul(&m);
            }
            prop_assert_eq!(direct, p);
        }
    }
}
