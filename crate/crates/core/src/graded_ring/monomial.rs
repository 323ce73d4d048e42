use std::cmp::Ordering;

use super::Alphabet;

/// Exponent vector over an alphabet, with its cached weighted degree.
///
/// Ordered by weighted degree first, then lexicographically with larger
/// exponents of earlier variables first (`x^2 < x*y < y^2` inside a degree).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exponents: Box<[u32]>,
}

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial {
            degree: 0,
            exponents: vec![0; len].into(),
        }
    }

    pub fn new(alphabet: &Alphabet, exponents: Vec<u32>) -> Self {
        assert_eq!(exponents.len(), alphabet.len(), "exponent vector length");
        let degree = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| e * alphabet.weight(i))
            .sum();
        Monomial {
            degree,
            exponents: exponents.into(),
        }
    }

    pub fn variable(alphabet: &Alphabet, index: usize) -> Self {
        let mut exps = vec![0; alphabet.len()];
        exps[index] = 1;
        Monomial::new(alphabet, exps)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exponents[i]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub(crate) fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exponents: self
                .exponents
                .iter()
                .zip(other.exponents.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Weighted degree restricted to the given variable indices.
    pub fn degree_in(&self, alphabet: &Alphabet, indices: &[usize]) -> u32 {
        indices
            .iter()
            .map(|&i| self.exponents[i] * alphabet.weight(i))
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
