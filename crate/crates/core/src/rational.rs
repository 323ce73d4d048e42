//! Exact rationals and their `"p/q"` string form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let q = Rational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    if q.denom().is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(q)
}

/// Generalized binomial coefficient `binom(n, k)` for any integer `n`.
pub fn binomial(n: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = acc * int(n - i) / int(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub(crate) mod serde_string_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        qs.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&int(2)), "2");
        assert_eq!(format_rational(&frac(-6, 4)), "-3/2");
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(1, 2), int(0));
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial(-2, 2), int(3));
        assert_eq!(binomial(7, 0), int(1));
    }
}
