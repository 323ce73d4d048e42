use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Alphabet, Monomial};
use crate::error::{structural, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Sparse polynomial over the rationals, truncated above a weighted degree.
///
/// Every stored monomial has weighted degree at most `truncation` and a
/// nonzero coefficient. The zero polynomial has no terms.
///
/// Binary operators panic when the operands live in different rings; the
/// `checked_*` / [`GradedPoly::truncated_mul`] forms report the mismatch.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedPoly {
    alphabet: Alphabet,
    truncation: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero(alphabet: &Alphabet, truncation: u32) -> Self {
        GradedPoly {
            alphabet: alphabet.clone(),
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: &Alphabet, truncation: u32) -> Self {
        Self::constant(alphabet, truncation, Rational::one())
    }

    pub fn constant(alphabet: &Alphabet, truncation: u32, c: Rational) -> Self {
        let mut p = Self::zero(alphabet, truncation);
        p.add_term(Monomial::one(alphabet.len()), c);
        p
    }

    /// The variable `name`, or zero if its weight exceeds the truncation.
    pub fn var(alphabet: &Alphabet, truncation: u32, name: &str) -> Result<Self> {
        let i = alphabet
            .index_of(name)
            .ok_or_else(|| structural!("unknown variable {name:?}"))?;
        Ok(Self::var_at(alphabet, truncation, i))
    }

    pub fn var_at(alphabet: &Alphabet, truncation: u32, index: usize) -> Self {
        let mut p = Self::zero(alphabet, truncation);
        p.add_term(Monomial::variable(alphabet, index), Rational::one());
        p
    }

    pub fn monomial(alphabet: &Alphabet, truncation: u32, exponents: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(alphabet, truncation);
        p.add_term(Monomial::new(alphabet, exponents), c);
        p
    }

    pub fn from_terms(
        alphabet: &Alphabet,
        truncation: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = Self::zero(alphabet, truncation);
        for (e, c) in terms {
            p.add_term(Monomial::new(alphabet, e), c);
        }
        p
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_of(&self, exponents: &[u32]) -> Rational {
        self.coefficient(&Monomial::new(&self.alphabet, exponents.to_vec()))
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.alphabet.len()))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Adds `c * m`, dropping it if `m` lies above the truncation.
    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree() > self.truncation {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &GradedPoly) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(structural!(
                "alphabet mismatch: {:?} vs {:?}",
                self.alphabet,
                other.alphabet
            ));
        }
        if self.truncation != other.truncation {
            return Err(structural!(
                "truncation mismatch: {} vs {}",
                self.truncation,
                other.truncation
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Product with every monomial above the truncation discarded.
    pub fn truncated_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.same_ring(other)?;
        let mut out = GradedPoly::zero(&self.alphabet, self.truncation);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > self.truncation {
                    // terms are sorted by degree
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(&self.alphabet, self.truncation);
        }
        GradedPoly {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> GradedPoly {
        let mut acc = GradedPoly::one(&self.alphabet, self.truncation);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse in the truncated ring; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<GradedPoly> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(structural!("inverse of a polynomial with zero constant term"));
        }
        let inv_c0 = c0.recip();
        // self = c0 (1 + u) with u of positive degree
        let one = GradedPoly::one(&self.alphabet, self.truncation);
        let neg_u = &one - &self.scale(&inv_c0);
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.truncation {
            power = &power * &neg_u;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(acc.scale(&inv_c0))
    }

    /// The weighted-degree-`degree` component.
    pub fn homogeneous_part(&self, degree: u32) -> GradedPoly {
        GradedPoly {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same alphabet, new truncation bound; terms above it are dropped.
    pub fn retruncate(&self, truncation: u32) -> GradedPoly {
        GradedPoly {
            alphabet: self.alphabet.clone(),
            truncation,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= truncation)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every monomial whose exponent exceeds its cap (`h^(r+1) = 0`).
    pub fn reduce_powers(&self, caps: &[Option<u32>]) -> GradedPoly {
        assert_eq!(caps.len(), self.alphabet.len(), "caps length");
        GradedPoly {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| {
                    m.exponents()
                        .iter()
                        .zip(caps)
                        .all(|(e, cap)| cap.map_or(true, |cap| *e <= cap))
                })
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Monomial map: variable `i` of `self` becomes variable `targets[i]` of
    /// `alphabet`. Several variables may share a target (exponents add).
    pub fn map_variables(&self, alphabet: &Alphabet, truncation: u32, targets: &[usize]) -> GradedPoly {
        assert_eq!(targets.len(), self.alphabet.len(), "variable map length");
        let mut out = GradedPoly::zero(alphabet, truncation);
        for (m, c) in &self.terms {
            let mut exps = vec![0; alphabet.len()];
            for (i, e) in m.exponents().iter().enumerate() {
                exps[targets[i]] += e;
            }
            out.add_term(Monomial::new(alphabet, exps), c.clone());
        }
        out
    }

    /// Re-expresses `self` in a larger alphabet containing all its variables.
    pub fn embed(&self, alphabet: &Alphabet, truncation: u32) -> Result<GradedPoly> {
        let targets = alphabet.embedding_of(&self.alphabet)?;
        Ok(self.map_variables(alphabet, truncation, &targets))
    }

    /// Indices of variables with a positive exponent somewhere.
    pub fn used_variables(&self) -> Vec<usize> {
        (0..self.alphabet.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .collect()
    }

    /// Largest weighted degree of a term, counting only the given variables.
    pub fn degree_in(&self, indices: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(&self.alphabet, indices))
            .max()
            .unwrap_or(0)
    }

    /// Composition: variable `i` is replaced by `images[i]`, all of which live
    /// in `(alphabet, truncation)`.
    pub fn substitute_indexed(
        &self,
        images: &[GradedPoly],
        alphabet: &Alphabet,
        truncation: u32,
    ) -> Result<GradedPoly> {
        if images.len() != self.alphabet.len() {
            return Err(structural!(
                "{} substitution images for {} variables",
                images.len(),
                self.alphabet.len()
            ));
        }
        for img in images {
            if img.alphabet != *alphabet || img.truncation != truncation {
                return Err(structural!("substitution images live in different rings"));
            }
        }
        let mut powers: Vec<Vec<GradedPoly>> = images
            .iter()
            .map(|img| vec![GradedPoly::one(alphabet, truncation), img.clone()])
            .collect();
        let mut out = GradedPoly::zero(alphabet, truncation);
        for (m, c) in &self.terms {
            let mut term = GradedPoly::constant(alphabet, truncation, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
                if term.is_zero() {
                    break;
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// Composition with images given by variable name. Every variable of the
    /// alphabet must be assigned; an empty alphabet returns `self`.
    pub fn substitute(&self, assignment: &BTreeMap<String, GradedPoly>) -> Result<GradedPoly> {
        if self.alphabet.is_empty() {
            return Ok(self.clone());
        }
        let images = self
            .alphabet
            .variables()
            .iter()
            .map(|v| {
                assignment
                    .get(&v.name)
                    .cloned()
                    .ok_or_else(|| structural!("variable {:?} is not assigned", v.name))
            })
            .collect::<Result<Vec<_>>>()?;
        let (alphabet, truncation) = (images[0].alphabet.clone(), images[0].truncation);
        self.substitute_indexed(&images, &alphabet, truncation)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| match e {
                    1 => self.alphabet.name(i).to_string(),
                    _ => format!("{}^{}", self.alphabet.name(i), e),
                })
                .collect();
            let (neg, abs) = if c < &Rational::zero() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly[T={}]({})", self.truncation, self)
    }
}

impl<'a> Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_add(rhs).expect("GradedPoly addition")
    }
}

impl<'a> Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.checked_sub(rhs).expect("GradedPoly subtraction")
    }
}

impl<'a> Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.truncated_mul(rhs).expect("GradedPoly multiplication")
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&-Rational::one())
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        self.same_ring(rhs).expect("GradedPoly addition");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        self.same_ring(rhs).expect("GradedPoly subtraction");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

struct TermExponents<'a>(&'a Alphabet, &'a Monomial);

impl Serialize for TermExponents<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nonzero: Vec<_> = self
            .1
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .collect();
        let mut map = s.serialize_map(Some(nonzero.len()))?;
        for (i, e) in nonzero {
            map.serialize_entry(self.0.name(i), e)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    coeff: String,
    exponents: TermExponents<'a>,
}

#[derive(Serialize)]
struct PolyOut<'a> {
    alphabet: &'a Alphabet,
    truncation: u32,
    terms: Vec<TermOut<'a>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermIn {
    coeff: String,
    exponents: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyIn {
    alphabet: Alphabet,
    truncation: u32,
    terms: Vec<TermIn>,
}

impl Serialize for GradedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyOut {
            alphabet: &self.alphabet,
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermOut {
                    coeff: format_rational(c),
                    exponents: TermExponents(&self.alphabet, m),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = PolyIn::deserialize(d)?;
        let mut p = GradedPoly::zero(&doc.alphabet, doc.truncation);
        for t in doc.terms {
            let coeff = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            let mut exps = vec![0; doc.alphabet.len()];
            for (name, e) in t.exponents {
                let i = doc
                    .alphabet
                    .index_of(&name)
                    .ok_or_else(|| D::Error::custom(format!("unknown variable {name:?}")))?;
                exps[i] = e;
            }
            let m = Monomial::new(&doc.alphabet, exps);
            if m.degree() > doc.truncation {
                return Err(D::Error::custom(format!(
                    "term of degree {} above truncation {}",
                    m.degree(),
                    doc.truncation
                )));
            }
            p.add_term(m, coeff);
        }
        Ok(p)
    }
}
