use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Cell, FormalVariety};
use crate::error::{structural, Result};
use crate::graded_ring::{Alphabet, GradedPoly};
use crate::rational::Rational;

/// Name of the hyperplane class of projective factor `j` of product factor `p`
/// (both 0-based); printed 1-based as `h{p}_{j}`.
pub fn hyperplane_name(p: usize, j: usize) -> String {
    format!("h{}_{}", p + 1, j + 1)
}

/// Whether `name` collides with the hyperplane naming scheme.
pub fn is_hyperplane_name(name: &str) -> bool {
    let Some(rest) = name.strip_prefix('h') else {
        return false;
    };
    let mut parts = rest.splitn(2, '_');
    let digits = |s: Option<&str>| s.is_some_and(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()));
    digits(parts.next()) && digits(parts.next())
}

/// The Chow ring of one cell tuple of a product: hyperplane variables for
/// every factor followed by the coefficient alphabet.
#[derive(Clone, Debug)]
pub struct ProductRing {
    alphabet: Alphabet,
    truncation: u32,
    caps: Vec<Option<u32>>,
    offsets: Vec<usize>,
}

impl ProductRing {
    pub fn new(cells: &[&Cell], coefficients: &Alphabet, coefficient_degree: u32) -> Result<Self> {
        let mut vars = Vec::new();
        let mut caps = Vec::new();
        let mut offsets = Vec::with_capacity(cells.len() + 1);
        for (p, cell) in cells.iter().enumerate() {
            offsets.push(vars.len());
            for (j, &r) in cell.dims().iter().enumerate() {
                vars.push((hyperplane_name(p, j), 1));
                caps.push(Some(r));
            }
        }
        offsets.push(vars.len());
        for v in coefficients.variables() {
            vars.push((v.name.clone(), v.weight));
            caps.push(None);
        }
        let truncation = cells.iter().map(|c| c.dimension()).sum::<u32>() + coefficient_degree;
        Ok(ProductRing {
            alphabet: Alphabet::new(vars)?,
            truncation,
            caps,
            offsets,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.alphabet, self.truncation)
    }

    pub fn one(&self) -> GradedPoly {
        GradedPoly::one(&self.alphabet, self.truncation)
    }

    /// Index of the hyperplane variable `(p, j)`.
    pub fn hyperplane_index(&self, p: usize, j: usize) -> usize {
        self.offsets[p] + j
    }

    pub fn hyperplane(&self, p: usize, j: usize) -> GradedPoly {
        GradedPoly::var_at(&self.alphabet, self.truncation, self.hyperplane_index(p, j))
    }

    /// Index of the first coefficient variable.
    pub fn coefficient_offset(&self) -> usize {
        *self.offsets.last().expect("offsets end with the coefficient block")
    }

    pub fn reduce(&self, p: &GradedPoly) -> GradedPoly {
        p.reduce_powers(&self.caps)
    }

    /// `c(T)` of factor `p` with cell `cell`: `Π_j (1 + h_{p,j})^{r_j + 1}`.
    pub fn tangent_total(&self, p: usize, cell: &Cell) -> GradedPoly {
        let one = self.one();
        let mut acc = one.clone();
        for (j, &r) in cell.dims().iter().enumerate() {
            let factor = &one + &self.hyperplane(p, j);
            acc = self.reduce(&(&acc * &factor.pow(r + 1)));
        }
        acc
    }

    /// `Σ_{u+v=r} x^u y^v`, the class of the diagonal of `P^r × P^r`.
    pub fn diagonal_class(&self, x: usize, y: usize, r: u32) -> GradedPoly {
        let mut acc = self.zero();
        for u in 0..=r {
            let mut e = vec![0; self.alphabet.len()];
            e[x] = u;
            e[y] = r - u;
            acc += &GradedPoly::monomial(&self.alphabet, self.truncation, e, Rational::from_integer(1.into()));
        }
        acc
    }

    /// Exponents of the top hyperplane monomial.
    pub fn top_exponents(&self) -> Vec<u32> {
        self.caps.iter().map(|c| c.unwrap_or(0)).collect()
    }
}

/// Cycle class on a product `V_1 × … × V_k` of formal varieties, with
/// coefficients in a free graded coefficient alphabet.
///
/// One polynomial per tuple of cells (absent means zero), reduced modulo
/// `h^{r+1} = 0` and truncated at `Σ dim V_p + coefficient_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowElement {
    factors: Vec<FormalVariety>,
    coefficients: Alphabet,
    coefficient_degree: u32,
    components: BTreeMap<Vec<usize>, GradedPoly>,
}

impl ChowElement {
    pub fn zero(factors: Vec<FormalVariety>, coefficients: &Alphabet, coefficient_degree: u32) -> Result<Self> {
        if let Some(v) = coefficients.variables().iter().find(|v| is_hyperplane_name(&v.name)) {
            return Err(structural!("coefficient variable {:?} clashes with hyperplane names", v.name));
        }
        Ok(ChowElement {
            factors,
            coefficients: coefficients.clone(),
            coefficient_degree,
            components: BTreeMap::new(),
        })
    }

    /// Zero class on `X^k` without coefficients.
    pub fn zero_on_power(x: &FormalVariety, k: usize) -> Self {
        ChowElement::zero(vec![x.clone(); k], &Alphabet::empty(), 0).expect("empty coefficient alphabet")
    }

    /// Fundamental class of the product.
    pub fn fundamental(factors: Vec<FormalVariety>, coefficients: &Alphabet, coefficient_degree: u32) -> Result<Self> {
        let mut out = ChowElement::zero(factors, coefficients, coefficient_degree)?;
        for tuple in out.cell_tuples() {
            let ring = out.ring(&tuple)?;
            out.components.insert(tuple, ring.one());
        }
        Ok(out)
    }

    pub fn factors(&self) -> &[FormalVariety] {
        &self.factors
    }

    pub fn power(&self) -> usize {
        self.factors.len()
    }

    pub fn coefficients(&self) -> &Alphabet {
        &self.coefficients
    }

    pub fn coefficient_degree(&self) -> u32 {
        self.coefficient_degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether `other` lives on the same product with the same coefficients.
    pub fn same_space(&self, other: &ChowElement) -> bool {
        self.factors == other.factors
            && self.coefficients == other.coefficients
            && self.coefficient_degree == other.coefficient_degree
    }

    pub fn ring(&self, tuple: &[usize]) -> Result<ProductRing> {
        if tuple.len() != self.factors.len() {
            return Err(structural!("cell tuple of length {} on a {}-fold product", tuple.len(), self.factors.len()));
        }
        let cells = tuple
            .iter()
            .zip(&self.factors)
            .map(|(&c, x)| x.cells().get(c).ok_or_else(|| structural!("cell index {c} out of range for {x}")))
            .collect::<Result<Vec<_>>>()?;
        ProductRing::new(&cells, &self.coefficients, self.coefficient_degree)
    }

    /// Every tuple of cell indices, in lexicographic order.
    pub fn cell_tuples(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for x in &self.factors {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..x.cells().len()).map(move |c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &GradedPoly)> {
        self.components.iter()
    }

    pub fn component(&self, tuple: &[usize]) -> Option<&GradedPoly> {
        self.components.get(tuple)
    }

    pub fn component_or_zero(&self, tuple: &[usize]) -> Result<GradedPoly> {
        match self.components.get(tuple) {
            Some(p) => Ok(p.clone()),
            None => Ok(self.ring(tuple)?.zero()),
        }
    }

    /// Adds `poly` to the component at `tuple` after reduction.
    pub fn add_to_component(&mut self, tuple: Vec<usize>, poly: &GradedPoly) -> Result<()> {
        let ring = self.ring(&tuple)?;
        if poly.alphabet() != ring.alphabet() || poly.truncation() != ring.truncation() {
            return Err(structural!("component polynomial does not live in the ring of cells {tuple:?}"));
        }
        let reduced = ring.reduce(poly);
        let sum = match self.components.remove(&tuple) {
            Some(old) => &old + &reduced,
            None => reduced,
        };
        if !sum.is_zero() {
            self.components.insert(tuple, sum);
        }
        Ok(())
    }

    fn check_same_space(&self, other: &ChowElement) -> Result<()> {
        if !self.same_space(other) {
            return Err(structural!("Chow elements live on different products"));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (t, p) in &other.components {
            out.add_to_component(t.clone(), p)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (t, p) in &other.components {
            out.add_to_component(t.clone(), &-p)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> ChowElement {
        let mut out = self.clone();
        out.components = self
            .components
            .iter()
            .map(|(t, p)| (t.clone(), p.scale(c)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        out
    }

    /// Intersection product, cell tuple by cell tuple.
    pub fn checked_mul(&self, other: &ChowElement) -> Result<ChowElement> {
        self.check_same_space(other)?;
        let mut out = ChowElement::zero(self.factors.clone(), &self.coefficients, self.coefficient_degree)?;
        for (t, p) in &self.components {
            if let Some(q) = other.components.get(t) {
                out.add_to_component(t.clone(), &(p * q))?;
            }
        }
        Ok(out)
    }

    /// Same class with a different coefficient-degree budget.
    pub fn with_coefficient_degree(&self, coefficient_degree: u32) -> ChowElement {
        let base: u32 = self.factors.iter().map(FormalVariety::dimension).sum();
        ChowElement {
            factors: self.factors.clone(),
            coefficients: self.coefficients.clone(),
            coefficient_degree,
            components: self
                .components
                .iter()
                .map(|(t, p)| (t.clone(), p.retruncate(base + coefficient_degree)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// `pr_p^* γ` for a class `γ` on the single factor `factors[p]`.
    pub fn pullback_from_factor(
        factors: Vec<FormalVariety>,
        p: usize,
        gamma: &ChowElement,
    ) -> Result<ChowElement> {
        if gamma.power() != 1 || factors.get(p) != Some(&gamma.factors[0]) {
            return Err(structural!("class to pull back does not live on factor {p}"));
        }
        let mut out = ChowElement::zero(factors, &gamma.coefficients, gamma.coefficient_degree)?;
        for tuple in out.cell_tuples() {
            let Some(g) = gamma.components.get(&tuple[p..=p]) else {
                continue;
            };
            let src_ring = gamma.ring(&tuple[p..=p])?;
            let ring = out.ring(&tuple)?;
            let targets: Vec<usize> = (0..src_ring.alphabet().len())
                .map(|i| {
                    if i < src_ring.coefficient_offset() {
                        ring.hyperplane_index(p, i)
                    } else {
                        ring.coefficient_offset() + (i - src_ring.coefficient_offset())
                    }
                })
                .collect();
            let img = g.map_variables(ring.alphabet(), ring.truncation(), &targets);
            out.add_to_component(tuple, &img)?;
        }
        Ok(out)
    }

    /// Degree of the top-dimensional part, with the coefficient variables
    /// kept: `pr_{Y*}` of the class.
    pub fn integrate_coefficients(&self) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.coefficients, self.coefficient_degree);
        for (tuple, p) in &self.components {
            let ring = self.ring(tuple).expect("stored tuples are valid");
            let top = ring.top_exponents();
            let off = ring.coefficient_offset();
            for (m, c) in p.terms() {
                if m.exponents()[..off] == top[..off] {
                    let e = m.exponents()[off..].to_vec();
                    out += &GradedPoly::monomial(&self.coefficients, self.coefficient_degree, e, c.clone());
                }
            }
        }
        out
    }

    /// Degree of the top-dimensional, coefficient-free part.
    pub fn integrate(&self) -> Rational {
        let ints = self.integrate_coefficients();
        if ints.is_zero() {
            Rational::zero()
        } else {
            ints.constant_term()
        }
    }

    /// Restricts to the open-closed subvariety selected by `cell_maps` and
    /// permutes factors: new factor `q` is old factor `sources[q]` cut down to
    /// the old cells `cell_maps[q]`, and becomes the variety `new_factors[q]`.
    pub fn restrict_and_permute(
        &self,
        new_factors: Vec<FormalVariety>,
        sources: &[usize],
        cell_maps: &[Vec<usize>],
    ) -> Result<ChowElement> {
        let k = self.factors.len();
        let mut seen = vec![false; k];
        if sources.len() != k || new_factors.len() != k || cell_maps.len() != k {
            return Err(structural!("restriction must keep all {k} factors"));
        }
        for (q, &s) in sources.iter().enumerate() {
            if s >= k || std::mem::replace(&mut seen[s], true) {
                return Err(structural!("factor sources {sources:?} are not a permutation"));
            }
            let old = &self.factors[s];
            if cell_maps[q].len() != new_factors[q].cells().len()
                || cell_maps[q]
                    .iter()
                    .zip(new_factors[q].cells())
                    .any(|(&c, cell)| old.cells().get(c) != Some(cell))
            {
                return Err(structural!("factor {q} is not a union of cells of old factor {s}"));
            }
        }
        let mut out = ChowElement::zero(new_factors, &self.coefficients, self.coefficient_degree)?;
        for tuple in out.cell_tuples() {
            let mut old_tuple = vec![0; k];
            for q in 0..k {
                old_tuple[sources[q]] = cell_maps[q][tuple[q]];
            }
            let Some(p) = self.components.get(&old_tuple) else {
                continue;
            };
            let old_ring = self.ring(&old_tuple)?;
            let ring = out.ring(&tuple)?;
            let mut targets = vec![0; old_ring.alphabet().len()];
            for q in 0..k {
                for j in 0..out.factors[q].cells()[tuple[q]].factors() {
                    targets[old_ring.hyperplane_index(sources[q], j)] = ring.hyperplane_index(q, j);
                }
            }
            for i in old_ring.coefficient_offset()..targets.len() {
                targets[i] = ring.coefficient_offset() + (i - old_ring.coefficient_offset());
            }
            let img = p.map_variables(ring.alphabet(), ring.truncation(), &targets);
            out.add_to_component(tuple, &img)?;
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct ComponentOut<'a> {
    cells: &'a [usize],
    poly: &'a GradedPoly,
}

#[derive(Serialize)]
struct ChowOut<'a> {
    factors: &'a [FormalVariety],
    coefficient_alphabet: &'a Alphabet,
    coefficient_degree: u32,
    components: Vec<ComponentOut<'a>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentIn {
    cells: Vec<usize>,
    poly: GradedPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChowIn {
    factors: Vec<FormalVariety>,
    coefficient_alphabet: Alphabet,
    coefficient_degree: u32,
    components: Vec<ComponentIn>,
}

impl Serialize for ChowElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChowOut {
            factors: &self.factors,
            coefficient_alphabet: &self.coefficients,
            coefficient_degree: self.coefficient_degree,
            components: self
                .components
                .iter()
                .map(|(cells, poly)| ComponentOut { cells, poly })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChowElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ChowIn::deserialize(d)?;
        let mut out = ChowElement::zero(doc.factors, &doc.coefficient_alphabet, doc.coefficient_degree)
            .map_err(D::Error::custom)?;
        for c in doc.components {
            out.add_to_component(c.cells, &c.poly).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}
