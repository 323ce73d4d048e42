//! Standard cycles `Z(X) = Σ_I Δ_{I*} P_I(c(X))` on `k`-th powers.
//!
//! `P_I` is a polynomial in `l(I)` blocks of Chern variables
//! `c{i}_{s}` (weight `i`, block `s`) and a free coefficient alphabet. Cycles
//! are evaluated on formal test varieties and decoded back from their
//! values by pairing against Chern monomials, level by level in `l(I)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cobordism::{
    cell_chern_classes, chern_monomials, cobordism_basis, is_hyperplane_name, mixed_pairing_matrix,
    pulled_back_chern_monomial, with_coefficients, ChowElement, FormalVariety,
};
use crate::error::{structural, Error, Result};
use crate::graded_ring::{Alphabet, GradedPoly, Monomial};
use crate::linalg::{self, SolveError};
use crate::partitions::{block_map, enumerate_partitions, refines, DiagonalMap, SetPartition};
use crate::rational::Rational;

/// `c{i}_{s}` with 1-based degree `i` and 0-based block `s`.
pub fn chern_variable_name(i: u32, s: usize) -> String {
    format!("c{i}_{}", s + 1)
}

fn is_chern_variable_name(name: &str) -> bool {
    let Some(rest) = name.strip_prefix('c') else {
        return false;
    };
    let mut parts = rest.splitn(2, '_');
    let digits = |s: Option<&str>| s.is_some_and(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()));
    digits(parts.next()) && digits(parts.next())
}

/// Chern variables of `l` blocks, block-major, followed by `coefficients`.
pub fn block_alphabet(d: u32, l: usize, coefficients: &Alphabet) -> Result<Alphabet> {
    if let Some(v) = coefficients
        .variables()
        .iter()
        .find(|v| is_chern_variable_name(&v.name) || is_hyperplane_name(&v.name))
    {
        return Err(structural!("coefficient variable {:?} clashes with reserved names", v.name));
    }
    let mut vars: Vec<(String, u32)> = Vec::new();
    for s in 0..l {
        for i in 1..=d {
            vars.push((chern_variable_name(i, s), i));
        }
    }
    vars.extend(coefficients.variables().iter().map(|v| (v.name.clone(), v.weight)));
    Alphabet::new(vars)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardCycle {
    d: u32,
    k: usize,
    coefficients: Alphabet,
    coefficient_degree: u32,
    table: BTreeMap<SetPartition, GradedPoly>,
}

impl StandardCycle {
    /// Checks every `P_I` against the alphabet of `l(I)` blocks and the
    /// per-block degree bound `d`. The coefficient-degree budget is the
    /// largest coefficient degree in the table.
    pub fn new(
        d: u32,
        k: usize,
        coefficients: &Alphabet,
        table: impl IntoIterator<Item = (SetPartition, GradedPoly)>,
    ) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(structural!("dimension and power must be positive"));
        }
        let mut out = StandardCycle::zero(d, k, coefficients)?;
        for (i, p) in table {
            if i.k() != k {
                return Err(structural!("partition {i} is not a partition of 1..{k}"));
            }
            let alphabet = block_alphabet(d, i.len(), coefficients)?;
            if *p.alphabet() != alphabet {
                return Err(structural!("P_{i} must use the alphabet {alphabet:?}"));
            }
            for s in 0..i.len() {
                let idx: Vec<usize> = (s * d as usize..(s + 1) * d as usize).collect();
                let deg = p.degree_in(&idx);
                if deg > d {
                    return Err(structural!("P_{i} has degree {deg} > {d} in Chern block {}", s + 1));
                }
            }
            if out.table.contains_key(&i) {
                return Err(structural!("partition {i} appears twice"));
            }
            if !p.is_zero() {
                out.table.insert(i, p);
            }
        }
        Ok(out.normalized())
    }

    pub fn zero(d: u32, k: usize, coefficients: &Alphabet) -> Result<Self> {
        block_alphabet(d, 1, coefficients)?;
        Ok(StandardCycle {
            d,
            k,
            coefficients: coefficients.clone(),
            coefficient_degree: 0,
            table: BTreeMap::new(),
        })
    }

    fn coefficient_indices(&self, l: usize) -> Vec<usize> {
        let off = l * self.d as usize;
        (off..off + self.coefficients.len()).collect()
    }

    /// Recomputes the coefficient budget and retruncates every `P_I`.
    fn normalized(mut self) -> Self {
        self.coefficient_degree = self
            .table
            .iter()
            .map(|(i, p)| p.degree_in(&self.coefficient_indices(i.len())))
            .max()
            .unwrap_or(0);
        let (d, c) = (self.d, self.coefficient_degree);
        for (i, p) in self.table.iter_mut() {
            *p = p.retruncate(i.len() as u32 * d + c);
        }
        self
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &Alphabet {
        &self.coefficients
    }

    pub fn coefficient_degree(&self) -> u32 {
        self.coefficient_degree
    }

    pub fn table(&self) -> &BTreeMap<SetPartition, GradedPoly> {
        &self.table
    }

    pub fn poly(&self, i: &SetPartition) -> Option<&GradedPoly> {
        self.table.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Alphabet and truncation in which `P_I` lives for `l(I) = l`.
    pub fn ring(&self, l: usize) -> (Alphabet, u32) {
        let a = block_alphabet(self.d, l, &self.coefficients).expect("coefficient names checked on construction");
        (a, l as u32 * self.d + self.coefficient_degree)
    }

    pub fn checked_add(&self, other: &StandardCycle) -> Result<StandardCycle> {
        if (self.d, self.k, &self.coefficients) != (other.d, other.k, &other.coefficients) {
            return Err(structural!("cycles of different shapes"));
        }
        let c = self.coefficient_degree.max(other.coefficient_degree);
        let mut table = self.table.clone();
        for (i, p) in &other.table {
            let t = i.len() as u32 * self.d + c;
            let sum = match table.remove(i) {
                Some(q) => &q.retruncate(t) + &p.retruncate(t),
                None => p.retruncate(t),
            };
            table.insert(i.clone(), sum);
        }
        StandardCycle::new(self.d, self.k, &self.coefficients, table)
    }

    fn check_variety(&self, x: &FormalVariety) -> Result<()> {
        if x.dimension() != self.d {
            return Err(structural!("{x} has dimension {} but the cycle expects {}", x.dimension(), self.d));
        }
        Ok(())
    }

    /// `P_J` with `c_{•,s}` replaced by the Chern classes of `factors[s]`.
    fn substitute_chern(&self, j: &SetPartition, p: &GradedPoly, factors: &[FormalVariety]) -> Result<ChowElement> {
        let mut out = ChowElement::zero(factors.to_vec(), &self.coefficients, self.coefficient_degree)?;
        for tuple in out.cell_tuples() {
            let ring = out.ring(&tuple)?;
            let mut images = Vec::with_capacity(p.alphabet().len());
            for (s, &c) in tuple.iter().enumerate() {
                let classes = cell_chern_classes(&ring, s, &factors[s].cells()[c]);
                images.extend((1..=self.d as usize).map(|i| classes[i].clone()));
            }
            let off = ring.coefficient_offset();
            for i in 0..self.coefficients.len() {
                images.push(GradedPoly::var_at(ring.alphabet(), ring.truncation(), off + i));
            }
            debug_assert_eq!(images.len(), p.alphabet().len(), "{j}");
            let img = p.substitute_indexed(&images, ring.alphabet(), ring.truncation())?;
            out.add_to_component(tuple, &img)?;
        }
        Ok(out)
    }

    /// `Z(X)` on `X^k`.
    pub fn evaluate(&self, x: &FormalVariety) -> Result<ChowElement> {
        self.check_variety(x)?;
        let mut out = ChowElement::zero(vec![x.clone(); self.k], &self.coefficients, self.coefficient_degree)?;
        for (i, p) in &self.table {
            let alpha = self.substitute_chern(i, p, &vec![x.clone(); i.len()])?;
            out = out.checked_add(&i.diagonal().pushforward(&alpha)?)?;
        }
        Ok(out)
    }

    /// `Z_I(X_1..X_l)` on `X_1^{I_1} × … × X_l^{I_l}` (factors in grouped
    /// order) by the closed form `Σ_{J refines I} Δ_{J,I*} P_J`.
    pub fn restrict_to_component(&self, i: &SetPartition, xs: &[FormalVariety]) -> Result<ChowElement> {
        self.restrict_filtered(i, xs, |_| true)
    }

    fn restrict_filtered(
        &self,
        i: &SetPartition,
        xs: &[FormalVariety],
        keep: impl Fn(&SetPartition) -> bool,
    ) -> Result<ChowElement> {
        self.check_component_shape(i, xs)?;
        let grouped = i.grouped_order();
        let factors = grouped_factors(i, xs);
        let mut out = ChowElement::zero(factors, &self.coefficients, self.coefficient_degree)?;
        for (j, p) in &self.table {
            if !refines(j, i)? || !keep(j) {
                continue;
            }
            let (map, _) = block_map(j, i)?;
            let source: Vec<FormalVariety> = map.iter().map(|&t| xs[t].clone()).collect();
            let alpha = self.substitute_chern(j, p, &source)?;
            let ja = j.assignment();
            let delta = DiagonalMap::new(j.len(), grouped.iter().map(|&e| ja[e - 1]).collect())?;
            out = out.checked_add(&delta.pushforward(&alpha)?)?;
        }
        Ok(out)
    }

    /// Same as [`Self::restrict_to_component`], by evaluating on the disjoint
    /// union `X_1 ⊔ … ⊔ X_l` and extracting the component.
    pub fn restrict_to_component_direct(&self, i: &SetPartition, xs: &[FormalVariety]) -> Result<ChowElement> {
        self.check_component_shape(i, xs)?;
        let union = FormalVariety::disjoint_union(xs)?;
        extract_component(&self.evaluate(&union)?, i, xs)
    }

    fn check_component_shape(&self, i: &SetPartition, xs: &[FormalVariety]) -> Result<()> {
        if i.k() != self.k || xs.len() != i.len() {
            return Err(structural!("component {i} needs {} varieties, got {}", i.len(), xs.len()));
        }
        xs.iter().try_for_each(|x| self.check_variety(x))
    }

    /// `Z_I^δ(X) = Σ_{J refines I} Δ_{J*} P_J(c(X))` on `X^k`.
    pub fn z_delta(&self, i: &SetPartition, x: &FormalVariety) -> Result<ChowElement> {
        self.check_variety(x)?;
        let mut out = ChowElement::zero(vec![x.clone(); self.k], &self.coefficients, self.coefficient_degree)?;
        for (j, p) in &self.table {
            if refines(j, i)? {
                let alpha = self.substitute_chern(j, p, &vec![x.clone(); j.len()])?;
                out = out.checked_add(&j.diagonal().pushforward(&alpha)?)?;
            }
        }
        Ok(out)
    }
}

fn grouped_factors(i: &SetPartition, xs: &[FormalVariety]) -> Vec<FormalVariety> {
    i.blocks()
        .iter()
        .zip(xs)
        .flat_map(|(b, x)| std::iter::repeat(x.clone()).take(b.len()))
        .collect()
}

/// Restriction of a class on `(⊔ X_t)^k` to `X_1^{I_1} × … × X_l^{I_l}`.
fn extract_component(value: &ChowElement, i: &SetPartition, xs: &[FormalVariety]) -> Result<ChowElement> {
    let mut offsets = Vec::with_capacity(xs.len());
    let mut n = 0;
    for x in xs {
        offsets.push(n);
        n += x.cells().len();
    }
    let assignment = i.assignment();
    let grouped = i.grouped_order();
    let sources: Vec<usize> = grouped.iter().map(|&e| e - 1).collect();
    let cell_maps: Vec<Vec<usize>> = grouped
        .iter()
        .map(|&e| {
            let t = assignment[e - 1];
            (offsets[t]..offsets[t] + xs[t].cells().len()).collect()
        })
        .collect();
    value.restrict_and_permute(grouped_factors(i, xs), &sources, &cell_maps)
}

/// Re-indexes a class on `X^{i_1} × … × X^{i_l}` (grouped by the blocks of
/// `i`) as a class on `X^k`.
pub fn delta_restrict(t: &ChowElement, i: &SetPartition) -> Result<ChowElement> {
    if t.power() != i.k() {
        return Err(structural!("class on a {}-fold product, partition of {}", t.power(), i.k()));
    }
    let x = &t.factors()[0];
    if t.factors().iter().any(|f| f != x) {
        return Err(structural!("δ-restriction needs all factors equal"));
    }
    let grouped = i.grouped_order();
    let mut sources = vec![0; i.k()];
    for (q, &e) in grouped.iter().enumerate() {
        sources[e - 1] = q;
    }
    let cells: Vec<usize> = (0..x.cells().len()).collect();
    t.restrict_and_permute(vec![x.clone(); i.k()], &sources, &vec![cells; i.k()])
}

#[derive(Serialize)]
struct EntryOut<'a> {
    partition: &'a SetPartition,
    poly: &'a GradedPoly,
}

#[derive(Serialize)]
struct CycleOut<'a> {
    d: u32,
    k: usize,
    coefficient_alphabet: &'a Alphabet,
    table: Vec<EntryOut<'a>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryIn {
    partition: SetPartition,
    poly: GradedPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CycleIn {
    d: u32,
    k: usize,
    coefficient_alphabet: Alphabet,
    table: Vec<EntryIn>,
}

impl Serialize for StandardCycle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycleOut {
            d: self.d,
            k: self.k,
            coefficient_alphabet: &self.coefficients,
            table: self
                .table
                .iter()
                .map(|(partition, poly)| EntryOut { partition, poly })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StandardCycle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = CycleIn::deserialize(d)?;
        StandardCycle::new(
            doc.d,
            doc.k,
            &doc.coefficient_alphabet,
            doc.table.into_iter().map(|e| (e.partition, e.poly)),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Something that assigns to each test variety `X` a class on `X^k`.
pub trait EvaluationOracle {
    fn query(&self, x: &FormalVariety) -> Result<ChowElement>;
}

impl<F: Fn(&FormalVariety) -> Result<ChowElement>> EvaluationOracle for F {
    fn query(&self, x: &FormalVariety) -> Result<ChowElement> {
        self(x)
    }
}

impl EvaluationOracle for StandardCycle {
    fn query(&self, x: &FormalVariety) -> Result<ChowElement> {
        self.evaluate(x)
    }
}

/// Precomputed answers keyed by variety spec.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TableOracle {
    answers: BTreeMap<FormalVariety, ChowElement>,
}

impl TableOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: FormalVariety, value: ChowElement) {
        self.answers.insert(x, value);
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    /// Answers `oracle` on every variety of `suite`.
    pub fn record(oracle: &impl EvaluationOracle, suite: &[FormalVariety]) -> Result<Self> {
        let mut out = TableOracle::new();
        for x in suite {
            out.insert(x.clone(), oracle.query(x)?);
        }
        Ok(out)
    }
}

impl EvaluationOracle for TableOracle {
    fn query(&self, x: &FormalVariety) -> Result<ChowElement> {
        self.answers
            .get(x)
            .cloned()
            .ok_or_else(|| Error::MissingQueries(vec![x.to_string()]))
    }
}

/// Disjoint unions of `1..=k` cobordism-basis varieties, as ordered tuples.
pub fn decode_suite(d: u32, k: usize) -> Result<Vec<FormalVariety>> {
    let basis = cobordism_basis(d)?;
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        level = level
            .into_iter()
            .flat_map(|t| {
                (0..basis.len()).map(move |b| {
                    let mut t = t.clone();
                    t.push(b);
                    t
                })
            })
            .collect();
        for t in &level {
            out.push(FormalVariety::disjoint_union(t.iter().map(|&b| &basis[b]))?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Decoded {
    pub cycle: StandardCycle,
    /// Test varieties the oracle was queried on.
    pub suite: Vec<FormalVariety>,
}

/// Per-block pairing data: rows `(X, L)`, columns all Chern monomials of
/// degree `0..=d`, entries `∫_X c_L c_J`.
struct BlockPairing {
    rows: Vec<(usize, Vec<u32>)>,
    columns: Vec<Vec<u32>>,
    matrix: Vec<Vec<Rational>>,
}

fn block_pairing(d: u32, basis: &[FormalVariety]) -> Result<BlockPairing> {
    let mut rows = Vec::new();
    let mut columns = Vec::new();
    for m in 0..=d {
        let mp = mixed_pairing_matrix(d, m)?;
        for (x, l) in mp.pairs {
            let b = basis.iter().position(|y| *y == x).expect("pairs use basis varieties");
            rows.push((b, l));
        }
        columns.extend(chern_monomials(d, m));
    }
    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(b, l)| {
            columns
                .iter()
                .map(|j| {
                    let e: Vec<u32> = j.iter().zip(l).map(|(a, c)| a + c).collect();
                    crate::cobordism::chern_number(&basis[*b], &e)
                })
                .collect()
        })
        .collect();
    if linalg::rank(&matrix) != columns.len() {
        return Err(Error::Invariant(format!("block pairing matrix in dimension {d} is singular")));
    }
    Ok(BlockPairing { rows, columns, matrix })
}

fn tuples(n: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Recovers the standard cycle whose values the oracle reports.
///
/// Partitions are processed by decreasing `l(I)`. For each `I` the oracle
/// value on `⊔ X_t` is cut down to the `I`-component, the contributions of
/// already decoded strict refinements are removed, and the rest is paired
/// against `Π_t c_{L_t}(X_t)`; the resulting square system is a Kronecker
/// power of the per-block pairing matrix. The decoded cycle is finally
/// re-evaluated on the whole suite and compared with the oracle.
pub fn decode(oracle: &impl EvaluationOracle, d: u32, k: usize) -> Result<Decoded> {
    if k == 0 {
        return Err(structural!("power must be positive"));
    }
    let suite = decode_suite(d, k)?;
    let mut answers: BTreeMap<FormalVariety, ChowElement> = BTreeMap::new();
    let mut missing = Vec::new();
    for x in &suite {
        match oracle.query(x) {
            Ok(v) => {
                if v.factors() != vec![x.clone(); k].as_slice() {
                    return Err(structural!("oracle answer for {x} does not live on its {k}-th power"));
                }
                answers.insert(x.clone(), v);
            }
            Err(Error::MissingQueries(m)) => missing.extend(m),
            Err(e) => return Err(e),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingQueries(missing));
    }
    let first = answers.values().next().expect("suite is non-empty");
    let coefficients = first.coefficients().clone();
    if answers.values().any(|v| *v.coefficients() != coefficients) {
        return Err(structural!("oracle answers use different coefficient alphabets"));
    }
    let budget = answers.values().map(ChowElement::coefficient_degree).max().unwrap_or(0);
    for v in answers.values_mut() {
        *v = v.with_coefficient_degree(budget);
    }

    let basis = cobordism_basis(d)?;
    let pairing = block_pairing(d, &basis)?;
    let n = pairing.columns.len();
    let mut partial = StandardCycle::zero(d, k, &coefficients)?;
    partial.coefficient_degree = budget;

    let mut by_level: BTreeMap<usize, Vec<SetPartition>> = BTreeMap::new();
    for i in enumerate_partitions(k) {
        by_level.entry(i.len()).or_default().push(i);
    }
    for (&l, parts) in by_level.iter().rev() {
        let mut system = vec![vec![Rational::from_integer(1.into())]];
        for _ in 0..l {
            system = linalg::kronecker(&system, &pairing.matrix);
        }
        let row_tuples = tuples(n, l);
        let (alphabet, trunc) = partial.ring(l);
        let mut decoded = Vec::new();
        for i in parts {
            // values of the pairing, one rhs vector per coefficient monomial
            let mut rhs: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
            for (row, rt) in row_tuples.iter().enumerate() {
                let xs: Vec<FormalVariety> = rt.iter().map(|&r| basis[pairing.rows[r].0].clone()).collect();
                let union = FormalVariety::disjoint_union(&xs)?;
                let value = answers.get(&union).expect("suite holds every union of at most k basis varieties");
                let comp = extract_component(value, i, &xs)?;
                let known = partial.restrict_to_component(i, &xs)?;
                let rest = comp.checked_sub(&known)?;
                let factors = rest.factors().to_vec();
                let mut beta = ChowElement::fundamental(factors.clone(), &Alphabet::empty(), 0)?;
                let mut q = 0;
                for (t, block) in i.blocks().iter().enumerate() {
                    let l_t = &pairing.rows[rt[t]].1;
                    beta = beta.checked_mul(&pulled_back_chern_monomial(&factors, q, l_t)?)?;
                    q += block.len();
                }
                let beta = with_coefficients(&beta, &coefficients, budget)?;
                let paired = rest.checked_mul(&beta)?.integrate_coefficients();
                for (m, c) in paired.terms() {
                    rhs.entry(m.clone())
                        .or_insert_with(|| vec![Rational::from_integer(0.into()); row_tuples.len()])[row] = c.clone();
                }
            }
            let monomials: Vec<Monomial> = rhs.keys().cloned().collect();
            let columns: Vec<Vec<Rational>> = rhs.into_values().collect();
            let solution = linalg::solve(&system, &columns).map_err(|e| match e {
                SolveError::Singular { rank } => {
                    Error::Invariant(format!("pairing system for {i} has rank {rank} < {}", system.len()))
                }
                SolveError::Inconsistent => Error::NotStandard(format!("pairing system for {i} is inconsistent")),
            })?;
            let mut p = GradedPoly::zero(&alphabet, trunc);
            for (y, x) in monomials.iter().zip(&solution) {
                for (col, ct) in row_tuples.iter().enumerate() {
                    if x[col] == Rational::from_integer(0.into()) {
                        continue;
                    }
                    let mut e = Vec::with_capacity(alphabet.len());
                    for &c in ct {
                        e.extend_from_slice(&pairing.columns[c]);
                    }
                    e.extend_from_slice(y.exponents());
                    p = &p + &GradedPoly::monomial(&alphabet, trunc, e, x[col].clone());
                }
            }
            if !p.is_zero() {
                decoded.push((i.clone(), p));
            }
        }
        // same-level partitions never refine one another
        partial.table.extend(decoded);
    }

    let cycle = partial.normalized();
    for (x, v) in &answers {
        if cycle.evaluate(x)?.with_coefficient_degree(budget) != *v {
            return Err(Error::NotStandard(format!("decoded cycle disagrees with the oracle on {x}")));
        }
    }
    Ok(Decoded { cycle, suite })
}

/// `None` when `Z` vanishes on the whole decode suite, else a witness.
pub fn verify_vanishing(z: &StandardCycle) -> Result<Option<FormalVariety>> {
    for x in decode_suite(z.d, z.k)? {
        if !z.evaluate(&x)?.is_zero() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cycle(d: u32, k: usize, entries: &[(SetPartition, &[(&[u32], i64)])]) -> StandardCycle {
        let empty = Alphabet::empty();
        StandardCycle::new(
            d,
            k,
            &empty,
            entries.iter().map(|(i, terms)| {
                let a = block_alphabet(d, i.len(), &empty).unwrap();
                let p = GradedPoly::from_terms(&a, i.len() as u32 * d, terms.iter().map(|(e, c)| (e.to_vec(), int(*c))));
                (i.clone(), p)
            }),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let p1: FormalVariety = "P1".parse().unwrap();
        let z = cycle(1, 2, &[(SetPartition::singletons(2), &[(&[0, 0], 1)])]);
        let v = z.evaluate(&p1).unwrap();
        assert_eq!(v, ChowElement::fundamental(vec![p1.clone(), p1.clone()], &Alphabet::empty(), 0).unwrap());

        let z = cycle(1, 2, &[(SetPartition::one_block(2), &[(&[1], 1)])]);
        let v = z.evaluate(&p1).unwrap();
        assert_eq!(v.component(&[0, 0]).unwrap().to_string(), "2*h1_1*h2_1");
        assert!(z.evaluate(&"P2".parse().unwrap()).is_err());
    }

    #[test]
    fn degree_guard_and_names() {
        let empty = Alphabet::empty();
        let a = block_alphabet(1, 1, &empty).unwrap();
        let too_big = GradedPoly::from_terms(&a, 4, [(vec![2], int(1))]);
        assert!(StandardCycle::new(1, 2, &empty, [(SetPartition::one_block(2), too_big)]).is_err());
        let clash = Alphabet::new([("c1_1", 1)]).unwrap();
        assert!(StandardCycle::zero(1, 2, &clash).is_err());
        let clash = Alphabet::new([("h1_1", 1)]).unwrap();
        assert!(StandardCycle::zero(1, 2, &clash).is_err());
    }

    #[test]
    fn restriction_drops_non_refining_terms() {
        let z = cycle(
            1,
            2,
            &[
                (SetPartition::singletons(2), &[(&[1, 1], 1)]),
                (SetPartition::one_block(2), &[(&[1], 1)]),
            ],
        );
        let p1: FormalVariety = "P1".parse().unwrap();
        let xs = [p1.clone(), p1.clone()];
        let r = z.restrict_to_component(&SetPartition::singletons(2), &xs).unwrap();
        assert_eq!(r.component(&[0, 0]).unwrap().to_string(), "4*h1_1*h2_1");
        assert_eq!(r, z.restrict_to_component_direct(&SetPartition::singletons(2), &xs).unwrap());
        let one = SetPartition::one_block(2);
        assert_eq!(z.restrict_to_component(&one, &[p1.clone()]).unwrap(), z.evaluate(&p1).unwrap());
    }

    #[test]
    fn decode_examples() {
        let zero = |x: &FormalVariety| Ok(ChowElement::zero_on_power(x, 2));
        let dec = decode(&zero, 2, 2).unwrap();
        assert!(dec.cycle.is_zero());
        assert_eq!(dec.suite.len(), 2 + 4);

        let diag = |x: &FormalVariety| {
            let one = ChowElement::fundamental(vec![x.clone()], &Alphabet::empty(), 0)?;
            SetPartition::one_block(2).diagonal().pushforward(&one)
        };
        let dec = decode(&diag, 1, 2).unwrap().cycle;
        let expect = cycle(1, 2, &[(SetPartition::one_block(2), &[(&[0], 1)])]);
        assert_eq!(dec, expect);

        let z = cycle(
            2,
            2,
            &[
                (SetPartition::singletons(2), &[(&[1, 0, 1, 0], 3), (&[0, 1, 0, 0], -1)]),
                (SetPartition::one_block(2), &[(&[2, 0], 1), (&[0, 0], 5)]),
            ],
        );
        assert_eq!(decode(&z, 2, 2).unwrap().cycle, z);
    }

    #[test]
    fn decode_rejects_non_standard_and_missing() {
        // X ↦ [X × pt] is not symmetric under swapping factors
        let odd = |x: &FormalVariety| {
            let mut v = ChowElement::zero_on_power(x, 2);
            for t in v.cell_tuples() {
                if t[0] == t[1] {
                    let ring = v.ring(&t)?;
                    let top: Vec<u32> = ring.top_exponents();
                    let half: Vec<u32> = top
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| if i >= top.len() / 2 { e } else { 0 })
                        .collect();
                    v.add_to_component(t.clone(), &GradedPoly::monomial(ring.alphabet(), ring.truncation(), half, int(1)))?;
                }
            }
            Ok(v)
        };
        assert!(matches!(decode(&odd, 1, 2), Err(Error::NotStandard(_))));

        let table = TableOracle::new();
        match decode(&table, 1, 2) {
            Err(Error::MissingQueries(m)) => assert_eq!(m, ["P1", "P1 + P1"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vanishing_witness() {
        let z = cycle(1, 2, &[(SetPartition::one_block(2), &[(&[1], 1)])]);
        assert!(verify_vanishing(&z).unwrap().is_some());
        assert_eq!(verify_vanishing(&StandardCycle::zero(1, 2, &Alphabet::empty()).unwrap()).unwrap(), None);
    }

    #[test]
    fn serde_round_trip() {
        let y = Alphabet::new([("y", 1)]).unwrap();
        let a = block_alphabet(1, 1, &y).unwrap();
        let p = GradedPoly::from_terms(&a, 5, [(vec![1, 1], int(2)), (vec![0, 0], int(1))]);
        let z = StandardCycle::new(1, 2, &y, [(SetPartition::one_block(2), p)]).unwrap();
        assert_eq!(z.coefficient_degree(), 1);
        let s = serde_json::to_string(&z).unwrap();
        let back: StandardCycle = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
