//! Formal test varieties, their Chow rings, and Chern numbers.
//!
//! A test variety is a disjoint union of products of projective spaces of a
//! common dimension `d`. Chow classes on products of such varieties are
//! stored cell tuple by cell tuple as polynomials in the hyperplane classes.
//! Products of projective spaces indexed by the integer partitions of `d`
//! have independent Chern numbers; [`chern_number_matrix`] certifies this by
//! exact elimination for the `d` it is run at.

mod chow;
mod variety;

use serde::{Deserialize, Serialize};

pub use chow::{hyperplane_name, is_hyperplane_name, ChowElement, ProductRing};
pub use variety::{Cell, FormalVariety};

use crate::error::{structural, Error, Result};
use crate::graded_ring::{exponents_of_degree, Alphabet, GradedPoly};
use crate::linalg;
use crate::rational::{format_rational, parse_rational, Rational};

/// `c_0, …, c_dim` of factor `p` of `ring`, where that factor is `cell`.
pub fn cell_chern_classes(ring: &ProductRing, p: usize, cell: &Cell) -> Vec<GradedPoly> {
    let total = ring.tangent_total(p, cell);
    (0..=cell.dimension()).map(|i| total.homogeneous_part(i)).collect()
}

/// `Π_i c_i^{e_i}` for `exponents = (e_1, e_2, …)`, from `classes[i] = c_i`.
pub fn chern_monomial_from(ring: &ProductRing, classes: &[GradedPoly], exponents: &[u32]) -> GradedPoly {
    let mut acc = ring.one();
    for (i, &e) in exponents.iter().enumerate() {
        if e > 0 {
            let c = classes.get(i + 1).cloned().unwrap_or_else(|| ring.zero());
            acc = ring.reduce(&(&acc * &c.pow(e)));
        }
    }
    acc
}

/// Total Chern class of the tangent bundle, cell by cell.
pub fn chern_class(x: &FormalVariety) -> ChowElement {
    let mut out = ChowElement::zero_on_power(x, 1);
    for (i, cell) in x.cells().iter().enumerate() {
        let ring = out.ring(&[i]).expect("cell index in range");
        let total = ring.tangent_total(0, cell);
        out.add_to_component(vec![i], &total).expect("polynomial built in the cell ring");
    }
    out
}

/// `c_J(X)` as a class on `X`.
pub fn chern_monomial(x: &FormalVariety, exponents: &[u32]) -> ChowElement {
    let mut out = ChowElement::zero_on_power(x, 1);
    for (i, cell) in x.cells().iter().enumerate() {
        let ring = out.ring(&[i]).expect("cell index in range");
        let classes = cell_chern_classes(&ring, 0, cell);
        let m = chern_monomial_from(&ring, &classes, exponents);
        out.add_to_component(vec![i], &m).expect("polynomial built in the cell ring");
    }
    out
}

/// `∫_X α`: the top-degree coefficient summed over cells.
pub fn integrate(x: &FormalVariety, alpha: &ChowElement) -> Result<Rational> {
    if alpha.factors() != std::slice::from_ref(x) {
        return Err(structural!("class does not live on {x}"));
    }
    Ok(alpha.integrate())
}

pub fn chern_number(x: &FormalVariety, exponents: &[u32]) -> Rational {
    chern_monomial(x, exponents).integrate()
}

/// Integer partitions of `n`, parts weakly decreasing, in reverse-lex order.
pub fn integer_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=left.min(max)).rev() {
            cur.push(part);
            go(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One single-cell variety `P^{λ_1} × P^{λ_2} × …` per partition `λ` of `d`.
pub fn cobordism_basis(d: u32) -> Result<Vec<FormalVariety>> {
    if d == 0 {
        return Err(structural!("dimension must be positive"));
    }
    integer_partitions(d)
        .iter()
        .map(|parts| FormalVariety::single(parts))
        .collect()
}

/// Exponent vectors `(e_1..e_d)` of the Chern monomials of weighted degree `m`.
pub fn chern_monomials(d: u32, m: u32) -> Vec<Vec<u32>> {
    let weights: Vec<u32> = (1..=d).collect();
    exponents_of_degree(&weights, m)
}

/// `c1^2`, `c1*c2`, `1`.
pub fn monomial_label(exponents: &[u32]) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("c{}", i + 1) } else { format!("c{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn labels(monomials: &[Vec<u32>]) -> Vec<String> {
    monomials.iter().map(|e| monomial_label(e)).collect()
}

/// Inverse of [`monomial_label`] for Chern monomials of `c_1..c_d`.
pub fn parse_monomial_label(d: u32, label: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("bad Chern monomial {label:?}"));
    let mut e = vec![0; d as usize];
    if label == "1" {
        return Ok(e);
    }
    for factor in label.split('*') {
        let body = factor.strip_prefix('c').ok_or_else(bad)?;
        let (i, p) = match body.split_once('^') {
            Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad())?),
            None => (body, 1),
        };
        let i: usize = i.parse().map_err(|_| bad())?;
        if i == 0 || i > d as usize || p == 0 {
            return Err(bad());
        }
        e[i - 1] += p;
    }
    Ok(e)
}

/// `M[i][J] = ∫_{X_i} c_J(X_i)` over the cobordism basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernNumberMatrix {
    pub dim: u32,
    pub rows: Vec<FormalVariety>,
    pub columns: Vec<Vec<u32>>,
    pub entries: Vec<Vec<Rational>>,
    pub rank: usize,
    pub determinant: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    dim: u32,
    rows: Vec<FormalVariety>,
    columns: Vec<String>,
    entries: Vec<Vec<String>>,
    rank: usize,
    determinant: String,
}

impl Serialize for ChernNumberMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc {
            dim: self.dim,
            rows: self.rows.clone(),
            columns: self.column_labels(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
            rank: self.rank,
            determinant: format_rational(&self.determinant),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChernNumberMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = MatrixDoc::deserialize(d)?;
        let q = |s: &String| parse_rational(s).map_err(D::Error::custom);
        Ok(ChernNumberMatrix {
            dim: doc.dim,
            rows: doc.rows,
            columns: doc
                .columns
                .iter()
                .map(|l| parse_monomial_label(doc.dim, l).map_err(D::Error::custom))
                .collect::<std::result::Result<_, _>>()?,
            entries: doc
                .entries
                .iter()
                .map(|r| r.iter().map(q).collect())
                .collect::<std::result::Result<_, _>>()?,
            rank: doc.rank,
            determinant: q(&doc.determinant)?,
        })
    }
}

impl ChernNumberMatrix {
    pub fn column_labels(&self) -> Vec<String> {
        labels(&self.columns)
    }

    /// Header `variety,<labels>` then one row per basis variety.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("variety");
        for l in self.column_labels() {
            out.push(',');
            out.push_str(&l);
        }
        out.push('\n');
        for (x, row) in self.rows.iter().zip(&self.entries) {
            out.push_str(&x.to_string());
            for q in row {
                out.push(',');
                out.push_str(&format_rational(q));
            }
            out.push('\n');
        }
        out
    }
}

pub fn chern_number_matrix(d: u32) -> Result<ChernNumberMatrix> {
    let rows = cobordism_basis(d)?;
    let columns = chern_monomials(d, d);
    let entries: Vec<Vec<Rational>> = rows
        .iter()
        .map(|x| columns.iter().map(|e| chern_number(x, e)).collect())
        .collect();
    let rank = linalg::rank(&entries);
    if rank != rows.len() || rows.len() != columns.len() {
        return Err(Error::Invariant(format!(
            "Chern-number matrix in dimension {d} has rank {rank}, expected {}",
            columns.len()
        )));
    }
    let determinant = linalg::determinant(&entries);
    Ok(ChernNumberMatrix {
        dim: d,
        rows,
        columns,
        entries,
        rank,
        determinant,
    })
}

/// Square matrix `∫_{X_i} c_{L_i}(X_i) c_J(X_i)` with columns the degree-`m`
/// monomials `c_J` and rows the chosen pairs `(X_i, L_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedPairing {
    pub dim: u32,
    pub degree: u32,
    pub columns: Vec<Vec<u32>>,
    pub pairs: Vec<(FormalVariety, Vec<u32>)>,
    pub matrix: Vec<Vec<Rational>>,
}

/// Picks pairs greedily, scanning basis varieties and then complementary
/// monomials in canonical order and keeping a pair when it raises the rank.
pub fn mixed_pairing_matrix(d: u32, m: u32) -> Result<MixedPairing> {
    if m > d {
        return Err(structural!("target degree {m} exceeds dimension {d}"));
    }
    let basis = cobordism_basis(d)?;
    let columns = chern_monomials(d, m);
    let complements = chern_monomials(d, d - m);
    let mut pairs = Vec::new();
    let mut matrix: Vec<Vec<Rational>> = Vec::new();
    'search: for x in &basis {
        for l in &complements {
            if matrix.len() == columns.len() {
                break 'search;
            }
            let row: Vec<Rational> = columns
                .iter()
                .map(|j| {
                    let e: Vec<u32> = j.iter().zip(l).map(|(a, b)| a + b).collect();
                    chern_number(x, &e)
                })
                .collect();
            matrix.push(row);
            if linalg::rank(&matrix) == matrix.len() {
                pairs.push((x.clone(), l.clone()));
            } else {
                matrix.pop();
            }
        }
    }
    if matrix.len() != columns.len() {
        return Err(Error::Degenerate {
            message: format!(
                "no full-rank mixed pairing in dimension {d}, degree {m}: rank {} of {}",
                matrix.len(),
                columns.len()
            ),
            mu: Vec::new(),
        });
    }
    Ok(MixedPairing {
        dim: d,
        degree: m,
        columns,
        pairs,
        matrix,
    })
}

/// Coefficient alphabet-free class `pr_p^*(c_J(X))` on the product `factors`.
pub fn pulled_back_chern_monomial(factors: &[FormalVariety], p: usize, exponents: &[u32]) -> Result<ChowElement> {
    let gamma = chern_monomial(&factors[p], exponents);
    ChowElement::pullback_from_factor(factors.to_vec(), p, &gamma)
}

/// Lifts a coefficient-free class to carry the coefficient alphabet.
pub fn with_coefficients(alpha: &ChowElement, coefficients: &Alphabet, coefficient_degree: u32) -> Result<ChowElement> {
    if !alpha.coefficients().is_empty() {
        return Err(structural!("class already carries coefficients"));
    }
    let mut out = ChowElement::zero(alpha.factors().to_vec(), coefficients, coefficient_degree)?;
    for (tuple, p) in alpha.components() {
        let ring = out.ring(tuple)?;
        out.add_to_component(tuple.clone(), &p.embed(ring.alphabet(), ring.truncation())?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn binom(n: u32, k: u32) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }

    #[test]
    fn chern_class_examples() {
        let p2: FormalVariety = "P2".parse().unwrap();
        let c = chern_class(&p2);
        assert_eq!(c.component(&[0]).unwrap().to_string(), "1 + 3*h1_1 + 3*h1_1^2");
        let p11: FormalVariety = "P1xP1".parse().unwrap();
        let c = chern_class(&p11);
        assert_eq!(c.component(&[0]).unwrap().len(), 4);
        assert_eq!(c.component(&[0]).unwrap().coefficient_of(&[1, 1]), int(4));
        let u: FormalVariety = "P2 + P1xP1".parse().unwrap();
        let c = chern_class(&u);
        assert_eq!(c.component(&[0]), chern_class(&p2).component(&[0]));
        assert_eq!(c.component(&[1]), chern_class(&p11).component(&[0]));
    }

    #[test]
    fn integration_examples() {
        let p2: FormalVariety = "P2".parse().unwrap();
        assert_eq!(chern_number(&p2, &[2, 0]), int(9));
        let p11: FormalVariety = "P1xP1".parse().unwrap();
        assert_eq!(chern_number(&p11, &[0, 1]), int(4));
        assert_eq!(integrate(&p2, &chern_monomial(&p2, &[1, 0])).unwrap(), int(0));
        assert!(integrate(&p11, &chern_monomial(&p2, &[2, 0])).is_err());
        // Chern numbers add over disjoint unions
        let u: FormalVariety = "P2 + P1xP1".parse().unwrap();
        assert_eq!(chern_number(&u, &[2, 0]), int(17));
    }

    #[test]
    fn basis_order_and_counts() {
        let b = cobordism_basis(2).unwrap();
        assert_eq!(b.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["P2", "P1xP1"]);
        assert_eq!(cobordism_basis(1).unwrap().len(), 1);
        assert_eq!(cobordism_basis(4).unwrap().len(), 5);
        assert_eq!(integer_partitions(5).len(), 7);
        assert_eq!(labels(&chern_monomials(3, 3)), ["c1^3", "c1*c2", "c3"]);
        assert_eq!(monomial_label(&[0, 0]), "1");
    }

    #[test]
    fn chern_number_matrices() {
        let m1 = chern_number_matrix(1).unwrap();
        assert_eq!(m1.entries, vec![vec![int(2)]]);
        let m2 = chern_number_matrix(2).unwrap();
        assert_eq!(m2.entries, vec![vec![int(9), int(3)], vec![int(8), int(4)]]);
        assert_eq!(m2.determinant, int(12));
        assert_eq!(m2.to_csv(), "variety,c1^2,c2\nP2,9,3\nP1xP1,8,4\n");
        let json = serde_json::to_string(&m2).unwrap();
        assert_eq!(serde_json::from_str::<ChernNumberMatrix>(&json).unwrap(), m2);
        assert_eq!(parse_monomial_label(3, "c1*c2").unwrap(), vec![1, 1, 0]);
        assert!(parse_monomial_label(2, "c3").is_err());
        for d in 3..=4 {
            let m = chern_number_matrix(d).unwrap();
            assert_eq!(m.rank, integer_partitions(d).len());
            assert_ne!(m.determinant, int(0));
        }
    }

    #[test]
    fn chern_numbers_match_binomial_expansion() {
        // c_i(P^r) = binom(r+1, i) h^i, so on P^r×P^s the numbers are sums of
        // products of binomials over the ways to split degrees.
        for (r, s) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
            let x = FormalVariety::single(&[r, s]).unwrap();
            let d = r + s;
            for i in 0..=d {
                let j = d - i;
                // ∫ c_i c_j over P^r × P^s
                let mut expect = 0i64;
                for a in 0..=i {
                    for b in 0..=j {
                        if a + b == r && (i - a) + (j - b) == s {
                            expect += binom(r + 1, a) * binom(s + 1, i - a) * binom(r + 1, b) * binom(s + 1, j - b);
                        }
                    }
                }
                let mut e = vec![0; d as usize];
                if i > 0 {
                    e[i as usize - 1] += 1;
                }
                if j > 0 {
                    e[j as usize - 1] += 1;
                }
                assert_eq!(chern_number(&x, &e), int(expect), "P{r}xP{s}, c{i} c{j}");
            }
        }
    }

    #[test]
    fn mixed_pairings_have_full_rank() {
        let top = mixed_pairing_matrix(2, 2).unwrap();
        assert_eq!(top.matrix, chern_number_matrix(2).unwrap().entries);
        let one = mixed_pairing_matrix(2, 1).unwrap();
        assert_eq!(one.matrix, vec![vec![int(9)]]);
        assert_eq!(one.pairs[0].0.to_string(), "P2");
        for d in 1..=4 {
            for m in 0..=d {
                let p = mixed_pairing_matrix(d, m).unwrap();
                assert_eq!(linalg::rank(&p.matrix), chern_monomials(d, m).len());
            }
        }
    }

    #[test]
    fn kronecker_of_chern_matrices_is_nondegenerate() {
        let a = chern_number_matrix(2).unwrap().entries;
        let b = chern_number_matrix(3).unwrap().entries;
        let k = linalg::kronecker(&a, &b);
        assert_eq!(linalg::rank(&k), 6);
    }

    #[test]
    fn chow_element_serde_round_trip() {
        let x: FormalVariety = "P1 + P1".parse().unwrap();
        let c = chern_class(&x);
        let s = serde_json::to_string(&c).unwrap();
        let back: ChowElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
