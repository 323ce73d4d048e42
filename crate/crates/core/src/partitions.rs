//! Set partitions of `{1..k}` and diagonal maps between products.
//!
//! A partition `I` with blocks `I_1..I_l` (ordered by minimal element)
//! gives the diagonal `Δ_I : X^l → X^k` sending `(x_1..x_l)` to the point
//! whose `i`-th coordinate is `x_s` for `i ∈ I_s`. Pushforward uses the
//! explicit diagonal class `Σ_{u+v=r} h^u ⊗ h^v` of `P^r × P^r` on each
//! projective factor; tuples equating different cells get nothing.

use std::cmp::{Ordering, Reverse};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cobordism::{ChowElement, FormalVariety};
use crate::error::{structural, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Blocks are 1-based; they are sorted and reordered by minimal element.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(Vec::is_empty) {
            return Err(structural!("empty block in partition {blocks:?}"));
        }
        blocks.sort();
        let k: usize = blocks.iter().map(Vec::len).sum();
        if k == 0 {
            return Err(structural!("a partition needs at least one element"));
        }
        let mut seen = vec![false; k];
        for &e in blocks.iter().flatten() {
            if e == 0 || e > k || std::mem::replace(&mut seen[e - 1], true) {
                return Err(structural!("blocks {blocks:?} do not partition 1..{k}"));
            }
        }
        Ok(SetPartition { k, blocks })
    }

    pub fn singletons(k: usize) -> Self {
        SetPartition {
            k,
            blocks: (1..=k).map(|i| vec![i]).collect(),
        }
    }

    pub fn one_block(k: usize) -> Self {
        SetPartition {
            k,
            blocks: vec![(1..=k).collect()],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `l(I)`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// 0-based block index of each element `1..k`.
    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for (s, b) in self.blocks.iter().enumerate() {
            for &e in b {
                out[e - 1] = s;
            }
        }
        out
    }

    /// Elements listed block by block: `I_1` sorted, then `I_2`, ….
    pub fn grouped_order(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn diagonal(&self) -> DiagonalMap {
        DiagonalMap {
            source: self.len(),
            assignment: self.assignment(),
        }
    }
}

/// Canonical order: more blocks first, then lexicographic on blocks.
impl Ord for SetPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        (Reverse(self.len()), &self.blocks).cmp(&(Reverse(other.len()), &other.blocks))
    }
}

impl PartialOrd for SetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SetPartition::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// All set partitions of `{1..k}` in canonical order.
pub fn enumerate_partitions(k: usize) -> Vec<SetPartition> {
    fn go(e: usize, k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<SetPartition>) {
        if e > k {
            out.push(SetPartition { k, blocks: cur.clone() });
            return;
        }
        for s in 0..cur.len() {
            cur[s].push(e);
            go(e + 1, k, cur, out);
            cur[s].pop();
        }
        cur.push(vec![e]);
        go(e + 1, k, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    if k > 0 {
        go(1, k, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Whether every block of `j` lies inside a block of `i`.
pub fn refines(j: &SetPartition, i: &SetPartition) -> Result<bool> {
    if j.k != i.k {
        return Err(structural!("partitions of {} and {} elements", j.k, i.k));
    }
    let a = i.assignment();
    Ok(j.blocks.iter().all(|b| b.iter().all(|&e| a[e - 1] == a[b[0] - 1])))
}

/// For `j` refining `i`: the 0-based block map `s ↦ t` with `J_s ⊂ I_t`,
/// and the number of `J`-blocks inside each `I_t`.
pub fn block_map(j: &SetPartition, i: &SetPartition) -> Result<(Vec<usize>, Vec<usize>)> {
    if !refines(j, i)? {
        return Err(structural!("{j} does not refine {i}"));
    }
    let a = i.assignment();
    let map: Vec<usize> = j.blocks.iter().map(|b| a[b[0] - 1]).collect();
    let mut counts = vec![0; i.len()];
    for &t in &map {
        counts[t] += 1;
    }
    Ok((map, counts))
}

/// A map `V_1 × … × V_a → W_1 × … × W_k` where target coordinate `i` copies
/// source coordinate `assignment[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMap {
    source: usize,
    assignment: Vec<usize>,
}

impl DiagonalMap {
    pub fn new(source: usize, assignment: Vec<usize>) -> Result<Self> {
        let mut hit = vec![false; source];
        for &s in &assignment {
            if s >= source {
                return Err(structural!("assignment {assignment:?} points past {source} source factors"));
            }
            hit[s] = true;
        }
        if hit.contains(&false) {
            return Err(structural!("assignment {assignment:?} is not surjective onto {source} factors"));
        }
        Ok(DiagonalMap { source, assignment })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &DiagonalMap) -> Result<DiagonalMap> {
        if inner.target() != self.source {
            return Err(structural!("cannot compose maps of shapes {} and {}", self.source, inner.target()));
        }
        DiagonalMap::new(inner.source, self.assignment.iter().map(|&s| inner.assignment[s]).collect())
    }

    /// Target factors induced by the source factors.
    pub fn target_factors(&self, source: &[FormalVariety]) -> Vec<FormalVariety> {
        self.assignment.iter().map(|&s| source[s].clone()).collect()
    }

    /// Gysin pushforward of a class on the source product.
    pub fn pushforward(&self, alpha: &ChowElement) -> Result<ChowElement> {
        if alpha.power() != self.source {
            return Err(structural!("class on a {}-fold product, map expects {}", alpha.power(), self.source));
        }
        let factors = self.target_factors(alpha.factors());
        let mut out = ChowElement::zero(factors, alpha.coefficients(), alpha.coefficient_degree())?;
        // first target coordinate copying each source coordinate
        let mut first = vec![usize::MAX; self.source];
        for (i, &s) in self.assignment.iter().enumerate().rev() {
            first[s] = i;
        }
        for (tuple, p) in alpha.components() {
            let target_tuple: Vec<usize> = self.assignment.iter().map(|&s| tuple[s]).collect();
            let src = alpha.ring(tuple)?;
            let ring = out.ring(&target_tuple)?;
            let mut targets = vec![0; src.alphabet().len()];
            for (s, &c) in tuple.iter().enumerate() {
                for j in 0..alpha.factors()[s].cells()[c].factors() {
                    targets[src.hyperplane_index(s, j)] = ring.hyperplane_index(first[s], j);
                }
            }
            for (i, t) in targets.iter_mut().enumerate().skip(src.coefficient_offset()) {
                *t = ring.coefficient_offset() + (i - src.coefficient_offset());
            }
            let mut img = p.map_variables(ring.alphabet(), ring.truncation(), &targets);
            for (i, &s) in self.assignment.iter().enumerate() {
                if i == first[s] {
                    continue;
                }
                let cell = &alpha.factors()[s].cells()[tuple[s]];
                for (j, &r) in cell.dims().iter().enumerate() {
                    let class = ring.diagonal_class(ring.hyperplane_index(first[s], j), ring.hyperplane_index(i, j), r);
                    img = ring.reduce(&(&img * &class));
                }
            }
            out.add_to_component(target_tuple, &img)?;
        }
        Ok(out)
    }

    /// Pullback of a class on the target product to `source` factors.
    pub fn pullback(&self, source: &[FormalVariety], beta: &ChowElement) -> Result<ChowElement> {
        if source.len() != self.source || beta.factors() != self.target_factors(source) {
            return Err(structural!("class does not live on the target of the diagonal"));
        }
        let mut out = ChowElement::zero(source.to_vec(), beta.coefficients(), beta.coefficient_degree())?;
        for tuple in out.cell_tuples() {
            let target_tuple: Vec<usize> = self.assignment.iter().map(|&s| tuple[s]).collect();
            let Some(p) = beta.component(&target_tuple) else {
                continue;
            };
            let src = beta.ring(&target_tuple)?;
            let ring = out.ring(&tuple)?;
            let mut targets = vec![0; src.alphabet().len()];
            for (i, &s) in self.assignment.iter().enumerate() {
                for j in 0..source[s].cells()[tuple[s]].factors() {
                    targets[src.hyperplane_index(i, j)] = ring.hyperplane_index(s, j);
                }
            }
            for (i, t) in targets.iter_mut().enumerate().skip(src.coefficient_offset()) {
                *t = ring.coefficient_offset() + (i - src.coefficient_offset());
            }
            let img = p.map_variables(ring.alphabet(), ring.truncation(), &targets);
            out.add_to_component(tuple, &img)?;
        }
        Ok(out)
    }
}

/// `Δ_{I*} α` for a class `α` on `X^{l(I)}`.
pub fn diagonal_pushforward(x: &FormalVariety, i: &SetPartition, alpha: &ChowElement) -> Result<ChowElement> {
    if alpha.factors().iter().any(|f| f != x) {
        return Err(structural!("class does not live on a power of {x}"));
    }
    i.diagonal().pushforward(alpha)
}

/// `Δ_I^* β` for a class `β` on `X^k`.
pub fn diagonal_pullback(x: &FormalVariety, i: &SetPartition, beta: &ChowElement) -> Result<ChowElement> {
    i.diagonal().pullback(&vec![x.clone(); i.len()], beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::{chern_monomial, ChowElement};
    use crate::rational::int;

    fn p(blocks: &[&[usize]]) -> SetPartition {
        SetPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn bell_numbers_and_order() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for k in 1..=6 {
            assert_eq!(enumerate_partitions(k).len(), bell[k]);
        }
        let three = enumerate_partitions(3);
        assert_eq!(three[0], SetPartition::singletons(3));
        assert_eq!(three[4], SetPartition::one_block(3));
        assert_eq!(three[1], p(&[&[1], &[2, 3]]));
        assert_eq!(three[2], p(&[&[1, 2], &[3]]));
    }

    #[test]
    fn construction_and_serde() {
        let i = p(&[&[3], &[2, 1]]);
        assert_eq!(i.blocks(), &[vec![1, 2], vec![3]]);
        assert_eq!(serde_json::to_string(&i).unwrap(), "[[1,2],[3]]");
        let back: SetPartition = serde_json::from_str("[[3],[1,2]]").unwrap();
        assert_eq!(back, i);
        assert!(SetPartition::new(vec![vec![1], vec![1, 2]]).is_err());
        assert!(SetPartition::new(vec![vec![1], vec![3]]).is_err());
        assert!(SetPartition::new(vec![vec![]]).is_err());
        assert_eq!(i.to_string(), "{{1,2},{3}}");
    }

    #[test]
    fn refinement_examples() {
        let a = p(&[&[1, 2], &[3]]);
        let b = p(&[&[1], &[2, 3]]);
        assert!(!refines(&a, &b).unwrap());
        assert!(!refines(&b, &a).unwrap());
        assert!(refines(&SetPartition::singletons(3), &a).unwrap());
        assert!(refines(&a, &a).unwrap());
        assert!(refines(&a, &SetPartition::one_block(2)).is_err());
        let (map, counts) = block_map(&SetPartition::singletons(3), &a).unwrap();
        assert_eq!(map, vec![0, 0, 1]);
        assert_eq!(counts, vec![2, 1]);
        let (map, counts) = block_map(&a, &a).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(counts, vec![1, 1]);
        assert!(block_map(&a, &b).is_err());
    }

    #[test]
    fn refinement_is_a_partial_order() {
        for k in 1..=5 {
            let all = enumerate_partitions(k);
            let r: Vec<Vec<bool>> = all.iter().map(|j| all.iter().map(|i| refines(j, i).unwrap()).collect()).collect();
            for a in 0..all.len() {
                assert!(r[a][a]);
                for b in 0..all.len() {
                    if a != b {
                        assert!(!(r[a][b] && r[b][a]));
                    }
                    for c in 0..all.len() {
                        if r[a][b] && r[b][c] {
                            assert!(r[a][c]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        let p1: FormalVariety = "P1".parse().unwrap();
        let i = SetPartition::one_block(2);
        let one = ChowElement::fundamental(vec![p1.clone()], &crate::Alphabet::empty(), 0).unwrap();
        let d = diagonal_pushforward(&p1, &i, &one).unwrap();
        assert_eq!(d.component(&[0, 0]).unwrap().to_string(), "h1_1 + h2_1");

        let two_h = chern_monomial(&p1, &[1]);
        let d = diagonal_pushforward(&p1, &i, &two_h).unwrap();
        assert_eq!(d.component(&[0, 0]).unwrap().to_string(), "2*h1_1*h2_1");

        let back = diagonal_pullback(&p1, &i, &diagonal_pushforward(&p1, &i, &one).unwrap()).unwrap();
        assert_eq!(back, two_h);

        let s = SetPartition::singletons(2);
        let x: FormalVariety = "P1 + P1".parse().unwrap();
        let f = ChowElement::fundamental(vec![x.clone(), x.clone()], &crate::Alphabet::empty(), 0).unwrap();
        assert_eq!(diagonal_pushforward(&x, &s, &f).unwrap(), f);
    }

    #[test]
    fn cross_cell_tuples_get_nothing() {
        let x: FormalVariety = "P1 + P1".parse().unwrap();
        let one = ChowElement::fundamental(vec![x.clone()], &crate::Alphabet::empty(), 0).unwrap();
        let d = diagonal_pushforward(&x, &SetPartition::one_block(2), &one).unwrap();
        assert!(d.component(&[0, 1]).is_none());
        assert!(d.component(&[1, 0]).is_none());
        assert!(d.component(&[1, 1]).is_some());
    }

    #[test]
    fn pushforward_raises_codimension() {
        // Δ_* 1 on P2 → (P2)^3 is the point-class sum of degree 2·2
        let x: FormalVariety = "P2".parse().unwrap();
        let one = ChowElement::fundamental(vec![x.clone()], &crate::Alphabet::empty(), 0).unwrap();
        let d = diagonal_pushforward(&x, &SetPartition::one_block(3), &one).unwrap();
        let poly = d.component(&[0, 0, 0]).unwrap();
        assert!(poly.is_homogeneous(4));
        // ∫ Δ_*1 · h1^2 = ∫_{P2} h^2 = 1
        let mut beta = ChowElement::zero_on_power(&x, 3);
        let ring = beta.ring(&[0, 0, 0]).unwrap();
        beta.add_to_component(vec![0, 0, 0], &ring.hyperplane(0, 0).pow(2)).unwrap();
        assert_eq!(d.checked_mul(&beta).unwrap().integrate(), int(1));
    }

    #[test]
    fn composition_of_diagonals() {
        let x: FormalVariety = "P1xP1 + P2".parse().unwrap();
        let j = p(&[&[1, 2], &[3], &[4]]);
        let i = p(&[&[1, 2, 4], &[3]]);
        let (map, _) = block_map(&j, &i).unwrap();
        // X^{l(I)} → X^{l(J)} via the block map, then Δ_J
        let inner = DiagonalMap::new(i.len(), map).unwrap();
        let composite = j.diagonal().compose(&inner).unwrap();
        assert_eq!(composite, i.diagonal());
        let alpha = ChowElement::pullback_from_factor(vec![x.clone(), x.clone()], 0, &chern_monomial(&x, &[1, 0])).unwrap();
        let two_step = j.diagonal().pushforward(&inner.pushforward(&alpha).unwrap()).unwrap();
        assert_eq!(two_step, i.diagonal().pushforward(&alpha).unwrap());
    }
}
