use num_traits::{One, Zero};

use super::{Alphabet, GradedPoly};
use crate::error::{structural, Error, Result};
use crate::rational::Rational;

/// One equation `y ↦ leading·y + tail` of a triangular substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularComponent {
    pub variable: usize,
    pub leading: Rational,
    pub tail: GradedPoly,
}

/// Substitution `x_i ↦ x_i`, `y_j ↦ μ_j y_j + Q_j(x, y_1..y_{j-1})` of a
/// truncated polynomial ring.
///
/// Each tail only mentions base variables and earlier targets, and has no
/// term of weighted degree below the weight of its target, so the map is
/// compatible with truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSystem {
    alphabet: Alphabet,
    truncation: u32,
    base: Vec<usize>,
    targets: Vec<TriangularComponent>,
}

impl TriangularSystem {
    pub fn new(
        alphabet: &Alphabet,
        truncation: u32,
        base: &[&str],
        targets: Vec<(&str, Rational, GradedPoly)>,
    ) -> Result<Self> {
        let lookup = |name: &str| {
            alphabet
                .index_of(name)
                .ok_or_else(|| structural!("unknown variable {name:?}"))
        };
        let base = base.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>()?;
        let targets = targets
            .into_iter()
            .map(|(name, leading, tail)| {
                Ok(TriangularComponent {
                    variable: lookup(name)?,
                    leading,
                    tail,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = TriangularSystem {
            alphabet: alphabet.clone(),
            truncation,
            base,
            targets,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn identity(alphabet: &Alphabet, truncation: u32, base: &[&str], targets: &[&str]) -> Result<Self> {
        let zero = GradedPoly::zero(alphabet, truncation);
        TriangularSystem::new(
            alphabet,
            truncation,
            base,
            targets
                .iter()
                .map(|t| (*t, Rational::one(), zero.clone()))
                .collect(),
        )
    }

    fn validate(&self) -> Result<()> {
        let n = self.alphabet.len();
        let mut seen = vec![false; n];
        for &i in self
            .base
            .iter()
            .chain(self.targets.iter().map(|t| &t.variable))
        {
            if seen[i] {
                return Err(structural!("variable {:?} listed twice", self.alphabet.name(i)));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(structural!(
                "variable {:?} is neither a base nor a target variable",
                self.alphabet.name(i)
            ));
        }
        for (j, t) in self.targets.iter().enumerate() {
            if t.tail.alphabet() != &self.alphabet || t.tail.truncation() != self.truncation {
                return Err(structural!("tail {} lives in a different ring", j + 1));
            }
            let later: Vec<usize> = self.targets[j..].iter().map(|t| t.variable).collect();
            if t.tail.used_variables().iter().any(|v| later.contains(v)) {
                return Err(structural!(
                    "tail of {:?} mentions a target of index >= its own",
                    self.alphabet.name(t.variable)
                ));
            }
            let w = self.alphabet.weight(t.variable);
            if t.tail.min_degree().is_some_and(|m| m < w) {
                return Err(structural!(
                    "tail of {:?} has a term of degree below the variable's weight {w}",
                    self.alphabet.name(t.variable)
                ));
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn components(&self) -> &[TriangularComponent] {
        &self.targets
    }

    /// Image of every alphabet variable, in alphabet order.
    pub fn images(&self) -> Vec<GradedPoly> {
        let mut images: Vec<GradedPoly> = (0..self.alphabet.len())
            .map(|i| GradedPoly::var_at(&self.alphabet, self.truncation, i))
            .collect();
        for t in &self.targets {
            let y = GradedPoly::var_at(&self.alphabet, self.truncation, t.variable);
            images[t.variable] = &y.scale(&t.leading) + &t.tail;
        }
        images
    }

    /// `p(x, y) ↦ p(x, V(x, y))`.
    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if p.alphabet() != &self.alphabet || p.truncation() != self.truncation {
            return Err(structural!("polynomial lives in a different ring"));
        }
        p.substitute_indexed(&self.images(), &self.alphabet, self.truncation)
    }

    /// The inverse substitution `y_j ↦ (y_j − Q_j(x, W_1..W_{j−1})) / μ_j`.
    pub fn invert(&self) -> Result<TriangularSystem> {
        if self.targets.iter().any(|t| t.leading.is_zero()) {
            return Err(Error::Degenerate {
                message: "triangular system has a zero leading coefficient".into(),
                mu: self.targets.iter().map(|t| t.leading.clone()).collect(),
            });
        }
        // images of the inverse built so far; later targets still map to themselves
        let mut inverse_images: Vec<GradedPoly> = (0..self.alphabet.len())
            .map(|i| GradedPoly::var_at(&self.alphabet, self.truncation, i))
            .collect();
        let mut components = Vec::with_capacity(self.targets.len());
        for t in &self.targets {
            let q = t
                .tail
                .substitute_indexed(&inverse_images, &self.alphabet, self.truncation)?;
            let inv = t.leading.recip();
            let tail = (-&q).scale(&inv);
            let y = GradedPoly::var_at(&self.alphabet, self.truncation, t.variable);
            inverse_images[t.variable] = &y.scale(&inv) + &tail;
            components.push(TriangularComponent {
                variable: t.variable,
                leading: inv,
                tail,
            });
        }
        let sys = TriangularSystem {
            alphabet: self.alphabet.clone(),
            truncation: self.truncation,
            base: self.base.clone(),
            targets: components,
        };
        debug_assert!(sys.validate().is_ok());
        Ok(sys)
    }
}

/// Solves `G_j(r) = 0` for generators `G_j = Y_j + P_j(Y_1..Y_{j-1})`.
///
/// `unknowns[j]` names `Y_{j+1}`; the remaining variables of the alphabet
/// form the coefficient ring. Returns `r_j = −P_j(r_1..r_{j−1})`, each free
/// of the unknowns.
pub fn triangular_root(generators: &[GradedPoly], unknowns: &[&str]) -> Result<Vec<GradedPoly>> {
    if generators.len() != unknowns.len() {
        return Err(structural!(
            "{} generators for {} unknowns",
            generators.len(),
            unknowns.len()
        ));
    }
    let Some(first) = generators.first() else {
        return Ok(Vec::new());
    };
    let (alphabet, truncation) = (first.alphabet().clone(), first.truncation());
    let idx = unknowns
        .iter()
        .map(|n| {
            alphabet
                .index_of(n)
                .ok_or_else(|| structural!("unknown variable {n:?}"))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tails = Vec::with_capacity(generators.len());
    for (j, g) in generators.iter().enumerate() {
        if g.alphabet() != &alphabet || g.truncation() != truncation {
            return Err(structural!("generators live in different rings"));
        }
        let tail = g - &GradedPoly::var_at(&alphabet, truncation, idx[j]);
        let used = tail.used_variables();
        if let Some(bad) = idx[j..].iter().find(|i| used.contains(i)) {
            return Err(structural!(
                "generator {} is not triangular: tail mentions {:?}",
                j + 1,
                alphabet.name(*bad)
            ));
        }
        tails.push(tail);
    }

    let mut images: Vec<GradedPoly> = (0..alphabet.len())
        .map(|i| GradedPoly::var_at(&alphabet, truncation, i))
        .collect();
    let mut roots = Vec::with_capacity(tails.len());
    for (j, tail) in tails.iter().enumerate() {
        let r = -&tail.substitute_indexed(&images, &alphabet, truncation)?;
        images[idx[j]] = r.clone();
        roots.push(r);
    }
    Ok(roots)
}

/// Evaluates `p` at `unknowns[j] = values[j]`, other variables fixed.
pub fn evaluate_at(p: &GradedPoly, unknowns: &[&str], values: &[GradedPoly]) -> Result<GradedPoly> {
    let alphabet = p.alphabet().clone();
    let mut images: Vec<GradedPoly> = (0..alphabet.len())
        .map(|i| GradedPoly::var_at(&alphabet, p.truncation(), i))
        .collect();
    for (name, v) in unknowns.iter().zip(values) {
        let i = alphabet
            .index_of(name)
            .ok_or_else(|| structural!("unknown variable {name:?}"))?;
        images[i] = v.clone();
    }
    p.substitute_indexed(&images, &alphabet, p.truncation())
}
