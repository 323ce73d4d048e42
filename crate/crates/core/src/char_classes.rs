//! Characteristic classes of formal bundles.
//!
//! A [`BundleClass`] is a rank together with a total Chern class in some
//! truncated graded ring; `c_i` is the weighted-degree-`i` component.
//! Tensor products go through the Chern character and Newton's identities.
//!
//! Projective bundles follow one convention throughout: for `E` of rank
//! `k`, with `h` the hyperplane class on `P(E*)`, `π_*(h^m) = s_{m−k+1}(E*)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::graded_ring::{Alphabet, GradedPoly, TriangularSystem};
use crate::rational::{binomial, factorial, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleClass {
    rank: u32,
    total: GradedPoly,
}

impl BundleClass {
    pub fn new(rank: u32, total: GradedPoly) -> Result<Self> {
        if !total.constant_term().is_one() {
            return Err(structural!("total Chern class must have constant term 1, got {total}"));
        }
        Ok(BundleClass { rank, total })
    }

    pub fn trivial(rank: u32, alphabet: &Alphabet, truncation: u32) -> Self {
        BundleClass {
            rank,
            total: GradedPoly::one(alphabet, truncation),
        }
    }

    /// The line bundle with first Chern class `c1`.
    pub fn line(c1: &GradedPoly) -> Result<Self> {
        if !c1.is_homogeneous(1) {
            return Err(structural!("first Chern class must be of pure degree 1, got {c1}"));
        }
        let one = GradedPoly::one(c1.alphabet(), c1.truncation());
        Ok(BundleClass {
            rank: 1,
            total: &one + c1,
        })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn total(&self) -> &GradedPoly {
        &self.total
    }

    pub fn chern(&self, i: u32) -> GradedPoly {
        self.total.homogeneous_part(i)
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.total.alphabet()
    }

    pub fn truncation(&self) -> u32 {
        self.total.truncation()
    }
}

/// Total Segre class `s(E) = c(E)^{-1}`.
pub fn segre(e: &BundleClass) -> GradedPoly {
    e.total
        .inverse()
        .expect("constant term 1 is invertible")
}

pub fn segre_class(e: &BundleClass, i: u32) -> GradedPoly {
    segre(e).homogeneous_part(i)
}

/// `c_i(E*) = (−1)^i c_i(E)`.
pub fn dual(e: &BundleClass) -> BundleClass {
    let mut total = GradedPoly::zero(e.alphabet(), e.truncation());
    for d in 0..=e.truncation() {
        let part = e.chern(d);
        total += &if d % 2 == 1 { -&part } else { part };
    }
    BundleClass {
        rank: e.rank,
        total,
    }
}

pub fn direct_sum(e: &BundleClass, f: &BundleClass) -> Result<BundleClass> {
    Ok(BundleClass {
        rank: e.rank + f.rank,
        total: e.total.truncated_mul(&f.total)?,
    })
}

/// `E ⊗ L` with `c_1(L) = t`:
/// `c_j(E⊗L) = Σ_i binom(r−i, j−i) c_i(E) t^{j−i}`.
pub fn twist(e: &BundleClass, t: &GradedPoly) -> Result<BundleClass> {
    if !t.is_homogeneous(1) {
        return Err(structural!("twisting class must be of pure degree 1, got {t}"));
    }
    if t.alphabet() != e.alphabet() || t.truncation() != e.truncation() {
        return Err(structural!("twisting class lives in a different ring"));
    }
    let trunc = e.truncation();
    let parts: Vec<GradedPoly> = (0..=trunc).map(|i| e.chern(i)).collect();
    let t_pows: Vec<GradedPoly> = (0..=trunc).map(|k| t.pow(k)).collect();
    let mut total = GradedPoly::zero(e.alphabet(), trunc);
    for j in 0..=trunc {
        for i in 0..=j {
            let b = binomial(e.rank as i64 - i as i64, j - i);
            if b.is_zero() || parts[i as usize].is_zero() {
                continue;
            }
            total += &(&parts[i as usize] * &t_pows[(j - i) as usize]).scale(&b);
        }
    }
    BundleClass::new(e.rank, total)
}

/// Chern class of `C` in `0 → A → B → C → 0`, i.e. `c(B)·c(A)^{-1}`.
pub fn whitney_quotient(total_b: &GradedPoly, total_a: &GradedPoly) -> Result<GradedPoly> {
    if !total_b.constant_term().is_one() || !total_a.constant_term().is_one() {
        return Err(structural!("total Chern classes must have constant term 1"));
    }
    total_b.truncated_mul(&total_a.inverse()?)
}

/// Graded Chern character, `components[k]` homogeneous of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernCharacter {
    components: Vec<GradedPoly>,
}

impl ChernCharacter {
    pub fn new(components: Vec<GradedPoly>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(structural!("empty Chern character"));
        };
        for (k, c) in components.iter().enumerate() {
            if c.alphabet() != first.alphabet() || c.truncation() != first.truncation() {
                return Err(structural!("Chern character components live in different rings"));
            }
            if !c.is_homogeneous(k as u32) {
                return Err(structural!("ch_{k} is not homogeneous of degree {k}"));
            }
        }
        Ok(ChernCharacter { components })
    }

    pub fn components(&self) -> &[GradedPoly] {
        &self.components
    }

    pub fn total(&self) -> GradedPoly {
        let mut acc = GradedPoly::zero(self.components[0].alphabet(), self.components[0].truncation());
        for c in &self.components {
            acc += c;
        }
        acc
    }

    fn from_total(total: &GradedPoly) -> Self {
        ChernCharacter {
            components: (0..=total.truncation()).map(|k| total.homogeneous_part(k)).collect(),
        }
    }

    pub fn rank(&self) -> Rational {
        self.components[0].constant_term()
    }

    pub fn add(&self, other: &ChernCharacter) -> Result<ChernCharacter> {
        Ok(ChernCharacter::from_total(&self.total().checked_add(&other.total())?))
    }

    pub fn mul(&self, other: &ChernCharacter) -> Result<ChernCharacter> {
        Ok(ChernCharacter::from_total(&self.total().truncated_mul(&other.total())?))
    }
}

fn rational_of(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Newton's identities from elementary classes `c_k` to power sums
/// `p_k = k!·ch_k`.
pub fn chern_character(e: &BundleClass) -> ChernCharacter {
    let trunc = e.truncation();
    let elementary: Vec<GradedPoly> = (0..=trunc).map(|k| e.chern(k)).collect();
    let mut power_sums = vec![GradedPoly::constant(e.alphabet(), trunc, int(e.rank as i64))];
    for k in 1..=trunc as usize {
        let mut p = elementary[k].scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let term = &elementary[i] * &power_sums[k - i];
            if i % 2 == 1 {
                p += &term;
            } else {
                p -= &term;
            }
        }
        power_sums.push(p);
    }
    let components = power_sums
        .iter()
        .enumerate()
        .map(|(k, p)| p.scale(&rational_of(factorial(k as u32)).recip()))
        .collect();
    ChernCharacter { components }
}

/// Inverse of [`chern_character`]: `k c_k = Σ_{i=1}^k (−1)^{i−1} c_{k−i} p_i`.
pub fn class_from_character(ch: &ChernCharacter, rank: u32) -> Result<BundleClass> {
    if ch.rank() != int(rank as i64) || !ch.components[0].is_homogeneous(0) {
        return Err(structural!(
            "ch_0 = {} does not match rank {rank}",
            ch.components[0]
        ));
    }
    let alphabet = ch.components[0].alphabet().clone();
    let trunc = ch.components[0].truncation();
    let power_sums: Vec<GradedPoly> = ch
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| c.scale(&rational_of(factorial(k as u32))))
        .collect();
    let mut elementary = vec![GradedPoly::one(&alphabet, trunc)];
    for k in 1..ch.components.len().min(trunc as usize + 1) {
        let mut acc = GradedPoly::zero(&alphabet, trunc);
        for i in 1..=k {
            let term = &elementary[k - i] * &power_sums[i];
            if i % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        elementary.push(acc.scale(&int(k as i64).recip()));
    }
    let mut total = GradedPoly::zero(&alphabet, trunc);
    for e in &elementary {
        total += e;
    }
    BundleClass::new(rank, total)
}

pub fn tensor(e: &BundleClass, f: &BundleClass) -> Result<BundleClass> {
    let ch = chern_character(e).mul(&chern_character(f))?;
    class_from_character(&ch, e.rank * f.rank)
}

/// `π_*(h^m) = s_{m−k+1}(E*)` for the projectivization of `E*`, `k = rank E`.
pub fn projective_bundle_pushforward(m: u32, e: &BundleClass) -> GradedPoly {
    let index = m as i64 - e.rank as i64 + 1;
    if index < 0 {
        return GradedPoly::zero(e.alphabet(), e.truncation());
    }
    segre_class(&dual(e), index as u32)
}

/// Pushes forward a polynomial in the hyperplane variable `h` whose other
/// variables are pulled back from the base; `π_*` is linear over the base.
pub fn projective_bundle_pushforward_poly(p: &GradedPoly, h: &str, e: &BundleClass) -> Result<GradedPoly> {
    if p.alphabet() != e.alphabet() || p.truncation() != e.truncation() {
        return Err(structural!("polynomial and bundle live in different rings"));
    }
    let hi = p
        .alphabet()
        .index_of(h)
        .ok_or_else(|| structural!("unknown hyperplane variable {h:?}"))?;
    let mut out = GradedPoly::zero(p.alphabet(), p.truncation());
    for (m, c) in p.terms() {
        let mut exps = m.exponents().to_vec();
        let power = std::mem::replace(&mut exps[hi], 0);
        let base = GradedPoly::monomial(p.alphabet(), p.truncation(), exps, c.clone());
        out += &(&base * &projective_bundle_pushforward(power, e));
    }
    Ok(out)
}

/// `π'_*(h^l) = (−1)^l m^{d−1} s_l(Q1)` for a complete intersection of `d−1`
/// hypersurfaces of degree `m` in the projectivization of a rank-`d` bundle.
pub fn ci_pushforward(l: u32, m: u32, d: u32, q1: &BundleClass) -> GradedPoly {
    let sign = if l % 2 == 0 { int(1) } else { int(-1) };
    let scale = sign * rational_of(BigInt::from(m).pow(d.saturating_sub(1)));
    segre_class(q1, l).scale(&scale)
}

/// `c(B) = (1 − m h + … + (−1)^d m^d h^d)^{d−1} · c(π^*Q1^* ⊗ O(1))`,
/// with terms above degree `d` dropped.
pub fn complete_intersection_chern(d: u32, m: u32, q1: &BundleClass, h: &str) -> Result<GradedPoly> {
    let (alphabet, trunc) = (q1.alphabet().clone(), q1.truncation());
    let hv = GradedPoly::var(&alphabet, trunc, h)?;
    if alphabet.index_of(h).map(|i| alphabet.weight(i)) != Some(1) {
        return Err(structural!("hyperplane variable {h:?} must have weight 1"));
    }
    let step = hv.scale(&int(-(m as i64)));
    let mut geometric = GradedPoly::zero(&alphabet, trunc);
    for i in 0..=d {
        geometric += &step.pow(i);
    }
    let twisted = twist(&dual(q1), &hv)?;
    let c = &geometric.pow(d.saturating_sub(1)) * twisted.total();
    Ok(c.retruncate(d.min(trunc)).retruncate(trunc))
}

/// Free stable-range model of `CH^{≤d}(G(d, N))`: variables `q1..qd` for the
/// Chern classes of the rank-`d` quotient bundle, truncated at `d`.
#[derive(Clone, Debug)]
pub struct GrassmannianModel {
    d: u32,
    n: u32,
    alphabet: Alphabet,
}

impl GrassmannianModel {
    pub fn new(d: u32, n: u32) -> Result<Self> {
        if d == 0 {
            return Err(structural!("Grassmannian rank must be positive"));
        }
        if n < 2 * d + 1 {
            return Err(structural!("G({d},{n}) is outside the stable range N >= 2d+1"));
        }
        let alphabet = Alphabet::new((1..=d).map(|i| (format!("q{i}"), i)))?;
        Ok(GrassmannianModel { d, n, alphabet })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `dim G(d,N) − d = d(N − d − 1)`.
    pub fn k_d(&self) -> u32 {
        self.d * (self.n - self.d - 1)
    }

    pub fn quotient(&self) -> BundleClass {
        let mut total = GradedPoly::one(&self.alphabet, self.d);
        for i in 0..self.d as usize {
            total += &GradedPoly::var_at(&self.alphabet, self.d, i);
        }
        BundleClass { rank: self.d, total }
    }

    /// Tautological subbundle, `c(S) = c(Q)^{-1}`.
    pub fn sub(&self) -> BundleClass {
        let q = self.quotient();
        BundleClass {
            rank: self.n - self.d,
            total: segre(&q),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GrassmannianTangent {
    pub tangent: BundleClass,
    /// Coefficient of `c_j(Q)` in `c_j(T_G)`.
    pub nu: Vec<Rational>,
}

/// `c(T_G) = c(Hom(S, Q)) = c(S^* ⊗ Q)` up to degree `d`.
pub fn grassmannian_tangent(model: &GrassmannianModel) -> Result<GrassmannianTangent> {
    let tangent = tensor(&dual(&model.sub()), &model.quotient())?;
    let nu: Vec<Rational> = (0..model.d as usize)
        .map(|j| {
            let mut e = vec![0; model.d as usize];
            e[j] = 1;
            tangent.total.coefficient_of(&e)
        })
        .collect();
    if nu.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate {
            message: format!("a leading coefficient of c(T_G(d={},N={})) vanishes", model.d, model.n),
            mu: nu,
        });
    }
    Ok(GrassmannianTangent { tangent, nu })
}

/// The polynomials `U'_j(c_p, c'_q) = c_j(N(−l))` together with their
/// leading coefficients `μ_j` in `c'_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UPrimeResult {
    #[serde(rename = "mu", with = "crate::rational::serde_string_vec")]
    pub leading: Vec<Rational>,
    pub polys: Vec<GradedPoly>,
}

impl UPrimeResult {
    /// `c_p ↦ c_p`, `c'_j ↦ U'_j` as a triangular substitution.
    pub fn triangular_system(&self) -> Result<TriangularSystem> {
        let alphabet = self.polys[0].alphabet().clone();
        let trunc = self.polys[0].truncation();
        let d = self.polys.len();
        let base: Vec<String> = (1..=d).map(|p| format!("c{p}")).collect();
        let targets: Vec<String> = (1..=d).map(|q| format!("c'{q}")).collect();
        let base_refs: Vec<&str> = base.iter().map(String::as_str).collect();
        let comps = self
            .polys
            .iter()
            .zip(&self.leading)
            .zip(&targets)
            .map(|((u, mu), name)| {
                let lead = GradedPoly::var(&alphabet, trunc, name)?.scale(mu);
                Ok((name.as_str(), mu.clone(), u - &lead))
            })
            .collect::<Result<Vec<_>>>()?;
        TriangularSystem::new(&alphabet, trunc, &base_refs, comps)
    }
}

/// Alphabet `c1..cd, c'1..c'd` with weights `1..d` on each half.
pub fn u_prime_alphabet(d: u32) -> Result<Alphabet> {
    Alphabet::new(
        (1..=d)
            .map(|p| (format!("c{p}"), p))
            .chain((1..=d).map(|q| (format!("c'{q}"), q))),
    )
}

/// Computes `U'_j` through
/// `c(N) = c(T_G|X)·s(T_X)`, `c_j(T_G)|X` written in `c'_q = c_q(Q)|X`, then
/// the twist `N(−l)` at rank `k_d`. Triangularity in the `c'` variables is
/// checked; a vanishing `μ_j` is reported as [`Error::Degenerate`].
pub fn compute_u_prime(d: u32, n: u32, l: u32) -> Result<UPrimeResult> {
    if l == 0 {
        return Err(structural!("twist degree l must be positive"));
    }
    let model = GrassmannianModel::new(d, n)?;
    let tg = grassmannian_tangent(&model)?;

    let alphabet = u_prime_alphabet(d)?;
    let du = d as usize;
    let restrict: Vec<GradedPoly> = (0..du)
        .map(|q| GradedPoly::var_at(&alphabet, d, du + q))
        .collect();
    let tg_on_x = tg.tangent.total.substitute_indexed(&restrict, &alphabet, d)?;

    let mut tx = GradedPoly::one(&alphabet, d);
    for p in 0..du {
        tx += &GradedPoly::var_at(&alphabet, d, p);
    }
    let normal = BundleClass::new(model.k_d(), &tg_on_x * &tx.inverse()?)?;
    let c1_prime = GradedPoly::var_at(&alphabet, d, du);
    let twisted = twist(&normal, &c1_prime.scale(&-int(l as i64)))?;

    let mut polys = Vec::with_capacity(du);
    let mut leading = Vec::with_capacity(du);
    for j in 1..=du {
        let u = twisted.chern(j as u32);
        let mut e = vec![0; 2 * du];
        e[du + j - 1] = 1;
        let mu = u.coefficient_of(&e);
        let lead = GradedPoly::var_at(&alphabet, d, du + j - 1).scale(&mu);
        let rest = &u - &lead;
        if rest.used_variables().iter().any(|&v| v >= du + j - 1) {
            return Err(Error::Invariant(format!(
                "U'_{j} - mu_{j} c'_{j} mentions c'_i with i >= {j}: {rest}"
            )));
        }
        polys.push(u);
        leading.push(mu);
    }
    if leading.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate {
            message: format!("mu_j vanishes for (d, N, l) = ({d}, {n}, {l})"),
            mu: leading,
        });
    }
    Ok(UPrimeResult { leading, polys })
}
