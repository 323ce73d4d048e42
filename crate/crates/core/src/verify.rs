//! Seeded random inputs and the named invariant suites behind
//! `chowlab verify`.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::char_classes::{
    compute_u_prime, projective_bundle_pushforward_poly, segre, segre_class, dual, BundleClass,
};
use crate::cobordism::{chern_number_matrix, integer_partitions, Cell, ChowElement, FormalVariety};
use crate::error::{Error, Result};
use crate::graded_ring::{evaluate_at, exponents_of_degree, triangular_root, Alphabet, GradedPoly, TriangularSystem};
use crate::partitions::{enumerate_partitions, SetPartition};
use crate::rational::{frac, int, Rational};
use crate::universal_cycles::{block_alphabet, decode, delta_restrict, StandardCycle};

pub const SUITES: &[&str] = &[
    "segre",
    "pushforward",
    "triangular",
    "cobordism",
    "u-prime",
    "diagonal",
    "restriction",
    "decode",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational, occasionally with a denominator.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-5..=5);
    }
    if rng.gen_bool(0.2) {
        frac(n, rng.gen_range(2..=4))
    } else {
        int(n)
    }
}

/// Up to `terms` random terms of degree in `min_degree..=truncation`, using
/// only the variables flagged in `allowed`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    truncation: u32,
    terms: usize,
    min_degree: u32,
    allowed: &[bool],
) -> GradedPoly {
    let weights: Vec<u32> = alphabet.variables().iter().map(|v| v.weight).collect();
    let mut p = GradedPoly::zero(alphabet, truncation);
    if min_degree > truncation {
        return p;
    }
    for _ in 0..terms {
        let deg = rng.gen_range(min_degree..=truncation);
        let choices: Vec<Vec<u32>> = exponents_of_degree(&weights, deg)
            .into_iter()
            .filter(|e| e.iter().zip(allowed).all(|(&x, &ok)| ok || x == 0))
            .collect();
        if let Some(e) = choices.choose(rng) {
            p += &GradedPoly::monomial(alphabet, truncation, e.clone(), random_rational(rng));
        }
    }
    p
}

/// Bundle of rank `1..=4` over 1–3 variables of weight 1–2, truncation `1..=6`.
pub fn random_bundle<R: Rng>(rng: &mut R) -> BundleClass {
    let n = rng.gen_range(1..=3);
    let alphabet = Alphabet::new((0..n).map(|i| (format!("x{}", i + 1), rng.gen_range(1..=2)))).expect("distinct names");
    let t = rng.gen_range(1..=6);
    let rank = rng.gen_range(1..=4);
    let tail = random_poly(rng, &alphabet, t, 4, 1, &vec![true; n]);
    BundleClass::new(rank, &GradedPoly::one(&alphabet, t) + &tail).expect("constant term is one")
}

/// Triangular system over base `x1..` with targets `y1..` and random tails.
pub fn random_triangular<R: Rng>(rng: &mut R) -> TriangularSystem {
    let nb = rng.gen_range(1..=2);
    let nt = rng.gen_range(1..=3);
    let mut vars: Vec<(String, u32)> = (0..nb).map(|i| (format!("x{}", i + 1), 1)).collect();
    vars.extend((0..nt).map(|j| (format!("y{}", j + 1), rng.gen_range(1..=2))));
    let alphabet = Alphabet::new(vars.clone()).expect("distinct names");
    let t = rng.gen_range(2..=5);
    let base: Vec<&str> = vars[..nb].iter().map(|(n, _)| n.as_str()).collect();
    let targets = (0..nt)
        .map(|j| {
            let allowed: Vec<bool> = (0..nb + nt).map(|i| i < nb + j).collect();
            let tail = random_poly(rng, &alphabet, t, 3, vars[nb + j].1, &allowed);
            (vars[nb + j].0.as_str(), random_rational(rng), tail)
        })
        .collect();
    TriangularSystem::new(&alphabet, t, &base, targets).expect("generated system is triangular")
}

/// Ordered partition of `d` into positive parts.
fn random_composition<R: Rng>(rng: &mut R, d: u32) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut left = d;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts
}

pub fn random_variety<R: Rng>(rng: &mut R, d: u32, max_cells: usize) -> FormalVariety {
    let n = rng.gen_range(1..=max_cells);
    let cells = (0..n)
        .map(|_| Cell::new(random_composition(rng, d)).expect("positive parts"))
        .collect();
    FormalVariety::new(cells).expect("cells share the dimension")
}

/// Random class on `factors`, every cell tuple filled independently.
pub fn random_chow<R: Rng>(
    rng: &mut R,
    factors: Vec<FormalVariety>,
    coefficients: &Alphabet,
    coefficient_degree: u32,
) -> ChowElement {
    let mut out = ChowElement::zero(factors, coefficients, coefficient_degree).expect("coefficient names are free");
    for tuple in out.cell_tuples() {
        let ring = out.ring(&tuple).expect("tuple from cell_tuples");
        let n = ring.alphabet().len();
        let p = random_poly(rng, ring.alphabet(), ring.truncation(), 4, 0, &vec![true; n]);
        out.add_to_component(tuple, &p).expect("polynomial built in the tuple ring");
    }
    out
}

/// Random standard cycle; each `P_I` is present with probability 2/3 and
/// has at most `d` in every Chern block and at most `coefficient_degree` in
/// the coefficients.
pub fn random_cycle<R: Rng>(
    rng: &mut R,
    d: u32,
    k: usize,
    coefficients: &Alphabet,
    coefficient_degree: u32,
) -> StandardCycle {
    let chern_weights: Vec<u32> = (1..=d).collect();
    let y_weights: Vec<u32> = coefficients.variables().iter().map(|v| v.weight).collect();
    let mut table = Vec::new();
    for i in enumerate_partitions(k) {
        if !rng.gen_bool(2.0 / 3.0) {
            continue;
        }
        let alphabet = block_alphabet(d, i.len(), coefficients).expect("coefficient names are free");
        let trunc = i.len() as u32 * d + coefficient_degree;
        let mut p = GradedPoly::zero(&alphabet, trunc);
        for _ in 0..rng.gen_range(1..=3) {
            let mut e = Vec::with_capacity(alphabet.len());
            for _ in 0..i.len() {
                let block = exponents_of_degree(&chern_weights, rng.gen_range(0..=d));
                e.extend(block.choose(rng).expect("every degree has a monomial"));
            }
            let ys = exponents_of_degree(&y_weights, rng.gen_range(0..=coefficient_degree));
            match ys.choose(rng) {
                Some(y) => e.extend(y),
                None => continue,
            }
            p += &GradedPoly::monomial(&alphabet, trunc, e, random_rational(rng));
        }
        table.push((i, p));
    }
    StandardCycle::new(d, k, coefficients, table).expect("generated within the degree bounds")
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            passed: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
        }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let mut rng = rng(seed);
    let mut t = Tally::new();
    match name {
        "segre" => {
            for n in 0..200 {
                let e = random_bundle(&mut rng);
                let prod = &segre(&e) * e.total();
                t.check(prod == GradedPoly::one(e.alphabet(), e.truncation()), || format!("bundle #{n}: {}", e.total()));
            }
        }
        "pushforward" => {
            for k in 1..=4u32 {
                let mut vars: Vec<(String, u32)> = (1..=k).map(|i| (format!("e{i}"), i)).collect();
                vars.extend((1..=k).map(|i| (format!("q{i}"), i)));
                vars.push(("h".into(), 1));
                let a = Alphabet::new(vars).expect("distinct names");
                let trunc = 2 * k;
                let v = |name: &str| GradedPoly::var(&a, trunc, name).expect("declared variable");
                let mut total = GradedPoly::one(&a, trunc);
                for i in 1..=k {
                    total += &v(&format!("e{i}"));
                }
                let e = BundleClass::new(k, total).expect("constant term is one");
                let cq = |i: u32| if i == 0 { GradedPoly::one(&a, trunc) } else { v(&format!("q{i}")) };
                let mut c = GradedPoly::zero(&a, trunc);
                for i in 0..=k {
                    c += &(&cq(i) * &v("h").pow(k - i));
                }
                for j in 0..k {
                    let lhs = projective_bundle_pushforward_poly(&(&c * &v("h").pow(j)), "h", &e)?;
                    let mut rhs = GradedPoly::zero(&a, trunc);
                    for i in 0..=k.min(j + 1) {
                        rhs += &(&cq(i) * &segre_class(&dual(&e), j + 1 - i));
                    }
                    t.check(lhs == rhs, || format!("rank {k}, j = {j}"));
                }
            }
        }
        "triangular" => {
            for n in 0..100 {
                let sys = random_triangular(&mut rng);
                let inv = sys.invert()?;
                for i in 0..sys.alphabet().len() {
                    let x = GradedPoly::var_at(sys.alphabet(), sys.truncation(), i);
                    t.check(sys.apply(&inv.apply(&x)?)? == x && inv.apply(&sys.apply(&x)?)? == x, || {
                        format!("system #{n}, variable {}", sys.alphabet().name(i))
                    });
                }
                // G_j = μ_j^{-1}·(image of y_j) is monic; its root kills every G_j
                let names: Vec<String> = sys.components().iter().map(|c| sys.alphabet().name(c.variable).to_string()).collect();
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                let gens: Vec<GradedPoly> = sys
                    .components()
                    .iter()
                    .map(|c| {
                        let y = GradedPoly::var_at(sys.alphabet(), sys.truncation(), c.variable);
                        &y + &c.tail.scale(&(Rational::from_integer(1.into()) / &c.leading))
                    })
                    .collect();
                let roots = triangular_root(&gens, &names)?;
                for (j, g) in gens.iter().enumerate() {
                    t.check(evaluate_at(g, &names, &roots)?.is_zero(), || format!("system #{n}, root of G_{}", j + 1));
                }
            }
        }
        "cobordism" => {
            for d in 1..=4 {
                let m = chern_number_matrix(d)?;
                t.check(m.rank == integer_partitions(d).len(), || format!("rank in dimension {d}"));
            }
            let m = chern_number_matrix(2)?;
            t.check(m.entries == vec![vec![int(9), int(3)], vec![int(8), int(4)]], || "d = 2 entries".into());
            t.check(m.determinant == int(12), || "d = 2 determinant".into());
        }
        "u-prime" => {
            for (d, n, l) in [(1, 4, 3), (2, 7, 2), (2, 7, 3)] {
                let u = compute_u_prime(d, n, l)?;
                let k_d = d * (n - d - 1);
                t.check(u.leading[0] == int(n as i64 - (k_d * l) as i64), || format!("μ_1 for ({d},{n},{l})"));
                t.check(u.leading.iter().all(|m| !m.is_zero()) && u.triangular_system().is_ok(), || {
                    format!("triangularity for ({d},{n},{l})")
                });
            }
            t.check(matches!(compute_u_prime(1, 4, 2), Err(Error::Degenerate { .. })), || "(1,4,2) must be degenerate".into());
        }
        "diagonal" => {
            for n in 0..100 {
                let d = rng.gen_range(1..=3);
                let k = rng.gen_range(2..=3);
                let x = random_variety(&mut rng, d, 2);
                let parts = enumerate_partitions(k);
                let i = parts.choose(&mut rng).expect("non-empty");
                let alpha = random_chow(&mut rng, vec![x.clone(); i.len()], &Alphabet::empty(), 0);
                let beta = random_chow(&mut rng, vec![x.clone(); k], &Alphabet::empty(), 0);
                let delta = i.diagonal();
                let lhs = delta.pushforward(&alpha)?.checked_mul(&beta)?.integrate();
                let rhs = alpha.checked_mul(&delta.pullback(alpha.factors(), &beta)?)?.integrate();
                t.check(lhs == rhs, || format!("input #{n}: {x}, {i}"));
            }
        }
        "restriction" => {
            for n in 0..50 {
                let d = rng.gen_range(1..=2);
                let k = rng.gen_range(2..=3);
                let z = random_cycle(&mut rng, d, k, &Alphabet::empty(), 0);
                let parts = enumerate_partitions(k);
                let i = parts.choose(&mut rng).expect("non-empty");
                let xs: Vec<FormalVariety> = (0..i.len()).map(|_| random_variety(&mut rng, d, 2)).collect();
                t.check(z.restrict_to_component(i, &xs)? == z.restrict_to_component_direct(i, &xs)?, || {
                    format!("cycle #{n}, component {i}")
                });
                let x = random_variety(&mut rng, d, 2);
                let same = vec![x.clone(); i.len()];
                t.check(delta_restrict(&z.restrict_to_component(i, &same)?, i)? == z.z_delta(i, &x)?, || {
                    format!("cycle #{n}, δ-restriction along {i}")
                });
            }
        }
        "decode" => {
            let y = Alphabet::new([("y1", 1), ("y2", 2)]).expect("distinct names");
            for n in 0..50 {
                let d = rng.gen_range(1..=2);
                let k = rng.gen_range(1..=3);
                let (coeffs, cdeg) = if n % 2 == 0 { (Alphabet::empty(), 0) } else { (y.clone(), 2) };
                let z = random_cycle(&mut rng, d, k, &coeffs, cdeg);
                let back = decode(&z, d, k)?.cycle;
                t.check(back == z, || format!("cycle #{n} (d = {d}, k = {k})"));
            }
            let zero = |x: &FormalVariety| Ok(ChowElement::zero_on_power(x, 3));
            t.check(decode(&zero, 2, 3)?.cycle.is_zero(), || "zero oracle".into());
            let one_block = SetPartition::one_block(2);
            let diag = |x: &FormalVariety| {
                let one = ChowElement::fundamental(vec![x.clone()], &Alphabet::empty(), 0)?;
                one_block.diagonal().pushforward(&one)
            };
            let dec = decode(&diag, 2, 2)?.cycle;
            t.check(dec.table().len() == 1 && dec.poly(&one_block).is_some_and(|p| *p == GradedPoly::one(p.alphabet(), p.truncation())), || {
                "small diagonal".into()
            });
        }
        other => return Err(Error::Parse(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
    Ok(t.report(name))
}
