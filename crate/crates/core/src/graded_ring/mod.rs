//! Weighted-graded polynomial rings over the rationals, truncated above a
//! fixed weighted degree.
//!
//! A [`GradedPoly`] carries its own [`Alphabet`] and truncation bound; binary
//! operations require both to match. Monomials are stored sparsely in the
//! canonical graded-lex order of [`Monomial`].

mod alphabet;
mod monomial;
mod poly;
mod triangular;

pub use alphabet::{Alphabet, Variable};
pub use monomial::Monomial;
pub use poly::GradedPoly;
pub use triangular::{evaluate_at, triangular_root, TriangularComponent, TriangularSystem};

/// All exponent vectors over `weights` of weighted degree exactly `degree`,
/// in canonical monomial order.
pub fn exponents_of_degree(weights: &[u32], degree: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = left / weights[i];
        loop {
            cur.push(e);
            go(weights, i + 1, left - e * weights[i], cur, out);
            cur.pop();
            if e == 0 {
                break;
            }
            e -= 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, degree, &mut Vec::new(), &mut out);
    out
}
