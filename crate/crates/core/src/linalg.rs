//! Exact linear algebra by fraction-free (Bareiss) elimination.
//!
//! Rational rows are scaled to integer rows first; elimination then stays
//! in the integers with exact divisions by the previous pivot. Pivots are
//! the first nonzero entry in row order, so results are deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The coefficient matrix has rank below its column count.
    Singular { rank: usize },
    /// Some right-hand side is not in the column span.
    Inconsistent,
}

fn integer_row(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints = row
        .iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();
    (ints, lcm)
}

/// Row echelon form in place; returns pivot columns and the number of row swaps.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> (Vec<usize>, usize) {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..row.len() {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = matrix.iter().map(|r| integer_row(r).0).collect();
    bareiss(&mut m, cols).0.len()
}

pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| {
            let (ints, l) = integer_row(r);
            scale *= l;
            ints
        })
        .collect();
    let (pivots, swaps) = bareiss(&mut m, n);
    if pivots.len() < n {
        return Rational::zero();
    }
    let mut det = m[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        det = -det;
    }
    Rational::new(det, scale)
}

/// Solves `A X = B` for a matrix `A` of full column rank; `rhs` holds the
/// columns of `B`. Extra rows of `A` must be consistent with the solution.
pub fn solve(a: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, SolveError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let nrhs = rhs.len();
    assert!(rhs.iter().all(|b| b.len() == rows), "rhs length");
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            integer_row(&row).0
        })
        .collect();
    let (pivots, _) = bareiss(&mut m, cols);
    if pivots.len() < cols {
        return Err(SolveError::Singular { rank: pivots.len() });
    }
    if m[cols..]
        .iter()
        .any(|row| row[cols..].iter().any(|x| !x.is_zero()))
    {
        return Err(SolveError::Inconsistent);
    }
    // upper triangular with pivots on the diagonal: back-substitute
    let mut out = vec![vec![Rational::zero(); cols]; nrhs];
    for (k, x) in out.iter_mut().enumerate() {
        for i in (0..cols).rev() {
            let mut acc = Rational::from_integer(m[i][cols + k].clone());
            for j in i + 1..cols {
                acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
            }
            x[i] = acc / Rational::from_integer(m[i][i].clone());
        }
    }
    Ok(out)
}

pub fn kronecker(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ra in a {
        for rb in b {
            out.push(
                ra.iter()
                    .flat_map(|x| rb.iter().map(move |y| x * y))
                    .collect(),
            );
        }
    }
    out
}
