//! Exact dense linear algebra over the rationals and Gaussian rationals.
//!
//! Everything here is plain Gaussian elimination kept exact; the matrices in
//! this crate are tiny (ambient ranks and monomial bases), so no pivoting
//! strategy beyond "first nonzero" is needed.

use crate::scalar::{GaussRat, Rational};
use num_traits::{One, Zero};

/// Exact determinant of a square rational matrix by fraction-free elimination.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "determinant of non-square matrix");
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return Rational::zero(),
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact determinant over the Gaussian rationals.
pub fn det_gauss(m: &[Vec<GaussRat>]) -> GaussRat {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "determinant of non-square matrix");
    }
    let mut a: Vec<Vec<GaussRat>> = m.to_vec();
    let mut det = GaussRat::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return GaussRat::zero(),
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -&det;
        }
        let pivot = a[col][col].clone();
        det = &det * &pivot;
        let pivot_inv = pivot.inv();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &pivot_inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
    }
    det
}

/// Row-reduce in place; returns the rank.
pub fn rank_rational(m: &mut Vec<Vec<Rational>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let pivot_row = match (rank..rows).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => continue,
        };
        m.swap(pivot_row, rank);
        let pivot = m[rank][col].clone();
        for c in col..cols {
            m[rank][c] /= &pivot;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let sub = &factor * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Solve A x = b exactly. Returns None when the system is inconsistent or
/// underdetermined.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "dimension mismatch in linear solve");
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let rank = rank_rational(&mut aug);
    // inconsistent: a pivot in the augmented column
    for row in &aug {
        if row[..cols].iter().all(|x| x.is_zero()) && !row[cols].is_zero() {
            return None;
        }
    }
    if rank < cols {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for row in &aug {
        if let Some(lead) = (0..cols).find(|&c| row[c].is_one()) {
            x[lead] = row[cols].clone();
        }
    }
    Some(x)
}
