//! Exact Pfaffians of antisymmetric matrices.
//!
//! The primary route is Laplace-type expansion along the first row; the
//! second route computes the top coefficient of exp(alpha) in an exact
//! exterior algebra and exists purely as an independent oracle.
//!
//! Sign convention: the Pfaffian of the block [[0, -c], [c, 0]] is c, and a
//! block-diagonal matrix of such blocks has Pfaffian c_1 * ... * c_{n/2}, the
//! square root of the determinant.

use crate::scalar::{GaussRat, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// Expansion cost cap for the recursive route.
pub const MAX_PFAFFIAN_SIZE: usize = 12;
/// The exterior algebra on n generators has 2^n components.
pub const MAX_BEREZIN_SIZE: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PfaffianError {
    NotAntisymmetric { row: usize, col: usize },
    NotSquare,
    TooLarge { size: usize, cap: usize },
}

impl fmt::Display for PfaffianError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PfaffianError::NotAntisymmetric { row, col } => {
                write!(f, "matrix is not antisymmetric at ({}, {})", row, col)
            }
            PfaffianError::NotSquare => write!(f, "matrix is not square"),
            PfaffianError::TooLarge { size, cap } => {
                write!(f, "size {} exceeds cap {}", size, cap)
            }
        }
    }
}

impl std::error::Error for PfaffianError {}

/// An exactly antisymmetric matrix over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymMatrix {
    n: usize,
    entries: Vec<Vec<GaussRat>>,
}

impl AntisymMatrix {
    pub fn new(entries: Vec<Vec<GaussRat>>) -> Result<Self, PfaffianError> {
        let n = entries.len();
        for row in &entries {
            if row.len() != n {
                return Err(PfaffianError::NotSquare);
            }
        }
        for i in 0..n {
            for j in i..n {
                if entries[i][j] != -&entries[j][i] {
                    return Err(PfaffianError::NotAntisymmetric { row: i, col: j });
                }
            }
        }
        Ok(AntisymMatrix { n, entries })
    }

    pub fn from_rational_rows(rows: Vec<Vec<Rational>>) -> Result<Self, PfaffianError> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(GaussRat::from_rational).collect())
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        AntisymMatrix {
            n,
            entries: vec![vec![GaussRat::zero(); n]; n],
        }
    }

    /// Block-diagonal matrix of 2x2 blocks [[0, -c], [c, 0]].
    pub fn from_blocks(speeds: &[GaussRat]) -> Self {
        let n = 2 * speeds.len();
        let mut m = Self::zero(n);
        for (k, c) in speeds.iter().enumerate() {
            m.entries[2 * k][2 * k + 1] = -c;
            m.entries[2 * k + 1][2 * k] = c.clone();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<GaussRat>] {
        &self.entries
    }

    /// Swap rows i, j and columns i, j; reverses the orientation.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut e = self.entries.clone();
        e.swap(i, j);
        for row in &mut e {
            row.swap(i, j);
        }
        AntisymMatrix {
            n: self.n,
            entries: e,
        }
    }

    /// The bilinear form coefficient <A e_i, e_j> = a_ji.
    fn form(&self, i: usize, j: usize) -> &GaussRat {
        &self.entries[j][i]
    }
}

/// Exact Pfaffian by recursive expansion along the first row; 0 for odd size.
pub fn pfaffian(m: &AntisymMatrix) -> Result<GaussRat, PfaffianError> {
    if m.n > MAX_PFAFFIAN_SIZE {
        return Err(PfaffianError::TooLarge {
            size: m.n,
            cap: MAX_PFAFFIAN_SIZE,
        });
    }
    if m.n % 2 == 1 {
        return Ok(GaussRat::zero());
    }
    let indices: Vec<usize> = (0..m.n).collect();
    Ok(pfaffian_rec(m, &indices))
}

fn pfaffian_rec(m: &AntisymMatrix, indices: &[usize]) -> GaussRat {
    if indices.is_empty() {
        return GaussRat::one();
    }
    let i0 = indices[0];
    let mut acc = GaussRat::zero();
    let mut sign_positive = true;
    for &j in &indices[1..] {
        let coeff = m.form(i0, j);
        if !coeff.is_zero() {
            let rest: Vec<usize> = indices[1..].iter().copied().filter(|&k| k != j).collect();
            let sub = pfaffian_rec(m, &rest);
            let term = coeff * &sub;
            acc = if sign_positive {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        sign_positive = !sign_positive;
    }
    acc
}

/// Pfaffian as the Berezin integral of exp(alpha) with
/// alpha = sum_{i<j} <A e_i, e_j> e_i ^ e_j, computed in an exact exterior
/// algebra on n generators. Independent of the recursive route.
pub fn pfaffian_berezin(m: &AntisymMatrix) -> Result<GaussRat, PfaffianError> {
    if m.n > MAX_BEREZIN_SIZE {
        return Err(PfaffianError::TooLarge {
            size: m.n,
            cap: MAX_BEREZIN_SIZE,
        });
    }
    if m.n % 2 == 1 {
        return Ok(GaussRat::zero());
    }
    if m.n == 0 {
        return Ok(GaussRat::one());
    }
    // alpha as a map from basis blades (bitmasks) to coefficients
    let mut alpha: BTreeMap<u32, GaussRat> = BTreeMap::new();
    for i in 0..m.n {
        for j in i + 1..m.n {
            let c = m.form(i, j);
            if !c.is_zero() {
                alpha.insert((1u32 << i) | (1u32 << j), c.clone());
            }
        }
    }
    // alpha^{n/2} / (n/2)!
    let half = m.n / 2;
    let mut power: BTreeMap<u32, GaussRat> = BTreeMap::new();
    power.insert(0, GaussRat::one());
    for _ in 0..half {
        power = wedge_mul(&power, &alpha);
    }
    let full: u32 = (1u32 << m.n) - 1;
    let mut factorial = Rational::from_integer(1.into());
    for k in 2..=half {
        factorial *= Rational::from_integer(k.into());
    }
    let top = power.get(&full).cloned().unwrap_or_else(GaussRat::zero);
    let inv = GaussRat::from_rational(factorial).inv();
    Ok(&top * &inv)
}

fn wedge_mul(a: &BTreeMap<u32, GaussRat>, b: &BTreeMap<u32, GaussRat>) -> BTreeMap<u32, GaussRat> {
    let mut out: BTreeMap<u32, GaussRat> = BTreeMap::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            if ma & mb != 0 {
                continue;
            }
            let sign = wedge_sign(ma, mb);
            let mut term = ca * cb;
            if sign < 0 {
                term = -&term;
            }
            let key = ma | mb;
            let entry = match out.remove(&key) {
                Some(old) => &old + &term,
                None => term,
            };
            if !entry.is_zero() {
                out.insert(key, entry);
            }
        }
    }
    out
}

/// Sign of reordering the concatenation of two disjoint increasing blades:
/// (-1)^{number of transpositions}.
fn wedge_sign(a: u32, b: u32) -> i32 {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let low = bb & bb.wrapping_neg();
        let idx = low.trailing_zeros();
        // generators of a strictly above this generator of b must move past it
        swaps += (a >> (idx + 1)).count_ones();
        bb ^= low;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exact determinant of the antisymmetric matrix; the oracle for
/// Pf(A)^2 = det(A).
pub fn determinant(m: &AntisymMatrix) -> GaussRat {
    crate::linalg::det_gauss(&m.entries)
}
