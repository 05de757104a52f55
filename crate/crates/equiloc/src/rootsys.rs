//! Root systems and Weyl groups for the classical families.
//!
//! Standard ambient realizations, roots stored with purely imaginary
//! coordinates (the weight lattice sits in i t*):
//!   A_r: i(e_j - e_k), j < k, in R^{r+1}
//!   B_r: i(e_j +- e_k), j < k, and i e_j, in R^r
//!   C_r: i(e_j +- e_k), j < k, and 2i e_j, in R^r
//!   D_r: i(e_j +- e_k), j < k, in R^r
//!
//! Weyl elements are exact orthogonal matrices on the ambient space; the
//! sign character is the determinant.

use crate::linalg;
use crate::scalar::{rat, GaussRat, Rational};
use crate::weight::{dot_imag, Weight};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Group-size safety cap for Weyl closure.
pub const MAX_WEYL_ORDER: usize = 1_000_000;
pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(Family::A),
            "B" => Some(Family::B),
            "C" => Some(Family::C),
            "D" => Some(Family::D),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
            Family::C => write!(f, "C"),
            Family::D => write!(f, "D"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSystemError {
    UnsupportedRank { family: Family, rank: usize },
    GroupTooLarge { cap: usize },
}

impl fmt::Display for RootSystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystemError::UnsupportedRank { family, rank } => {
                write!(f, "unsupported root system {}{}", family, rank)
            }
            RootSystemError::GroupTooLarge { cap } => {
                write!(f, "Weyl group exceeds cap {}", cap)
            }
        }
    }
}

impl std::error::Error for RootSystemError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    ambient_dim: usize,
    positive_roots: Vec<Weight>,
    simple_roots: Vec<Weight>,
}

fn imag_unit(dim: usize, j: usize, scale: i64) -> Weight {
    let mut v = vec![Rational::zero(); dim];
    v[j] = rat(scale);
    Weight::imaginary(v)
}

fn imag_pair(dim: usize, j: usize, k: usize, sign_k: i64) -> Weight {
    let mut v = vec![Rational::zero(); dim];
    v[j] = rat(1);
    v[k] = rat(sign_k);
    Weight::imaginary(v)
}

/// Build the standard realization of a classical root system.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem, RootSystemError> {
    let bad = || RootSystemError::UnsupportedRank { family, rank };
    if rank > MAX_RANK {
        return Err(bad());
    }
    let (ambient_dim, positive_roots, simple_roots) = match family {
        Family::A => {
            if rank < 1 {
                return Err(bad());
            }
            let dim = rank + 1;
            let mut pos = Vec::new();
            for j in 0..dim {
                for k in j + 1..dim {
                    pos.push(imag_pair(dim, j, k, -1));
                }
            }
            let simple: Vec<Weight> = (0..rank).map(|j| imag_pair(dim, j, j + 1, -1)).collect();
            (dim, pos, simple)
        }
        Family::B => {
            if rank < 2 {
                return Err(bad());
            }
            let dim = rank;
            let mut pos = Vec::new();
            for j in 0..dim {
                for k in j + 1..dim {
                    pos.push(imag_pair(dim, j, k, -1));
                    pos.push(imag_pair(dim, j, k, 1));
                }
            }
            for j in 0..dim {
                pos.push(imag_unit(dim, j, 1));
            }
            let mut simple: Vec<Weight> = (0..rank - 1)
                .map(|j| imag_pair(dim, j, j + 1, -1))
                .collect();
            simple.push(imag_unit(dim, rank - 1, 1));
            (dim, pos, simple)
        }
        Family::C => {
            if rank < 2 {
                return Err(bad());
            }
            let dim = rank;
            let mut pos = Vec::new();
            for j in 0..dim {
                for k in j + 1..dim {
                    pos.push(imag_pair(dim, j, k, -1));
                    pos.push(imag_pair(dim, j, k, 1));
                }
            }
            for j in 0..dim {
                pos.push(imag_unit(dim, j, 2));
            }
            let mut simple: Vec<Weight> = (0..rank - 1)
                .map(|j| imag_pair(dim, j, j + 1, -1))
                .collect();
            simple.push(imag_unit(dim, rank - 1, 2));
            (dim, pos, simple)
        }
        Family::D => {
            if rank < 3 {
                return Err(bad());
            }
            let dim = rank;
            let mut pos = Vec::new();
            for j in 0..dim {
                for k in j + 1..dim {
                    pos.push(imag_pair(dim, j, k, -1));
                    pos.push(imag_pair(dim, j, k, 1));
                }
            }
            let mut simple: Vec<Weight> = (0..rank - 1)
                .map(|j| imag_pair(dim, j, j + 1, -1))
                .collect();
            simple.push(imag_pair(dim, rank - 2, rank - 1, 1));
            (dim, pos, simple)
        }
    };
    Ok(RootSystem {
        family,
        rank,
        ambient_dim,
        positive_roots,
        simple_roots,
    })
}

impl RootSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    /// All roots, positive then negative.
    pub fn all_roots(&self) -> Vec<Weight> {
        let mut out = self.positive_roots.clone();
        out.extend(self.positive_roots.iter().map(|r| r.neg()));
        out
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Weight {
        let mut acc = Weight::zero(self.ambient_dim);
        for r in &self.positive_roots {
            acc = acc.add(r);
        }
        acc.scale(&GaussRat::new(
            Rational::new(1.into(), 2.into()),
            Rational::zero(),
        ))
    }

    /// True when <alpha, v> != 0 for every root alpha at the rational point v.
    pub fn is_regular_rational(&self, v: &[Rational]) -> bool {
        self.positive_roots
            .iter()
            .all(|a| !a.pairing_rational(v).is_zero())
    }

    /// Dominance: (lam, alpha) >= 0 against every simple root.
    pub fn is_dominant(&self, lam: &Weight) -> bool {
        self.simple_roots
            .iter()
            .all(|a| !dot_imag(lam, a).is_negative())
    }

    /// Fundamental weights: the basis of the root span dual to the coroots.
    pub fn fundamental_weights(&self) -> Vec<Weight> {
        let simple = &self.simple_roots;
        let r = simple.len();
        // Gram matrix of coroot pairings: 2 (a_i, a_j) / (a_j, a_j)
        let gram: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let num = dot_imag(&simple[i], &simple[j]);
                        let den = dot_imag(&simple[j], &simple[j]);
                        rat(2) * num / den
                    })
                    .collect()
            })
            .collect();
        // transpose: unknowns are coefficients on the simple roots
        let gram_t: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..r).map(|j| gram[j][i].clone()).collect())
            .collect();
        (0..r)
            .map(|k| {
                let rhs: Vec<Rational> = (0..r)
                    .map(|j| {
                        if j == k {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                let coeffs =
                    linalg::solve_rational(&gram_t, &rhs).expect("Cartan matrix is invertible");
                let mut acc = Weight::zero(self.ambient_dim);
                for (c, a) in coeffs.iter().zip(simple) {
                    acc = acc.add(&a.scale_rational(c));
                }
                acc
            })
            .collect()
    }
}

// =============================================================================
// Weyl group
// =============================================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    matrix: Vec<Vec<Rational>>,
    epsilon: i8,
}

impl WeylElement {
    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    self.matrix[i][j].is_one()
                } else {
                    self.matrix[i][j].is_zero()
                }
            })
        })
    }

    /// Apply to a weight coordinate-wise.
    pub fn apply(&self, w: &Weight) -> Weight {
        let n = self.matrix.len();
        assert_eq!(w.rank(), n, "weight rank mismatch in Weyl action");
        let coords: Vec<GaussRat> = (0..n)
            .map(|i| {
                let mut acc = GaussRat::zero();
                for (j, c) in w.coords().iter().enumerate() {
                    if !self.matrix[i][j].is_zero() {
                        acc = &acc
                            + &GaussRat::new(
                                &self.matrix[i][j] * &c.re,
                                &self.matrix[i][j] * &c.im,
                            );
                    }
                }
                acc
            })
            .collect();
        Weight::new(coords)
    }

    /// Apply to a rational ambient point.
    pub fn apply_point(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.matrix.len();
        (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += &self.matrix[i][j] * vj;
                }
                acc
            })
            .collect()
    }

    pub fn apply_point_f64(&self, x: &[f64]) -> Vec<f64> {
        use num_traits::ToPrimitive;
        let n = self.matrix.len();
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for (j, xj) in x.iter().enumerate() {
                    acc += self.matrix[i][j].to_f64().unwrap() * xj;
                }
                acc
            })
            .collect()
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn reflection_matrix(root: &Weight) -> Vec<Vec<Rational>> {
    let n = root.rank();
    let a = root.imag_parts();
    let norm: Rational = a.iter().map(|x| x * x).sum();
    let mut m = identity_matrix(n);
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // s(x)_i = x_i - 2 a_i (a . x) / (a, a)
            *entry -= rat(2) * &a[i] * &a[j] / &norm;
        }
    }
    m
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc += &a[i][k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Full Weyl group by breadth-first closure over the simple reflections;
/// identity first, order deterministic.
pub fn weyl_group(rs: &RootSystem) -> Result<Vec<WeylElement>, RootSystemError> {
    let n = rs.ambient_dim;
    let generators: Vec<Vec<Vec<Rational>>> =
        rs.simple_roots.iter().map(reflection_matrix).collect();
    let mut seen: BTreeSet<Vec<Vec<Rational>>> = BTreeSet::new();
    let mut order: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut queue: std::collections::VecDeque<Vec<Vec<Rational>>> =
        std::collections::VecDeque::new();
    let id = identity_matrix(n);
    seen.insert(id.clone());
    order.push(id.clone());
    queue.push_back(id);
    while let Some(current) = queue.pop_front() {
        for g in &generators {
            let next = mat_mul(g, &current);
            if seen.insert(next.clone()) {
                if order.len() >= MAX_WEYL_ORDER {
                    return Err(RootSystemError::GroupTooLarge {
                        cap: MAX_WEYL_ORDER,
                    });
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|matrix| {
            let det = linalg::det_rational(&matrix);
            let epsilon = if det.is_one() { 1 } else { -1 };
            debug_assert!(det.is_one() || (-&det).is_one(), "Weyl det must be +-1");
            WeylElement { matrix, epsilon }
        })
        .collect())
}

/// Orbit of a weight as a deduplicated list (first-seen order), together
/// with the stabilizer order |W| / |orbit|.
pub fn weyl_orbit(rs: &RootSystem, lam: &Weight) -> Result<(Vec<Weight>, usize), RootSystemError> {
    let group = weyl_group(rs)?;
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    let mut orbit = Vec::new();
    for w in &group {
        let img = w.apply(lam);
        if seen.insert(img.clone()) {
            orbit.push(img);
        }
    }
    let stabilizer = group.len() / orbit.len();
    Ok((orbit, stabilizer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn a1_realization() {
        let rs = build_root_system(Family::A, 1).unwrap();
        assert_eq!(rs.ambient_dim(), 2);
        assert_eq!(rs.positive_roots().len(), 1);
        assert_eq!(
            rs.positive_roots()[0],
            Weight::imaginary(vec![rat(1), rat(-1)])
        );
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(
            build_root_system(Family::A, 2)
                .unwrap()
                .positive_roots()
                .len(),
            3
        );
        assert_eq!(
            build_root_system(Family::B, 2)
                .unwrap()
                .positive_roots()
                .len(),
            4
        );
        assert_eq!(
            build_root_system(Family::C, 3)
                .unwrap()
                .positive_roots()
                .len(),
            9
        );
        assert_eq!(
            build_root_system(Family::D, 4)
                .unwrap()
                .positive_roots()
                .len(),
            12
        );
    }

    #[test]
    fn unsupported_ranks_rejected() {
        assert!(build_root_system(Family::B, 1).is_err());
        assert!(build_root_system(Family::C, 1).is_err());
        assert!(build_root_system(Family::D, 2).is_err());
        assert!(build_root_system(Family::A, 9).is_err());
    }

    #[test]
    fn rho_values() {
        let a1 = build_root_system(Family::A, 1).unwrap();
        assert_eq!(a1.rho(), Weight::imaginary(vec![ratio(1, 2), ratio(-1, 2)]));
        let a2 = build_root_system(Family::A, 2).unwrap();
        assert_eq!(a2.rho(), Weight::imaginary(vec![rat(1), rat(0), rat(-1)]));
        let b2 = build_root_system(Family::B, 2).unwrap();
        assert_eq!(b2.rho(), Weight::imaginary(vec![ratio(3, 2), ratio(1, 2)]));
    }

    #[test]
    fn weyl_group_orders() {
        let orders: &[(Family, usize, usize)] = &[
            (Family::A, 1, 2),
            (Family::A, 2, 6),
            (Family::A, 3, 24),
            (Family::A, 4, 120),
            (Family::B, 2, 8),
            (Family::B, 3, 48),
            (Family::B, 4, 384),
            (Family::C, 2, 8),
            (Family::C, 3, 48),
            (Family::C, 4, 384),
            (Family::D, 3, 24),
            (Family::D, 4, 192),
        ];
        for &(fam, rank, expect) in orders {
            let rs = build_root_system(fam, rank).unwrap();
            let group = weyl_group(&rs).unwrap();
            assert_eq!(group.len(), expect, "{}{}", fam, rank);
            assert!(group[0].is_identity());
        }
    }

    #[test]
    fn a1_signs() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let group = weyl_group(&rs).unwrap();
        let mut eps: Vec<i8> = group.iter().map(|w| w.epsilon()).collect();
        eps.sort_unstable();
        assert_eq!(eps, vec![-1, 1]);
    }

    #[test]
    fn epsilon_is_multiplicative_and_balanced() {
        for (fam, rank) in [(Family::A, 1), (Family::A, 2), (Family::B, 2)] {
            let rs = build_root_system(fam, rank).unwrap();
            let group = weyl_group(&rs).unwrap();
            // signs balance
            let total: i64 = group.iter().map(|w| w.epsilon() as i64).sum();
            assert_eq!(total, 0);
            // multiplicativity over all pairs
            for w1 in &group {
                for w2 in &group {
                    let prod = mat_mul(&w1.matrix, &w2.matrix);
                    let found = group
                        .iter()
                        .find(|w| w.matrix == prod)
                        .expect("group closed under product");
                    assert_eq!(found.epsilon(), w1.epsilon() * w2.epsilon());
                }
            }
        }
    }

    #[test]
    fn elements_permute_the_root_set() {
        for (fam, rank) in [(Family::A, 2), (Family::B, 2), (Family::C, 2)] {
            let rs = build_root_system(fam, rank).unwrap();
            let all: BTreeSet<Weight> = rs.all_roots().into_iter().collect();
            for w in weyl_group(&rs).unwrap() {
                for root in rs.positive_roots() {
                    assert!(all.contains(&w.apply(root)));
                }
            }
        }
    }

    #[test]
    fn orbits_and_stabilizers() {
        let a1 = build_root_system(Family::A, 1).unwrap();
        let (orbit, stab) = weyl_orbit(&a1, &Weight::zero(2)).unwrap();
        assert_eq!(orbit.len(), 1);
        assert_eq!(stab, 2);
        let (orbit, stab) = weyl_orbit(&a1, &a1.rho()).unwrap();
        assert_eq!(orbit.len(), 2);
        assert_eq!(stab, 1);

        let a2 = build_root_system(Family::A, 2).unwrap();
        let (orbit, stab) = weyl_orbit(&a2, &a2.rho()).unwrap();
        assert_eq!(orbit.len(), 6);
        assert_eq!(stab, 1);
    }

    #[test]
    fn fundamental_weights_dual_to_coroots() {
        for (fam, rank) in [
            (Family::A, 2),
            (Family::B, 2),
            (Family::C, 3),
            (Family::D, 3),
        ] {
            let rs = build_root_system(fam, rank).unwrap();
            let fw = rs.fundamental_weights();
            for (k, w) in fw.iter().enumerate() {
                assert!(rs.is_dominant(w));
                for (j, a) in rs.simple_roots().iter().enumerate() {
                    let pairing = rat(2) * dot_imag(w, a) / dot_imag(a, a);
                    let expect = if j == k {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    assert_eq!(pairing, expect, "{}{} weight {} root {}", fam, rank, k, j);
                }
            }
        }
    }

    #[test]
    fn a2_fundamental_weight_coordinates() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let fw = rs.fundamental_weights();
        assert_eq!(
            fw[0],
            Weight::imaginary(vec![ratio(2, 3), ratio(-1, 3), ratio(-1, 3)])
        );
        assert_eq!(
            fw[1],
            Weight::imaginary(vec![ratio(1, 3), ratio(1, 3), ratio(-2, 3)])
        );
    }
}
