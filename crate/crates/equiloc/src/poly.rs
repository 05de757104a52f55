//! Sparse multivariate polynomials on the Cartan algebra.
//!
//! Terms are kept in a BTreeMap keyed by exponent vectors under graded-lex
//! order; coefficients are `PiScalar`s. The topological degree of a monomial
//! is twice its polynomial degree, so `degree` reports polynomial degree and
//! callers double it where the grading matters.

use crate::scalar::{GaussRat, PiScalar, ScalarError};
use crate::weight::Weight;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector with graded-lex ordering (degree first, then lex).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn var(rank: usize, idx: usize) -> Self {
        let mut e = vec![0; rank];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    RankMismatch { left: usize, right: usize },
    Scalar(ScalarError),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::RankMismatch { left, right } => {
                write!(f, "rank mismatch: {} vs {}", left, right)
            }
            PolyError::Scalar(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for PolyError {}

impl From<ScalarError> for PolyError {
    fn from(e: ScalarError) -> Self {
        PolyError::Scalar(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivideError {
    /// The weight does not divide the polynomial; carries no quotient.
    NotDivisible,
    ZeroWeight,
}

impl fmt::Display for DivideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivideError::NotDivisible => write!(f, "linear form does not divide polynomial"),
            DivideError::ZeroWeight => write!(f, "zero weight"),
        }
    }
}

impl std::error::Error for DivideError {}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    /// A denominator factor is within eps of zero at the evaluation point.
    NearPole { factor: String, value: f64 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::NearPole { factor, value } => {
                write!(f, "near pole: |<{}, X>| = {:.3e}", factor, value)
            }
        }
    }
}

impl std::error::Error for EvalError {}

/// Default tolerance below which a denominator factor counts as a pole.
pub const DEFAULT_POLE_EPS: f64 = 1e-12;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    rank: usize,
    terms: BTreeMap<Monomial, PiScalar>,
}

impl MultiPoly {
    pub fn zero(rank: usize) -> Self {
        MultiPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: PiScalar) -> Self {
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(rank), c);
        }
        p
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, PiScalar::one())
    }

    pub fn var(rank: usize, idx: usize) -> Self {
        Self::monomial(rank, Monomial::var(rank, idx), PiScalar::one())
    }

    pub fn monomial(rank: usize, m: Monomial, c: PiScalar) -> Self {
        assert_eq!(m.0.len(), rank, "monomial length must equal rank");
        let mut p = Self::zero(rank);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear form <w, X> as a polynomial.
    pub fn from_weight(w: &Weight) -> Self {
        let rank = w.rank();
        let mut p = Self::zero(rank);
        for (j, c) in w.coords().iter().enumerate() {
            if !c.is_zero() {
                p.terms
                    .insert(Monomial::var(rank, j), PiScalar::from_gauss(c.clone()));
            }
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PiScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Polynomial degree (None for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> PiScalar {
        self.terms
            .get(&Monomial::constant(self.rank))
            .cloned()
            .unwrap_or_else(PiScalar::zero)
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<PiScalar> {
        match self.degree() {
            None => Some(PiScalar::zero()),
            Some(0) => Some(self.constant_term()),
            Some(_) => None,
        }
    }

    fn insert_term(&mut self, m: Monomial, c: PiScalar) -> Result<(), PolyError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = old.checked_add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.rank != rhs.rank {
            return Err(PolyError::RankMismatch {
                left: self.rank,
                right: rhs.rank,
            });
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial addition failed")
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, s: &PiScalar) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        MultiPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.rank != rhs.rank {
            return Err(PolyError::RankMismatch {
                left: self.rank,
                right: rhs.rank,
            });
        }
        let mut out = Self::zero(self.rank);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca.mul(cb))?;
            }
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial product failed")
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.rank);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Numeric value at a complex point; pi substituted by its double.
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.rank, "evaluation point has wrong rank");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = c.to_complex();
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= x[j].powu(e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, v: &[crate::scalar::Rational]) -> PiScalar {
        assert_eq!(v.len(), self.rank, "evaluation point has wrong rank");
        let mut acc = PiScalar::zero();
        for (m, c) in &self.terms {
            let mut g = GaussRat::one();
            for (j, &e) in m.0.iter().enumerate() {
                let vj = GaussRat::from_rational(v[j].clone());
                g = &g * &vj.pow(e);
            }
            acc = &acc + &c.mul(&PiScalar::from_gauss(g));
        }
        acc
    }

    /// Exact quotient p / <w, X>, or NotDivisible.
    ///
    /// Synthetic division with respect to the first variable carried by w;
    /// divisibility is equivalent to a vanishing remainder, which is the
    /// "no constant term in the pivot coordinate" test after the linear
    /// change of coordinates sending w to that coordinate.
    pub fn divide_by_linear(&self, w: &Weight) -> Result<MultiPoly, DivideError> {
        if w.is_zero() {
            return Err(DivideError::ZeroWeight);
        }
        assert_eq!(w.rank(), self.rank, "weight rank mismatch in division");
        if self.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let (pivot, lead) = w.leading().unwrap();
        let lead_inv = PiScalar::from_gauss(lead.clone().inv());
        // rest = w with the pivot coordinate removed
        let mut rest_coords = w.coords().to_vec();
        rest_coords[pivot] = GaussRat::zero();
        let rest = MultiPoly::from_weight(&Weight::new(rest_coords));

        // bucket terms by pivot exponent, erasing the pivot coordinate
        let mut buckets: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.0[pivot];
            let mut flat = m.clone();
            flat.0[pivot] = 0;
            buckets
                .entry(d)
                .or_insert_with(|| Self::zero(self.rank))
                .insert_term(flat, c.clone())
                .expect("bucketing cannot collide");
        }
        let top = *buckets.keys().next_back().unwrap();
        let mut carry = Self::zero(self.rank);
        let mut quotient_parts: Vec<(u32, MultiPoly)> = Vec::new();
        for d in (0..=top).rev() {
            let c_d = match buckets.remove(&d) {
                Some(b) => b.add(&carry),
                None => carry.clone(),
            };
            if d == 0 {
                if !c_d.is_zero() {
                    return Err(DivideError::NotDivisible);
                }
                break;
            }
            let q = c_d.scalar_mul(&lead_inv);
            carry = q.mul(&rest).neg();
            quotient_parts.push((d - 1, q));
        }
        let mut out = Self::zero(self.rank);
        for (d, part) in quotient_parts {
            for (m, c) in &part.terms {
                let mut lifted = m.clone();
                lifted.0[pivot] = d;
                out.insert_term(lifted, c.clone())
                    .expect("quotient assembly cannot collide");
            }
        }
        Ok(out)
    }

    /// Restriction to the kernel of a linear form, in l-1 variables.
    ///
    /// The kernel is parametrized deterministically: with pivot j0 the first
    /// nonzero coordinate of w, substitute x_j = t_j for j != j0 and
    /// x_j0 = -(sum_j w_j t_j)/w_j0; the result vanishes iff p vanishes on
    /// ker w.
    pub fn restrict_to_kernel(&self, w: &Weight) -> Result<MultiPoly, DivideError> {
        if w.is_zero() {
            return Err(DivideError::ZeroWeight);
        }
        assert_eq!(w.rank(), self.rank, "weight rank mismatch in restriction");
        let out_rank = self.rank - 1;
        let (pivot, lead) = w.leading().unwrap();
        let lead_inv = lead.clone().inv();
        // pivot substitution as a polynomial in the kernel parameters
        let mut subst = MultiPoly::zero(out_rank);
        for (j, c) in w.coords().iter().enumerate() {
            if j == pivot || c.is_zero() {
                continue;
            }
            let t = if j < pivot { j } else { j - 1 };
            let coeff = -&(c * &lead_inv);
            subst = subst.add(&MultiPoly::monomial(
                out_rank,
                Monomial::var(out_rank, t),
                PiScalar::from_gauss(coeff),
            ));
        }
        let mut out = MultiPoly::zero(out_rank);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_rank, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if j == pivot {
                    term = term.mul(&subst.pow(e));
                } else {
                    let t = if j < pivot { j } else { j - 1 };
                    term = term.mul(&MultiPoly::var(out_rank, t).pow(e));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

fn superscript(var: usize, e: u32) -> String {
    if e == 1 {
        format!("x{}", var + 1)
    } else {
        format!("x{}^{}", var + 1, e)
    }
}

fn monomial_string(m: &Monomial) -> String {
    let parts: Vec<String> =
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| superscript(j, e))
            .collect();
    parts.join("*")
}

pub(crate) fn term_string(c: &PiScalar, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        return mono.to_string();
    }
    if c.neg().is_one() {
        return format!("-{}", mono);
    }
    let cs = c.to_string();
    if cs.contains(' ') {
        format!("({})*{}", cs, mono)
    } else {
        format!("{}*{}", cs, mono)
    }
}

pub(crate) fn join_signed(terms: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

/// Terms in graded-lex order, highest first.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| term_string(c, &monomial_string(m)));
        write!(f, "{}", join_signed(rendered))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rational};

    fn x(rank: usize, i: usize) -> MultiPoly {
        MultiPoly::var(rank, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = x(2, 0).add(&x(2, 1)).mul(&x(2, 0).sub(&x(2, 1)));
        let expect = x(2, 0).mul(&x(2, 0)).sub(&x(2, 1).mul(&x(2, 1)));
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn additive_inverse_gives_zero() {
        let p = x(3, 0).mul(&x(3, 1)).add(&MultiPoly::one(3));
        assert!(p.add(&p.neg()).is_zero());
    }

    #[test]
    fn rank_mismatch_is_error() {
        let err = x(2, 0).checked_add(&x(3, 0)).unwrap_err();
        assert!(matches!(err, PolyError::RankMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn eval_direct_substitution() {
        let p = x(2, 0).pow(2).sub(&x(2, 1).pow(2));
        let v = p.eval(&[Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((v.re - 3.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn eval_substitutes_pi() {
        let p = MultiPoly::monomial(1, Monomial::var(1, 0), PiScalar::pi());
        let v = p.eval(&[Complex64::new(1.0, 0.0)]);
        assert!((v.re - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn divide_by_linear_examples() {
        // (x1^2 - x2^2) / (x1 + x2) = x1 - x2
        let p = x(2, 0).pow(2).sub(&x(2, 1).pow(2));
        let w = Weight::real(vec![rat(1), rat(1)]);
        let q = p.divide_by_linear(&w).unwrap();
        assert_eq!(q, x(2, 0).sub(&x(2, 1)));

        // x1 not divisible by x2
        let err = x(2, 0)
            .divide_by_linear(&Weight::real(vec![rat(0), rat(1)]))
            .unwrap_err();
        assert_eq!(err, DivideError::NotDivisible);

        // zero is divisible by anything nonzero
        let q0 = MultiPoly::zero(2)
            .divide_by_linear(&Weight::real(vec![rat(3), rat(0)]))
            .unwrap();
        assert!(q0.is_zero());

        // zero weight is an error
        assert_eq!(
            x(2, 0).divide_by_linear(&Weight::zero(2)).unwrap_err(),
            DivideError::ZeroWeight
        );
    }

    #[test]
    fn divide_with_fractional_leading_coefficient() {
        let w = Weight::real(vec![ratio(1, 2), ratio(-1, 3)]);
        let p = MultiPoly::from_weight(&w).mul(&x(2, 0).add(&x(2, 1)));
        let q = p.divide_by_linear(&w).unwrap();
        assert_eq!(q, x(2, 0).add(&x(2, 1)));
    }

    #[test]
    fn restrict_to_kernel_examples() {
        // restriction of w to its own kernel vanishes
        let w = Weight::real(vec![rat(1), rat(-1)]);
        let p = MultiPoly::from_weight(&w);
        assert!(p.restrict_to_kernel(&w).unwrap().is_zero());

        // x1 + x2 on ker(x1 - x2) is 2t
        let q = x(2, 0).add(&x(2, 1)).restrict_to_kernel(&w).unwrap();
        assert_eq!(q, MultiPoly::var(1, 0).scalar_mul(&PiScalar::from_int(2)));

        // constants restrict to themselves
        let c = MultiPoly::constant(2, PiScalar::from_int(7));
        assert_eq!(
            c.restrict_to_kernel(&w).unwrap(),
            MultiPoly::constant(1, PiScalar::from_int(7))
        );
    }

    #[test]
    fn divide_restrict_duality_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let rank = rng.gen_range(1..=3usize);
            let w = loop {
                let coords: Vec<Rational> =
                    (0..rank).map(|_| rat(rng.gen_range(-3..=3i64))).collect();
                let w = Weight::real(coords);
                if !w.is_zero() {
                    break w;
                }
            };
            let mut p = MultiPoly::zero(rank);
            for _ in 0..rng.gen_range(1..=4usize) {
                let m = Monomial(
                    (0..rank)
                        .map(|_| rng.gen_range(0..=2u32))
                        .collect::<Vec<_>>(),
                );
                p = p.add(&MultiPoly::monomial(
                    rank,
                    m,
                    PiScalar::from_int(rng.gen_range(-4..=4i64)),
                ));
            }
            // round trip: (p*w)/w = p
            let pw = p.mul(&MultiPoly::from_weight(&w));
            assert_eq!(pw.divide_by_linear(&w).unwrap(), p);
            // duality: restriction vanishes iff division succeeds
            let restricted_zero = p.restrict_to_kernel(&w).unwrap().is_zero();
            let divisible = p.divide_by_linear(&w).is_ok();
            assert_eq!(restricted_zero, divisible);
        }
    }

    #[test]
    fn eval_commutes_with_ring_ops() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let rank = rng.gen_range(1..=3usize);
            let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut p = MultiPoly::zero(rank);
                for _ in 0..rng.gen_range(1..=4usize) {
                    let m = Monomial((0..rank).map(|_| rng.gen_range(0..=3u32)).collect());
                    p = p.add(&MultiPoly::monomial(
                        rank,
                        m,
                        PiScalar::from_gauss(GaussRat::new(
                            ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
                            rat(rng.gen_range(-2..=2)),
                        )),
                    ));
                }
                p
            };
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let x: Vec<Complex64> = (0..rank)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), 0.0))
                .collect();
            let va = a.eval(&x);
            let vb = b.eval(&x);
            let scale = 1.0 + va.norm().max(vb.norm()).powi(2);
            assert!((a.add(&b).eval(&x) - (va + vb)).norm() / scale < 1e-10);
            assert!((a.mul(&b).eval(&x) - va * vb).norm() / scale < 1e-10);
        }
    }

    #[test]
    fn rendering_order_is_graded_lex() {
        let p = MultiPoly::one(2)
            .add(&x(2, 1).pow(2))
            .add(&x(2, 0))
            .add(&x(2, 0).mul(&x(2, 1)).scalar_mul(&PiScalar::from_int(-3)));
        assert_eq!(p.to_string(), "-3*x1*x2 + x2^2 + x1 + 1");
    }
}
