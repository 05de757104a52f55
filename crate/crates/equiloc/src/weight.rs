//! Exact linear forms on the Cartan algebra.
//!
//! A `Weight` is a dense vector of Gaussian rational coordinates of length
//! equal to the ambient rank, paired with points X by <w, X> = sum w_j x_j.
//! Roots and other lattice weights carry purely imaginary coordinates;
//! moment-map values carry purely real ones.

use crate::scalar::{GaussRat, Rational};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<GaussRat>,
}

impl Weight {
    pub fn new(coords: Vec<GaussRat>) -> Self {
        Weight { coords }
    }

    /// A real-type weight from rational coordinates.
    pub fn real(coords: Vec<Rational>) -> Self {
        Weight {
            coords: coords.into_iter().map(GaussRat::from_rational).collect(),
        }
    }

    /// A root-type weight i*(a_1, ..., a_l) from the real parts a_j.
    pub fn imaginary(parts: Vec<Rational>) -> Self {
        Weight {
            coords: parts
                .into_iter()
                .map(|a| GaussRat::new(Rational::zero(), a))
                .collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![GaussRat::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[GaussRat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// All coordinates purely real (zero counts).
    pub fn is_real_type(&self) -> bool {
        self.coords.iter().all(|c| c.is_real())
    }

    /// All coordinates purely imaginary (zero counts).
    pub fn is_root_type(&self) -> bool {
        self.coords.iter().all(|c| c.is_imaginary())
    }

    pub fn real_parts(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| c.re.clone()).collect()
    }

    pub fn imag_parts(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| c.im.clone()).collect()
    }

    pub fn add(&self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in weight addition");
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Weight) -> Weight {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &GaussRat) -> Weight {
        Weight {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn scale_rational(&self, s: &Rational) -> Weight {
        self.scale(&GaussRat::from_rational(s.clone()))
    }

    /// Multiply every coordinate by -i; turns a root-type weight into the
    /// real-type weight with the same underlying vector.
    pub fn div_i(&self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|c| c.div_i()).collect(),
        }
    }

    pub fn mul_i(&self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|c| c.mul_i()).collect(),
        }
    }

    /// <w, X> at a floating-point ambient point.
    pub fn pairing_f64(&self, x: &[f64]) -> Complex64 {
        assert_eq!(self.rank(), x.len(), "rank mismatch in pairing");
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, xi) in self.coords.iter().zip(x) {
            acc += c.to_complex() * *xi;
        }
        acc
    }

    /// Exact <w, v> at a rational ambient point.
    pub fn pairing_rational(&self, v: &[Rational]) -> GaussRat {
        assert_eq!(self.rank(), v.len(), "rank mismatch in pairing");
        let mut acc = GaussRat::zero();
        for (c, vi) in self.coords.iter().zip(v) {
            acc = &acc + &GaussRat::new(&c.re * vi, &c.im * vi);
        }
        acc
    }

    /// Index and value of the first nonzero coordinate.
    pub fn leading(&self) -> Option<(usize, &GaussRat)> {
        self.coords.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    /// Scale so the first nonzero coordinate is 1; returns the monic weight
    /// together with the factor c such that self = c * monic.
    pub fn monic(&self) -> Option<(Weight, GaussRat)> {
        let (_, lead) = self.leading()?;
        let lead = lead.clone();
        Some((self.scale(&lead.inv()), lead))
    }

    pub fn to_f64_parts(&self) -> Vec<(f64, f64)> {
        self.coords
            .iter()
            .map(|c| {
                (
                    c.re.to_f64().unwrap_or(f64::NAN),
                    c.im.to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect()
    }
}

/// Real inner product of the imaginary parts; the ambient bilinear form on
/// root-type weights.
pub fn dot_imag(a: &Weight, b: &Weight) -> Rational {
    assert_eq!(a.rank(), b.rank(), "rank mismatch in inner product");
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| &x.im * &y.im)
        .sum()
}

/// Real inner product of the real parts.
pub fn dot_real(a: &Weight, b: &Weight) -> Rational {
    assert_eq!(a.rank(), b.rank(), "rank mismatch in inner product");
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| &x.re * &y.re)
        .sum()
}

/// True when a = c*b for some scalar c (both nonzero).
pub fn proportional(a: &Weight, b: &Weight) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let (la, ca) = a.monic().unwrap();
    let (lb, _) = b.monic().unwrap();
    let _ = ca;
    la == lb
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn type_predicates() {
        let root = Weight::imaginary(vec![rat(1), rat(-1)]);
        assert!(root.is_root_type());
        assert!(!root.is_real_type());
        let mu = Weight::real(vec![rat(1), rat(0)]);
        assert!(mu.is_real_type());
        assert!(Weight::zero(3).is_real_type() && Weight::zero(3).is_root_type());
    }

    #[test]
    fn pairing_is_linear() {
        let w = Weight::imaginary(vec![rat(1), rat(-1)]);
        let p = w.pairing_f64(&[0.25, -0.75]);
        assert!((p.im - 1.0).abs() < 1e-15 && p.re.abs() < 1e-15);
        let exact = w.pairing_rational(&[ratio(1, 4), ratio(-3, 4)]);
        assert_eq!(exact, GaussRat::new(rat(0), rat(1)));
    }

    #[test]
    fn div_i_realifies_roots() {
        let root = Weight::imaginary(vec![rat(2), rat(0)]);
        let real = root.div_i();
        assert!(real.is_real_type());
        assert_eq!(real.real_parts(), vec![rat(2), rat(0)]);
        assert_eq!(real.mul_i(), root);
    }

    #[test]
    fn monic_normalization() {
        let w = Weight::imaginary(vec![rat(0), rat(2), rat(-2)]);
        let (m, c) = w.monic().unwrap();
        assert_eq!(c, GaussRat::new(rat(0), rat(2)));
        assert_eq!(m.coords()[1], GaussRat::one());
        assert_eq!(m.scale(&c), w);
    }

    #[test]
    fn proportionality() {
        let a = Weight::real(vec![rat(1), rat(2)]);
        let b = Weight::real(vec![rat(-2), rat(-4)]);
        let c = Weight::real(vec![rat(1), rat(3)]);
        assert!(proportional(&a, &b));
        assert!(!proportional(&a, &c));
    }

    #[test]
    fn rendering() {
        let w = Weight::imaginary(vec![rat(1), rat(-1)]);
        assert_eq!(w.to_string(), "(i, -i)");
        assert_eq!(
            Weight::real(vec![ratio(3, 2), rat(0)]).to_string(),
            "(3/2, 0)"
        );
    }
}
