//! Exact scalars: Gaussian rationals and pi-graded scalars.
//!
//! A `GaussRat` is an element of Q(i) stored as a pair of arbitrary-precision
//! rationals. A `PiScalar` is q * pi^m with q in Q(i); addition is only
//! defined between equal pi exponents, which is all the formulas in this
//! crate ever need.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().ok()?;
            let d: BigInt = den.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// =============================================================================
// GaussRat
// =============================================================================

/// A Gaussian rational re + im*i with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussRat {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiply by the imaginary unit.
    pub fn mul_i(&self) -> Self {
        GaussRat {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    /// Divide by the imaginary unit (multiply by -i).
    pub fn div_i(&self) -> Self {
        GaussRat {
            re: self.im.clone(),
            im: -self.re.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Gaussian rational");
        let norm = &self.re * &self.re + &self.im * &self.im;
        GaussRat {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical rendering: "a/b", "c/d i" or "a/b + c/d i" with "i" for a unit
/// imaginary coefficient.
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let imag_part = |im: &Rational| -> String {
            if im.abs().is_one() {
                "i".to_string()
            } else {
                format!("{} i", fmt_rational(&im.abs()))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{}{}", sign, imag_part(&self.im))
        } else {
            let op = if self.im.is_negative() { "-" } else { "+" };
            write!(
                f,
                "{} {} {}",
                fmt_rational(&self.re),
                op,
                imag_part(&self.im)
            )
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// =============================================================================
// PiScalar
// =============================================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    /// Attempted to add scalars carrying different powers of pi.
    PiExpMismatch { left: i32, right: i32 },
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::PiExpMismatch { left, right } => {
                write!(f, "cannot add pi^{} term to pi^{} term", left, right)
            }
        }
    }
}

impl std::error::Error for ScalarError {}

/// An exact scalar q * pi^m, q a Gaussian rational.
///
/// The zero scalar always carries pi_exp = 0 so that equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiScalar {
    coeff: GaussRat,
    pi_exp: i32,
}

impl PiScalar {
    pub fn new(coeff: GaussRat, pi_exp: i32) -> Self {
        if coeff.is_zero() {
            PiScalar { coeff, pi_exp: 0 }
        } else {
            PiScalar { coeff, pi_exp }
        }
    }

    pub fn from_gauss(coeff: GaussRat) -> Self {
        Self::new(coeff, 0)
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(GaussRat::from_rational(r), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(GaussRat::from_int(n), 0)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRat::i())
    }

    /// pi itself.
    pub fn pi() -> Self {
        Self::new(GaussRat::one(), 1)
    }

    pub fn coeff(&self) -> &GaussRat {
        &self.coeff
    }

    pub fn pi_exp(&self) -> i32 {
        self.pi_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.pi_exp == 0
    }

    pub fn checked_add(&self, rhs: &PiScalar) -> Result<PiScalar, ScalarError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_exp != rhs.pi_exp {
            return Err(ScalarError::PiExpMismatch {
                left: self.pi_exp,
                right: rhs.pi_exp,
            });
        }
        Ok(PiScalar::new(&self.coeff + &rhs.coeff, self.pi_exp))
    }

    pub fn mul(&self, rhs: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &rhs.coeff, self.pi_exp + rhs.pi_exp)
    }

    pub fn neg(&self) -> PiScalar {
        PiScalar::new(-&self.coeff, self.pi_exp)
    }

    pub fn inv(&self) -> PiScalar {
        assert!(!self.is_zero(), "division by zero scalar");
        PiScalar::new(self.coeff.inv(), -self.pi_exp)
    }

    pub fn pow(&self, e: u32) -> PiScalar {
        PiScalar::new(self.coeff.pow(e), self.pi_exp * e as i32)
    }

    /// Numeric value with pi substituted by its double.
    pub fn to_complex(&self) -> Complex64 {
        self.coeff.to_complex() * std::f64::consts::PI.powi(self.pi_exp)
    }
}

impl Add for &PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: &PiScalar) -> PiScalar {
        self.checked_add(rhs)
            .expect("pi-exponent mismatch in scalar addition")
    }
}

impl Sub for &PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: &PiScalar) -> PiScalar {
        self + &rhs.neg()
    }
}

impl Mul for &PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        PiScalar::mul(self, rhs)
    }
}

impl Neg for &PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar::neg(self)
    }
}

/// Canonical rendering: `c`, `c*pi` or `c*pi^m`, with the
/// coefficient parenthesized when it has both real and imaginary parts.
impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_exp == 0 || self.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        let pi_part = if self.pi_exp == 1 {
            "pi".to_string()
        } else {
            format!("pi^{}", self.pi_exp)
        };
        if self.coeff.is_one() {
            write!(f, "{}", pi_part)
        } else if (-&self.coeff).is_one() {
            write!(f, "-{}", pi_part)
        } else if self.coeff.is_real() || self.coeff == GaussRat::i() {
            write!(f, "{}*{}", self.coeff, pi_part)
        } else if self.coeff == -&GaussRat::i() {
            write!(f, "-i*{}", pi_part)
        } else {
            write!(f, "({})*{}", self.coeff, pi_part)
        }
    }
}

impl fmt::Debug for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_arithmetic() {
        let a = GaussRat::new(ratio(1, 2), ratio(3, 4));
        let b = GaussRat::i();
        assert_eq!(&a * &b, GaussRat::new(ratio(-3, 4), ratio(1, 2)));
        assert_eq!(&a + &(-&a), GaussRat::zero());
        assert!((&a * &a.inv()).is_one());
        assert_eq!(a.mul_i().div_i(), a);
    }

    #[test]
    fn gauss_rendering() {
        assert_eq!(
            GaussRat::new(ratio(1, 2), ratio(3, 4)).to_string(),
            "1/2 + 3/4 i"
        );
        assert_eq!(
            GaussRat::new(ratio(1, 2), ratio(-3, 4)).to_string(),
            "1/2 - 3/4 i"
        );
        assert_eq!(GaussRat::i().to_string(), "i");
        assert_eq!((-&GaussRat::i()).to_string(), "-i");
        assert_eq!(GaussRat::from_int(-2).to_string(), "-2");
        assert_eq!(GaussRat::zero().to_string(), "0");
        assert_eq!(GaussRat::new(rat(0), ratio(3, 4)).to_string(), "3/4 i");
    }

    #[test]
    fn pi_scalar_zero_normalizes_exponent() {
        let z = PiScalar::new(GaussRat::zero(), 5);
        assert_eq!(z, PiScalar::zero());
        assert_eq!(z.pi_exp(), 0);
    }

    #[test]
    fn pi_scalar_addition_requires_equal_exponent() {
        let a = PiScalar::new(GaussRat::from_int(2), 1);
        let b = PiScalar::new(GaussRat::from_int(3), 2);
        assert!(matches!(
            a.checked_add(&b),
            Err(ScalarError::PiExpMismatch { left: 1, right: 2 })
        ));
        // zero is addable to anything
        assert_eq!(a.checked_add(&PiScalar::zero()).unwrap(), a);
    }

    #[test]
    #[should_panic(expected = "pi-exponent mismatch")]
    fn pi_scalar_operator_add_panics_on_mismatch() {
        let a = PiScalar::new(GaussRat::from_int(2), 1);
        let b = PiScalar::new(GaussRat::from_int(3), 2);
        let _ = &a + &b;
    }

    #[test]
    fn pi_scalar_mul_and_inv() {
        let a = PiScalar::new(GaussRat::from_int(-2), 1);
        assert_eq!(a.mul(&a), PiScalar::new(GaussRat::from_int(4), 2));
        assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn pi_scalar_rendering() {
        assert_eq!(PiScalar::new(GaussRat::from_int(4), 1).to_string(), "4*pi");
        assert_eq!(PiScalar::from_int(-2).to_string(), "-2");
        assert_eq!(
            PiScalar::new(GaussRat::from_int(-2), 2).to_string(),
            "-2*pi^2"
        );
        assert_eq!(PiScalar::pi().to_string(), "pi");
        assert_eq!(PiScalar::new(GaussRat::one(), -1).to_string(), "pi^-1");
        assert_eq!(
            PiScalar::new(GaussRat::new(rat(1), rat(1)), 1).to_string(),
            "(1 + i)*pi"
        );
        assert_eq!(PiScalar::new(GaussRat::i(), 1).to_string(), "i*pi");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/2"), Some(ratio(3, 2)));
        assert_eq!(parse_rational("-7"), Some(rat(-7)));
        assert_eq!(parse_rational(" 4 / 6 "), Some(ratio(2, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn to_complex_substitutes_pi() {
        let v = PiScalar::new(GaussRat::from_int(4), 1).to_complex();
        assert!((v.re - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(v.im, 0.0);
    }
}
