//! Finite sums of exponentials with rational-function coefficients.
//!
//! `ExpRationalSum` is the closed form shared by localization sums,
//! characters and orbit Fourier transforms. Exponents are exact weights,
//! purely imaginary (or zero) so that numeric evaluation at real X produces
//! unit-modulus phases. Singular limits are taken by exact Laurent expansion
//! along a rational ray, never numerically.

use crate::poly::EvalError;
use crate::ratfn::RationalFn;
use crate::scalar::{GaussRat, PiScalar, Rational};
use crate::weight::Weight;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Largest supported Laurent expansion order; the deepest singular limit in
/// scope (Weyl dimension limits through rank 3) needs less.
pub const MAX_SERIES_ORDER: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    /// Some denominator factor vanishes identically along the direction.
    NonRegularDirection {
        factor: String,
    },
    OrderTooLarge {
        requested: u32,
    },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonRegularDirection { factor } => {
                write!(f, "direction not regular: <{}, v> = 0", factor)
            }
            SeriesError::OrderTooLarge { requested } => {
                write!(
                    f,
                    "expansion order {} exceeds cap {}",
                    requested, MAX_SERIES_ORDER
                )
            }
        }
    }
}

impl std::error::Error for SeriesError {}

// =============================================================================
// Laurent series
// =============================================================================

/// Exact Laurent polynomial in the ray parameter, valid through `max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, PiScalar>,
    max_order: i64,
}

impl LaurentSeries {
    pub fn new(coeffs: BTreeMap<i64, PiScalar>, max_order: i64) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LaurentSeries { coeffs, max_order }
    }

    pub fn zero(max_order: i64) -> Self {
        LaurentSeries {
            coeffs: BTreeMap::new(),
            max_order,
        }
    }

    pub fn coeff(&self, pow: i64) -> PiScalar {
        self.coeffs
            .get(&pow)
            .cloned()
            .unwrap_or_else(PiScalar::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, PiScalar> {
        &self.coeffs
    }

    pub fn max_order(&self) -> i64 {
        self.max_order
    }

    /// Lowest power with nonzero coefficient.
    pub fn min_pow(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every negative power vanishes, so the constant coefficient
    /// is the limiting value along the ray.
    pub fn has_finite_limit(&self) -> bool {
        self.min_pow().map_or(true, |m| m >= 0)
    }

    pub fn add(&self, rhs: &LaurentSeries) -> LaurentSeries {
        let max_order = self.max_order.min(rhs.max_order);
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|p, _| *p <= max_order);
        for (p, c) in &rhs.coeffs {
            if *p > max_order {
                continue;
            }
            let sum = match coeffs.remove(p) {
                Some(old) => &old + c,
                None => c.clone(),
            };
            if !sum.is_zero() {
                coeffs.insert(*p, sum);
            }
        }
        LaurentSeries { coeffs, max_order }
    }

    pub fn mul(&self, rhs: &LaurentSeries) -> LaurentSeries {
        // truncation: a term of self at power p only sees rhs through
        // max_order - p, and symmetrically
        let self_min = self.min_pow().unwrap_or(0);
        let rhs_min = rhs.min_pow().unwrap_or(0);
        let max_order = (self.max_order + rhs_min).min(rhs.max_order + self_min);
        let mut coeffs: BTreeMap<i64, PiScalar> = BTreeMap::new();
        for (pa, ca) in &self.coeffs {
            for (pb, cb) in &rhs.coeffs {
                let p = pa + pb;
                if p > max_order {
                    continue;
                }
                let prod = ca.mul(cb);
                let sum = match coeffs.remove(&p) {
                    Some(old) => &old + &prod,
                    None => prod,
                };
                if !sum.is_zero() {
                    coeffs.insert(p, sum);
                }
            }
        }
        LaurentSeries { coeffs, max_order }
    }

    /// Exact series division; panics on a zero divisor.
    pub fn div(&self, rhs: &LaurentSeries) -> LaurentSeries {
        let rhs_min = rhs.min_pow().expect("division by zero series");
        let lead_inv = rhs.coeff(rhs_min).inv();
        let max_order = self.max_order.min(rhs.max_order) - rhs_min;
        if self.is_zero() {
            return LaurentSeries::zero(max_order);
        }
        let q_min = self.min_pow().unwrap() - rhs_min;
        let mut q: BTreeMap<i64, PiScalar> = BTreeMap::new();
        for p in q_min..=max_order {
            // residual = self_{p + rhs_min} - sum_{j < p} q_j * rhs_{p + rhs_min - j}
            let mut acc = self.coeff(p + rhs_min);
            for (j, qj) in &q {
                let r = rhs.coeff(p + rhs_min - j);
                if !r.is_zero() {
                    acc = &acc - &qj.mul(&r);
                }
            }
            let c = acc.mul(&lead_inv);
            if !c.is_zero() {
                q.insert(p, c);
            }
        }
        LaurentSeries {
            coeffs: q,
            max_order,
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| match p {
                0 => format!("({})", c),
                1 => format!("({})*e", c),
                _ => format!("({})*e^{}", c, p),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// =============================================================================
// ExpRationalSum
// =============================================================================

#[derive(Clone, PartialEq, Eq)]
pub struct ExpRationalSum {
    rank: usize,
    /// Sorted by exponent, exponents pairwise distinct, no zero coefficient.
    terms: Vec<(Weight, RationalFn)>,
}

impl ExpRationalSum {
    pub fn new(rank: usize, terms: Vec<(Weight, RationalFn)>) -> Self {
        let mut merged: BTreeMap<Weight, RationalFn> = BTreeMap::new();
        for (lambda, coeff) in terms {
            assert_eq!(lambda.rank(), rank, "exponent rank mismatch");
            assert_eq!(coeff.rank(), rank, "coefficient rank mismatch");
            assert!(
                lambda.is_root_type(),
                "exponent weights must be purely imaginary or zero"
            );
            let entry = match merged.remove(&lambda) {
                Some(old) => old.add(&coeff),
                None => coeff,
            };
            if !entry.is_zero() {
                merged.insert(lambda, entry);
            }
        }
        ExpRationalSum {
            rank,
            terms: merged.into_iter().collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        ExpRationalSum {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::new(rank, vec![(Weight::zero(rank), RationalFn::one(rank))])
    }

    /// e^{<lambda, X>} with unit coefficient.
    pub fn exponential(lambda: Weight) -> Self {
        let rank = lambda.rank();
        Self::new(rank, vec![(lambda, RationalFn::one(rank))])
    }

    pub fn from_rational_fn(coeff: RationalFn) -> Self {
        let rank = coeff.rank();
        Self::new(rank, vec![(Weight::zero(rank), coeff)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Weight, RationalFn)] {
        &self.terms
    }

    /// True when every exponent is zero, i.e. the sum is a plain rational
    /// function.
    pub fn has_zero_exponents(&self) -> bool {
        self.terms.iter().all(|(l, _)| l.is_zero())
    }

    pub fn add(&self, rhs: &ExpRationalSum) -> ExpRationalSum {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in sum");
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Self::new(self.rank, terms)
    }

    pub fn sub(&self, rhs: &ExpRationalSum) -> ExpRationalSum {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ExpRationalSum {
        ExpRationalSum {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.clone(), c.neg()))
                .collect(),
        }
    }

    /// Product: exponents add, coefficients multiply.
    pub fn mul(&self, rhs: &ExpRationalSum) -> ExpRationalSum {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in product");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                terms.push((la.add(lb), ca.mul(cb)));
            }
        }
        Self::new(self.rank, terms)
    }

    pub fn scalar_mul(&self, s: &PiScalar) -> ExpRationalSum {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        ExpRationalSum {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.clone(), c.scalar_mul(s)))
                .collect(),
        }
    }

    pub fn mul_rational_fn(&self, r: &RationalFn) -> ExpRationalSum {
        let terms = self
            .terms
            .iter()
            .map(|(l, c)| (l.clone(), c.mul(r)))
            .collect();
        Self::new(self.rank, terms)
    }

    /// Numeric value at real X.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64, EvalError> {
        assert_eq!(x.len(), self.rank, "evaluation point has wrong rank");
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (lambda, coeff) in &self.terms {
            let phase = lambda.pairing_f64(x);
            acc += phase.exp() * coeff.eval(&xc)?;
        }
        Ok(acc)
    }

    /// Exact Laurent expansion along X = eps * v up to the given order.
    pub fn series_limit(&self, v: &[Rational], order: u32) -> Result<LaurentSeries, SeriesError> {
        if order > MAX_SERIES_ORDER {
            return Err(SeriesError::OrderTooLarge { requested: order });
        }
        assert_eq!(v.len(), self.rank, "direction has wrong rank");
        let max_order = order as i64;
        let mut total = LaurentSeries::zero(max_order);
        for (lambda, coeff) in &self.terms {
            // denominator along the ray: eps^M * D
            let mut den = coeff.den_scalar().clone();
            let mut pole_order: i64 = 0;
            for (w, m) in coeff.den_factors() {
                let p = w.pairing_rational(v);
                if p.is_zero() {
                    return Err(SeriesError::NonRegularDirection {
                        factor: w.to_string(),
                    });
                }
                den = den.mul(&PiScalar::from_gauss(p.pow(*m)));
                pole_order += *m as i64;
            }
            let den_inv = den.inv();
            // numerator along the ray: polynomial in eps
            let mut num_coeffs: BTreeMap<i64, PiScalar> = BTreeMap::new();
            for (mono, c) in coeff.num().terms() {
                let mut g = GaussRat::one();
                for (j, &e) in mono.0.iter().enumerate() {
                    g = &g * &GaussRat::from_rational(v[j].clone()).pow(e);
                }
                let contrib = c.mul(&PiScalar::from_gauss(g));
                let p = mono.total_degree() as i64;
                let sum = match num_coeffs.remove(&p) {
                    Some(old) => &old + &contrib,
                    None => contrib,
                };
                if !sum.is_zero() {
                    num_coeffs.insert(p, sum);
                }
            }
            // exponential factor: exp(<lambda, v> * eps)
            let c = lambda.pairing_rational(v);
            let needed = (max_order + pole_order).max(0) as u32;
            let mut exp_coeffs: BTreeMap<i64, PiScalar> = BTreeMap::new();
            let mut power = GaussRat::one();
            let mut factorial = Rational::from_integer(1.into());
            for k in 0..=needed {
                if k > 0 {
                    power = &power * &c;
                    factorial *= Rational::from_integer(k.into());
                }
                let coeff_k = GaussRat::new(&power.re / &factorial, &power.im / &factorial);
                if !coeff_k.is_zero() {
                    exp_coeffs.insert(k as i64, PiScalar::from_gauss(coeff_k));
                }
            }
            let exp_series = LaurentSeries::new(exp_coeffs, max_order + pole_order);
            let num_series = LaurentSeries::new(num_coeffs, max_order + pole_order);
            let mut term = exp_series.mul(&num_series);
            // shift by the pole order and divide by the constant
            term = LaurentSeries {
                coeffs: term
                    .coeffs
                    .into_iter()
                    .map(|(p, c)| (p - pole_order, c.mul(&den_inv)))
                    .collect(),
                max_order,
            };
            total = total.add(&term);
        }
        Ok(total)
    }
}

/// Terms in a fixed exponent order (lexicographic on coordinates).
impl fmt::Display for ExpRationalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| format!("e^{{{}}} * ({})", l, c))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExpRationalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
