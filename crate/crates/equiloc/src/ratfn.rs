//! Rational functions whose denominators are factored multisets of linear
//! forms.
//!
//! Every denominator arising from localization is a product of weights, so
//! factors are never expanded; polynomiality detection is the question
//! "do all factors divide out", answered exactly by `MultiPoly::divide_by_linear`.
//!
//! Canonical form after `normalize`: factors are monic (first nonzero
//! coordinate 1) and sorted, no factor divides the numerator, and the
//! denominator scalar is 1 (absorbed into the numerator). Structural equality
//! of normalized values is then function equality.

use crate::poly::{join_signed, DivideError, EvalError, MultiPoly, DEFAULT_POLE_EPS};
use crate::scalar::PiScalar;
use crate::weight::Weight;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: MultiPoly,
    den_factors: Vec<(Weight, u32)>,
    den_scalar: PiScalar,
}

impl RationalFn {
    /// Build num / (den_scalar * prod <w, X>^m) and normalize.
    pub fn new(num: MultiPoly, den_factors: Vec<(Weight, u32)>, den_scalar: PiScalar) -> Self {
        assert!(!den_scalar.is_zero(), "zero denominator scalar");
        let rank = num.rank();
        let mut r = RationalFn {
            num,
            den_factors: Vec::new(),
            den_scalar: PiScalar::one(),
        };
        let mut scalar = den_scalar;
        let mut merged: BTreeMap<Weight, u32> = BTreeMap::new();
        for (w, mult) in den_factors {
            if mult == 0 {
                continue;
            }
            assert!(!w.is_zero(), "zero weight denominator factor");
            assert_eq!(w.rank(), rank, "factor rank mismatch");
            let (monic, lead) = w.monic().expect("nonzero weight has a leading coordinate");
            scalar = scalar.mul(&PiScalar::from_gauss(lead.pow(mult)));
            *merged.entry(monic).or_insert(0) += mult;
        }
        r.den_factors = merged.into_iter().collect();
        r.num = r.num.scalar_mul(&scalar.inv());
        r.normalize();
        r
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        Self::new(num, Vec::new(), PiScalar::one())
    }

    pub fn from_scalar(rank: usize, c: PiScalar) -> Self {
        Self::from_poly(MultiPoly::constant(rank, c))
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_poly(MultiPoly::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(MultiPoly::one(rank))
    }

    /// 1 / (scalar * prod <w, X>^m).
    pub fn reciprocal_product(rank: usize, factors: Vec<(Weight, u32)>, scalar: PiScalar) -> Self {
        Self::new(MultiPoly::one(rank), factors, scalar)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den_factors.clear();
            self.den_scalar = PiScalar::one();
            return;
        }
        let mut kept: Vec<(Weight, u32)> = Vec::new();
        for (w, mut mult) in std::mem::take(&mut self.den_factors) {
            while mult > 0 {
                match self.num.divide_by_linear(&w) {
                    Ok(q) => {
                        self.num = q;
                        mult -= 1;
                    }
                    Err(DivideError::NotDivisible) => break,
                    Err(e) => unreachable!("normalized factor division failed: {}", e),
                }
            }
            if mult > 0 {
                kept.push((w, mult));
            }
        }
        self.den_factors = kept;
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Weight, u32)] {
        &self.den_factors
    }

    pub fn den_scalar(&self) -> &PiScalar {
        &self.den_scalar
    }

    /// Some(p) when the value is the polynomial p (empty denominator).
    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        if self.den_factors.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &RationalFn) -> RationalFn {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in addition");
        // common denominator = factor-wise max multiplicity
        let mut common: BTreeMap<Weight, u32> = BTreeMap::new();
        for (w, m) in self.den_factors.iter().chain(&rhs.den_factors) {
            let e = common.entry(w.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |r: &RationalFn| -> MultiPoly {
            let mut num = r.num.clone();
            for (w, m) in &common {
                let have = r
                    .den_factors
                    .iter()
                    .find(|(wf, _)| wf == w)
                    .map(|(_, mf)| *mf)
                    .unwrap_or(0);
                for _ in have..*m {
                    num = num.mul(&MultiPoly::from_weight(w));
                }
            }
            num
        };
        let num = lift(self).add(&lift(rhs));
        RationalFn::new(num, common.into_iter().collect(), PiScalar::one())
    }

    pub fn sub(&self, rhs: &RationalFn) -> RationalFn {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            den_factors: self.den_factors.clone(),
            den_scalar: self.den_scalar.clone(),
        }
    }

    pub fn mul(&self, rhs: &RationalFn) -> RationalFn {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in product");
        let mut factors = self.den_factors.clone();
        factors.extend(rhs.den_factors.iter().cloned());
        RationalFn::new(self.num.mul(&rhs.num), factors, PiScalar::one())
    }

    pub fn scalar_mul(&self, s: &PiScalar) -> RationalFn {
        if s.is_zero() {
            return RationalFn::zero(self.rank());
        }
        RationalFn {
            num: self.num.scalar_mul(s),
            den_factors: self.den_factors.clone(),
            den_scalar: self.den_scalar.clone(),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64, EvalError> {
        self.eval_with_eps(x, DEFAULT_POLE_EPS)
    }

    pub fn eval_with_eps(&self, x: &[Complex64], eps: f64) -> Result<Complex64, EvalError> {
        let xf: Vec<f64> = x.iter().map(|c| c.re).collect();
        let mut den = self.den_scalar.to_complex();
        for (w, m) in &self.den_factors {
            let v = if x.iter().all(|c| c.im == 0.0) {
                w.pairing_f64(&xf)
            } else {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, xi) in w.coords().iter().zip(x) {
                    acc += c.to_complex() * xi;
                }
                acc
            };
            if v.norm() < eps {
                return Err(EvalError::NearPole {
                    factor: w.to_string(),
                    value: v.norm(),
                });
            }
            den *= v.powu(*m);
        }
        Ok(self.num.eval(x) / den)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_factors.is_empty() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den: Vec<String> = self
            .den_factors
            .iter()
            .map(|(w, m)| {
                let form = linear_form_string(w);
                if *m == 1 {
                    format!("({})", form)
                } else {
                    format!("({})^{}", form, m)
                }
            })
            .collect();
        write!(f, "{} / {}", num, den.join("*"))
    }
}

fn linear_form_string(w: &Weight) -> String {
    let rendered = w.coords().iter().enumerate().filter_map(|(j, c)| {
        if c.is_zero() {
            None
        } else {
            Some(crate::poly::term_string(
                &PiScalar::from_gauss(c.clone()),
                &format!("x{}", j + 1),
            ))
        }
    });
    join_signed(rendered)
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_complex::Complex64;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn reciprocal_cancellation() {
        let w = Weight::real(vec![rat(1)]);
        let a = RationalFn::reciprocal_product(1, vec![(w.clone(), 1)], PiScalar::one());
        let zero = a.add(&a.neg());
        assert!(zero.is_zero());
        assert_eq!(zero, RationalFn::zero(1));
    }

    #[test]
    fn normalize_divides_out_factors() {
        // (x1^2 - x2^2) / (x1 + x2) normalizes to the polynomial x1 - x2
        let x1 = MultiPoly::var(2, 0);
        let x2 = MultiPoly::var(2, 1);
        let num = x1.pow(2).sub(&x2.pow(2));
        let r = RationalFn::new(
            num,
            vec![(Weight::real(vec![rat(1), rat(1)]), 1)],
            PiScalar::one(),
        );
        assert_eq!(r.as_polynomial().unwrap(), &x1.sub(&x2));
    }

    #[test]
    fn normalize_is_idempotent() {
        let x1 = MultiPoly::var(2, 0);
        let r = RationalFn::new(
            x1.clone(),
            vec![
                (Weight::real(vec![rat(1), rat(-1)]), 2),
                (Weight::real(vec![rat(0), rat(3)]), 1),
            ],
            PiScalar::from_int(5),
        );
        let renorm = RationalFn::new(
            r.num().clone(),
            r.den_factors().to_vec(),
            r.den_scalar().clone(),
        );
        assert_eq!(r, renorm);
    }

    #[test]
    fn scalars_absorbed_and_factors_monic() {
        // 1 / (2 * <2x1>) == (1/4) / (x1)
        let r = RationalFn::reciprocal_product(
            1,
            vec![(Weight::real(vec![rat(2)]), 1)],
            PiScalar::from_int(2),
        );
        let v = r.eval(&[re(1.0)]).unwrap();
        assert!((v.re - 0.25).abs() < 1e-15);
        assert_eq!(r.den_factors().len(), 1);
        assert_eq!(r.den_factors()[0].0, Weight::real(vec![rat(1)]));
        assert!(r.den_scalar().is_one());
    }

    #[test]
    fn near_pole_detection() {
        let r = RationalFn::reciprocal_product(
            1,
            vec![(Weight::real(vec![rat(1)]), 1)],
            PiScalar::one(),
        );
        assert!(matches!(
            r.eval(&[re(0.0)]),
            Err(EvalError::NearPole { .. })
        ));
        assert!(r.eval(&[re(0.5)]).is_ok());
    }

    #[test]
    fn arithmetic_matches_pointwise() {
        let w1 = Weight::real(vec![rat(1), rat(-1)]);
        let w2 = Weight::real(vec![rat(1), rat(1)]);
        let a = RationalFn::reciprocal_product(2, vec![(w1, 1)], PiScalar::one());
        let b = RationalFn::new(MultiPoly::var(2, 0), vec![(w2, 1)], PiScalar::from_int(2));
        let x = [re(0.3), re(0.7)];
        let va = a.eval(&x).unwrap();
        let vb = b.eval(&x).unwrap();
        let sum = a.add(&b).eval(&x).unwrap();
        let prod = a.mul(&b).eval(&x).unwrap();
        assert!((sum - (va + vb)).norm() < 1e-12);
        assert!((prod - va * vb).norm() < 1e-12);
    }

    #[test]
    fn imaginary_factor_normalization() {
        // 1/<i*(1,-1), X> = -i / (x1 - x2)
        let alpha = Weight::imaginary(vec![rat(1), rat(-1)]);
        let r = RationalFn::reciprocal_product(2, vec![(alpha, 1)], PiScalar::one());
        let v = r.eval(&[re(2.0), re(1.0)]).unwrap();
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(r.den_factors()[0].0.is_real_type());
    }

    #[test]
    fn rendering() {
        let r = RationalFn::new(
            MultiPoly::one(2),
            vec![(Weight::real(vec![rat(1), rat(-1)]), 1)],
            PiScalar::one(),
        );
        assert_eq!(r.to_string(), "1 / (x1 - x2)");
        let sq = r.mul(&r);
        assert_eq!(sq.to_string(), "1 / (x1 - x2)^2");
    }
}
