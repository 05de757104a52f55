//! Fixed-point localization sums.
//!
//! A model is the data the fixed-point formulas consume: per isolated fixed
//! point, the moment value mu(p), the n/2 isotropy weights, and an
//! orientation sign. The square root of the determinant of the linearized
//! action at p is represented exactly as
//!
//!   det^{1/2}(L(X, p)) = sign_p * prod_j <w_j, X> / i,
//!
//! a product of real linear forms since the isotropy weights are purely
//! imaginary. Both localization sums divide by this product, so their terms
//! are born with factored denominators and polynomiality of a sum is decided
//! by exact division.

use crate::expsum::ExpRationalSum;
use crate::poly::MultiPoly;
use crate::ratfn::RationalFn;
use crate::scalar::{parse_rational, GaussRat, PiScalar, Rational};
use crate::weight::Weight;
use num_traits::Zero;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    OddDimension {
        dim: usize,
    },
    WrongWeightCount {
        id: String,
        expected: usize,
        found: usize,
    },
    ZeroIsotropyWeight {
        id: String,
    },
    RankMismatch {
        id: String,
    },
    BadSign {
        id: String,
    },
    DuplicateId {
        id: String,
    },
    UnknownPoint {
        id: String,
    },
    MissingRestriction {
        id: String,
    },
    BadRational {
        text: String,
    },
    NotRealMoment {
        id: String,
    },
    NotImaginaryWeight {
        id: String,
    },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::OddDimension { dim } => write!(f, "manifold dimension {} is odd", dim),
            ModelError::WrongWeightCount {
                id,
                expected,
                found,
            } => write!(
                f,
                "point '{}' has {} isotropy weights, expected dim/2 = {}",
                id, found, expected
            ),
            ModelError::ZeroIsotropyWeight { id } => {
                write!(f, "point '{}' has a zero isotropy weight", id)
            }
            ModelError::RankMismatch { id } => {
                write!(f, "point '{}' has data of the wrong rank", id)
            }
            ModelError::BadSign { id } => write!(f, "point '{}' has sign other than +-1", id),
            ModelError::DuplicateId { id } => write!(f, "duplicate point id '{}'", id),
            ModelError::UnknownPoint { id } => write!(f, "unknown point id '{}'", id),
            ModelError::MissingRestriction { id } => {
                write!(f, "custom integrand misses point '{}'", id)
            }
            ModelError::BadRational { text } => write!(f, "cannot parse rational '{}'", text),
            ModelError::NotRealMoment { id } => {
                write!(f, "point '{}' has a non-real moment value", id)
            }
            ModelError::NotImaginaryWeight { id } => {
                write!(
                    f,
                    "point '{}' has an isotropy weight that is not purely imaginary",
                    id
                )
            }
        }
    }
}

impl std::error::Error for ModelError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub id: String,
    /// Moment value mu(p), a real-type weight.
    pub mu: Weight,
    /// The n/2 nonzero isotropy weights, root-type.
    pub weights: Vec<Weight>,
    /// Orientation sign of det^{1/2} relative to the weight product.
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointModel {
    dim: usize,
    rank: usize,
    points: Vec<FixedPoint>,
}

impl FixedPointModel {
    pub fn new(dim: usize, rank: usize, points: Vec<FixedPoint>) -> Result<Self, ModelError> {
        if dim % 2 != 0 {
            return Err(ModelError::OddDimension { dim });
        }
        let mut ids = std::collections::BTreeSet::new();
        for p in &points {
            if !ids.insert(p.id.clone()) {
                return Err(ModelError::DuplicateId { id: p.id.clone() });
            }
            if p.sign != 1 && p.sign != -1 {
                return Err(ModelError::BadSign { id: p.id.clone() });
            }
            if p.mu.rank() != rank || p.weights.iter().any(|w| w.rank() != rank) {
                return Err(ModelError::RankMismatch { id: p.id.clone() });
            }
            if !p.mu.is_real_type() {
                return Err(ModelError::NotRealMoment { id: p.id.clone() });
            }
            if p.weights.iter().any(|w| !w.is_root_type()) {
                return Err(ModelError::NotImaginaryWeight { id: p.id.clone() });
            }
            if p.weights.len() != dim / 2 {
                return Err(ModelError::WrongWeightCount {
                    id: p.id.clone(),
                    expected: dim / 2,
                    found: p.weights.len(),
                });
            }
            if p.weights.iter().any(|w| w.is_zero()) {
                return Err(ModelError::ZeroIsotropyWeight { id: p.id.clone() });
            }
        }
        Ok(FixedPointModel { dim, rank, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[FixedPoint] {
        &self.points
    }

    pub fn point(&self, id: &str) -> Result<&FixedPoint, ModelError> {
        self.points
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| ModelError::UnknownPoint { id: id.to_string() })
    }

    /// Parse the JSON wire format; unknown fields are rejected.
    pub fn from_json_str(text: &str) -> Result<Self, String> {
        let raw: RawModel = serde_json::from_str(text).map_err(|e| e.to_string())?;
        raw.build().map_err(|e| e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatLike {
    Int(i64),
    Str(String),
}

impl RatLike {
    fn parse(&self) -> Result<Rational, ModelError> {
        match self {
            RatLike::Int(n) => Ok(crate::scalar::rat(*n)),
            RatLike::Str(s) => parse_rational(s).ok_or(ModelError::BadRational { text: s.clone() }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    dim: usize,
    rank: usize,
    points: Vec<RawPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    id: String,
    mu: Vec<RatLike>,
    weights: Vec<Vec<RatLike>>,
    sign: i8,
}

impl RawModel {
    fn build(&self) -> Result<FixedPointModel, ModelError> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let mu = Weight::real(p.mu.iter().map(|r| r.parse()).collect::<Result<_, _>>()?);
                // weight vectors are given real and tagged imaginary
                let weights = p
                    .weights
                    .iter()
                    .map(|w| {
                        Ok(Weight::imaginary(
                            w.iter().map(|r| r.parse()).collect::<Result<_, _>>()?,
                        ))
                    })
                    .collect::<Result<Vec<_>, ModelError>>()?;
                Ok(FixedPoint {
                    id: p.id.clone(),
                    mu,
                    weights,
                    sign: p.sign,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        FixedPointModel::new(self.dim, self.rank, points)
    }
}

// =============================================================================
// Integrands
// =============================================================================

#[derive(Clone, Debug)]
pub enum IntegrandSpec {
    /// The k-th power of the equivariant symplectic form; its degree-zero
    /// part at a fixed point is mu(p)(X)^k.
    SymPower(u32),
    /// exp(i * equivariant symplectic form); restriction e^{i mu(p)(X)}.
    ExpSym,
    /// Explicit per-point restrictions.
    Custom(BTreeMap<String, ExpRationalSum>),
}

// =============================================================================
// Localization
// =============================================================================

/// 1 / det^{1/2}(L(X, p)) as a rational function with factored denominator.
fn euler_reciprocal(rank: usize, p: &FixedPoint) -> RationalFn {
    let factors: Vec<(Weight, u32)> = p.weights.iter().map(|w| (w.div_i(), 1)).collect();
    RationalFn::reciprocal_product(rank, factors, PiScalar::from_int(p.sign as i64))
}

/// det^{1/2}(L(X, p)) itself: the signed product of the real forms <w_j, X>/i.
pub fn euler_restriction(m: &FixedPointModel, id: &str) -> Result<RationalFn, ModelError> {
    let p = m.point(id)?;
    let mut poly = MultiPoly::constant(m.rank, PiScalar::from_int(p.sign as i64));
    for w in &p.weights {
        poly = poly.mul(&MultiPoly::from_weight(&w.div_i()));
    }
    Ok(RationalFn::from_poly(poly))
}

fn restriction_at(f: &IntegrandSpec, p: &FixedPoint) -> Result<ExpRationalSum, ModelError> {
    match f {
        IntegrandSpec::SymPower(k) => {
            let mu_form = MultiPoly::from_weight(&p.mu);
            Ok(ExpRationalSum::from_rational_fn(RationalFn::from_poly(
                mu_form.pow(*k),
            )))
        }
        IntegrandSpec::ExpSym => Ok(ExpRationalSum::exponential(p.mu.mul_i())),
        IntegrandSpec::Custom(map) => map
            .get(&p.id)
            .cloned()
            .ok_or_else(|| ModelError::MissingRestriction { id: p.id.clone() }),
    }
}

fn thread_cap() -> usize {
    std::env::var("EQUILOC_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Map over fixed points, possibly on several threads (capped by the
/// EQUILOC_THREADS environment variable); results come back in point order.
fn map_points<T, F>(points: &[FixedPoint], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&FixedPoint) -> T + Sync,
{
    let threads = thread_cap().min(points.len().max(1));
    if threads <= 1 {
        return points.iter().map(f).collect();
    }
    let mut out: Vec<Option<T>> = Vec::new();
    out.resize_with(points.len(), || None);
    let chunk = points.len().div_ceil(threads);
    std::thread::scope(|s| {
        let f = &f;
        for (pts, slots) in points.chunks(chunk).zip(out.chunks_mut(chunk)) {
            s.spawn(move || {
                for (p, slot) in pts.iter().zip(slots.iter_mut()) {
                    *slot = Some(f(p));
                }
            });
        }
    });
    out.into_iter()
        .map(|t| t.expect("worker filled slot"))
        .collect()
}

/// The bare sum over fixed points of restriction / det^{1/2}, without the
/// 2 pi normalization.
pub fn localization_sum(
    m: &FixedPointModel,
    f: &IntegrandSpec,
) -> Result<ExpRationalSum, ModelError> {
    // validate restrictions up front so worker threads cannot fail
    for p in &m.points {
        restriction_at(f, p)?;
    }
    let terms = map_points(&m.points, |p| {
        let restriction = restriction_at(f, p).expect("validated above");
        restriction.mul_rational_fn(&euler_reciprocal(m.rank, p))
    });
    let mut acc = ExpRationalSum::zero(m.rank);
    for t in terms {
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// (-2 pi)^{dim/2}.
pub fn bv_prefactor(dim: usize) -> PiScalar {
    PiScalar::new(GaussRat::from_int(-2), 1).pow((dim / 2) as u32)
}

/// (2 pi i)^{dim/2}.
pub fn dh_prefactor(dim: usize) -> PiScalar {
    PiScalar::new(GaussRat::new(Rational::zero(), crate::scalar::rat(2)), 1).pow((dim / 2) as u32)
}

/// Integral of the integrand over the model:
/// (-2 pi)^{dim/2} * sum_p restriction_p / det^{1/2}(L(X, p)).
pub fn bv_localize(m: &FixedPointModel, f: &IntegrandSpec) -> Result<ExpRationalSum, ModelError> {
    Ok(localization_sum(m, f)?.scalar_mul(&bv_prefactor(m.dim)))
}

/// Fourier transform of the pushforward measure:
/// (2 pi i)^{dim/2} * sum_p e^{i mu(p)(X)} / det^{1/2}(L(X, p)).
pub fn dh_localize(m: &FixedPointModel) -> Result<ExpRationalSum, ModelError> {
    Ok(localization_sum(m, &IntegrandSpec::ExpSym)?.scalar_mul(&dh_prefactor(m.dim)))
}

// =============================================================================
// Polynomiality
// =============================================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Polynomiality {
    Polynomial(MultiPoly),
    /// A denominator factor that fails to cancel.
    NotPolynomial {
        witness: Weight,
    },
}

impl Polynomiality {
    pub fn polynomial(&self) -> Option<&MultiPoly> {
        match self {
            Polynomiality::Polynomial(p) => Some(p),
            Polynomiality::NotPolynomial { .. } => None,
        }
    }
}

/// Combine a pure rational sum (all exponents zero) over a common factored
/// denominator and divide out; the result is either the exact polynomial or
/// a witness factor left in the denominator.
pub fn polynomiality_check(s: &ExpRationalSum) -> Polynomiality {
    assert!(
        s.has_zero_exponents(),
        "polynomiality check requires a pure rational sum"
    );
    let mut acc = RationalFn::zero(s.rank());
    for (_, coeff) in s.terms() {
        acc = acc.add(coeff);
    }
    match acc.as_polynomial() {
        Some(p) => Polynomiality::Polynomial(p.clone()),
        None => Polynomiality::NotPolynomial {
            witness: acc.den_factors()[0].0.clone(),
        },
    }
}
