//! Pushforward measures of circle actions as exact piecewise polynomials.
//!
//! For a rank-one model the Fourier transform of the pushforward measure is
//! the localization sum
//!
//!   (2 pi i)^{n/2} sum_p e^{i mu_p t} / (sign_p prod_j c_{p,j} t^{n/2}),
//!
//! with c_{p,j} the isotropy speeds. Inverting term by term against the
//! one-sided kernel, whose transform is
//!
//!   int_a^inf e^{itx} (x-a)^m / m! dx = e^{iat} i^{m+1} / t^{m+1},
//!
//! gives the density as a combination of truncated powers:
//!
//!   density(x) = sum_p k_p (x - mu_p)_+^{n/2-1},
//!   k_p = (2 pi)^{n/2} / ((n/2-1)! sign_p prod_j c_{p,j}).
//!
//! The i powers cancel exactly, so each k_p is a rational multiple of
//! pi^{n/2}; the constant is frozen by the unit-sphere check (constant
//! density 2 pi, total mass 4 pi).

use crate::expsum::ExpRationalSum;
use crate::localize::{dh_localize, FixedPointModel, ModelError};
use crate::scalar::{GaussRat, PiScalar, Rational};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum DhError {
    RankNotOne {
        rank: usize,
    },
    PointlessModel,
    /// A zero-dimensional model pushes forward to atoms, which a polynomial
    /// density cannot carry.
    ZeroDimensional,
    /// The kernel combination fails to vanish beyond the largest moment
    /// value; the data cannot come from a compact model.
    UnboundedSupport,
    Model(ModelError),
    Eval(crate::poly::EvalError),
}

impl fmt::Display for DhError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DhError::RankNotOne { rank } => {
                write!(f, "pushforward density needs rank 1, got {}", rank)
            }
            DhError::PointlessModel => write!(f, "model has no fixed points"),
            DhError::ZeroDimensional => {
                write!(f, "pushforward density needs dimension >= 2")
            }
            DhError::UnboundedSupport => {
                write!(f, "density does not vanish beyond the last moment value")
            }
            DhError::Model(e) => write!(f, "{}", e),
            DhError::Eval(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for DhError {}

impl From<ModelError> for DhError {
    fn from(e: ModelError) -> Self {
        DhError::Model(e)
    }
}

/// Dense univariate polynomial with pi-graded coefficients, lowest degree
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<PiScalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[PiScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let mut coeffs = vec![PiScalar::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = &coeffs[i] + c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] = &coeffs[i] + c;
        }
        UniPoly { coeffs }.trim()
    }

    /// k (x - a)^m expanded in x.
    pub fn shifted_power(k: &PiScalar, a: &Rational, m: u32) -> UniPoly {
        let mut coeffs = vec![PiScalar::zero(); m as usize + 1];
        // binomial expansion of (x - a)^m
        let mut binom = Rational::one();
        for j in 0..=m {
            if j > 0 {
                binom = binom * Rational::from_integer((m - j + 1).into())
                    / Rational::from_integer(j.into());
            }
            let sign_pow = (-a.clone()).pow(j as i32);
            let c = k.mul(&PiScalar::from_rational(&binom * sign_pow));
            coeffs[(m - j) as usize] = c;
        }
        UniPoly { coeffs }.trim()
    }

    pub fn eval_rational(&self, x: &Rational) -> PiScalar {
        let mut acc = PiScalar::zero();
        let mut power = Rational::one();
        for c in &self.coeffs {
            acc = &acc + &c.mul(&PiScalar::from_rational(power.clone()));
            power *= x;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let mut power = 1.0;
        for c in &self.coeffs {
            acc += c.to_complex().re * power;
            power *= x;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&PiScalar::from_int(i as i64)))
            .collect();
        UniPoly { coeffs }.trim()
    }

    /// Exact integral over [a, b].
    pub fn integral(&self, a: &Rational, b: &Rational) -> PiScalar {
        let anti = UniPoly {
            coeffs: std::iter::once(PiScalar::zero())
                .chain(self.coeffs.iter().enumerate().map(|(i, c)| {
                    c.mul(&PiScalar::from_rational(Rational::new(
                        1.into(),
                        (i as i64 + 1).into(),
                    )))
                }))
                .collect(),
        };
        &anti.eval_rational(b) - &anti.eval_rational(a)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered = self.coeffs.iter().enumerate().rev().filter_map(|(i, c)| {
            if c.is_zero() {
                return None;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{}", i),
            };
            Some(crate::poly::term_string(c, &mono))
        });
        write!(f, "{}", crate::poly::join_signed(rendered))
    }
}

/// A breakpointed polynomial density on the line, zero outside the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    /// Sorted distinct moment values.
    breakpoints: Vec<Rational>,
    /// One polynomial per interval between consecutive breakpoints.
    pieces: Vec<UniPoly>,
}

impl PiecewisePoly {
    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[UniPoly] {
        &self.pieces
    }

    pub fn support(&self) -> Option<(&Rational, &Rational)> {
        Some((self.breakpoints.first()?, self.breakpoints.last()?))
    }

    fn piece_at(&self, x: f64) -> Option<&UniPoly> {
        let lo = self.breakpoints.first()?.to_f64()?;
        let hi = self.breakpoints.last()?.to_f64()?;
        if x < lo || x > hi {
            return None;
        }
        let idx = self
            .breakpoints
            .windows(2)
            .position(|w| x <= w[1].to_f64().unwrap())
            .unwrap_or(self.pieces.len().saturating_sub(1));
        self.pieces.get(idx)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.piece_at(x).map_or(0.0, |p| p.eval_f64(x))
    }

    /// Exact value approached from inside piece `idx` at a breakpoint or
    /// interior point.
    pub fn eval_piece(&self, idx: usize, x: &Rational) -> PiScalar {
        self.pieces[idx].eval_rational(x)
    }

    /// Exact total mass.
    pub fn total_mass(&self) -> PiScalar {
        let mut acc = PiScalar::zero();
        for (i, piece) in self.pieces.iter().enumerate() {
            acc = &acc + &piece.integral(&self.breakpoints[i], &self.breakpoints[i + 1]);
        }
        acc
    }

    /// Piecewise derivative (no distributional boundary terms).
    pub fn derivative(&self) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.derivative()).collect(),
        }
    }
}

/// Exact pushforward density of a rank-one model: the combination of
/// truncated-power kernels matching the localization transform term by term.
pub fn dh_density(m: &FixedPointModel) -> Result<PiecewisePoly, DhError> {
    if m.rank() != 1 {
        return Err(DhError::RankNotOne { rank: m.rank() });
    }
    if m.points().is_empty() {
        return Err(DhError::PointlessModel);
    }
    if m.dim() < 2 {
        return Err(DhError::ZeroDimensional);
    }
    let half = (m.dim() / 2) as u32;
    let kernel_degree = half - 1;
    let mut factorial = Rational::one();
    for k in 2..half as i64 {
        factorial *= Rational::from_integer(k.into());
    }
    // per point: k_p = (2 pi)^{n/2} / ((n/2-1)! sign_p prod_j c_j)
    let mut contributions: Vec<(Rational, PiScalar)> = Vec::new();
    for p in m.points() {
        let mu = p.mu.real_parts()[0].clone();
        let mut speed = GaussRat::one();
        for w in &p.weights {
            speed = &speed * &GaussRat::from_rational(w.imag_parts()[0].clone());
        }
        let base = PiScalar::new(GaussRat::from_int(2), 1).pow(half);
        let den = PiScalar::from_gauss(speed)
            .mul(&PiScalar::from_rational(factorial.clone()))
            .mul(&PiScalar::from_int(p.sign as i64));
        contributions.push((mu, base.mul(&den.inv())));
    }
    let mut breakpoints: Vec<Rational> = contributions.iter().map(|(mu, _)| mu.clone()).collect();
    breakpoints.sort();
    breakpoints.dedup();
    if breakpoints.len() < 2 {
        // all moment values coincide: the only consistent density is zero
        // mass concentrated at a point, which a polynomial density cannot
        // carry unless every kernel cancels
        let total: PiScalar = {
            let mut acc = PiScalar::zero();
            for (_, k) in &contributions {
                acc = &acc + k;
            }
            acc
        };
        if total.is_zero() {
            return Ok(PiecewisePoly {
                breakpoints,
                pieces: vec![],
            });
        }
        return Err(DhError::UnboundedSupport);
    }
    let mut pieces = Vec::new();
    for window in breakpoints.windows(2) {
        let mut piece = UniPoly::zero();
        for (mu, k) in &contributions {
            if mu <= &window[0] {
                piece = piece.add(&UniPoly::shifted_power(k, mu, kernel_degree));
            }
        }
        pieces.push(piece);
    }
    // beyond the last breakpoint every kernel is active and the sum must
    // vanish identically
    let mut tail = UniPoly::zero();
    for (mu, k) in &contributions {
        tail = tail.add(&UniPoly::shifted_power(k, mu, kernel_degree));
    }
    if !tail.is_zero() {
        return Err(DhError::UnboundedSupport);
    }
    Ok(PiecewisePoly {
        breakpoints,
        pieces,
    })
}

/// Exact antiderivative route for int e^{itx} x^j dx over [a, b].
fn exp_moment(j: u32, t: f64, a: f64, b: f64) -> Complex64 {
    // int x^j e^{itx} dx = e^{itx} sum_{r=0}^{j} (-1)^r j!/(j-r)! x^{j-r} / (it)^{r+1}
    let it = Complex64::new(0.0, t);
    let eval = |x: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut falling = 1.0;
        for r in 0..=j {
            let term = falling * x.powi((j - r) as i32) / it.powu(r + 1);
            acc += if r % 2 == 0 { term } else { -term };
            falling *= (j - r) as f64;
        }
        acc * (it * x).exp()
    };
    eval(b) - eval(a)
}

/// Fourier transform of the density at t, by exact piecewise antiderivatives
/// evaluated in floating point.
pub fn density_fourier(d: &PiecewisePoly, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, piece) in d.pieces().iter().enumerate() {
        let a = d.breakpoints()[i].to_f64().unwrap();
        let b = d.breakpoints()[i + 1].to_f64().unwrap();
        for (j, c) in piece.coeffs().iter().enumerate() {
            let cf = c.to_complex();
            if cf.norm() > 0.0 {
                acc += cf * exp_moment(j as u32, t, a, b);
            }
        }
    }
    acc
}

/// Max absolute deviation between the transform of the density and the
/// localization sum of the model it came from, over the given frequencies.
pub fn density_fourier_check(
    d: &PiecewisePoly,
    m: &FixedPointModel,
    ts: &[f64],
) -> Result<f64, DhError> {
    let sum: ExpRationalSum = dh_localize(m)?;
    let mut max_err = 0.0f64;
    for &t in ts {
        let lhs = density_fourier(d, t);
        let rhs = sum.eval(&[t]).map_err(DhError::Eval)?;
        max_err = max_err.max((lhs - rhs).norm());
    }
    Ok(max_err)
}
