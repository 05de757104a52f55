//! Characters of compact groups and coadjoint-orbit Fourier transforms.
//!
//! Conventions: roots and weights carry purely imaginary coordinates, points
//! of the dual Cartan picked out by orbits are real, and the two are matched
//! by nu = -i(lambda + rho). Tracking i exactly is what turns the orbit
//! identity into a structural equality of normalized sums rather than a
//! numeric coincidence.
//!
//! Coroot pairings go through the ambient inner product; this differs from
//! the invariant-form normalization by a positive global scale, which leaves
//! every sign test unchanged.

use crate::expsum::{ExpRationalSum, SeriesError};
use crate::poly::EvalError;
use crate::ratfn::RationalFn;
use crate::rootsys::{weyl_group, weyl_orbit, RootSystem, RootSystemError};
use crate::scalar::{GaussRat, PiScalar, Rational};
use crate::weight::{dot_imag, Weight};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Below this the Weyl denominator counts as singular and evaluation falls
/// back to the exact series limit along the ray through X.
pub const WEYL_DENOM_EPS: f64 = 1e-8;
/// Freudenthal oracle caps.
pub const ORACLE_MAX_RANK: usize = 2;
pub const ORACLE_MAX_DIM: u64 = 200;

#[derive(Clone, Debug, PartialEq)]
pub enum CharacterError {
    NotDominant,
    NotRootType,
    NotRealType,
    NotFinite,
    /// Type A evaluation points must lie in the trace-zero subspace.
    NotTraceZero {
        sum: f64,
    },
    NotRegular,
    RankCap {
        rank: usize,
    },
    SizeCap {
        dim: u64,
    },
    Series(SeriesError),
    Eval(EvalError),
    Group(RootSystemError),
}

impl fmt::Display for CharacterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharacterError::NotDominant => write!(f, "weight is not dominant"),
            CharacterError::NotRootType => write!(f, "weight is not purely imaginary"),
            CharacterError::NotRealType => write!(f, "point is not purely real"),
            CharacterError::NotFinite => write!(f, "point has a non-finite coordinate"),
            CharacterError::NotTraceZero { sum } => {
                write!(f, "type A point has coordinate sum {:.3e}", sum)
            }
            CharacterError::NotRegular => write!(f, "point is not regular"),
            CharacterError::RankCap { rank } => {
                write!(
                    f,
                    "oracle supports rank <= {}, got {}",
                    ORACLE_MAX_RANK, rank
                )
            }
            CharacterError::SizeCap { dim } => {
                write!(f, "oracle supports dim <= {}, got {}", ORACLE_MAX_DIM, dim)
            }
            CharacterError::Series(e) => write!(f, "{}", e),
            CharacterError::Eval(e) => write!(f, "{}", e),
            CharacterError::Group(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for CharacterError {}

impl From<SeriesError> for CharacterError {
    fn from(e: SeriesError) -> Self {
        CharacterError::Series(e)
    }
}

impl From<EvalError> for CharacterError {
    fn from(e: EvalError) -> Self {
        CharacterError::Eval(e)
    }
}

impl From<RootSystemError> for CharacterError {
    fn from(e: RootSystemError) -> Self {
        CharacterError::Group(e)
    }
}

/// A dominant weight tied to its root system.
#[derive(Clone, Debug)]
pub struct DominantWeight<'a> {
    rs: &'a RootSystem,
    lam: Weight,
}

impl<'a> DominantWeight<'a> {
    pub fn new(rs: &'a RootSystem, lam: Weight) -> Result<Self, CharacterError> {
        if !lam.is_root_type() {
            return Err(CharacterError::NotRootType);
        }
        if !rs.is_dominant(&lam) {
            return Err(CharacterError::NotDominant);
        }
        Ok(DominantWeight { rs, lam })
    }

    /// Nonnegative integer coefficients on the fundamental weights.
    pub fn from_coeffs(rs: &'a RootSystem, coeffs: &[u64]) -> Result<Self, CharacterError> {
        let fw = rs.fundamental_weights();
        assert_eq!(
            coeffs.len(),
            fw.len(),
            "one coefficient per fundamental weight"
        );
        let mut lam = Weight::zero(rs.ambient_dim());
        for (c, w) in coeffs.iter().zip(&fw) {
            lam = lam.add(&w.scale(&GaussRat::from_int(*c as i64)));
        }
        Self::new(rs, lam)
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    pub fn weight(&self) -> &Weight {
        &self.lam
    }
}

// =============================================================================
// Weyl character formula
// =============================================================================

fn trace_zero_check(rs: &RootSystem, x: &[f64]) -> Result<(), CharacterError> {
    if rs.family() == crate::rootsys::Family::A {
        let sum: f64 = x.iter().sum();
        let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sum.abs() > 1e-9 * scale {
            return Err(CharacterError::NotTraceZero { sum });
        }
    }
    Ok(())
}

/// Trace of the irreducible representation at exp(X), evaluated through the
/// alternating sum over the Weyl group divided by the Weyl denominator.
/// Near the singular locus the quotient is taken as an exact Laurent limit
/// along the ray through X, which at X -> 0 produces the dimension.
pub fn weyl_character_eval(d: &DominantWeight, x: &[f64]) -> Result<Complex64, CharacterError> {
    let rs = d.rs;
    assert_eq!(
        x.len(),
        rs.ambient_dim(),
        "point has wrong ambient dimension"
    );
    if !x.iter().all(|v| v.is_finite()) {
        return Err(CharacterError::NotFinite);
    }
    trace_zero_check(rs, x)?;
    let group = weyl_group(rs)?;
    let lam_rho = d.lam.add(&rs.rho());
    let mut num = Complex64::new(0.0, 0.0);
    for w in &group {
        let phase = w.apply(&lam_rho).pairing_f64(x);
        num += phase.exp() * (w.epsilon() as f64);
    }
    let mut den = Complex64::new(1.0, 0.0);
    for alpha in rs.positive_roots() {
        let half = alpha.pairing_f64(x) / 2.0;
        den *= half.exp() - (-half).exp();
    }
    if den.norm() >= WEYL_DENOM_EPS {
        return Ok(num / den);
    }
    // singular: exact limit along the ray through X
    let v: Vec<Rational> = x
        .iter()
        .map(|&c| Rational::from_float(c).expect("finite coordinate"))
        .collect();
    if !rs.is_regular_rational(&v) {
        return Err(CharacterError::Series(SeriesError::NonRegularDirection {
            factor: "root".into(),
        }));
    }
    let char_series = lie_algebra_character(d)
        .series_limit(&v, 4)?
        .div(&j_half(rs).series_limit(&v, 4)?);
    debug_assert!(char_series.has_finite_limit(), "characters are entire");
    Ok(char_series.coeff(0).to_complex())
}

/// The character transported to the Lie algebra:
/// sum_w eps(w) e^{<w(lambda+rho), X>} / prod_{alpha > 0} <alpha, X>.
/// Equals j^{1/2}(X) * Tr pi(exp X) as a function.
pub fn lie_algebra_character(d: &DominantWeight) -> ExpRationalSum {
    let rs = d.rs;
    let rank = rs.ambient_dim();
    let group = weyl_group(rs).expect("group within cap");
    let lam_rho = d.lam.add(&rs.rho());
    let factors: Vec<(Weight, u32)> = rs.positive_roots().iter().map(|a| (a.clone(), 1)).collect();
    let terms = group
        .iter()
        .map(|w| {
            let coeff = RationalFn::reciprocal_product(
                rank,
                factors.clone(),
                PiScalar::from_int(w.epsilon() as i64),
            );
            (w.apply(&lam_rho), coeff)
        })
        .collect();
    ExpRationalSum::new(rank, terms)
}

/// The square root of the Jacobian of exp:
/// prod_{alpha > 0} (e^{<alpha,X>/2} - e^{-<alpha,X>/2}) / <alpha, X>.
pub fn j_half(rs: &RootSystem) -> ExpRationalSum {
    let rank = rs.ambient_dim();
    let mut acc = ExpRationalSum::one(rank);
    let half = GaussRat::new(Rational::new(1.into(), 2.into()), Rational::zero());
    for alpha in rs.positive_roots() {
        let r = RationalFn::reciprocal_product(rank, vec![(alpha.clone(), 1)], PiScalar::one());
        let factor = ExpRationalSum::new(
            rank,
            vec![
                (alpha.scale(&half), r.clone()),
                (alpha.scale(&half).neg(), r.neg()),
            ],
        );
        acc = acc.mul(&factor);
    }
    acc
}

// =============================================================================
// Orbit Fourier transforms
// =============================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitVariant {
    /// Sum over coset representatives with moved denominators.
    Theorem,
    /// Signed sum over the whole group with a fixed denominator; regular
    /// orbits only.
    Corollary,
}

/// Pairing of a real point with the coroot direction of a root; positive on
/// the roots singled out by the orbit.
fn coroot_pairing(nu: &Weight, alpha: &Weight) -> Rational {
    nu.real_parts()
        .iter()
        .zip(alpha.imag_parts())
        .map(|(a, b)| a * b)
        .sum()
}

/// The roots with positive pairing against nu; half the orbit dimension.
pub fn phi_plus_nu(rs: &RootSystem, nu: &Weight) -> Vec<Weight> {
    rs.all_roots()
        .into_iter()
        .filter(|a| coroot_pairing(nu, a).is_positive())
        .collect()
}

/// Exact Fourier transform of the coadjoint orbit through the real point nu:
/// (2 pi)^{n/2} sum over the orbit of e^{i <w nu, X>} over the product of
/// the moved positive pairings, n/2 the number of them.
pub fn orbit_fourier(
    rs: &RootSystem,
    nu: &Weight,
    variant: OrbitVariant,
) -> Result<ExpRationalSum, CharacterError> {
    if !nu.is_real_type() {
        return Err(CharacterError::NotRealType);
    }
    let rank = rs.ambient_dim();
    let group = weyl_group(rs)?;
    let plus = phi_plus_nu(rs, nu);
    let half_dim = plus.len() as u32;
    let prefactor = PiScalar::new(GaussRat::from_int(2), 1).pow(half_dim);
    let sum = match variant {
        OrbitVariant::Theorem => {
            let mut seen = std::collections::BTreeSet::new();
            let mut terms = Vec::new();
            for w in &group {
                let point = w.apply(nu);
                if !seen.insert(point.clone()) {
                    continue;
                }
                let factors: Vec<(Weight, u32)> = plus.iter().map(|a| (w.apply(a), 1)).collect();
                let coeff = RationalFn::reciprocal_product(rank, factors, PiScalar::one());
                terms.push((point.mul_i(), coeff));
            }
            ExpRationalSum::new(rank, terms)
        }
        OrbitVariant::Corollary => {
            let regular = rs
                .all_roots()
                .iter()
                .all(|a| !coroot_pairing(nu, a).is_zero());
            if !regular {
                return Err(CharacterError::NotRegular);
            }
            let factors: Vec<(Weight, u32)> = plus.iter().map(|a| (a.clone(), 1)).collect();
            let terms = group
                .iter()
                .map(|w| {
                    let coeff = RationalFn::reciprocal_product(
                        rank,
                        factors.clone(),
                        PiScalar::from_int(w.epsilon() as i64),
                    );
                    (w.apply(nu).mul_i(), coeff)
                })
                .collect();
            ExpRationalSum::new(rank, terms)
        }
    };
    Ok(sum.scalar_mul(&prefactor))
}

// =============================================================================
// Orbit identity
// =============================================================================

#[derive(Clone, Debug)]
pub struct KirillovReport {
    pub equal: bool,
    pub lhs: ExpRationalSum,
    pub rhs: ExpRationalSum,
    /// Half the orbit dimension.
    pub half_dim: u32,
}

/// Structural check that the Lie-algebra character equals the normalized
/// orbit Fourier transform through nu = -i(lambda + rho).
pub fn kirillov_identity_check(d: &DominantWeight) -> Result<KirillovReport, CharacterError> {
    let rs = d.rs;
    let lhs = lie_algebra_character(d);
    let nu = d.lam.add(&rs.rho()).div_i();
    let transform = orbit_fourier(rs, &nu, OrbitVariant::Theorem)?;
    let half_dim = phi_plus_nu(rs, &nu).len() as u32;
    let normalizer = PiScalar::new(GaussRat::from_int(2), 1).pow(half_dim).inv();
    let rhs = transform.scalar_mul(&normalizer);
    Ok(KirillovReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        half_dim,
    })
}

// =============================================================================
// Freudenthal oracle
// =============================================================================

fn dominant_representative(rs: &RootSystem, mu: &Weight) -> Weight {
    let mut w = mu.clone();
    loop {
        let mut moved = false;
        for alpha in rs.simple_roots() {
            let pairing = dot_imag(&w, alpha);
            if pairing.is_negative() {
                let coeff = Rational::from_integer(2.into()) * pairing / dot_imag(alpha, alpha);
                w = w.sub(&alpha.scale_rational(&coeff));
                moved = true;
            }
        }
        if !moved {
            return w;
        }
    }
}

/// Coefficients of diff in the simple-root basis, when they are nonnegative
/// integers.
fn root_cone_coords(rs: &RootSystem, diff: &Weight) -> Option<Vec<u64>> {
    let simple = rs.simple_roots();
    let dim = rs.ambient_dim();
    let a: Vec<Vec<Rational>> = (0..dim)
        .map(|i| simple.iter().map(|s| s.imag_parts()[i].clone()).collect())
        .collect();
    let b = diff.imag_parts();
    let coeffs = crate::linalg::solve_rational(&a, &b)?;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if c.is_negative() || !c.denom().is_one() {
            return None;
        }
        out.push(c.numer().to_u64()?);
    }
    Some(out)
}

/// Weight multiplicities of the irreducible with highest weight lambda, by
/// the Freudenthal recursion over dominant weights. Returns dominant weights
/// with their multiplicities.
pub fn weight_multiplicities(d: &DominantWeight) -> Result<BTreeMap<Weight, u64>, CharacterError> {
    let rs = d.rs;
    if rs.rank() > ORACLE_MAX_RANK {
        return Err(CharacterError::RankCap { rank: rs.rank() });
    }
    let rho = rs.rho();
    let lam_rho = d.lam.add(&rho);
    let bound = dot_imag(&lam_rho, &lam_rho);

    // candidate weights below lambda inside the norm ball
    let mut candidates = std::collections::BTreeSet::new();
    let mut queue = std::collections::VecDeque::new();
    candidates.insert(d.lam.clone());
    queue.push_back(d.lam.clone());
    while let Some(mu) = queue.pop_front() {
        for alpha in rs.simple_roots() {
            let next = mu.sub(alpha);
            let nr = next.add(&rho);
            if dot_imag(&nr, &nr) <= bound && candidates.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }

    let mut memo: BTreeMap<Weight, Rational> = BTreeMap::new();
    memo.insert(d.lam.clone(), Rational::from_integer(1.into()));

    fn mult(
        rs: &RootSystem,
        lam: &Weight,
        bound: &Rational,
        memo: &mut BTreeMap<Weight, Rational>,
        mu: &Weight,
    ) -> Rational {
        let dom = dominant_representative(rs, mu);
        if let Some(v) = memo.get(&dom) {
            return v.clone();
        }
        let rho = rs.rho();
        let mu_rho = dom.add(&rho);
        let norm = dot_imag(&mu_rho, &mu_rho);
        if &norm > bound {
            return Rational::zero();
        }
        let height = match root_cone_coords(rs, &lam.sub(&dom)) {
            Some(coords) => coords.iter().sum::<u64>(),
            None => {
                memo.insert(dom, Rational::zero());
                return Rational::zero();
            }
        };
        let denom = bound - &norm;
        if denom.is_zero() {
            // mu + rho on the orbit of lambda + rho but mu != lambda
            memo.insert(dom, Rational::zero());
            return Rational::zero();
        }
        // the recursion only climbs in |mu + rho|, strictly, so this entry
        // is never consulted while being computed
        let mut sum = Rational::zero();
        for alpha in rs.positive_roots() {
            for k in 1..=height {
                let up = dom.add(&alpha.scale_rational(&Rational::from_integer(k.into())));
                let m = mult(rs, lam, bound, memo, &up);
                if !m.is_zero() {
                    sum += m * dot_imag(&up, alpha);
                }
            }
        }
        let value = Rational::from_integer(2.into()) * sum / denom;
        memo.insert(dom, value.clone());
        value
    }

    let mut out = BTreeMap::new();
    let candidate_list: Vec<Weight> = candidates.into_iter().collect();
    for mu in candidate_list {
        if dominant_representative(rs, &mu) != mu {
            continue;
        }
        let m = mult(rs, &d.lam, &bound, &mut memo, &mu);
        if !m.is_zero() {
            debug_assert!(m.denom().is_one() && !m.is_negative());
            out.insert(mu, m.numer().to_u64().expect("small multiplicity"));
        }
    }
    Ok(out)
}

/// Dimension as the multiplicity-weighted orbit count.
pub fn dimension_oracle(d: &DominantWeight) -> Result<u64, CharacterError> {
    let mults = weight_multiplicities(d)?;
    let mut dim = 0u64;
    for (mu, m) in &mults {
        let (orbit, _) = weyl_orbit(d.rs, mu)?;
        dim += m * orbit.len() as u64;
    }
    Ok(dim)
}

/// Brute-force character value: the multiplicity-weighted sum of weight
/// exponentials. Independent of the Weyl-quotient route.
pub fn character_oracle(d: &DominantWeight, x: &[f64]) -> Result<Complex64, CharacterError> {
    let mults = weight_multiplicities(d)?;
    let mut dim = 0u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (mu, m) in &mults {
        let (orbit, _) = weyl_orbit(d.rs, mu)?;
        dim += m * orbit.len() as u64;
        for point in orbit {
            acc += point.pairing_f64(x).exp() * (*m as f64);
        }
    }
    if dim > ORACLE_MAX_DIM {
        return Err(CharacterError::SizeCap { dim });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, Family};
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};

    fn a1() -> RootSystem {
        build_root_system(Family::A, 1).unwrap()
    }

    fn a2() -> RootSystem {
        build_root_system(Family::A, 2).unwrap()
    }

    /// Trace-zero point for A_1 parametrized by the rotation angle.
    fn a1_point(theta: f64) -> Vec<f64> {
        vec![theta, -theta]
    }

    fn random_regular_a2(rng: &mut impl Rng) -> Vec<f64> {
        let rs = a2();
        loop {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let x = vec![a, b, -a - b];
            if rs
                .positive_roots()
                .iter()
                .all(|r| r.pairing_f64(&x).norm() > 0.05)
            {
                return x;
            }
        }
    }

    fn random_regular(rs: &RootSystem, rng: &mut impl Rng) -> Vec<f64> {
        loop {
            let mut x: Vec<f64> = (0..rs.ambient_dim())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            if rs.family() == Family::A {
                let mean = x.iter().sum::<f64>() / x.len() as f64;
                for v in &mut x {
                    *v -= mean;
                }
            }
            if rs
                .positive_roots()
                .iter()
                .all(|r| r.pairing_f64(&x).norm() > 0.05)
            {
                return x;
            }
        }
    }

    #[test]
    fn dominance_enforced() {
        let rs = a1();
        let fw = rs.fundamental_weights();
        assert!(DominantWeight::new(&rs, fw[0].clone()).is_ok());
        assert!(matches!(
            DominantWeight::new(&rs, fw[0].neg()),
            Err(CharacterError::NotDominant)
        ));
    }

    #[test]
    fn a1_fundamental_character_is_two_cos() {
        let rs = a1();
        let d = DominantWeight::from_coeffs(&rs, &[1]).unwrap();
        let theta = std::f64::consts::PI / 3.0;
        let v = weyl_character_eval(&d, &a1_point(theta)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10, "got {}", v);
        assert!(v.im.abs() < 1e-10);
        // sin(2 theta)/sin(theta) across regular points
        for &t in &[0.3, 0.9, 1.4] {
            let v = weyl_character_eval(&d, &a1_point(t)).unwrap();
            assert!((v.re - (2.0 * t).sin() / t.sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn trivial_representation_is_one() {
        for rs in [a1(), a2()] {
            let d = DominantWeight::new(&rs, Weight::zero(rs.ambient_dim())).unwrap();
            let x: Vec<f64> = match rs.rank() {
                1 => a1_point(0.7),
                _ => vec![0.3, 0.1, -0.4],
            };
            let v = weyl_character_eval(&d, &x).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn non_finite_points_rejected() {
        let rs = a1();
        let d = DominantWeight::from_coeffs(&rs, &[1]).unwrap();
        for bad in [f64::INFINITY, f64::NAN] {
            assert!(matches!(
                weyl_character_eval(&d, &[bad, -bad]),
                Err(CharacterError::NotFinite)
            ));
        }
    }

    #[test]
    fn trace_zero_enforced_for_type_a() {
        let rs = a1();
        let d = DominantWeight::from_coeffs(&rs, &[1]).unwrap();
        assert!(matches!(
            weyl_character_eval(&d, &[0.5, 0.0]),
            Err(CharacterError::NotTraceZero { .. })
        ));
    }

    #[test]
    fn dimension_via_series_fallback() {
        let rs = a1();
        for n in 0..=10u64 {
            let d = DominantWeight::from_coeffs(&rs, &[n]).unwrap();
            let v = weyl_character_eval(&d, &a1_point(1e-9)).unwrap();
            assert!((v.re - (n + 1) as f64).abs() < 1e-9, "n = {}, got {}", n, v);
        }
        let rs2 = a2();
        let fund = DominantWeight::from_coeffs(&rs2, &[1, 0]).unwrap();
        let x = [1e-9, 2e-9, -3e-9];
        assert!((weyl_character_eval(&fund, &x).unwrap().re - 3.0).abs() < 1e-9);
        let adjoint = DominantWeight::from_coeffs(&rs2, &[1, 1]).unwrap();
        assert!((weyl_character_eval(&adjoint, &x).unwrap().re - 8.0).abs() < 1e-9);
    }

    #[test]
    fn lie_algebra_character_a1() {
        // lambda = fundamental: (e^{<a,X>} - e^{-<a,X>}) / <a, X>, numerically
        // sin(2 theta)/theta
        let rs = a1();
        let d = DominantWeight::from_coeffs(&rs, &[1]).unwrap();
        let s = lie_algebra_character(&d);
        assert_eq!(s.len(), 2);
        for &t in &[0.4, 1.1] {
            let v = s.eval(&a1_point(t)).unwrap();
            assert!((v.re - (2.0 * t).sin() / t).abs() < 1e-10);
            assert!(v.im.abs() < 1e-12);
        }
        // lambda = 0: sin(theta)/theta
        let d0 = DominantWeight::new(&rs, Weight::zero(2)).unwrap();
        let s0 = lie_algebra_character(&d0);
        for &t in &[0.4, 1.1] {
            let v = s0.eval(&a1_point(t)).unwrap();
            assert!((v.re - t.sin() / t).abs() < 1e-10);
        }
    }

    #[test]
    fn numerator_antisymmetry_under_weyl_action() {
        let rs = a2();
        let d = DominantWeight::from_coeffs(&rs, &[1, 0]).unwrap();
        let lam_rho = d.weight().add(&rs.rho());
        let group = weyl_group(&rs).unwrap();
        let numerator = |x: &[f64]| -> Complex64 {
            group
                .iter()
                .map(|w| w.apply(&lam_rho).pairing_f64(x).exp() * (w.epsilon() as f64))
                .sum()
        };
        let x = [0.3, 0.1, -0.4];
        let base = numerator(&x);
        for w in &group {
            let moved = numerator(&w.apply_point_f64(&x));
            let expect = base * (w.epsilon() as f64);
            assert!((moved - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn character_is_weyl_invariant() {
        let rs = a2();
        let d = DominantWeight::from_coeffs(&rs, &[1, 1]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let x = random_regular_a2(&mut rng);
        let base = weyl_character_eval(&d, &x).unwrap();
        for w in weyl_group(&rs).unwrap() {
            let v = weyl_character_eval(&d, &w.apply_point_f64(&x)).unwrap();
            assert!((v - base).norm() < 1e-9);
        }
    }

    #[test]
    fn j_half_a1_is_sinc() {
        let rs = a1();
        let jh = j_half(&rs);
        for &t in &[0.5, 1.0, 2.0] {
            let v = jh.eval(&a1_point(t)).unwrap();
            assert!((v.re - t.sin() / t).abs() < 1e-10);
            assert!(v.im.abs() < 1e-12);
        }
        // j^{1/2}(0) = 1
        let limit = jh.series_limit(&[rat(1), rat(-1)], 2).unwrap();
        assert_eq!(limit.coeff(0), PiScalar::one());
    }

    #[test]
    fn j_half_squared_is_full_root_product() {
        let rs = a2();
        let jh = j_half(&rs);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = random_regular_a2(&mut rng);
        let v = jh.eval(&x).unwrap();
        let mut expect = Complex64::new(1.0, 0.0);
        for alpha in rs.all_roots() {
            let half = alpha.pairing_f64(&x) / 2.0;
            expect *= (half.exp() - (-half).exp()) / alpha.pairing_f64(&x);
        }
        assert!((v * v - expect).norm() < 1e-10);
    }

    #[test]
    fn orbit_fourier_point_orbit() {
        let rs = a1();
        let s = orbit_fourier(&rs, &Weight::zero(2), OrbitVariant::Theorem).unwrap();
        assert_eq!(s, ExpRationalSum::one(2));
    }

    #[test]
    fn orbit_fourier_a1_regular() {
        // (2 pi) (e^{i<nu,X>} - e^{-i<nu,X>}) / <alpha, X>
        let rs = a1();
        let nu = Weight::real(vec![rat(1), rat(-1)]);
        let s = orbit_fourier(&rs, &nu, OrbitVariant::Theorem).unwrap();
        assert_eq!(s.len(), 2);
        for &t in &[0.5, 1.3] {
            let v = s.eval(&a1_point(t)).unwrap();
            let expect = 2.0 * std::f64::consts::PI * (2.0 * t).sin() / t;
            assert!((v.re - expect).abs() < 1e-9, "t = {}", t);
        }
    }

    #[test]
    fn orbit_variants_agree_on_regular_orbits() {
        let rs1 = a1();
        let nu1 = Weight::real(vec![rat(2), rat(-2)]);
        assert_eq!(
            orbit_fourier(&rs1, &nu1, OrbitVariant::Theorem).unwrap(),
            orbit_fourier(&rs1, &nu1, OrbitVariant::Corollary).unwrap()
        );
        let rs2 = a2();
        let nu2 = rs2.rho().div_i();
        assert_eq!(
            orbit_fourier(&rs2, &nu2, OrbitVariant::Theorem).unwrap(),
            orbit_fourier(&rs2, &nu2, OrbitVariant::Corollary).unwrap()
        );
    }

    #[test]
    fn orbit_transform_agrees_with_localization_engine() {
        // package the orbit through nu as a fixed-point model: fixed points
        // w nu with isotropy weights w alpha for alpha in the positive set;
        // the block speeds are i<w alpha, X>, which differs from the stored
        // <w, X>/i convention by a factor -1 per block, so every sign is
        // (-1)^{n/2}
        use crate::localize::{dh_localize, FixedPoint, FixedPointModel};
        for (rs, nu) in [
            (a1(), Weight::real(vec![rat(2), rat(-2)])),
            (a2(), a2().rho().div_i()),
        ] {
            let plus = phi_plus_nu(&rs, &nu);
            let sign = if plus.len() % 2 == 0 { 1 } else { -1 };
            let mut seen = std::collections::BTreeSet::new();
            let mut points = Vec::new();
            for w in weyl_group(&rs).unwrap() {
                let point = w.apply(&nu);
                if !seen.insert(point.clone()) {
                    continue;
                }
                points.push(FixedPoint {
                    id: format!("w{}", points.len()),
                    mu: point,
                    weights: plus.iter().map(|a| w.apply(a)).collect(),
                    sign,
                });
            }
            let model = FixedPointModel::new(2 * plus.len(), rs.ambient_dim(), points).unwrap();
            let via_localization = dh_localize(&model).unwrap();
            let direct = orbit_fourier(&rs, &nu, OrbitVariant::Theorem).unwrap();
            assert_eq!(via_localization, direct);
        }
    }

    #[test]
    fn corollary_rejects_singular_orbits() {
        let rs = a2();
        let fw = rs.fundamental_weights();
        let nu = fw[0].div_i();
        assert!(matches!(
            orbit_fourier(&rs, &nu, OrbitVariant::Corollary),
            Err(CharacterError::NotRegular)
        ));
        // the theorem variant handles the wall orbit: |W/W_nu| = 3 terms
        let s = orbit_fourier(&rs, &nu, OrbitVariant::Theorem).unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn phi_plus_of_shifted_dominant_is_positive_system() {
        use std::collections::BTreeSet;
        for (rs, coeffs) in [(a1(), vec![3u64]), (a2(), vec![1, 0]), (a2(), vec![1, 1])] {
            let d = DominantWeight::from_coeffs(&rs, &coeffs).unwrap();
            let nu = d.weight().add(&rs.rho()).div_i();
            let plus: BTreeSet<Weight> = phi_plus_nu(&rs, &nu).into_iter().collect();
            let expect: BTreeSet<Weight> = rs.positive_roots().iter().cloned().collect();
            assert_eq!(plus, expect);
        }
    }

    #[test]
    fn kirillov_identity_a1() {
        let rs = a1();
        for n in 0..=5u64 {
            let d = DominantWeight::from_coeffs(&rs, &[n]).unwrap();
            let report = kirillov_identity_check(&d).unwrap();
            assert!(report.equal, "n = {}", n);
        }
    }

    #[test]
    fn kirillov_identity_a2_and_numeric_agreement() {
        let rs = a2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for coeffs in [vec![1u64, 0], vec![1, 1]] {
            let d = DominantWeight::from_coeffs(&rs, &coeffs).unwrap();
            let report = kirillov_identity_check(&d).unwrap();
            assert!(report.equal);
            for _ in 0..20 {
                let x = random_regular_a2(&mut rng);
                let lhs = report.lhs.eval(&x).unwrap();
                let rhs = report.rhs.eval(&x).unwrap();
                assert!((lhs - rhs).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn freudenthal_a1_ladder() {
        let rs = a1();
        for n in 0..=10u64 {
            let d = DominantWeight::from_coeffs(&rs, &[n]).unwrap();
            let mults = weight_multiplicities(&d).unwrap();
            // dominant weights n, n-2, ... down to 0 or 1, all multiplicity 1
            assert_eq!(mults.len() as u64, n / 2 + 1);
            assert!(mults.values().all(|&m| m == 1));
            assert_eq!(dimension_oracle(&d).unwrap(), n + 1);
        }
    }

    #[test]
    fn freudenthal_a2_adjoint() {
        let rs = a2();
        let d = DominantWeight::from_coeffs(&rs, &[1, 1]).unwrap();
        let mults = weight_multiplicities(&d).unwrap();
        // highest root multiplicity 1, zero weight multiplicity 2
        assert_eq!(mults[d.weight()], 1);
        assert_eq!(mults[&Weight::zero(3)], 2);
        assert_eq!(dimension_oracle(&d).unwrap(), 8);
        let at_zero = character_oracle(&d, &[0.0, 0.0, 0.0]).unwrap();
        assert!((at_zero.re - 8.0).abs() < 1e-12);
    }

    #[test]
    fn freudenthal_a2_fundamental() {
        let rs = a2();
        let d = DominantWeight::from_coeffs(&rs, &[1, 0]).unwrap();
        assert_eq!(dimension_oracle(&d).unwrap(), 3);
    }

    #[test]
    fn character_matches_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let rs1 = a1();
        for n in 0..=10u64 {
            let d = DominantWeight::from_coeffs(&rs1, &[n]).unwrap();
            for _ in 0..20 {
                let t: f64 = rng.gen_range(0.2..1.5);
                let x = a1_point(t);
                let a = weyl_character_eval(&d, &x).unwrap();
                let b = character_oracle(&d, &x).unwrap();
                assert!((a - b).norm() < 1e-9, "n = {}, t = {}", n, t);
            }
        }
        let rs2 = a2();
        for coeffs in [vec![1u64, 0], vec![1, 1]] {
            let d = DominantWeight::from_coeffs(&rs2, &coeffs).unwrap();
            for _ in 0..20 {
                let x = random_regular_a2(&mut rng);
                let a = weyl_character_eval(&d, &x).unwrap();
                let b = character_oracle(&d, &x).unwrap();
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn freudenthal_rank_two_orthogonal_and_symplectic() {
        // the recursion is length-aware, so the two rank-2 realizations with
        // long and short roots give the expected small dimensions
        let b2 = build_root_system(Family::B, 2).unwrap();
        let vector = DominantWeight::from_coeffs(&b2, &[1, 0]).unwrap();
        assert_eq!(dimension_oracle(&vector).unwrap(), 5);
        let spinor = DominantWeight::from_coeffs(&b2, &[0, 1]).unwrap();
        assert_eq!(dimension_oracle(&spinor).unwrap(), 4);
        let adjoint = DominantWeight::from_coeffs(&b2, &[0, 2]).unwrap();
        assert_eq!(dimension_oracle(&adjoint).unwrap(), 10);

        let c2 = build_root_system(Family::C, 2).unwrap();
        let fund = DominantWeight::from_coeffs(&c2, &[1, 0]).unwrap();
        assert_eq!(dimension_oracle(&fund).unwrap(), 4);
        let second = DominantWeight::from_coeffs(&c2, &[0, 1]).unwrap();
        assert_eq!(dimension_oracle(&second).unwrap(), 5);
    }

    #[test]
    fn b2_character_matches_oracle_and_dimension_limit() {
        let rs = build_root_system(Family::B, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for (coeffs, dim) in [(vec![1u64, 0], 5.0), (vec![0, 1], 4.0)] {
            let d = DominantWeight::from_coeffs(&rs, &coeffs).unwrap();
            for _ in 0..10 {
                let x = random_regular(&rs, &mut rng);
                let a = weyl_character_eval(&d, &x).unwrap();
                let b = character_oracle(&d, &x).unwrap();
                assert!((a - b).norm() < 1e-9, "{:?}", coeffs);
            }
            let v = weyl_character_eval(&d, &[1e-9, 2e-9]).unwrap();
            assert!((v.re - dim).abs() < 1e-9, "{:?}: {}", coeffs, v.re);
        }
    }

    #[test]
    fn kirillov_identity_beyond_type_a() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for (fam, coeffs) in [
            (Family::B, vec![1u64, 0]),
            (Family::B, vec![1, 1]),
            (Family::C, vec![0, 1]),
        ] {
            let rs = build_root_system(fam, 2).unwrap();
            let d = DominantWeight::from_coeffs(&rs, &coeffs).unwrap();
            let report = kirillov_identity_check(&d).unwrap();
            assert!(report.equal, "{}2 {:?}", fam, coeffs);
            assert_eq!(report.half_dim as usize, rs.positive_roots().len());
            for _ in 0..10 {
                let x = random_regular(&rs, &mut rng);
                let l = report.lhs.eval(&x).unwrap();
                let r = report.rhs.eval(&x).unwrap();
                assert!((l - r).norm() < 1e-9, "{}2 {:?}", fam, coeffs);
            }
        }
    }

    #[test]
    fn oracle_caps() {
        let rs = build_root_system(Family::A, 3).unwrap();
        let d = DominantWeight::from_coeffs(&rs, &[1, 0, 0]).unwrap();
        assert!(matches!(
            weight_multiplicities(&d),
            Err(CharacterError::RankCap { .. })
        ));
        let rs2 = a2();
        let big = DominantWeight::from_coeffs(&rs2, &[9, 9]).unwrap();
        assert!(matches!(
            character_oracle(&big, &[0.0, 0.0, 0.0]),
            Err(CharacterError::SizeCap { .. })
        ));
    }
}
