//! The verification suite behind `equiloc selftest` and the acceptance test
//! target: one check per shipped guarantee, each reporting pass/fail with a
//! detail string and its runtime budget.

use crate::characters::{
    character_oracle, kirillov_identity_check, phi_plus_nu, weyl_character_eval, DominantWeight,
};
use crate::dhmeasure::{density_fourier_check, dh_density};
use crate::expsum::ExpRationalSum;
use crate::gkm;
use crate::localize::{
    bv_localize, dh_localize, localization_sum, polynomiality_check, IntegrandSpec, Polynomiality,
};
use crate::models;
use crate::oracle::{pushforward_histogram, sphere_integral, QuadratureGrid};
use crate::pfaffian::{determinant, pfaffian, pfaffian_berezin, AntisymMatrix};
use crate::poly::{Monomial, MultiPoly};
use crate::ratfn::RationalFn;
use crate::rootsys::{build_root_system, weyl_group, Family};
use crate::scalar::{rat, ratio, GaussRat, PiScalar};
use crate::weight::Weight;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({:.3}s / {:.1}s budget){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64(),
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", self.detail)
            }
        )
    }
}

struct Check {
    fails: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { fails: Vec::new() }
    }

    fn expect(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.fails.push(msg());
        }
    }

    fn finish(
        self,
        name: &'static str,
        started: Instant,
        budget: Duration,
        ok_detail: String,
    ) -> CheckOutcome {
        let elapsed = started.elapsed();
        let on_time = elapsed <= budget;
        let passed = self.fails.is_empty() && on_time;
        let detail = if self.fails.is_empty() {
            if on_time {
                ok_detail
            } else {
                format!("over budget: {:.3}s", elapsed.as_secs_f64())
            }
        } else {
            self.fails.join("; ")
        };
        CheckOutcome {
            name,
            passed,
            detail,
            elapsed,
            budget,
        }
    }
}

/// Sphere localization: sympower 1 gives exactly 4 pi with bare sum -2;
/// sympowers 0 and 2 vanish exactly.
pub fn criterion_1_sphere_localization() -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let m = models::s2();
    let bare = localization_sum(&m, &IntegrandSpec::SymPower(1)).unwrap();
    match polynomiality_check(&bare) {
        Polynomiality::Polynomial(p) => c
            .expect(p.as_constant() == Some(PiScalar::from_int(-2)), || {
                format!("bare sum is {}, want -2", p)
            }),
        Polynomiality::NotPolynomial { witness } => c.expect(false, || {
            format!("bare sum not polynomial, witness {}", witness)
        }),
    }
    let full = bv_localize(&m, &IntegrandSpec::SymPower(1)).unwrap();
    match polynomiality_check(&full) {
        Polynomiality::Polynomial(p) => c.expect(
            p.as_constant() == Some(PiScalar::new(GaussRat::from_int(4), 1)),
            || format!("integral is {}, want 4*pi", p),
        ),
        Polynomiality::NotPolynomial { witness } => c.expect(false, || {
            format!("integral not polynomial, witness {}", witness)
        }),
    }
    for k in [0u32, 2] {
        let s = bv_localize(&m, &IntegrandSpec::SymPower(k)).unwrap();
        let zero = matches!(
            polynomiality_check(&s),
            Polynomiality::Polynomial(ref p) if p.is_zero()
        );
        c.expect(zero, || format!("sympower {} does not vanish", k));
    }
    c.finish(
        "sphere-localization",
        started,
        Duration::from_millis(100),
        "sympower 1 -> 4*pi (bare -2); sympower 0, 2 -> 0".into(),
    )
}

/// Exact stationary phase: the localization transform of the sphere matches
/// quadrature of the plane wave within 1e-6.
pub fn criterion_2_stationary_phase() -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let m = models::s2();
    let sum = dh_localize(&m).unwrap();
    let grid = QuadratureGrid::new(64, 64);
    let mut worst = 0.0f64;
    for &t in &[0.5, 1.0, 2.0, 5.0] {
        let exact = sum.eval(&[t]).unwrap();
        let quad = sphere_integral(|_, _, z| Complex64::new(0.0, t * z).exp(), &grid);
        let err = (exact - quad).norm();
        worst = worst.max(err);
        c.expect(err < 1e-6, || format!("t = {}: error {:.3e}", t, err));
    }
    c.finish(
        "stationary-phase",
        started,
        Duration::from_secs(1),
        format!("max |transform - quadrature| = {:.3e}", worst),
    )
}

fn random_antisym(rng: &mut ChaCha8Rng, n: usize) -> AntisymMatrix {
    let mut rows = vec![vec![rat(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            rows[i][j] = v.clone();
            rows[j][i] = -v;
        }
    }
    AntisymMatrix::from_rational_rows(rows).unwrap()
}

/// Pfaffians: Pf^2 = det on 200 random matrices through size 10, the
/// recursive and Berezin routes agree through size 8, odd sizes vanish.
pub fn criterion_3_pfaffian(seed: u64) -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x50FA);
    for trial in 0..200usize {
        let n = 2 + trial % 9; // sizes 2..=10
        let m = random_antisym(&mut rng, n);
        let pf = pfaffian(&m).unwrap();
        c.expect(&pf * &pf == determinant(&m), || {
            format!("Pf^2 != det at trial {} (n = {})", trial, n)
        });
        if n % 2 == 1 {
            c.expect(pf.is_zero(), || format!("odd size {} gave Pf != 0", n));
        }
        if n <= 8 {
            let ber = pfaffian_berezin(&m).unwrap();
            c.expect(pf == ber, || {
                format!("recursive != Berezin at trial {} (n = {})", trial, n)
            });
        }
    }
    c.finish(
        "pfaffian",
        started,
        Duration::from_secs(5),
        "200 random matrices: Pf^2 = det, routes agree, odd sizes vanish".into(),
    )
}

fn a1_point(theta: f64) -> Vec<f64> {
    vec![theta, -theta]
}

fn random_regular_a2(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let rs = build_root_system(Family::A, 2).unwrap();
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

/// Characters match the multiplicity oracle within 1e-9 and singular limits
/// give the dimensions.
pub fn criterion_4_characters(seed: u64) -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC4A8);
    let rs1 = build_root_system(Family::A, 1).unwrap();
    for n in 0..=10u64 {
        let d = DominantWeight::from_coeffs(&rs1, &[n]).unwrap();
        for _ in 0..20 {
            let x = a1_point(rng.gen_range(0.2..1.5));
            let a = weyl_character_eval(&d, &x).unwrap();
            let b = character_oracle(&d, &x).unwrap();
            c.expect((a - b).norm() < 1e-9, || {
                format!("A1 n = {}: |formula - oracle| = {:.2e}", n, (a - b).norm())
            });
        }
        let dim = weyl_character_eval(&d, &a1_point(1e-9)).unwrap();
        c.expect((dim.re - (n + 1) as f64).abs() < 1e-9, || {
            format!("A1 n = {}: dimension limit {} != {}", n, dim.re, n + 1)
        });
    }
    let rs2 = build_root_system(Family::A, 2).unwrap();
    for (coeffs, dim) in [(vec![1u64, 0], 3.0), (vec![1, 1], 8.0)] {
        let d = DominantWeight::from_coeffs(&rs2, &coeffs).unwrap();
        for _ in 0..20 {
            let x = random_regular_a2(&mut rng);
            let a = weyl_character_eval(&d, &x).unwrap();
            let b = character_oracle(&d, &x).unwrap();
            c.expect((a - b).norm() < 1e-9, || {
                format!(
                    "A2 {:?}: |formula - oracle| = {:.2e}",
                    coeffs,
                    (a - b).norm()
                )
            });
        }
        let v = weyl_character_eval(&d, &[1e-9, 2e-9, -3e-9]).unwrap();
        c.expect((v.re - dim).abs() < 1e-9, || {
            format!("A2 {:?}: dimension limit {} != {}", coeffs, v.re, dim)
        });
    }
    c.finish(
        "characters",
        started,
        Duration::from_secs(5),
        "formula = oracle at 20 points per weight; dimension limits exact".into(),
    )
}

/// The orbit identity holds structurally and numerically.
pub fn criterion_5_orbit_identity(seed: u64) -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157);
    let rs1 = build_root_system(Family::A, 1).unwrap();
    for n in 0..=5u64 {
        let d = DominantWeight::from_coeffs(&rs1, &[n]).unwrap();
        let report = kirillov_identity_check(&d).unwrap();
        c.expect(report.equal, || {
            format!("A1 n = {}: structural mismatch", n)
        });
        for _ in 0..20 {
            let x = a1_point(rng.gen_range(0.2..1.5));
            let l = report.lhs.eval(&x).unwrap();
            let r = report.rhs.eval(&x).unwrap();
            c.expect((l - r).norm() < 1e-9, || {
                format!("A1 n = {}: numeric gap {:.2e}", n, (l - r).norm())
            });
        }
    }
    let rs2 = build_root_system(Family::A, 2).unwrap();
    for coeffs in [vec![1u64, 0], vec![1, 1]] {
        let d = DominantWeight::from_coeffs(&rs2, &coeffs).unwrap();
        let report = kirillov_identity_check(&d).unwrap();
        c.expect(report.equal, || {
            format!("A2 {:?}: structural mismatch", coeffs)
        });
        for _ in 0..20 {
            let x = random_regular_a2(&mut rng);
            let l = report.lhs.eval(&x).unwrap();
            let r = report.rhs.eval(&x).unwrap();
            c.expect((l - r).norm() < 1e-9, || {
                format!("A2 {:?}: numeric gap {:.2e}", coeffs, (l - r).norm())
            });
        }
    }
    c.finish(
        "orbit-identity",
        started,
        Duration::from_secs(10),
        "structural equality plus numeric agreement at 20 points per weight".into(),
    )
}

/// Localized polynomial classes are polynomial; a flipped orientation is
/// caught with a witness.
pub fn criterion_6_polynomiality() -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    for (name, m) in [
        ("sphere", models::s2()),
        ("projective-plane", models::cp2()),
    ] {
        for k in 0..=5u32 {
            let bare = localization_sum(&m, &IntegrandSpec::SymPower(k)).unwrap();
            c.expect(
                matches!(polynomiality_check(&bare), Polynomiality::Polynomial(_)),
                || format!("{} sympower {}: not polynomial", name, k),
            );
        }
    }
    let flipped = models::cp2_sign_flipped();
    let bare = localization_sum(&flipped, &IntegrandSpec::SymPower(0)).unwrap();
    c.expect(
        matches!(
            polynomiality_check(&bare),
            Polynomiality::NotPolynomial { .. }
        ),
        || "flipped sign not caught".into(),
    );
    c.finish(
        "polynomiality",
        started,
        Duration::from_secs(2),
        "sympowers through 5 polynomial; flipped sign yields a witness".into(),
    )
}

/// Moment-graph dimensions match the closed forms and the rank check
/// recovers the vertex count.
pub fn criterion_7_moment_graph() -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let s2_l1 = models::gkm_s2(1);
    for k in 0..=10u32 {
        let expect = if k == 0 { 1 } else { 2 };
        let got = gkm::graded_dimension(&s2_l1, k).unwrap();
        c.expect(got == expect, || {
            format!("sphere l=1 k={}: {} != {}", k, got, expect)
        });
    }
    let s2_l2 = models::gkm_s2(2);
    for k in 0..=10u32 {
        // 2 dim C[x1,x2]^k - dim C[h]^k
        let expect = 2 * (k as usize + 1) - 1;
        let got = gkm::graded_dimension(&s2_l2, k).unwrap();
        c.expect(got == expect, || {
            format!("sphere l=2 k={}: {} != {}", k, got, expect)
        });
    }
    let cp2 = models::gkm_cp2();
    for k in 0..=10u32 {
        let dim2 = |d: i64| if d >= 0 { (d + 1) as usize } else { 0 };
        let expect = dim2(k as i64) + dim2(k as i64 - 1) + dim2(k as i64 - 2);
        let got = gkm::graded_dimension(&cp2, k).unwrap();
        c.expect(got == expect, || {
            format!("cp2 k={}: {} != {}", k, got, expect)
        });
    }
    let report = gkm::poincare_rank_check(&cp2, 8).unwrap();
    c.expect(report.formal, || "cp2 rank check not formal".into());
    c.expect(report.series[..4] == [1, 1, 1, 0], || {
        format!("cp2 series {:?}", &report.series[..4])
    });
    c.expect(report.rank == 3, || {
        format!("cp2 rank {} != 3", report.rank)
    });
    c.finish(
        "moment-graph",
        started,
        Duration::from_secs(5),
        "dimension sequences exact; Poincare polynomial 1 + q + q^2, rank 3".into(),
    )
}

/// The sphere pushforward density: exactly 2 pi on [-1, 1], mass 4 pi,
/// transform matching, histogram agreement per interior bin.
pub fn criterion_8_pushforward_density() -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let m = models::s2();
    let d = dh_density(&m).unwrap();
    c.expect(d.breakpoints() == [rat(-1), rat(1)], || {
        format!("support {:?}", d.breakpoints())
    });
    let two_pi = PiScalar::new(GaussRat::from_int(2), 1);
    c.expect(
        d.pieces().len() == 1 && d.pieces()[0].coeffs() == [two_pi],
        || format!("density {:?}", d.pieces()),
    );
    c.expect(
        d.total_mass() == PiScalar::new(GaussRat::from_int(4), 1),
        || format!("mass {}", d.total_mass()),
    );
    let err = density_fourier_check(&d, &m, &[0.5, 1.0, 2.0, 5.0]).unwrap();
    c.expect(err < 1e-8, || format!("transform gap {:.3e}", err));
    let grid = QuadratureGrid::new(2048, 8);
    let hist = pushforward_histogram(|_, _, z| z, &grid, 20);
    for i in 1..hist.density.len() - 1 {
        let exact = d.eval_f64(hist.bin_center(i));
        let rel = (hist.density[i] - exact).abs() / exact;
        c.expect(rel < 0.02, || {
            format!("bin {}: histogram off by {:.2}%", i, rel * 100.0)
        });
    }
    c.finish(
        "pushforward-density",
        started,
        Duration::from_secs(2),
        "constant 2*pi on [-1,1], mass 4*pi, transform and histogram agree".into(),
    )
}

/// The per-module property suites.
pub fn criterion_9_properties(seed: u64) -> CheckOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9999);

    // divide / restrict duality on random small instances
    for _ in 0..150 {
        let rank = rng.gen_range(1..=3usize);
        let w = loop {
            let coords: Vec<_> = (0..rank).map(|_| rat(rng.gen_range(-3..=3i64))).collect();
            let w = Weight::real(coords);
            if !w.is_zero() {
                break w;
            }
        };
        let mut p = MultiPoly::zero(rank);
        for _ in 0..rng.gen_range(1..=4usize) {
            let m = Monomial((0..rank).map(|_| rng.gen_range(0..=2u32)).collect());
            p = p.add(&MultiPoly::monomial(
                rank,
                m,
                PiScalar::from_int(rng.gen_range(-4..=4i64)),
            ));
        }
        let pw = p.mul(&MultiPoly::from_weight(&w));
        c.expect(pw.divide_by_linear(&w).unwrap() == p, || {
            "division round trip failed".into()
        });
        let dual = p.restrict_to_kernel(&w).unwrap().is_zero() == p.divide_by_linear(&w).is_ok();
        c.expect(dual, || "restriction/divisibility duality failed".into());
    }

    // Weyl group orders match the closed forms
    let orders: &[(Family, usize, usize)] = &[
        (Family::A, 1, 2),
        (Family::A, 2, 6),
        (Family::A, 3, 24),
        (Family::A, 4, 120),
        (Family::B, 2, 8),
        (Family::B, 3, 48),
        (Family::B, 4, 384),
        (Family::C, 2, 8),
        (Family::C, 4, 384),
        (Family::D, 3, 24),
        (Family::D, 4, 192),
    ];
    for &(fam, rank, expect) in orders {
        let rs = build_root_system(fam, rank).unwrap();
        let group = weyl_group(&rs).unwrap();
        c.expect(group.len() == expect, || {
            format!("|W({}{})| = {} != {}", fam, rank, group.len(), expect)
        });
        let balance: i64 = group.iter().map(|w| w.epsilon() as i64).sum();
        c.expect(balance == 0, || format!("{}{} signs unbalanced", fam, rank));
    }

    // sign multiplicativity, exhaustive for small groups
    for (fam, rank) in [(Family::A, 2), (Family::B, 2)] {
        let rs = build_root_system(fam, rank).unwrap();
        let group = weyl_group(&rs).unwrap();
        for w1 in &group {
            for w2 in &group {
                let composed = group
                    .iter()
                    .find(|w| {
                        // compare by action on a generic rational point
                        let probe: Vec<_> =
                            (1..=rs.ambient_dim() as i64).map(|k| ratio(k, 7)).collect();
                        w.apply_point(&probe) == w1.apply_point(&w2.apply_point(&probe))
                    })
                    .expect("closure");
                c.expect(composed.epsilon() == w1.epsilon() * w2.epsilon(), || {
                    "sign not multiplicative".into()
                });
            }
        }
    }

    // homogeneity of the fixed-point denominator under weight scaling
    {
        let m = models::cp2();
        let x = [0.41, 0.73];
        let term = |weights_scale: i64| -> Complex64 {
            let p = &m.points()[1];
            let scaled = crate::localize::FixedPoint {
                id: p.id.clone(),
                mu: p.mu.clone(),
                weights: p
                    .weights
                    .iter()
                    .map(|w| w.scale(&GaussRat::from_int(weights_scale)))
                    .collect(),
                sign: p.sign,
            };
            let model =
                crate::localize::FixedPointModel::new(m.dim(), m.rank(), vec![scaled]).unwrap();
            dh_localize(&model).unwrap().eval(&x).unwrap()
        };
        let base = term(1);
        for s in [2i64, 3, -5] {
            let scaled = term(s);
            let expect = base * (s as f64).powi(-((m.dim() / 2) as i32));
            c.expect((scaled - expect).norm() < 1e-9, || {
                format!("homogeneity failed at scale {}", s)
            });
        }
    }

    // the positive system attached to a shifted dominant weight is the
    // positive system
    for (fam, rank, coeffs) in [
        (Family::A, 1, vec![3u64]),
        (Family::A, 2, vec![1, 0]),
        (Family::A, 2, vec![1, 1]),
        (Family::B, 2, vec![1, 1]),
    ] {
        let rs = build_root_system(fam, rank).unwrap();
        let d = DominantWeight::from_coeffs(&rs, &coeffs).unwrap();
        let nu = d.weight().add(&rs.rho()).div_i();
        let plus: std::collections::BTreeSet<Weight> = phi_plus_nu(&rs, &nu).into_iter().collect();
        let expect: std::collections::BTreeSet<Weight> =
            rs.positive_roots().iter().cloned().collect();
        c.expect(plus == expect, || {
            format!("{}{} {:?}: positive system mismatch", fam, rank, coeffs)
        });
    }

    // moment-graph invariances: edge sign flips and simultaneous coordinate
    // changes
    {
        let g = models::gkm_cp2();
        let flipped = gkm::GkmGraph::new(
            2,
            g.vertices().to_vec(),
            g.edges()
                .iter()
                .map(|e| gkm::GkmEdge {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    alpha: e.alpha.neg(),
                })
                .collect(),
        )
        .unwrap();
        let transform = |w: &Weight| -> Weight {
            let p = w.real_parts();
            Weight::real(vec![
                &p[0] * rat(1) + &p[1] * rat(2),
                &p[0] * rat(1) + &p[1] * rat(3),
            ])
        };
        let moved = gkm::GkmGraph::new(
            2,
            g.vertices().to_vec(),
            g.edges()
                .iter()
                .map(|e| gkm::GkmEdge {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    alpha: transform(&e.alpha),
                })
                .collect(),
        )
        .unwrap();
        for k in 0..=6u32 {
            let base = gkm::graded_dimension(&g, k).unwrap();
            c.expect(gkm::graded_dimension(&flipped, k).unwrap() == base, || {
                format!("sign-flip changed dimension at k = {}", k)
            });
            c.expect(gkm::graded_dimension(&moved, k).unwrap() == base, || {
                format!("coordinate change altered dimension at k = {}", k)
            });
        }
    }

    // normalized rational functions stay normalized
    {
        let r = RationalFn::new(
            MultiPoly::var(2, 0).mul(&MultiPoly::var(2, 0)),
            vec![
                (Weight::real(vec![rat(1), rat(0)]), 1),
                (Weight::real(vec![rat(1), rat(-1)]), 1),
            ],
            PiScalar::from_int(3),
        );
        let renorm = RationalFn::new(
            r.num().clone(),
            r.den_factors().to_vec(),
            r.den_scalar().clone(),
        );
        c.expect(r == renorm, || "normalize not idempotent".into());
    }

    // structural equality implies numeric equality
    {
        let den = RationalFn::reciprocal_product(
            1,
            vec![(Weight::imaginary(vec![rat(2)]), 1)],
            PiScalar::one(),
        );
        let e = |k: i64| ExpRationalSum::exponential(Weight::imaginary(vec![rat(k)]));
        let a = e(2).sub(&e(-2)).mul_rational_fn(&den);
        let b = e(-2).neg().add(&e(2)).mul_rational_fn(&den);
        c.expect(a == b, || "normalization not canonical".into());
        for _ in 0..10 {
            let t: f64 = rng.gen_range(0.1..2.0);
            let gap = (a.eval(&[t]).unwrap() - b.eval(&[t]).unwrap()).norm();
            c.expect(gap < 1e-9, || format!("numeric gap {:.2e}", gap));
        }
    }

    c.finish(
        "property-suites",
        started,
        Duration::from_secs(60),
        "division duality, group orders, signs, homogeneity, positive systems, graph invariances"
            .into(),
    )
}

/// Every check, in criterion order.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        criterion_1_sphere_localization(),
        criterion_2_stationary_phase(),
        criterion_3_pfaffian(seed),
        criterion_4_characters(seed),
        criterion_5_orbit_identity(seed),
        criterion_6_polynomiality(),
        criterion_7_moment_graph(),
        criterion_8_pushforward_density(),
        criterion_9_properties(seed),
    ]
}
