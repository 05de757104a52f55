//! Moment-graph cohomology.
//!
//! A labeled graph with torus-fixed points as vertices and invariant
//! two-spheres as edges; equivariant classes are polynomial assignments to
//! the vertices whose differences along each edge restrict to zero on the
//! kernel of the edge weight. Dimensions of the graded pieces come out of an
//! exact linear solve: the restriction of a monomial to a rational kernel
//! basis is linear in its coefficients.

use crate::linalg;
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{parse_rational, rat, Rational};
use crate::weight::{proportional, Weight};
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;

/// Basis-size cap for graded dimensions.
pub const MAX_GRADED_DEGREE: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GkmError {
    UnknownVertex { id: String },
    SelfLoop { id: String },
    RankMismatch { edge: usize },
    ZeroEdgeWeight { edge: usize },
    MissingAssignment { id: String },
    DegreeTooLarge { requested: u32 },
    WindowTooSmall { minimum: usize },
    BadRational { text: String },
    DuplicateVertex { id: String },
}

impl fmt::Display for GkmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GkmError::UnknownVertex { id } => write!(f, "unknown vertex '{}'", id),
            GkmError::SelfLoop { id } => write!(f, "self loop at '{}'", id),
            GkmError::RankMismatch { edge } => write!(f, "edge {} has wrong rank", edge),
            GkmError::ZeroEdgeWeight { edge } => write!(f, "edge {} has zero weight", edge),
            GkmError::MissingAssignment { id } => {
                write!(f, "assignment misses vertex '{}'", id)
            }
            GkmError::DegreeTooLarge { requested } => {
                write!(f, "degree {} exceeds cap {}", requested, MAX_GRADED_DEGREE)
            }
            GkmError::WindowTooSmall { minimum } => {
                write!(f, "series window must reach at least {}", minimum)
            }
            GkmError::BadRational { text } => write!(f, "cannot parse rational '{}'", text),
            GkmError::DuplicateVertex { id } => write!(f, "duplicate vertex '{}'", id),
        }
    }
}

impl std::error::Error for GkmError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmEdge {
    pub u: String,
    pub v: String,
    /// Edge weight, real-type, defined up to sign and scale.
    pub alpha: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<GkmEdge>,
}

impl GkmGraph {
    pub fn new(rank: usize, vertices: Vec<String>, edges: Vec<GkmEdge>) -> Result<Self, GkmError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(GkmError::DuplicateVertex { id: v.clone() });
            }
        }
        for (k, e) in edges.iter().enumerate() {
            for end in [&e.u, &e.v] {
                if !seen.contains(end) {
                    return Err(GkmError::UnknownVertex { id: end.clone() });
                }
            }
            if e.u == e.v {
                return Err(GkmError::SelfLoop { id: e.u.clone() });
            }
            if e.alpha.rank() != rank {
                return Err(GkmError::RankMismatch { edge: k });
            }
            if e.alpha.is_zero() {
                return Err(GkmError::ZeroEdgeWeight { edge: k });
            }
        }
        Ok(GkmGraph {
            rank,
            vertices,
            edges,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GkmEdge] {
        &self.edges
    }

    /// Parse the JSON wire format; unknown fields are rejected.
    pub fn from_json_str(text: &str) -> Result<Self, String> {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| e.to_string())?;
        raw.build().map_err(|e| e.to_string())
    }

    /// Normalize an edge weight by its content: primitive integer vector with
    /// positive leading entry.
    fn primitive_alpha(alpha: &Weight) -> Weight {
        let parts = alpha.real_parts();
        let mut num_gcd = num_bigint::BigInt::zero();
        let mut den_lcm = num_bigint::BigInt::one();
        for p in &parts {
            num_gcd = num_integer::Integer::gcd(&num_gcd, p.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, p.denom());
        }
        if num_gcd.is_zero() {
            return alpha.clone();
        }
        let scale = Rational::new(den_lcm, num_gcd);
        let mut scaled: Vec<Rational> = parts.iter().map(|p| p * &scale).collect();
        if let Some(first) = scaled.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                scaled = scaled.into_iter().map(|x| -x).collect();
            }
        }
        Weight::real(scaled)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatLike {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<RawEdge>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: String,
    v: String,
    alpha: Vec<RatLike>,
}

impl RawGraph {
    fn build(&self) -> Result<GkmGraph, GkmError> {
        let edges =
            self.edges
                .iter()
                .map(|e| {
                    let alpha =
                        e.alpha
                            .iter()
                            .map(|r| match r {
                                RatLike::Int(n) => Ok(rat(*n)),
                                RatLike::Str(s) => parse_rational(s)
                                    .ok_or(GkmError::BadRational { text: s.clone() }),
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                    Ok(GkmEdge {
                        u: e.u.clone(),
                        v: e.v.clone(),
                        alpha: Weight::real(alpha),
                    })
                })
                .collect::<Result<Vec<_>, GkmError>>()?;
        GkmGraph::new(self.rank, self.vertices.clone(), edges)
    }
}

// =============================================================================
// Validation
// =============================================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceViolation {
    pub vertex: String,
    pub first: Weight,
    pub second: Weight,
}

/// Check that at each vertex the incident edge weights are pairwise linearly
/// independent; every violating pair is reported.
pub fn validate_graph(g: &GkmGraph) -> Vec<IndependenceViolation> {
    let mut violations = Vec::new();
    for v in &g.vertices {
        let incident: Vec<&Weight> = g
            .edges
            .iter()
            .filter(|e| &e.u == v || &e.v == v)
            .map(|e| &e.alpha)
            .collect();
        for i in 0..incident.len() {
            for j in i + 1..incident.len() {
                if proportional(incident[i], incident[j]) {
                    violations.push(IndependenceViolation {
                        vertex: v.clone(),
                        first: incident[i].clone(),
                        second: incident[j].clone(),
                    });
                }
            }
        }
    }
    violations
}

// =============================================================================
// Classes
// =============================================================================

pub type ClassAssignment = BTreeMap<String, MultiPoly>;

/// True iff for every edge the difference of endpoint polynomials restricts
/// to zero on the kernel of the edge weight (equivalently, the weight divides
/// the difference).
pub fn check_class(g: &GkmGraph, a: &ClassAssignment) -> Result<bool, GkmError> {
    for v in &g.vertices {
        if !a.contains_key(v) {
            return Err(GkmError::MissingAssignment { id: v.clone() });
        }
    }
    for e in &g.edges {
        let diff = a[&e.u].sub(&a[&e.v]);
        let alpha = GkmGraph::primitive_alpha(&e.alpha);
        let restricted = diff
            .restrict_to_kernel(&alpha)
            .expect("edge weights are nonzero");
        if !restricted.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// =============================================================================
// Graded dimensions
// =============================================================================

fn monomials_of_degree(rank: usize, degree: u32) -> Vec<Monomial> {
    fn rec(rank: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == rank {
            prefix.push(degree);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for d in 0..=degree {
            prefix.push(d);
            rec(rank, degree - d, prefix, out);
            prefix.pop();
        }
    }
    if rank == 0 {
        return if degree == 0 {
            vec![Monomial(vec![])]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    rec(rank, degree, &mut Vec::new(), &mut out);
    out
}

/// Dimension over the rationals of the degree-k homogeneous classes.
pub fn graded_dimension(g: &GkmGraph, k: u32) -> Result<usize, GkmError> {
    if k > MAX_GRADED_DEGREE {
        return Err(GkmError::DegreeTooLarge { requested: k });
    }
    let basis = monomials_of_degree(g.rank, k);
    let per_vertex = basis.len();
    let unknowns = per_vertex * g.vertices.len();
    if unknowns == 0 {
        return Ok(0);
    }
    let vertex_index: BTreeMap<&String, usize> =
        g.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let restricted_basis = monomials_of_degree(g.rank.saturating_sub(1), k);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for e in &g.edges {
        let alpha = GkmGraph::primitive_alpha(&e.alpha);
        // restriction of each basis monomial, as a column of coefficients
        let mut restriction_cols: Vec<BTreeMap<Monomial, Rational>> = Vec::new();
        for m in &basis {
            let poly = MultiPoly::monomial(g.rank, m.clone(), crate::scalar::PiScalar::one());
            let restricted = poly
                .restrict_to_kernel(&alpha)
                .expect("edge weights are nonzero");
            let col: BTreeMap<Monomial, Rational> = restricted
                .terms()
                .map(|(mono, c)| {
                    debug_assert_eq!(c.pi_exp(), 0);
                    debug_assert!(c.coeff().is_real());
                    (mono.clone(), c.coeff().re.clone())
                })
                .collect();
            restriction_cols.push(col);
        }
        let ui = vertex_index[&e.u];
        let vi = vertex_index[&e.v];
        for target in &restricted_basis {
            let mut row = vec![Rational::zero(); unknowns];
            let mut nonzero = false;
            for (bi, col) in restriction_cols.iter().enumerate() {
                if let Some(c) = col.get(target) {
                    row[ui * per_vertex + bi] = c.clone();
                    row[vi * per_vertex + bi] = -c.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let rank = linalg::rank_rational(&mut rows);
    Ok(unknowns - rank)
}

// =============================================================================
// Poincare series / rank
// =============================================================================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    /// graded dimensions for k = 0..=kmax
    pub dims: Vec<usize>,
    /// coefficients of (sum dims q^k) * (1 - q)^rank over the same window
    pub series: Vec<i64>,
    /// true when the product truncates to a polynomial with nonnegative
    /// coefficients inside the reliable window
    pub formal: bool,
    /// value of the truncated polynomial at q = 1
    pub rank: i64,
}

/// Multiply the dimension series by (1 - q)^rank and decide freeness: the
/// product must stabilize to zero at least rank+1 steps before the window
/// ends, with nonnegative coefficients throughout. For a free module the
/// value at q = 1 is the rank, which must equal the vertex count.
pub fn poincare_rank_check(g: &GkmGraph, kmax: u32) -> Result<PoincareReport, GkmError> {
    let minimum = g.rank + g.vertices.len();
    if (kmax as usize) < minimum {
        return Err(GkmError::WindowTooSmall { minimum });
    }
    let dims: Vec<usize> = (0..=kmax)
        .map(|k| graded_dimension(g, k))
        .collect::<Result<_, _>>()?;
    // binomial row for (1 - q)^rank
    let l = g.rank;
    let mut binom = vec![0i64; l + 1];
    binom[0] = 1;
    for i in 1..=l {
        binom[i] = binom[i - 1] * ((l - i + 1) as i64) / (i as i64);
    }
    let series: Vec<i64> = (0..=kmax as usize)
        .map(|k| {
            let mut acc = 0i64;
            for (j, b) in binom.iter().enumerate() {
                if j <= k {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc += sign * b * dims[k - j] as i64;
                }
            }
            acc
        })
        .collect();
    let top_nonzero = series.iter().rposition(|&c| c != 0);
    let formal =
        series.iter().all(|&c| c >= 0) && top_nonzero.map_or(true, |d| d + l + 1 <= kmax as usize);
    let rank = series.iter().sum();
    Ok(PoincareReport {
        dims,
        series,
        formal,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::{ratio, PiScalar};

    fn x(rank: usize, i: usize) -> MultiPoly {
        MultiPoly::var(rank, i)
    }

    #[test]
    fn validation_accepts_shipped_graphs() {
        assert!(validate_graph(&models::gkm_s2(1)).is_empty());
        assert!(validate_graph(&models::gkm_s2(2)).is_empty());
        assert!(validate_graph(&models::gkm_cp2()).is_empty());
    }

    #[test]
    fn parallel_edge_weights_violate_independence() {
        let g = GkmGraph::new(
            2,
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                GkmEdge {
                    u: "a".into(),
                    v: "b".into(),
                    alpha: Weight::real(vec![rat(1), rat(0)]),
                },
                GkmEdge {
                    u: "a".into(),
                    v: "c".into(),
                    alpha: Weight::real(vec![rat(2), rat(0)]),
                },
            ],
        )
        .unwrap();
        let violations = validate_graph(&g);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].vertex, "a");
    }

    #[test]
    fn self_loops_rejected() {
        let err = GkmGraph::new(
            1,
            vec!["a".into()],
            vec![GkmEdge {
                u: "a".into(),
                v: "a".into(),
                alpha: Weight::real(vec![rat(1)]),
            }],
        )
        .unwrap_err();
        assert!(matches!(err, GkmError::SelfLoop { .. }));
    }

    #[test]
    fn constant_classes_always_pass() {
        let g = models::gkm_cp2();
        let mut a = ClassAssignment::new();
        for v in g.vertices() {
            a.insert(v.clone(), MultiPoly::constant(2, PiScalar::from_int(7)));
        }
        assert!(check_class(&g, &a).unwrap());
    }

    #[test]
    fn sphere_class_congruence() {
        let g = models::gkm_s2(1);
        // (x1, 0) is a class; (1, 0) is not
        let mut good = ClassAssignment::new();
        good.insert("north".into(), x(1, 0));
        good.insert("south".into(), MultiPoly::zero(1));
        assert!(check_class(&g, &good).unwrap());
        let mut bad = ClassAssignment::new();
        bad.insert("north".into(), MultiPoly::one(1));
        bad.insert("south".into(), MultiPoly::zero(1));
        assert!(!check_class(&g, &bad).unwrap());
    }

    #[test]
    fn euler_class_assignment_is_a_class() {
        // assign each vertex the product of its incident edge weights
        let g = models::gkm_cp2();
        let mut a = ClassAssignment::new();
        for v in g.vertices() {
            let mut p = MultiPoly::one(2);
            for e in g.edges() {
                if &e.u == v || &e.v == v {
                    p = p.mul(&MultiPoly::from_weight(&e.alpha));
                }
            }
            a.insert(v.clone(), p);
        }
        assert!(check_class(&g, &a).unwrap());
    }

    #[test]
    fn missing_vertex_is_error() {
        let g = models::gkm_s2(1);
        let mut a = ClassAssignment::new();
        a.insert("north".into(), MultiPoly::zero(1));
        assert!(matches!(
            check_class(&g, &a),
            Err(GkmError::MissingAssignment { .. })
        ));
    }

    #[test]
    fn sphere_rank1_dimensions() {
        let g = models::gkm_s2(1);
        let dims: Vec<usize> = (0..=6).map(|k| graded_dimension(&g, k).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn sphere_rank2_dimensions_match_closed_form() {
        let g = models::gkm_s2(2);
        for k in 0..=8u32 {
            let expect = if k == 0 { 1 } else { 2 * (k as usize + 1) - 1 };
            assert_eq!(graded_dimension(&g, k).unwrap(), expect, "k = {}", k);
        }
    }

    #[test]
    fn sphere_general_rank_closed_form() {
        // 2 C(k+l-1, l-1) - C(k+l-2, l-2) for the two-point graph at rank l
        let choose = |n: i64, k: i64| -> usize {
            if k < 0 || n < k {
                return 0;
            }
            let mut acc = 1i64;
            for j in 0..k {
                acc = acc * (n - j) / (j + 1);
            }
            acc as usize
        };
        for l in 1..=3usize {
            let g = models::gkm_s2(l);
            for k in 0..=6u32 {
                let k = k as i64;
                let l = l as i64;
                let expect = 2 * choose(k + l - 1, l - 1) - choose(k + l - 2, l - 2);
                // the k = 0, l = 1 corner: constants agree across the edge
                let expect = if k == 0 { 1 } else { expect };
                assert_eq!(
                    graded_dimension(&g, k as u32).unwrap(),
                    expect,
                    "l = {}, k = {}",
                    l,
                    k
                );
            }
        }
    }

    #[test]
    fn cp2_dimensions_match_free_module_count() {
        let g = models::gkm_cp2();
        for k in 0..=8u32 {
            // Betti numbers 1, 1, 1 over two variables
            let dim2 = |d: i64| if d >= 0 { (d + 1) as usize } else { 0 };
            let expect = dim2(k as i64) + dim2(k as i64 - 1) + dim2(k as i64 - 2);
            assert_eq!(graded_dimension(&g, k).unwrap(), expect, "k = {}", k);
        }
    }

    #[test]
    fn edgeless_graph_attains_upper_bound() {
        let g = models::gkm_point(2);
        for k in 0..=5u32 {
            assert_eq!(graded_dimension(&g, k).unwrap(), k as usize + 1);
        }
    }

    #[test]
    fn degree_cap() {
        let g = models::gkm_s2(1);
        assert!(matches!(
            graded_dimension(&g, 13),
            Err(GkmError::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn sign_flip_invariance() {
        let g = models::gkm_cp2();
        let flipped = GkmGraph::new(
            2,
            g.vertices().to_vec(),
            g.edges()
                .iter()
                .map(|e| GkmEdge {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    alpha: e.alpha.neg(),
                })
                .collect(),
        )
        .unwrap();
        for k in 0..=5u32 {
            assert_eq!(
                graded_dimension(&g, k).unwrap(),
                graded_dimension(&flipped, k).unwrap()
            );
        }
    }

    #[test]
    fn coordinate_change_invariance() {
        // apply an invertible rational change of coordinates to all edge
        // weights simultaneously
        let g = models::gkm_cp2();
        let transform = |w: &Weight| -> Weight {
            let p = w.real_parts();
            Weight::real(vec![
                &p[0] * rat(2) + &p[1] * ratio(1, 3),
                &p[0] * rat(1) + &p[1] * rat(1),
            ])
        };
        let moved = GkmGraph::new(
            2,
            g.vertices().to_vec(),
            g.edges()
                .iter()
                .map(|e| GkmEdge {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    alpha: transform(&e.alpha),
                })
                .collect(),
        )
        .unwrap();
        for k in 0..=5u32 {
            assert_eq!(
                graded_dimension(&g, k).unwrap(),
                graded_dimension(&moved, k).unwrap()
            );
        }
    }

    #[test]
    fn poincare_sphere() {
        let g = models::gkm_s2(1);
        let report = poincare_rank_check(&g, 6).unwrap();
        assert!(report.formal);
        assert_eq!(report.series[..3], [1, 1, 0]);
        assert_eq!(report.rank, 2);
    }

    #[test]
    fn poincare_cp2() {
        let g = models::gkm_cp2();
        let report = poincare_rank_check(&g, 8).unwrap();
        assert!(report.formal);
        assert_eq!(report.series[..4], [1, 1, 1, 0]);
        assert_eq!(report.rank, 3);
        assert_eq!(report.rank as usize, g.vertices().len());
    }

    #[test]
    fn poincare_point() {
        let g = models::gkm_point(1);
        let report = poincare_rank_check(&g, 4).unwrap();
        assert!(report.formal);
        assert_eq!(report.rank, 1);
    }

    #[test]
    fn poincare_window_precondition() {
        let g = models::gkm_cp2();
        assert!(matches!(
            poincare_rank_check(&g, 4),
            Err(GkmError::WindowTooSmall { minimum: 5 })
        ));
    }

    #[test]
    fn json_parsing() {
        let text = r#"{
            "rank": 2,
            "vertices": ["p1", "p2", "p3"],
            "edges": [
                {"u": "p1", "v": "p2", "alpha": [1, 0]},
                {"u": "p1", "v": "p3", "alpha": [0, 1]},
                {"u": "p2", "v": "p3", "alpha": [1, "-1"]}
            ]
        }"#;
        let g = GkmGraph::from_json_str(text).unwrap();
        assert_eq!(g, models::gkm_cp2());
        let bad = r#"{"rank": 1, "vertices": ["a"], "edges": [], "color": "red"}"#;
        assert!(GkmGraph::from_json_str(bad).is_err());
    }
}
