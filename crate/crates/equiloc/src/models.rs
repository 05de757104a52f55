//! Shipped fixed-point models and moment graphs used by the CLI examples,
//! the verification suite and the tests.

use crate::gkm::{GkmEdge, GkmGraph};
use crate::localize::{FixedPoint, FixedPointModel};
use crate::scalar::rat;
use crate::weight::Weight;

/// The unit sphere with the circle rotating about the z-axis: two fixed
/// points with moment values +-1, unit isotropy weight, and signs chosen so
/// det^{1/2} is -t at the north pole and +t at the south pole.
pub fn s2() -> FixedPointModel {
    FixedPointModel::new(
        2,
        1,
        vec![
            FixedPoint {
                id: "north".into(),
                mu: Weight::real(vec![rat(1)]),
                weights: vec![Weight::imaginary(vec![rat(1)])],
                sign: -1,
            },
            FixedPoint {
                id: "south".into(),
                mu: Weight::real(vec![rat(-1)]),
                weights: vec![Weight::imaginary(vec![rat(1)])],
                sign: 1,
            },
        ],
    )
    .expect("valid model")
}

/// The sphere rotated at double speed: isotropy weights +-2, same moment
/// interval. The pushforward density halves.
pub fn s2_weight2() -> FixedPointModel {
    FixedPointModel::new(
        2,
        1,
        vec![
            FixedPoint {
                id: "north".into(),
                mu: Weight::real(vec![rat(1)]),
                weights: vec![Weight::imaginary(vec![rat(2)])],
                sign: -1,
            },
            FixedPoint {
                id: "south".into(),
                mu: Weight::real(vec![rat(-1)]),
                weights: vec![Weight::imaginary(vec![rat(2)])],
                sign: 1,
            },
        ],
    )
    .expect("valid model")
}

/// Standard toric projective plane: moment vertices (0,0), (1,0), (0,1) with
/// the usual isotropy weights.
pub fn cp2() -> FixedPointModel {
    FixedPointModel::new(
        4,
        2,
        vec![
            FixedPoint {
                id: "p1".into(),
                mu: Weight::real(vec![rat(0), rat(0)]),
                weights: vec![
                    Weight::imaginary(vec![rat(1), rat(0)]),
                    Weight::imaginary(vec![rat(0), rat(1)]),
                ],
                sign: 1,
            },
            FixedPoint {
                id: "p2".into(),
                mu: Weight::real(vec![rat(1), rat(0)]),
                weights: vec![
                    Weight::imaginary(vec![rat(-1), rat(0)]),
                    Weight::imaginary(vec![rat(-1), rat(1)]),
                ],
                sign: 1,
            },
            FixedPoint {
                id: "p3".into(),
                mu: Weight::real(vec![rat(0), rat(1)]),
                weights: vec![
                    Weight::imaginary(vec![rat(0), rat(-1)]),
                    Weight::imaginary(vec![rat(1), rat(-1)]),
                ],
                sign: 1,
            },
        ],
    )
    .expect("valid model")
}

/// The projective plane with one orientation sign deliberately flipped;
/// localization sums over it fail polynomiality. Negative control.
pub fn cp2_sign_flipped() -> FixedPointModel {
    let base = cp2();
    let points: Vec<FixedPoint> = base
        .points()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            if p.id == "p2" {
                p.sign = -p.sign;
            }
            p
        })
        .collect();
    FixedPointModel::new(base.dim(), base.rank(), points).expect("valid model")
}

/// Two fixed points joined by one edge labeled e1, over a torus of the given
/// rank: the moment graph of the rotating sphere.
pub fn gkm_s2(rank: usize) -> GkmGraph {
    let mut alpha = vec![rat(0); rank];
    alpha[0] = rat(1);
    GkmGraph::new(
        rank,
        vec!["north".into(), "south".into()],
        vec![GkmEdge {
            u: "north".into(),
            v: "south".into(),
            alpha: Weight::real(alpha),
        }],
    )
    .expect("valid graph")
}

/// The triangle moment graph of the toric projective plane.
pub fn gkm_cp2() -> GkmGraph {
    GkmGraph::new(
        2,
        vec!["p1".into(), "p2".into(), "p3".into()],
        vec![
            GkmEdge {
                u: "p1".into(),
                v: "p2".into(),
                alpha: Weight::real(vec![rat(1), rat(0)]),
            },
            GkmEdge {
                u: "p1".into(),
                v: "p3".into(),
                alpha: Weight::real(vec![rat(0), rat(1)]),
            },
            GkmEdge {
                u: "p2".into(),
                v: "p3".into(),
                alpha: Weight::real(vec![rat(1), rat(-1)]),
            },
        ],
    )
    .expect("valid graph")
}

/// A single vertex with no edges: the free module of rank one.
pub fn gkm_point(rank: usize) -> GkmGraph {
    GkmGraph::new(rank, vec!["pt".into()], vec![]).expect("valid graph")
}
