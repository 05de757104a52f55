//! Exact equivariant localization toolkit.
//!
//! Computes fixed-point localization sums, compact-group characters, moment
//! graph cohomology dimensions and Duistermaat-Heckman measures in exact
//! arithmetic, with an independent floating-point oracle for verification.

pub mod characters;
pub mod dhmeasure;
pub mod expsum;
pub mod gkm;
pub mod linalg;
pub mod localize;
pub mod models;
pub mod oracle;
pub mod pfaffian;
pub mod poly;
pub mod ratfn;
pub mod rootsys;
pub mod scalar;
pub mod selftest;
pub mod weight;

pub use expsum::ExpRationalSum;
pub use poly::MultiPoly;
pub use ratfn::RationalFn;
pub use rootsys::{Family, RootSystem};
pub use scalar::{GaussRat, PiScalar, Rational};
pub use weight::Weight;
