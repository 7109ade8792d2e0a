//! Exact arithmetic for entwining Yang–Baxter maps obtained by refactorizing
//! binomial matrix polynomials `X − ζA`.

pub mod error;
pub mod lattice;
pub mod leaves;
pub mod matpoly;
pub mod numerics;
pub mod poisson;
pub mod refactor;
pub mod sample;
pub mod suites;
pub mod verify;

pub use error::{Error, Result};
pub use leaves::{EdgeMap, LaxFamily, LeafParams, LeafPoint};
pub use matpoly::{BinomialMatrix, CharPoly, Mat2, MatPoly};
pub use numerics::{Dual, DualScalar, Float, Rational, Scalar};
