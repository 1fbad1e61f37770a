//! Splittings of the hyperbolic tilings `{p,q}`: splitting matrices and
//! polynomials, Pisot verdicts, spanning trees, numeration systems,
//! Poincaré disc geometry and the `{4,5}` dual vertex numbering.

pub mod bigjson;
pub mod cli;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod numeration;
pub mod polynomial;
pub mod schlafli;
pub mod spectral;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use polynomial::SplittingPolynomial;
pub use schlafli::{
    build_system, characteristic_polynomial, splitting_matrix, validate, IntegerMatrix, RegionKind,
    Scheme, SchlafliPair, SplittingRule, SplittingSystem,
};
