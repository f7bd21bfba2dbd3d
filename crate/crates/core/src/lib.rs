//! Exact computations with E-derivations and derivations of polynomial rings
//! over cyclotomic fields.

pub mod cli;
pub mod echelon;
pub mod error;
pub mod image;
pub mod maps;
pub mod matrix;
pub mod mzlab;
pub mod normalize;
pub mod polyring;
pub mod scalar;

pub use error::{Error, Result};
pub use maps::{classify, conjugate, Derivation, EDerivation, Endomorphism, Map, MapKind, MapShape, PolyAutomorphism};
pub use matrix::Matrix;
pub use polyring::{parse_polynomial, parse_scalar, Monomial, Polynomial};
pub use scalar::{Conductor, Scalar};
