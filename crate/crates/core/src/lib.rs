//! Exact computations in tautological rings of bundles with fiber
//! `M_g^{2d} = #_g (S^d x S^d)`, `d` odd.
//!
//! The crate is generic over the coefficient field through [`Scalar`]; the
//! aliases below fix it to arbitrary-precision rationals, which is what every
//! relation computation uses.

pub mod charclass;
pub mod error;
pub mod expr;
pub mod json;
pub mod kappa_poly;
pub mod pushforward;
pub mod random;
pub mod relgen;
pub mod scalar;
pub mod store;
pub mod table;
pub mod tautmono;
pub mod verify;

pub use charclass::{BasisKind, CharClassMonomial, Generator, RingParams};
pub use error::{Error, Result};
pub use kappa_poly::{KappaMonomial, KappaPolynomial};
pub use scalar::Scalar;
pub use tautmono::{Point, PointSet, TautClass, TautMonomial};

/// Exact rationals.
pub type Q = num_rational::BigRational;
/// Tautological classes with rational coefficients.
pub type TautClassQ = TautClass<Q>;
/// Kappa polynomials with rational coefficients.
pub type KappaPolyQ = KappaPolynomial<Q>;
