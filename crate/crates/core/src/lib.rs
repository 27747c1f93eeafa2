//! Exact computation with Artin-Schreier covers of Laurent series fields in
//! characteristic p, their ramification breaks, and toric-style globalization
//! over rational cones.
//!
//! The crate provides, bottom to top:
//!
//! * finite fields F_q of small order with Frobenius, trace, and canonical
//!   coset representatives modulo the image of F - 1 ([`fq`]);
//! * windowed Laurent series over F_q with honest precision bookkeeping
//!   ([`laurent`]);
//! * reduction of Artin-Schreier parameters to a canonical form, break
//!   computation, and cover isomorphism testing ([`artin_schreier`]);
//! * piecewise-linear Herbrand transition functions and break composition
//!   for towers ([`herbrand`]);
//! * arithmetic in a degree-p extension and two-level tower breaks
//!   ([`extension`]);
//! * rational polyhedral cones, duals, and lattice indices ([`cone`]);
//! * multivariate toric data with p-power normalization, diagrams, and
//!   bounded p-limit checks ([`toric`]);
//! * height functionals attached to linear functionals and their
//!   splitting over rays ([`heights`]);
//! * census enumeration of cover classes over lattice boxes ([`census`]);
//! * serde documents for every interface type, rationals as "a/b" strings
//!   ([`json`]).
//!
//! All arithmetic is exact: finite-field coefficients, integer exponents,
//! and `BigRational` values. Floating point is never used.

pub mod artin_schreier;
pub mod census;
pub mod cone;
pub mod error;
pub mod extension;
pub mod fq;
pub mod heights;
pub mod herbrand;
pub mod json;
pub mod laurent;
pub mod rat;
pub mod toric;

pub use error::{Error, Result};
