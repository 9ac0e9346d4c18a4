//! Exact algebra for disk potentials of fibered Lagrangian tori.
//!
//! The crate is generic over the coefficient field through
//! [`scalar::Scalar`]; the aliases below fix the two fields used in practice.

// matrix code reads best with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod fibration;
pub mod laurent;
pub mod linalg;
pub mod novikov;
pub mod scalar;
pub mod solver;
pub mod toric;
pub mod treed;

pub use num_rational::BigRational;

/// Exact coefficients: the cyclotomic field with per-value conductor.
pub type Exact = scalar::Cyclotomic;
/// Exploratory coefficients: complex doubles with a zero threshold.
pub type Float = scalar::ApproxComplex;

pub type ExactSeries = novikov::NovikovSeries<Exact>;
pub type FloatSeries = novikov::NovikovSeries<Float>;
pub type ExactBiSeries = novikov::BiNovikovSeries<Exact>;
pub type FloatBiSeries = novikov::BiNovikovSeries<Float>;
