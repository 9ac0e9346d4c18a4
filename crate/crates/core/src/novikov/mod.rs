//! Truncated Novikov series in one formal variable `t` ([`NovikovSeries`])
//! and in the two variables `q`, `r` ([`BiNovikovSeries`]).
//!
//! Both types are immutable. Truncation is eager: a term whose (total)
//! exponent reaches the cutoff is dropped by every operation, and zero
//! coefficients are never stored.

mod bi;
mod series;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

pub use bi::{default_epsilon, BiExponent, BiNovikovSeries};
pub use series::{NovikovSeries, SeriesMode};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("operands disagree on {0}")]
    Mismatch(&'static str),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("exponent {0} is negative, which ring mode forbids")]
    NegativeExponent(BigRational),
    #[error("term q^{rho} r^{eta} violates the cone condition for epsilon {epsilon}")]
    OutsideCone { rho: Box<BigRational>, eta: Box<BigRational>, epsilon: Box<BigRational> },
    #[error("exp of the nonzero constant {0} does not lie in an exact coefficient field")]
    TranscendentalConstant(String),
    #[error("exp diverges on a series of negative valuation")]
    ExpDiverges,
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(BigRational),
}

/// Order of vanishing of a series; the zero series has infinite valuation.
///
/// The derived ordering puts every finite value below `Infinite`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `self ≥ bound`, with `Infinite` above everything.
    pub fn at_least(&self, bound: &BigRational) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// The interface Laurent potentials need from their coefficient ring.
///
/// The binary operations assume both operands share truncation parameters,
/// which holds for every potential built by this crate; they panic otherwise.
pub trait Coefficient: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync {
    type Scalar: Scalar;

    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, s: &Self::Scalar) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Whether some stored term sits exactly at base degree `base` and
    /// vertical degree `vertical`.
    fn has_degree(&self, base: &BigRational, vertical: &BigRational) -> bool;
    /// Minimal total degree.
    fn total_valuation(&self) -> Valuation;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_order() {
        let a = Valuation::Finite(BigRational::new(1.into(), 3.into()));
        let b = Valuation::Finite(BigRational::from_integer(5.into()));
        assert!(a < b && b < Valuation::Infinite);
        assert!(Valuation::Infinite.at_least(&BigRational::from_integer(100.into())));
        assert_eq!(Valuation::Infinite.to_string(), "+inf");
    }
}
