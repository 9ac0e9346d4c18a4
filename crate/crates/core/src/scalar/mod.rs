//! Coefficient fields for Novikov series.
//!
//! Every series, potential and solver routine in this crate is generic over
//! [`Scalar`]. Three implementations ship with the crate:
//!
//! * [`Cyclotomic`], exact elements of ℚ(ζ_N) with per-value conductor,
//! * [`BigRational`], plain exact rationals (no roots of unity beyond ±1),
//! * [`ApproxComplex`], complex doubles with a fixed zero threshold [`TAU`].

mod approx;
mod cyclotomic;
mod rational;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use approx::{ApproxComplex, TAU};
pub use cyclotomic::Cyclotomic;

/// A commutative field of coefficients.
///
/// Values are immutable and cheap enough to clone; all arithmetic returns
/// new values. `PartialEq` is exact equality for exact fields and
/// tolerance-based equality for [`ApproxComplex`].
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact (equality decidable).
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// The root of unity `e^{2πi k / order}`, if the field contains it.
    fn root_of_unity(order: u64, k: i64) -> Option<Self>;

    /// If `self = e^{2πiθ}` for a rational `θ` whose denominator is at most
    /// `max_order`, return `θ` reduced into `[0, 1)`.
    fn root_of_unity_angle(&self, max_order: u64) -> Option<BigRational>;

    /// Complex embedding (the one sending ζ_N to `e^{2πi/N}`).
    fn to_complex(&self) -> Complex64;

    /// `exp(self)`, when it lies in the field. Exact fields only contain
    /// `exp(0) = 1`.
    fn exp(&self) -> Option<Self>;

    /// A non-negative size used to choose pivots. Exact fields may return any
    /// positive number for nonzero values.
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Integer power; negative exponents invert.
    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}

/// Reduce `k / n` into `[0, 1)` as a rational.
pub(crate) fn reduced_angle(k: i64, n: u64) -> BigRational {
    let n = n as i64;
    BigRational::new(k.rem_euclid(n).into(), n.into())
}

/// Find `θ = k/m` with `m ≤ max_order` matching a float angle in `[0, 1)`.
pub(crate) fn rationalize_angle(theta: f64, max_order: u64, tol: f64) -> Option<(i64, u64)> {
    let theta = theta.rem_euclid(1.0);
    for m in 1..=max_order {
        let k = (theta * m as f64).round();
        if (theta * m as f64 - k).abs() < tol * m as f64 {
            return Some((k as i64 % m as i64, m));
        }
    }
    None
}
