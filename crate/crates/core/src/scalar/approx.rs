use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{rationalize_angle, Scalar};

/// Values with modulus below this threshold count as zero in float mode.
pub const TAU: f64 = 1e-10;

/// A complex double used for exploratory runs.
///
/// Equality and zero tests are tolerance based, so this type only satisfies
/// the field axioms approximately.
#[derive(Clone, Copy, Default)]
pub struct ApproxComplex(pub Complex64);

impl ApproxComplex {
    pub fn new(re: f64, im: f64) -> Self {
        Self(Complex64::new(re, im))
    }
}

impl PartialEq for ApproxComplex {
    fn eq(&self, other: &Self) -> bool {
        let scale = self.0.norm().max(other.0.norm()).max(1.0);
        (self.0 - other.0).norm() < TAU * scale
    }
}

impl fmt::Debug for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e}{:+e}i)", self.0.re, self.0.im)
    }
}

impl Zero for ApproxComplex {
    fn zero() -> Self {
        Self(Complex64::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.norm() < TAU
    }
}

impl One for ApproxComplex {
    fn one() -> Self {
        Self(Complex64::one())
    }
}

impl Add for ApproxComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for ApproxComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for ApproxComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Neg for ApproxComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Scalar for ApproxComplex {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        Self::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self(self.0.inv()))
    }

    fn root_of_unity(order: u64, k: i64) -> Option<Self> {
        if order == 0 {
            return None;
        }
        let k = k.rem_euclid(order as i64);
        Some(Self(Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / order as f64)))
    }

    fn root_of_unity_angle(&self, max_order: u64) -> Option<BigRational> {
        if (self.0.norm() - 1.0).abs() > 1e-8 {
            return None;
        }
        let theta = self.0.arg() / std::f64::consts::TAU;
        let (k, m) = rationalize_angle(theta, max_order, 1e-9)?;
        Some(super::reduced_angle(k, m))
    }

    fn to_complex(&self) -> Complex64 {
        self.0
    }

    fn exp(&self) -> Option<Self> {
        Some(Self(self.0.exp()))
    }
}
