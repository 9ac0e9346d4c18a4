use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;

/// Plain rationals: exact, but only ±1 among the roots of unity.
impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn root_of_unity(order: u64, k: i64) -> Option<Self> {
        let k = k.rem_euclid(order.max(1) as i64) as u64;
        match (order, k) {
            (0, _) => None,
            (_, 0) => Some(Self::one()),
            (o, k) if 2 * k == o => Some(-Self::one()),
            _ => None,
        }
    }

    fn root_of_unity_angle(&self, max_order: u64) -> Option<BigRational> {
        if self.is_one() {
            Some(Self::zero())
        } else if (-self).is_one() && max_order >= 2 {
            Some(BigRational::new(1.into(), 2.into()))
        } else {
            None
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Self::one)
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}
