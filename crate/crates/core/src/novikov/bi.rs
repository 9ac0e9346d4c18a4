use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Coefficient, NovikovSeries, SeriesMode, Valuation};
use crate::scalar::Scalar;

type Q = BigRational;

/// The default cone parameter ε = 1/100.
pub fn default_epsilon() -> Q {
    Q::new(1.into(), 100.into())
}

/// The exponent of `q^rho r^eta`: `rho` is base energy, `eta` vertical energy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiExponent {
    pub rho: Q,
    pub eta: Q,
}

impl BiExponent {
    pub fn new(rho: Q, eta: Q) -> Self {
        Self { rho, eta }
    }

    pub fn total(&self) -> Q {
        &self.rho + &self.eta
    }

    fn in_cone(&self, epsilon: &Q) -> bool {
        !self.rho.is_negative() && !((Q::one() - epsilon) * &self.rho + &self.eta).is_negative()
    }
}

impl Add for &BiExponent {
    type Output = BiExponent;
    fn add(self, rhs: &BiExponent) -> BiExponent {
        BiExponent::new(&self.rho + &rhs.rho, &self.eta + &rhs.eta)
    }
}

/// An element of the two-variable ring Λ², truncated on total degree.
///
/// Every stored exponent satisfies `ρ ≥ 0` and `(1−ε)ρ + η ≥ 0`, so vertical
/// energy may be negative but is dominated by base energy. The cone is closed
/// under addition, so products never leave it.
#[derive(Clone, PartialEq)]
pub struct BiNovikovSeries<C> {
    terms: Vec<(BiExponent, C)>,
    cutoff: Q,
    epsilon: Q,
}

impl<C: Scalar> BiNovikovSeries<C> {
    pub fn zero(cutoff: Q, epsilon: Q) -> Result<Self, AlgebraError> {
        Self::from_terms(std::iter::empty(), cutoff, epsilon)
    }

    pub fn one(cutoff: Q, epsilon: Q) -> Result<Self, AlgebraError> {
        Self::monomial(C::one(), BiExponent::new(Q::zero(), Q::zero()), cutoff, epsilon)
    }

    pub fn monomial(c: C, e: BiExponent, cutoff: Q, epsilon: Q) -> Result<Self, AlgebraError> {
        Self::from_terms([(e, c)], cutoff, epsilon)
    }

    pub fn from_terms<I>(terms: I, cutoff: Q, epsilon: Q) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (BiExponent, C)>,
    {
        if !epsilon.is_positive() || epsilon >= Q::one() {
            return Err(AlgebraError::InvalidEpsilon(epsilon));
        }
        let mut acc: BTreeMap<BiExponent, C> = BTreeMap::new();
        for (e, c) in terms {
            if !e.in_cone(&epsilon) {
                return Err(AlgebraError::OutsideCone {
                    rho: Box::new(e.rho),
                    eta: Box::new(e.eta),
                    epsilon: Box::new(epsilon),
                });
            }
            if e.total() >= cutoff {
                continue;
            }
            match acc.get_mut(&e) {
                Some(v) => *v = v.clone() + c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Ok(Self::from_map(acc, cutoff, epsilon))
    }

    fn from_map(acc: BTreeMap<BiExponent, C>, cutoff: Q, epsilon: Q) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { terms, cutoff, epsilon }
    }

    pub fn terms(&self) -> &[(BiExponent, C)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Q {
        &self.cutoff
    }

    pub fn epsilon(&self) -> &Q {
        &self.epsilon
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimal total degree `ρ + η`.
    pub fn valuation(&self) -> Valuation {
        self.terms.iter().map(|(e, _)| e.total()).min().map_or(Valuation::Infinite, Valuation::Finite)
    }

    pub fn constant_term(&self) -> C {
        self.terms.iter().find(|(e, _)| e.rho.is_zero() && e.eta.is_zero()).map_or_else(C::zero, |(_, c)| c.clone())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.cutoff != other.cutoff {
            return Err(AlgebraError::Mismatch("cutoff"));
        }
        if self.epsilon != other.epsilon {
            return Err(AlgebraError::Mismatch("epsilon"));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut acc: BTreeMap<BiExponent, C> = self.terms.iter().cloned().collect();
        for (e, c) in &other.terms {
            match acc.get_mut(e) {
                Some(v) => *v = v.clone() + c.clone(),
                None => {
                    acc.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Self::from_map(acc, self.cutoff.clone(), self.epsilon.clone()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut acc: BTreeMap<BiExponent, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e.total() >= self.cutoff {
                    continue;
                }
                let p = ca.clone() * cb.clone();
                match acc.get_mut(&e) {
                    Some(v) => *v = v.clone() + p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        Ok(Self::from_map(acc, self.cutoff.clone(), self.epsilon.clone()))
    }

    pub fn scale(&self, s: &C) -> Self {
        let terms =
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())).filter(|(_, c)| !c.is_zero()).collect();
        Self { terms, cutoff: self.cutoff.clone(), epsilon: self.epsilon.clone() }
    }

    /// `exp(p) = exp(c₀)·Σ (p − c₀)ⁿ/n!`; the sum terminates because every
    /// non-constant term of the cone has positive total degree.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        let c0 = self.constant_term();
        let e0 = c0.exp().ok_or_else(|| AlgebraError::TranscendentalConstant(c0.to_string()))?;
        let tail = Self {
            terms: self.terms.iter().filter(|(e, _)| !(e.rho.is_zero() && e.eta.is_zero())).cloned().collect(),
            cutoff: self.cutoff.clone(),
            epsilon: self.epsilon.clone(),
        };
        let mut sum = Self::one(self.cutoff.clone(), self.epsilon.clone())?;
        let mut power = sum.clone();
        let mut n: i64 = 1;
        loop {
            power = (&power * &tail).scale(&C::from_rational(&Q::new(1.into(), n.into())));
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
            n += 1;
        }
        Ok(sum.scale(&e0))
    }

    /// The ring map Λ² → Λ_t sending `q^ρ r^η ↦ t^{ρ+η}`.
    pub fn collapse(&self) -> NovikovSeries<C> {
        NovikovSeries::from_terms(
            self.terms.iter().map(|(e, c)| (e.total(), c.clone())),
            self.cutoff.clone(),
            SeriesMode::Ring,
        )
        .expect("cone exponents have non-negative total degree")
    }
}

impl<C: Scalar> fmt::Debug for BiNovikovSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [total degree < {}, eps {}]", self.cutoff, self.epsilon)
    }
}

impl<C: Scalar> fmt::Display for BiNovikovSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})*q^{}*r^{}", e.rho, e.eta)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Scalar> Add<&BiNovikovSeries<C>> for &BiNovikovSeries<C> {
    type Output = BiNovikovSeries<C>;
    fn add(self, rhs: &BiNovikovSeries<C>) -> BiNovikovSeries<C> {
        self.checked_add(rhs).expect("series arithmetic on mismatched truncation")
    }
}

impl<C: Scalar> Sub<&BiNovikovSeries<C>> for &BiNovikovSeries<C> {
    type Output = BiNovikovSeries<C>;
    fn sub(self, rhs: &BiNovikovSeries<C>) -> BiNovikovSeries<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Mul<&BiNovikovSeries<C>> for &BiNovikovSeries<C> {
    type Output = BiNovikovSeries<C>;
    fn mul(self, rhs: &BiNovikovSeries<C>) -> BiNovikovSeries<C> {
        self.checked_mul(rhs).expect("series arithmetic on mismatched truncation")
    }
}

impl<C: Scalar> Neg for &BiNovikovSeries<C> {
    type Output = BiNovikovSeries<C>;
    fn neg(self) -> BiNovikovSeries<C> {
        self.scale(&-C::one())
    }
}

impl<C: Scalar> Coefficient for BiNovikovSeries<C> {
    type Scalar = C;

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, s: &C) -> Self {
        self.scale(s)
    }
    fn zero_like(&self) -> Self {
        Self { terms: Vec::new(), cutoff: self.cutoff.clone(), epsilon: self.epsilon.clone() }
    }
    fn one_like(&self) -> Self {
        Self::one(self.cutoff.clone(), self.epsilon.clone()).expect("epsilon already validated")
    }
    fn has_degree(&self, base: &Q, vertical: &Q) -> bool {
        self.terms.iter().any(|(e, _)| &e.rho == base && &e.eta == vertical)
    }
    fn total_valuation(&self) -> Valuation {
        self.valuation()
    }
}
