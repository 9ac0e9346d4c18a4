use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{AlgebraError, Coefficient, Valuation};
use crate::scalar::Scalar;

type Q = BigRational;

/// Whether negative exponents are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesMode {
    /// The ring Λ_t: all exponents are non-negative.
    Ring,
    /// The field of fractions: any rational exponent.
    Field,
}

/// A finite sum `Σ c_i t^{e_i}` known modulo `t^cutoff`.
///
/// Invariants: exponents strictly increasing and below the cutoff, no zero
/// coefficients, and in [`SeriesMode::Ring`] every exponent is `≥ 0`.
#[derive(Clone, PartialEq)]
pub struct NovikovSeries<C> {
    terms: Vec<(Q, C)>,
    cutoff: Q,
    mode: SeriesMode,
}

impl<C: Scalar> NovikovSeries<C> {
    pub fn zero(cutoff: Q, mode: SeriesMode) -> Self {
        Self { terms: Vec::new(), cutoff, mode }
    }

    pub fn one(cutoff: Q, mode: SeriesMode) -> Self {
        Self::constant(C::one(), cutoff, mode)
    }

    pub fn constant(c: C, cutoff: Q, mode: SeriesMode) -> Self {
        let keep = !c.is_zero() && cutoff.is_positive();
        let terms = if keep { vec![(Q::zero(), c)] } else { Vec::new() };
        Self { terms, cutoff, mode }
    }

    /// `c · t^e`.
    pub fn monomial(c: C, e: Q, cutoff: Q, mode: SeriesMode) -> Result<Self, AlgebraError> {
        Self::from_terms([(e, c)], cutoff, mode)
    }

    /// Build from arbitrary terms, merging equal exponents and truncating.
    pub fn from_terms<I>(terms: I, cutoff: Q, mode: SeriesMode) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Q, C)>,
    {
        let mut acc: BTreeMap<Q, C> = BTreeMap::new();
        for (e, c) in terms {
            if mode == SeriesMode::Ring && e.is_negative() {
                return Err(AlgebraError::NegativeExponent(e));
            }
            if e >= cutoff {
                continue;
            }
            match acc.get_mut(&e) {
                Some(v) => *v = v.clone() + c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Ok(Self::from_map(acc, cutoff, mode))
    }

    fn from_map(acc: BTreeMap<Q, C>, cutoff: Q, mode: SeriesMode) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { terms, cutoff, mode }
    }

    pub fn terms(&self) -> &[(Q, C)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Q {
        &self.cutoff
    }

    pub fn mode(&self) -> SeriesMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        self.terms.first().map_or(Valuation::Infinite, |(e, _)| Valuation::Finite(e.clone()))
    }

    pub fn leading_term(&self) -> Option<(&Q, &C)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn coefficient(&self, e: &Q) -> C {
        self.terms.binary_search_by(|(x, _)| x.cmp(e)).map_or_else(|_| C::zero(), |i| self.terms[i].1.clone())
    }

    /// The coefficient of `t^0`, i.e. the reduction mod `t` for ring elements.
    pub fn constant_term(&self) -> C {
        self.coefficient(&Q::zero())
    }

    /// Whether this is a unit of Λ_t: valuation 0 with invertible leading
    /// coefficient.
    pub fn is_unit(&self) -> bool {
        matches!(self.leading_term(), Some((e, c)) if e.is_zero() && c.inv().is_some())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.cutoff != other.cutoff {
            return Err(AlgebraError::Mismatch("cutoff"));
        }
        if self.mode != other.mode {
            return Err(AlgebraError::Mismatch("mode"));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = self.terms[i].1.clone() + other.terms[j].1.clone();
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self { terms: out, cutoff: self.cutoff.clone(), mode: self.mode })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        if self.terms.len() == 1 && self.terms[0].0.is_zero() {
            return Ok(other.scale(&self.terms[0].1));
        }
        if other.terms.len() == 1 && other.terms[0].0.is_zero() {
            return Ok(self.scale(&other.terms[0].1));
        }
        let mut acc: BTreeMap<Q, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= self.cutoff {
                    break;
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
        Ok(Self::from_map(acc, self.cutoff.clone(), self.mode))
    }

    fn neg_ref(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
            cutoff: self.cutoff.clone(),
            mode: self.mode,
        }
    }

    /// Multiply every coefficient by `s`.
    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.cutoff.clone(), self.mode);
        }
        let terms =
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())).filter(|(_, c)| !c.is_zero()).collect();
        Self { terms, cutoff: self.cutoff.clone(), mode: self.mode }
    }

    /// Multiply by `t^s`, keeping the cutoff.
    pub fn shift(&self, s: &Q) -> Result<Self, AlgebraError> {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e + s, c.clone())), self.cutoff.clone(), self.mode)
    }

    /// Change the cutoff. Lowering it drops terms; raising it only relabels
    /// the precision claim, so callers must know the extra terms vanish.
    pub fn with_cutoff(&self, cutoff: Q) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| *e < cutoff).cloned().collect();
        Self { terms, cutoff, mode: self.mode }
    }

    pub fn with_mode(&self, mode: SeriesMode) -> Result<Self, AlgebraError> {
        Self::from_terms(self.terms.iter().cloned(), self.cutoff.clone(), mode)
    }

    /// Two-sided inverse.
    ///
    /// In ring mode the series must be a unit. In field mode any nonzero
    /// series is invertible, but the answer is only determined below
    /// `cutoff − 2·valuation`; terms from there up are left out.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let (v, c) = self.leading_term().ok_or_else(|| AlgebraError::NotAUnit("zero series".into()))?;
        if c.inv().is_none() {
            return Err(AlgebraError::NotAUnit(format!("leading coefficient {c} is not invertible")));
        }
        if self.mode == SeriesMode::Ring && !v.is_zero() {
            return Err(AlgebraError::NotAUnit(format!("valuation {v} is positive")));
        }
        let v = v.clone();
        let inner_cutoff = &self.cutoff - &v;
        let normalized = Self::from_terms(
            self.terms.iter().map(|(e, c)| (e - &v, c.clone())),
            inner_cutoff.clone(),
            SeriesMode::Ring,
        )?;
        let inv = normalized.unit_inverse();
        let back: Vec<(Q, C)> =
            inv.terms.into_iter().map(|(e, c)| (e - &v, c)).filter(|(e, _)| *e < &self.cutoff - &v - &v).collect();
        Self::from_terms(back, self.cutoff.clone(), self.mode)
    }

    /// Newton iteration `x ← x + x(1 − a x)` for a ring-mode unit `a`.
    fn unit_inverse(&self) -> Self {
        let c0 = self.terms[0].1.inv().expect("checked by caller");
        let mut x = Self::constant(c0, self.cutoff.clone(), SeriesMode::Ring);
        let one = Self::one(self.cutoff.clone(), SeriesMode::Ring);
        let Some((gap, _)) = self.terms.get(1) else { return x };
        let mut precision = gap.clone();
        loop {
            let err = &one - &(self * &x);
            x = &x + &(&x * &err);
            precision = &precision + &precision;
            if precision >= self.cutoff {
                return x;
            }
        }
    }

    /// Integer power; negative exponents go through [`invert`](Self::invert).
    pub fn powi(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(self.cutoff.clone(), self.mode);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `exp(p) = Σ pⁿ/n!`.
    ///
    /// The positive-valuation part always converges. A nonzero constant term
    /// contributes the factor `exp(c₀)`, which only the float field can
    /// represent.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if let Some((v, _)) = self.leading_term() {
            if v.is_negative() {
                return Err(AlgebraError::ExpDiverges);
            }
        }
        let c0 = self.constant_term();
        let e0 = c0.exp().ok_or_else(|| AlgebraError::TranscendentalConstant(c0.to_string()))?;
        let tail = Self {
            terms: self.terms.iter().filter(|(e, _)| !e.is_zero()).cloned().collect(),
            cutoff: self.cutoff.clone(),
            mode: self.mode,
        };
        let mut sum = Self::one(self.cutoff.clone(), self.mode);
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
}

impl<C: Scalar> fmt::Debug for NovikovSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [mod t^{}]", self.cutoff)
    }
}

impl<C: Scalar> fmt::Display for NovikovSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| if e.is_zero() { format!("({c})") } else { format!("({c})*t^{e}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

macro_rules! checked_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Scalar> $tr<&NovikovSeries<C>> for &NovikovSeries<C> {
            type Output = NovikovSeries<C>;
            /// Panics when cutoffs or modes differ; use the `checked_*`
            /// methods for fallible arithmetic.
            fn $method(self, rhs: &NovikovSeries<C>) -> NovikovSeries<C> {
                self.$checked(rhs).expect("series arithmetic on mismatched truncation")
            }
        }
    };
}
checked_op!(Add, add, checked_add);
checked_op!(Sub, sub, checked_sub);
checked_op!(Mul, mul, checked_mul);

impl<C: Scalar> Neg for &NovikovSeries<C> {
    type Output = NovikovSeries<C>;
    fn neg(self) -> NovikovSeries<C> {
        self.neg_ref()
    }
}

impl<C: Scalar> Coefficient for NovikovSeries<C> {
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
        Self::zero(self.cutoff.clone(), self.mode)
    }
    fn one_like(&self) -> Self {
        Self::one(self.cutoff.clone(), self.mode)
    }
    fn has_degree(&self, base: &Q, vertical: &Q) -> bool {
        let total = base + vertical;
        self.terms.iter().any(|(e, _)| *e == total)
    }
    fn total_valuation(&self) -> Valuation {
        self.valuation()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    type S = NovikovSeries<Cyclotomic>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }
    fn c(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rational(&q(n, d))
    }
    fn series(terms: &[(i64, i64, i64, i64)], cutoff: i64) -> S {
        S::from_terms(terms.iter().map(|&(en, ed, cn, cd)| (q(en, ed), c(cn, cd))), q(cutoff, 1), SeriesMode::Ring)
            .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = series(&[(0, 1, 1, 1), (1, 2, 1, 1)], 5);
        let b = series(&[(0, 1, 1, 1), (1, 2, -1, 1)], 5);
        assert_eq!(&a * &b, series(&[(0, 1, 1, 1), (1, 1, -1, 1)], 5));
    }

    #[test]
    fn additive_identity_and_exponent_addition() {
        let a = series(&[(1, 3, 2, 1), (1, 1, 1, 1)], 3);
        assert_eq!(&a + &S::zero(q(3, 1), SeriesMode::Ring), a);
        let x = series(&[(1, 3, 2, 1)], 3);
        let y = series(&[(2, 3, 3, 1)], 3);
        assert_eq!(&x * &y, series(&[(1, 1, 6, 1)], 3));
    }

    #[test]
    fn valuations() {
        assert_eq!(series(&[(1, 3, 2, 1), (1, 1, 1, 1)], 3).valuation(), Valuation::Finite(q(1, 3)));
        assert_eq!(S::zero(q(3, 1), SeriesMode::Ring).valuation(), Valuation::Infinite);
        assert_eq!(series(&[(0, 1, 5, 1), (2, 1, 1, 1)], 3).valuation(), Valuation::Finite(q(0, 1)));
    }

    #[test]
    fn geometric_series_inverse() {
        let a = series(&[(0, 1, 1, 1), (1, 1, -1, 1)], 3);
        assert_eq!(a.invert().unwrap(), series(&[(0, 1, 1, 1), (1, 1, 1, 1), (2, 1, 1, 1)], 3));
        assert_eq!(series(&[(0, 1, 2, 1)], 3).invert().unwrap(), series(&[(0, 1, 1, 2)], 3));
        assert!(matches!(series(&[(1, 1, 1, 1)], 3).invert(), Err(AlgebraError::NotAUnit(_))));
        assert!(S::zero(q(3, 1), SeriesMode::Ring).invert().is_err());
    }

    #[test]
    fn field_mode_inverse_precision() {
        // a = t^{1/2}(1 + t^{1/3}), cutoff 3; inverse known below 3 − 1 = 2.
        let a = S::from_terms([(q(1, 2), c(1, 1)), (q(5, 6), c(1, 1))], q(3, 1), SeriesMode::Field).unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv.valuation(), Valuation::Finite(q(-1, 2)));
        assert!(inv.terms().iter().all(|(e, _)| *e < q(2, 1)));
        let prod = &a * &inv;
        let one = S::one(q(3, 1), SeriesMode::Field);
        let diff = &prod - &one;
        assert!(diff.valuation().at_least(&q(2, 1)));
    }

    #[test]
    fn exp_examples() {
        let t = series(&[(1, 1, 1, 1)], 3);
        assert_eq!(t.exp().unwrap(), series(&[(0, 1, 1, 1), (1, 1, 1, 1), (2, 1, 1, 2)], 3));
        let zero = S::zero(q(3, 1), SeriesMode::Ring);
        assert_eq!(zero.exp().unwrap(), S::one(q(3, 1), SeriesMode::Ring));
        let h = series(&[(1, 2, 1, 1)], 4);
        let prod = &h.exp().unwrap() * &(-&h).exp().unwrap();
        assert_eq!(prod, S::one(q(4, 1), SeriesMode::Ring));
        assert!(matches!(series(&[(0, 1, 1, 1)], 3).exp(), Err(AlgebraError::TranscendentalConstant(_))));
    }

    #[test]
    fn mismatches_are_reported() {
        let a = series(&[(0, 1, 1, 1)], 3);
        let b = series(&[(0, 1, 1, 1)], 4);
        assert_eq!(a.checked_add(&b), Err(AlgebraError::Mismatch("cutoff")));
        let f = a.with_mode(SeriesMode::Field).unwrap();
        assert_eq!(a.checked_mul(&f), Err(AlgebraError::Mismatch("mode")));
        assert!(matches!(
            S::monomial(c(1, 1), q(-1, 1), q(3, 1), SeriesMode::Ring),
            Err(AlgebraError::NegativeExponent(_))
        ));
    }

    #[test]
    fn truncation_is_eager() {
        let a = series(&[(0, 1, 1, 1), (2, 1, 1, 1)], 3);
        let sq = &a * &a;
        assert_eq!(sq, series(&[(0, 1, 1, 1), (2, 1, 2, 1)], 3));
        assert_eq!(a.powi(3).unwrap(), series(&[(0, 1, 1, 1), (2, 1, 3, 1)], 3));
        assert_eq!(a.powi(-1).unwrap(), series(&[(0, 1, 1, 1), (2, 1, -1, 1)], 3));
    }
}
