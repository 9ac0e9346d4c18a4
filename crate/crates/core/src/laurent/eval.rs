use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{LaurentPotential, PotentialError};
use crate::novikov::{AlgebraError, BiNovikovSeries, NovikovSeries, SeriesMode};
use crate::scalar::Scalar;

impl<C: Scalar> LaurentPotential<BiNovikovSeries<C>> {
    /// Apply `q^ρ r^η ↦ t^{ρ+η}` to every coefficient.
    pub fn collapse(&self) -> LaurentPotential<NovikovSeries<C>> {
        self.map_coefficients(BiNovikovSeries::collapse)
    }
}

impl<C: Scalar> LaurentPotential<NovikovSeries<C>> {
    /// Substitute series values for the variables.
    ///
    /// Every value must be a unit of Λ_t, so negative exponents can go through
    /// [`NovikovSeries::invert`]. All values must share the coefficients'
    /// truncation.
    pub fn evaluate(&self, point: &[NovikovSeries<C>]) -> Result<NovikovSeries<C>, PotentialError> {
        if point.len() != self.vars().len() {
            return Err(PotentialError::ShapeMismatch { expected: self.vars().len(), got: point.len() });
        }
        if let Some((i, v)) = point.iter().enumerate().find(|(_, v)| !v.is_unit()) {
            return Err(AlgebraError::NotAUnit(format!("value {v} of {}", self.vars().names()[i])).into());
        }
        let (cutoff, mode) = match (self.terms().next(), point.first()) {
            (Some((_, t)), _) => (t.coeff.cutoff().clone(), t.coeff.mode()),
            (None, Some(p)) => (p.cutoff().clone(), p.mode()),
            (None, None) => (BigRational::from_integer(0.into()), SeriesMode::Ring),
        };
        let mut powers: HashMap<(usize, i64), NovikovSeries<C>> = HashMap::new();
        let mut total = NovikovSeries::zero(cutoff.clone(), mode);
        for (m, t) in self.terms() {
            let mut acc = t.coeff.clone();
            for (i, e) in m.exponents().iter().enumerate() {
                let e = e.to_i64().ok_or_else(|| PotentialError::ExponentOverflow(e.clone()))?;
                if e == 0 {
                    continue;
                }
                let pw = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = point[i].powi(e)?;
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                acc = acc.checked_mul(&pw)?;
            }
            total = total.checked_add(&acc)?;
        }
        Ok(total)
    }

    /// Multiply every coefficient by `t^s`.
    pub fn shift_t(&self, s: &BigRational) -> Result<Self, PotentialError> {
        let mut err = None;
        let out = self.map_coefficients(|c| {
            c.shift(s).unwrap_or_else(|e| {
                err = Some(e);
                c.clone()
            })
        });
        match err {
            Some(e) => Err(e.into()),
            None => Ok(out),
        }
    }

    /// Change every coefficient's cutoff (see [`NovikovSeries::with_cutoff`]).
    pub fn with_cutoff(&self, cutoff: &BigRational) -> Self {
        self.map_coefficients(|c| c.with_cutoff(cutoff.clone()))
    }
}
