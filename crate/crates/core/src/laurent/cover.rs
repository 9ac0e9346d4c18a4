use num_bigint::BigInt;
use num_traits::Zero;

use super::{LaurentPotential, Monomial, PotentialError, VarSet};
use crate::novikov::{Coefficient, NovikovSeries};
use crate::scalar::Scalar;

/// A monomial map `z_i = Π_j s_j^{M_ij}` from cover variables `s` to the
/// original variables `z`.
///
/// Unlike [`LaurentPotential::substitute_monomial`] the matrix need not be
/// unimodular or even square, so the pullback is not an automorphism:
/// solutions found after pulling back describe points on the cover. Reports
/// must say so, which is why this lives in its own type.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverMap {
    source: VarSet,
    target: VarSet,
    rows: Vec<Vec<BigInt>>,
}

impl CoverMap {
    /// `rows[i]` is the exponent vector of source variable `i` in the cover
    /// variables.
    pub fn new(source: VarSet, target: VarSet, rows: Vec<Vec<BigInt>>) -> Result<Self, PotentialError> {
        if rows.len() != source.len() {
            return Err(PotentialError::ShapeMismatch { expected: source.len(), got: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != target.len()) {
            return Err(PotentialError::ShapeMismatch { expected: target.len(), got: r.len() });
        }
        Ok(Self { source, target, rows })
    }

    pub fn source(&self) -> &VarSet {
        &self.source
    }

    pub fn target(&self) -> &VarSet {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn image(&self, m: &Monomial) -> Monomial {
        let mut out = vec![BigInt::zero(); self.target.len()];
        for (e, row) in m.0.iter().zip(&self.rows) {
            for (o, r) in out.iter_mut().zip(row) {
                *o += e * r;
            }
        }
        Monomial(out)
    }

    /// Pull a potential on the source variables back to the cover.
    pub fn pullback<R: Coefficient>(&self, p: &LaurentPotential<R>) -> Result<LaurentPotential<R>, PotentialError> {
        if p.vars() != &self.source {
            return Err(PotentialError::VariableMismatch);
        }
        let mut out = LaurentPotential::new(self.target.clone());
        for (m, t) in p.terms() {
            out.merge(self.image(m), t.clone());
        }
        Ok(out)
    }

    /// Push a point on the cover down to the source variables.
    pub fn push_point<C: Scalar>(
        &self,
        cover_point: &[NovikovSeries<C>],
    ) -> Result<Vec<NovikovSeries<C>>, PotentialError> {
        if cover_point.len() != self.target.len() {
            return Err(PotentialError::ShapeMismatch { expected: self.target.len(), got: cover_point.len() });
        }
        self.rows
            .iter()
            .map(|row| {
                let mut mono = LaurentPotential::new(self.target.clone());
                let one = cover_point
                    .first()
                    .map(|p| NovikovSeries::one(p.cutoff().clone(), p.mode()))
                    .ok_or(PotentialError::ShapeMismatch { expected: 1, got: 0 })?;
                mono.add_term(Monomial(row.clone()), one, None)?;
                mono.evaluate(cover_point)
            })
            .collect()
    }
}
