use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{LaurentPotential, Monomial, PotentialError, VarSet};
use crate::novikov::Coefficient;

/// Where one equation of a critical system came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Human-readable source, e.g. `dW/dy1`.
    pub source: String,
    /// The monomial the source was multiplied by.
    pub clearing_monomial: Monomial,
    /// Power of `t` divided out after clearing (zero when none).
    pub t_shift: BigRational,
}

/// Polynomial equations, one per variable, with non-negative exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSystem<R: Coefficient> {
    vars: VarSet,
    equations: Vec<LaurentPotential<R>>,
    provenance: Vec<Provenance>,
}

impl<R: Coefficient> CriticalSystem<R> {
    pub fn new(
        vars: VarSet,
        equations: Vec<LaurentPotential<R>>,
        provenance: Vec<Provenance>,
    ) -> Result<Self, PotentialError> {
        if equations.len() != vars.len() {
            return Err(PotentialError::ShapeMismatch { expected: vars.len(), got: equations.len() });
        }
        if provenance.len() != equations.len() {
            return Err(PotentialError::ShapeMismatch { expected: equations.len(), got: provenance.len() });
        }
        if equations.iter().any(|e| e.vars() != &vars) {
            return Err(PotentialError::VariableMismatch);
        }
        Ok(Self { vars, equations, provenance })
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn equations(&self) -> &[LaurentPotential<R>] {
        &self.equations
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn into_parts(self) -> (VarSet, Vec<LaurentPotential<R>>, Vec<Provenance>) {
        (self.vars, self.equations, self.provenance)
    }
}

/// The minimal monomial `z^μ` with `z^μ · p` free of negative exponents.
pub fn clearing_monomial<R: Coefficient>(p: &LaurentPotential<R>) -> Monomial {
    let mut m = p.min_exponents();
    for e in m.0.iter_mut() {
        *e = if e.is_negative() { -e.clone() } else { Zero::zero() };
    }
    m
}

/// Multiply each equation by its clearing monomial.
///
/// Over units this does not change the zero set. Equations must number as
/// many as the variables.
pub fn clear_denominators<R: Coefficient>(
    vars: &VarSet,
    eqs: Vec<LaurentPotential<R>>,
) -> Result<CriticalSystem<R>, PotentialError> {
    let mut equations = Vec::with_capacity(eqs.len());
    let mut provenance = Vec::with_capacity(eqs.len());
    for (i, e) in eqs.into_iter().enumerate() {
        let mu = clearing_monomial(&e);
        equations.push(e.mul_monomial(&mu));
        provenance.push(Provenance {
            source: format!("equation {}", i + 1),
            clearing_monomial: mu,
            t_shift: BigRational::zero(),
        });
    }
    CriticalSystem::new(vars.clone(), equations, provenance)
}
