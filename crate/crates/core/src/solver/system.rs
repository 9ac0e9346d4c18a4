use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Poly, SolverError};
use crate::laurent::{clearing_monomial, CriticalSystem, PotentialError, Provenance, VarSet};
use crate::novikov::{NovikovSeries, Valuation};
use crate::scalar::Scalar;

type Q = BigRational;

pub type System<C> = CriticalSystem<NovikovSeries<C>>;

/// A polynomial over the coefficient field: `(exponents, coefficient)` pairs.
pub type FieldPoly<C> = Vec<(Vec<i64>, C)>;

/// The critical system of `W`: one equation `∂W/∂z_i` per variable, each
/// multiplied by its clearing monomial and divided by the lowest power of
/// `t` it contains.
pub fn build_system<C: Scalar>(w: &Poly<C>) -> Result<System<C>, SolverError> {
    let eqs = w
        .vars()
        .names()
        .iter()
        .enumerate()
        .map(|(i, name)| (format!("dW/d{name}"), w.partial_derivative_index(i)))
        .collect();
    normalize_equations(w.vars().clone(), eqs)
}

/// Clear denominators and normalize the `t`-valuation of each equation.
///
/// Dividing by `t^v` costs `v` of precision, so every equation is
/// truncated to the smallest remaining cutoff.
pub fn normalize_equations<C: Scalar>(vars: VarSet, eqs: Vec<(String, Poly<C>)>) -> Result<System<C>, SolverError> {
    let mut shifted = Vec::with_capacity(eqs.len());
    let mut cutoff: Option<Q> = None;
    for (source, e) in eqs {
        if e.is_zero() {
            return Err(SolverError::DegenerateDirection(source));
        }
        let mu = clearing_monomial(&e);
        let cleared = e.mul_monomial(&mu);
        let v = cleared
            .terms()
            .filter_map(|(_, t)| t.coeff.valuation().finite().cloned())
            .min()
            .expect("nonzero potential has a finite valuation");
        let c = cleared.terms().next().expect("nonzero").1.coeff.cutoff() - &v;
        cutoff = Some(cutoff.map_or(c.clone(), |x: Q| x.min(c)));
        let normalized = cleared.shift_t(&-v.clone())?;
        shifted.push((normalized, Provenance { source, clearing_monomial: mu, t_shift: v }));
    }
    let cutoff = cutoff.unwrap_or_else(Q::zero);
    if !cutoff.is_positive() {
        return Err(SolverError::InsufficientPrecision { target: Box::new(Q::zero()), available: Box::new(cutoff) });
    }
    let (equations, provenance): (Vec<_>, Vec<_>) =
        shifted.into_iter().map(|(e, p)| (e.with_cutoff(&cutoff).with_vars(vars.clone()), p)).unzip();
    let equations = equations.into_iter().collect::<Result<Vec<_>, PotentialError>>()?;
    Ok(CriticalSystem::new(vars, equations, provenance)?)
}

/// Common cutoff of the system's coefficients.
pub fn system_cutoff<C: Scalar>(sys: &System<C>) -> Q {
    sys.equations().iter().flat_map(|e| e.terms().map(|(_, t)| t.coeff.cutoff().clone())).min().unwrap_or_else(Q::zero)
}

/// Positive `t`-exponents occurring in the system's coefficients.
pub fn positive_exponents<C: Scalar>(sys: &System<C>) -> BTreeSet<Q> {
    sys.equations()
        .iter()
        .flat_map(|e| e.terms().flat_map(|(_, t)| t.coeff.terms().iter().map(|(x, _)| x.clone())))
        .filter(Q::is_positive)
        .collect()
}

/// Three times the smallest positive degree of the system; when the system
/// has no `t`-dependence at all, its full cutoff.
pub fn default_target<C: Scalar>(sys: &System<C>) -> Q {
    match positive_exponents(sys).first() {
        Some(e) => e * Q::from_integer(3.into()),
        None => system_cutoff(sys),
    }
}

/// Elements below `bound` of the additive monoid generated by `gens`.
pub fn attainable_exponents(gens: &BTreeSet<Q>, bound: &Q) -> BTreeSet<Q> {
    const CAP: usize = 100_000;
    let gens: Vec<&Q> = gens.iter().filter(|g| g.is_positive() && *g < bound).collect();
    let mut out: BTreeSet<Q> = BTreeSet::new();
    let mut frontier: Vec<Q> = gens.iter().map(|g| (*g).clone()).collect();
    while let Some(x) = frontier.pop() {
        if out.len() >= CAP || !out.insert(x.clone()) {
            continue;
        }
        for g in &gens {
            let y = &x + *g;
            if &y < bound && !out.contains(&y) {
                frontier.push(y);
            }
        }
    }
    out
}

/// The system modulo `t`: constant terms of every coefficient.
pub fn leading_system<C: Scalar>(sys: &System<C>) -> Result<Vec<FieldPoly<C>>, SolverError> {
    sys.equations()
        .iter()
        .map(|e| {
            e.terms()
                .filter_map(|(m, t)| {
                    let c = t.coeff.constant_term();
                    (!c.is_zero()).then_some((m, c))
                })
                .map(|(m, c)| {
                    let exps = m
                        .exponents()
                        .iter()
                        .map(|x| x.to_i64().ok_or_else(|| PotentialError::ExponentOverflow(x.clone())))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((exps, c))
                })
                .collect()
        })
        .collect()
}

pub fn eval_field_poly<C: Scalar>(p: &FieldPoly<C>, point: &[C]) -> Option<C> {
    p.iter().try_fold(C::zero(), |acc, (m, c)| {
        let mut v = c.clone();
        for (x, &e) in point.iter().zip(m) {
            if e != 0 {
                v = v * x.powi(e)?;
            }
        }
        Some(acc + v)
    })
}

/// `∂p/∂z_i` of a field polynomial.
pub fn derive_field_poly<C: Scalar>(p: &FieldPoly<C>, i: usize) -> FieldPoly<C> {
    p.iter()
        .filter(|(m, _)| m[i] != 0)
        .map(|(m, c)| {
            let mut m2 = m.clone();
            m2[i] -= 1;
            (m2, c.clone() * C::from_integer(m[i]))
        })
        .collect()
}

/// Smallest valuation among several series.
pub fn min_valuation<C: Scalar>(v: &[NovikovSeries<C>]) -> Valuation {
    v.iter().map(NovikovSeries::valuation).min().unwrap_or(Valuation::Infinite)
}
