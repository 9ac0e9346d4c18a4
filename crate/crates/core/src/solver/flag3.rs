//! The one-variable reduction of the Flag(ℂ³) critical system.
//!
//! The `y_1` and `y_2` equations of the normalized flag potential are solved
//! exactly by `y_1 = y_2 = y_3^{-m/3}`. To keep exponents integral the
//! reduction passes to the cover `y_3 = s³`, so `y_1 = y_2 = s^{-m}`, and
//! what remains is the pullback of `∂W/∂y_3`. Solutions found this way are
//! points of the cover; [`CoverMap::push_point`] brings them back down.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::system::{normalize_equations, System};
use super::{hessian_check, solve_system, Poly, ScenarioSolve, SolveOptions, SolverError};
use crate::laurent::{CoverMap, LaurentPotential, Monomial, VarSet};
use crate::novikov::{NovikovSeries, SeriesMode};
use crate::scalar::Scalar;

type Q = BigRational;

/// `(y_1, y_2, y_3) = (s^{-m}, s^{-m}, s^3)`.
pub fn flag3_cover_map(source: &VarSet, m: i64) -> Result<CoverMap, SolverError> {
    let target = VarSet::new(["s"], [])?;
    let rows = vec![vec![BigInt::from(-m)], vec![BigInt::from(-m)], vec![BigInt::from(3)]];
    Ok(CoverMap::new(source.clone(), target, rows)?)
}

/// The pulled-back, cleared and normalized `y_3` equation, with the cover
/// used to produce it.
pub fn flag3_reduced_system<C: Scalar>(w: &Poly<C>, m: i64) -> Result<(CoverMap, System<C>), SolverError> {
    let cover = flag3_cover_map(w.vars(), m)?;
    let name = &w.vars().names()[2];
    let dy3 = w.partial_derivative_index(2);
    let pulled = cover.pullback(&dy3)?;
    let sys = normalize_equations(cover.target().clone(), vec![(format!("dW/d{name} on the cover"), pulled)])?;
    Ok((cover, sys))
}

/// `y^{5m+3} − y^{5m+1} − m t^α` in one variable `y`. This form does not
/// agree with [`flag3_reduced_system`]; it is kept so the two can be
/// compared.
pub fn flag3_literal_system<C: Scalar>(m: i64, alpha: &Q, cutoff: &Q) -> Result<System<C>, SolverError> {
    let vars = VarSet::new(["y"], [])?;
    let mut p = LaurentPotential::new(vars.clone());
    let one = NovikovSeries::one(cutoff.clone(), SeriesMode::Ring);
    p.add_term(Monomial::from_i64(&[5 * m + 3]), one.clone(), None)?;
    p.add_term(Monomial::from_i64(&[5 * m + 1]), -&one, None)?;
    let tail = NovikovSeries::monomial(C::from_integer(-m), alpha.clone(), cutoff.clone(), SeriesMode::Ring)?;
    p.add_term(Monomial::from_i64(&[0]), tail, None)?;
    normalize_equations(vars, vec![("literal reduced equation".to_string(), p)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverSolve<C: Scalar> {
    pub cover: CoverMap,
    pub solve: ScenarioSolve<C>,
    /// Each report's solution pushed down to `(y_1, y_2, y_3)`.
    pub pushed: Vec<Vec<NovikovSeries<C>>>,
}

/// Solve the reduced equation on the cover; the Hessian is tested for the
/// full potential at the pushed-down point.
pub fn solve_flag3_cover<C: Scalar>(w: &Poly<C>, m: i64, opts: &SolveOptions) -> Result<CoverSolve<C>, SolverError> {
    let (cover, sys) = flag3_reduced_system(w, m)?;
    let solve = solve_system(sys, opts, |sol| hessian_check(w, &cover.push_point(sol)?))?;
    let pushed = solve.reports.iter().map(|r| cover.push_point(&r.solution)).collect::<Result<Vec<_>, _>>()?;
    Ok(CoverSolve { cover, solve, pushed })
}
