//! Newton–Hensel lifting over `Λ_t`.

use num_rational::BigRational;
use num_traits::Zero;

use super::seeds::Seed;
use super::system::{
    attainable_exponents, derive_field_poly, eval_field_poly, leading_system, min_valuation, positive_exponents,
    system_cutoff, System,
};
use super::{Poly, SolveReport, SolverError, Verdict};
use crate::linalg;
use crate::novikov::{NovikovSeries, SeriesMode, Valuation};
use crate::scalar::Scalar;

type Q = BigRational;

/// The Jacobian of the leading system at a seed, and whether it is
/// invertible.
pub fn jacobian_mod_t<C: Scalar>(sys: &System<C>, seed: &Seed<C>) -> Result<(linalg::Matrix<C>, bool), SolverError> {
    let lead = leading_system(sys)?;
    let d = sys.vars().len();
    if seed.values.len() != d {
        return Err(SolverError::InvalidSeed(format!("{} values for {d} variables", seed.values.len())));
    }
    let j = lead
        .iter()
        .map(|p| {
            (0..d)
                .map(|i| {
                    eval_field_poly(&derive_field_poly(p, i), &seed.values)
                        .ok_or_else(|| SolverError::InvalidSeed("seed has a zero coordinate".into()))
                })
                .collect::<Result<Vec<C>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let unit = !linalg::det(&j).is_zero();
    Ok((j, unit))
}

/// One Newton step: the residual it started from and the update applied.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonStep<C: Scalar> {
    pub residual_valuation: Valuation,
    pub correction: Vec<NovikovSeries<C>>,
}

/// Evaluate every equation at `x`.
pub fn residual<C: Scalar>(eqs: &[Poly<C>], x: &[NovikovSeries<C>]) -> Result<Vec<NovikovSeries<C>>, SolverError> {
    eqs.iter().map(|e| e.evaluate(x).map_err(Into::into)).collect()
}

/// Solve `A x = b` over `Λ_t`, pivoting on units.
pub fn solve_series<C: Scalar>(
    mut a: Vec<Vec<NovikovSeries<C>>>,
    mut b: Vec<NovikovSeries<C>>,
) -> Result<Vec<NovikovSeries<C>>, SolverError> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| a[r][col].is_unit()).ok_or(SolverError::JacobianNotUnit)?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].invert()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].checked_mul(&inv)?;
            for c in col..n {
                let x = f.checked_mul(&a[col][c])?;
                a[r][c] = a[r][c].checked_sub(&x)?;
            }
            let x = f.checked_mul(&b[col])?;
            b[r] = b[r].checked_sub(&x)?;
        }
    }
    let mut x: Vec<NovikovSeries<C>> = b.iter().map(|s| NovikovSeries::zero(s.cutoff().clone(), s.mode())).collect();
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc.checked_sub(&a[r][c].checked_mul(&x[c])?)?;
        }
        x[r] = acc.checked_mul(&a[r][r].invert()?)?;
    }
    Ok(x)
}

/// Lift a seed to a solution modulo `t^target`.
///
/// Each step replaces `x` by `x − J(x)^{-1} F(x)` with everything truncated
/// at `target`. The loop stops once the residual vanishes to that order,
/// and reports [`SolverError::NoProgress`] if the residual valuation stalls
/// or the step count exceeds twice the number of attainable exponents.
pub fn hensel_lift<C: Scalar>(sys: &System<C>, seed: &Seed<C>, target: &Q) -> Result<SolveReport<C>, SolverError> {
    let available = system_cutoff(sys);
    if *target > available {
        return Err(SolverError::InsufficientPrecision {
            target: Box::new(target.clone()),
            available: Box::new(available),
        });
    }
    let (_, unit) = jacobian_mod_t(sys, seed)?;
    if !unit {
        return Err(SolverError::JacobianNotUnit);
    }
    let eqs: Vec<Poly<C>> = sys.equations().iter().map(|e| e.with_cutoff(target)).collect();
    let d = eqs.len();
    let jac: Vec<Vec<Poly<C>>> = eqs.iter().map(|e| (0..d).map(|i| e.partial_derivative_index(i)).collect()).collect();
    let mut x: Vec<NovikovSeries<C>> =
        seed.values.iter().map(|v| NovikovSeries::constant(v.clone(), target.clone(), SeriesMode::Ring)).collect();

    let exps = attainable_exponents(&positive_exponents(sys), target);
    let max_steps = 2 * exps.len().max(1);
    let mut steps: Vec<NewtonStep<C>> = Vec::new();
    let mut r = residual(&eqs, &x)?;
    let mut v = min_valuation(&r);
    if v == Valuation::Finite(Q::zero()) {
        return Err(SolverError::InvalidSeed("residual at the seed has valuation 0".into()));
    }
    while !v.at_least(target) {
        if steps.len() >= max_steps || steps.last().is_some_and(|s| s.residual_valuation >= v) {
            return Err(SolverError::NoProgress { iterations: steps.len(), valuation: v });
        }
        let j: Vec<Vec<NovikovSeries<C>>> = jac
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let delta = solve_series(j, r)?;
        let correction: Vec<NovikovSeries<C>> = delta.iter().map(|s| -s).collect();
        x = x.iter().zip(&correction).map(|(a, c)| a.checked_add(c)).collect::<Result<_, _>>()?;
        steps.push(NewtonStep { residual_valuation: v, correction });
        r = residual(&eqs, &x)?;
        v = min_valuation(&r);
    }
    let residual_valuations: Vec<Valuation> = r.iter().map(NovikovSeries::valuation).collect();
    let mut report = SolveReport {
        seed: seed.clone(),
        solution: x,
        achieved_order: target.clone(),
        residual_valuations,
        jacobian_unit: true,
        hessian_nondegenerate: false,
        hessian_leading: None,
        verdict: Verdict::Inconclusive,
        iterations: steps.len(),
        steps,
        error: None,
    };
    report.verdict = report.compute_verdict();
    Ok(report)
}
