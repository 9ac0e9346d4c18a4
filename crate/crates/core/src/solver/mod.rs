//! Critical points of potentials over `Λ_t`.
//!
//! The pipeline is: differentiate and clear denominators
//! ([`build_system`]), find root-of-unity solutions modulo `t`
//! ([`find_seeds`]), check the Jacobian there ([`jacobian_mod_t`]), lift by
//! Newton iteration ([`hensel_lift`]) and test the Hessian of the potential
//! at the lift ([`hessian_check`]). [`solve_system`] runs all of it per seed
//! and never lets one seed's failure stop the others.

mod flag3;
mod hessian;
mod newton;
mod seeds;
pub mod snf;
mod system;

use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::{LaurentPotential, PotentialError};
use crate::novikov::{AlgebraError, NovikovSeries, SeriesMode, Valuation};
use crate::scalar::Scalar;

pub use flag3::{flag3_cover_map, flag3_literal_system, flag3_reduced_system, solve_flag3_cover, CoverSolve};
pub use hessian::{hessian_check, leading_determinant, HessianCheck};
pub use newton::{hensel_lift, jacobian_mod_t, residual, solve_series, NewtonStep};
pub use seeds::{
    enumerate_seeds, find_seeds, Seed, SeedMethod, SeedSearch, DEFAULT_CONDUCTOR_BOUND, ENUMERATION_BUDGET,
};
pub use system::{
    attainable_exponents, build_system, default_target, leading_system, normalize_equations, positive_exponents,
    system_cutoff, FieldPoly, System,
};

type Q = BigRational;

/// A potential with coefficients in `Λ_t`.
pub type Poly<C> = LaurentPotential<NovikovSeries<C>>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("{0} vanishes identically: the potential does not depend on that variable")]
    DegenerateDirection(String),
    #[error("target order {target} exceeds the available precision {available}")]
    InsufficientPrecision { target: Box<Q>, available: Box<Q> },
    #[error("Jacobian is not a unit at the seed")]
    JacobianNotUnit,
    #[error("Newton iteration stalled after {iterations} steps at residual valuation {valuation}")]
    NoProgress { iterations: usize, valuation: Valuation },
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    /// Unit Jacobian, nondegenerate Hessian and residual below the target.
    /// The analytic hypotheses behind nonvanishing Floer cohomology are not
    /// checked, hence "candidate".
    FloerNontrivialCandidate,
    Inconclusive,
    Failed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::FloerNontrivialCandidate => "floer_nontrivial_candidate",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<C: Scalar> {
    pub seed: Seed<C>,
    pub solution: Vec<NovikovSeries<C>>,
    pub achieved_order: Q,
    pub residual_valuations: Vec<Valuation>,
    pub jacobian_unit: bool,
    pub hessian_nondegenerate: bool,
    pub hessian_leading: Option<(Q, C)>,
    pub verdict: Verdict,
    pub iterations: usize,
    pub steps: Vec<NewtonStep<C>>,
    /// Why the seed failed, when it did.
    pub error: Option<String>,
}

impl<C: Scalar> SolveReport<C> {
    pub fn compute_verdict(&self) -> Verdict {
        if self.error.is_some() || !self.jacobian_unit {
            Verdict::Failed
        } else if self.hessian_nondegenerate
            && self.residual_valuations.iter().all(|v| v.at_least(&self.achieved_order))
        {
            Verdict::FloerNontrivialCandidate
        } else {
            Verdict::Inconclusive
        }
    }

    fn failed(seed: &Seed<C>, target: &Q, jacobian_unit: bool, err: &SolverError) -> Self {
        Self {
            seed: seed.clone(),
            solution: seed
                .values
                .iter()
                .map(|v| NovikovSeries::constant(v.clone(), target.clone(), SeriesMode::Ring))
                .collect(),
            achieved_order: Q::from_integer(0.into()),
            residual_valuations: Vec::new(),
            jacobian_unit,
            hessian_nondegenerate: false,
            hessian_leading: None,
            verdict: Verdict::Failed,
            iterations: 0,
            steps: Vec::new(),
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Lift target; defaults to [`default_target`].
    pub target_order: Option<Q>,
    pub conductor_bound: u64,
    /// Keep only the first seeds (in angle order).
    pub max_seeds: Option<usize>,
    /// Process seeds on the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { target_order: None, conductor_bound: DEFAULT_CONDUCTOR_BOUND, max_seeds: None, parallel: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSolve<C: Scalar> {
    pub system: System<C>,
    pub target: Q,
    pub seed_method: SeedMethod,
    pub seeds_complete: bool,
    pub reports: Vec<SolveReport<C>>,
}

/// Run seeds, lifting and the Hessian test on a prepared system. The
/// `hessian` callback maps a lifted solution to the Hessian test of the
/// potential it came from.
pub fn solve_system<C, H>(sys: System<C>, opts: &SolveOptions, hessian: H) -> Result<ScenarioSolve<C>, SolverError>
where
    C: Scalar,
    H: Fn(&[NovikovSeries<C>]) -> Result<HessianCheck<C>, SolverError> + Sync,
{
    let target = opts.target_order.clone().unwrap_or_else(|| default_target(&sys));
    let available = system_cutoff(&sys);
    if target > available {
        return Err(SolverError::InsufficientPrecision { target: Box::new(target), available: Box::new(available) });
    }
    let search = find_seeds(&sys, opts.conductor_bound)?;
    let mut seeds = search.seeds;
    if let Some(k) = opts.max_seeds {
        seeds.truncate(k);
    }
    let one = |seed: &Seed<C>| -> SolveReport<C> {
        match hensel_lift(&sys, seed, &target) {
            Ok(mut r) => {
                match hessian(&r.solution) {
                    Ok(h) => {
                        r.hessian_nondegenerate = h.nondegenerate;
                        r.hessian_leading = h.leading;
                    }
                    Err(e) => r.error = Some(format!("hessian: {e}")),
                }
                r.verdict = r.compute_verdict();
                r
            }
            Err(e) => {
                let unit = !matches!(e, SolverError::JacobianNotUnit);
                SolveReport::failed(seed, &target, unit, &e)
            }
        }
    };
    let reports = if opts.parallel { seeds.par_iter().map(one).collect() } else { seeds.iter().map(one).collect() };
    Ok(ScenarioSolve { system: sys, target, seed_method: search.method, seeds_complete: search.complete, reports })
}

/// The whole pipeline on a potential over `Λ_t`.
pub fn solve_scenario<C: Scalar>(w: &Poly<C>, opts: &SolveOptions) -> Result<ScenarioSolve<C>, SolverError> {
    let sys = build_system(w)?;
    solve_system(sys, opts, |sol| hessian_check(w, sol))
}

#[cfg(test)]
mod tests;
