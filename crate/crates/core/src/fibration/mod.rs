//! Fibrations of toric tori and the potential-level lifting operator.
//!
//! A [`FibrationSpec`] pairs a base torus fiber with a fiber torus. Each
//! Maslov-2 base disk lifts to a disk in the total space whose boundary picks
//! up fiber holonomy (a row of the holonomy matrix) and whose energy splits
//! into a base part `K · area` and a vertical part (the shift). Lifting acts
//! on annotated term lists, never on polynomial values, so that terms which
//! would cancel as polynomials are still tracked individually.

mod tower;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::{DiskMeta, IntMatrix, LaurentPotential, Monomial, PotentialError, Sign, VarSet};
use crate::novikov::{AlgebraError, BiNovikovSeries};
use crate::scalar::Scalar;
use crate::toric::{Formal, InteriorPoint, MomentPolytope, ToricError, Truncation};

pub use tower::{kth_order_potential, FlagTower, LevelInfo, TowerLevel, TowerPotential};

type Q = BigRational;

/// Output tag of a fiberwise maximum; every built-in construction uses it.
pub const FIBER_MAX: &str = "x_max";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FibrationError {
    #[error("{what}: expected {expected}, got {got}")]
    Shape { what: &'static str, expected: usize, got: usize },
    #[error("fiber point is not monotone (facet distances {0:?})")]
    MonotonicityViolation(Vec<Q>),
    #[error("vertical shift {shift} on disk {disk} is nonzero, which flat mode forbids")]
    NonzeroShiftInFlatMode { disk: usize, shift: Q },
    #[error("level {level} has energy {energy}, not below the previous level's {previous}")]
    ScaleOrderViolation { level: usize, energy: Box<Q>, previous: Box<Q> },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Flat mode forces zero vertical areas; families mode lets the base point
/// move and compensates with vertical shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftMode {
    #[default]
    Flat,
    Families,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FibrationSpec {
    pub vars: VarSet,
    pub base: MomentPolytope,
    pub base_point: InteriorPoint,
    pub fiber: MomentPolytope,
    pub fiber_point: InteriorPoint,
    /// Multiplier of the base symplectic form.
    pub coupling: Q,
    /// One row per base facet, one column per fiber variable.
    pub holonomy: Vec<Vec<BigInt>>,
    /// Vertical area of each lifted base disk.
    pub vertical_shift: Vec<Q>,
    pub signs: Vec<Sign>,
    /// Fiber critical point each lifted disk outputs to.
    pub outputs: Vec<String>,
    pub mode: LiftMode,
}

impl FibrationSpec {
    /// A spec with zero holonomy, zero shifts, signs `+1`, every output at
    /// the fiberwise maximum and variables `y1..yn, x1..xk`.
    pub fn flat(
        base: MomentPolytope,
        base_point: InteriorPoint,
        fiber: MomentPolytope,
        fiber_point: InteriorPoint,
        coupling: Q,
    ) -> Result<Self, FibrationError> {
        let nb = base.facets().len();
        let spec = Self {
            vars: VarSet::standard(base.dim(), fiber.dim()),
            holonomy: vec![vec![BigInt::zero(); fiber.dim()]; nb],
            vertical_shift: vec![Q::zero(); nb],
            signs: vec![Sign::Plus; nb],
            outputs: vec![FIBER_MAX.to_string(); nb],
            mode: LiftMode::Flat,
            base,
            base_point,
            fiber,
            fiber_point,
            coupling,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FibrationError> {
        let nb = self.base.facets().len();
        let k = self.fiber.dim();
        let shape = |what, expected, got| {
            if expected == got {
                Ok(())
            } else {
                Err(FibrationError::Shape { what, expected, got })
            }
        };
        shape("variables", self.base.dim() + k, self.vars.len())?;
        shape("base variables", self.base.dim(), self.vars.base_len())?;
        shape("holonomy rows", nb, self.holonomy.len())?;
        for row in &self.holonomy {
            shape("holonomy columns", k, row.len())?;
        }
        shape("vertical shifts", nb, self.vertical_shift.len())?;
        shape("signs", nb, self.signs.len())?;
        shape("outputs", nb, self.outputs.len())?;
        if !self.coupling.is_positive() {
            return Err(FibrationError::InvalidParameter("coupling must be positive".into()));
        }
        // re-check the points against the polytopes they are paired with
        InteriorPoint::new(&self.base, self.base_point.coords().to_vec())?;
        InteriorPoint::new(&self.fiber, self.fiber_point.coords().to_vec())?;
        if self.mode == LiftMode::Flat {
            let (mono, dist) = self.fiber.monotone_check(self.fiber_point.coords());
            if !mono {
                return Err(FibrationError::MonotonicityViolation(dist));
            }
            if let Some((disk, s)) = self.vertical_shift.iter().enumerate().find(|(_, s)| !s.is_zero()) {
                return Err(FibrationError::NonzeroShiftInFlatMode { disk, shift: s.clone() });
            }
        }
        Ok(())
    }

    /// Conditions the analytic theory needs but this crate cannot verify.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.base.monotone_point().is_none() {
            w.push("base polytope has no monotone point; disk classification is unvalidated (non-Fano)".into());
        }
        if self.fiber.monotone_point().is_none() {
            w.push("fiber polytope has no monotone point; disk classification is unvalidated (non-Fano)".into());
        }
        if self.mode == LiftMode::Families {
            w.push("every interior base point is treated as admissible for the twisted family".into());
        }
        w
    }
}

/// One lifted base disk.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedTerm<C: Scalar> {
    pub monomial: Monomial,
    pub coeff: BiNovikovSeries<C>,
    pub disk: DiskMeta,
}

impl<C: Scalar> LiftedTerm<C> {
    pub fn total_degree(&self) -> Q {
        &self.disk.base_area + &self.disk.vertical_area
    }
}

/// `y^ν q^e ↦ ±y^ν x^{M_i} q^{K e} r^{e_v(i)}` for every base disk `i`.
pub fn lift_base_terms<C: Scalar>(
    spec: &FibrationSpec,
    trunc: &Truncation,
) -> Result<Vec<LiftedTerm<C>>, FibrationError> {
    spec.validate()?;
    spec.base
        .disk_classes(&spec.base_point)?
        .into_iter()
        .map(|d| {
            let i = d.facet;
            let mut exps = d.boundary.clone();
            exps.extend(spec.holonomy[i].iter().cloned());
            let base_area = &spec.coupling * &d.area;
            let vertical_area = spec.vertical_shift[i].clone();
            let sign = C::from_integer(spec.signs[i].as_i64());
            let coeff = trunc.monomial(sign, base_area.clone(), vertical_area.clone())?;
            let disk = DiskMeta {
                label: format!("Lv{}", i + 1),
                maslov: d.maslov,
                base_area,
                vertical_area,
                sign: spec.signs[i],
                output: spec.outputs[i].clone(),
            };
            Ok(LiftedTerm { monomial: Monomial(exps), coeff, disk })
        })
        .collect()
}

fn assemble<C: Scalar>(
    vars: &VarSet,
    terms: &[LiftedTerm<C>],
) -> Result<LaurentPotential<BiNovikovSeries<C>>, FibrationError> {
    let mut p = LaurentPotential::new(vars.clone());
    for t in terms {
        let meta = (!t.coeff.is_zero()).then(|| t.disk.clone());
        p.add_term(t.monomial.clone(), t.coeff.clone(), meta)?;
    }
    Ok(p)
}

pub fn lift_base_potential<C: Scalar>(
    spec: &FibrationSpec,
    trunc: &Truncation,
) -> Result<LaurentPotential<BiNovikovSeries<C>>, FibrationError> {
    assemble(&spec.vars, &lift_base_terms(spec, trunc)?)
}

/// The fiber's toric potential in `r`, placed on the fiber variables.
pub fn fiber_inclusion_potential<C: Scalar>(
    spec: &FibrationSpec,
    trunc: &Truncation,
) -> Result<LaurentPotential<BiNovikovSeries<C>>, FibrationError> {
    if spec.mode == LiftMode::Flat {
        let (mono, dist) = spec.fiber.monotone_check(spec.fiber_point.coords());
        if !mono {
            return Err(FibrationError::MonotonicityViolation(dist));
        }
    }
    let n = spec.vars.base_len();
    let fiber_names = spec.vars.names()[n..].to_vec();
    let local = VarSet::new(fiber_names, Vec::<String>::new())?;
    let p = spec.fiber.toric_potential(&spec.fiber_point, local, Formal::R, trunc, "v_F", FIBER_MAX)?;
    let positions: Vec<usize> = (n..spec.vars.len()).collect();
    Ok(p.embed(spec.vars.clone(), &positions)?)
}

/// For every output tag, keep the lifted terms of minimal total degree
/// (ties are all kept). Returns `(kept, discarded)`, each in input order.
pub fn minimal_degree_filter<C: Scalar>(terms: &[LiftedTerm<C>]) -> (Vec<LiftedTerm<C>>, Vec<LiftedTerm<C>>) {
    let min_for = |tag: &str| terms.iter().filter(|t| t.disk.output == tag).map(LiftedTerm::total_degree).min();
    terms.iter().cloned().partition(|t| Some(t.total_degree()) == min_for(&t.disk.output))
}

/// A potential together with the bookkeeping of how it was assembled.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledPotential<C: Scalar> {
    pub potential: LaurentPotential<BiNovikovSeries<C>>,
    /// Lifted disks dropped by the minimal-degree filter.
    pub discarded: Vec<DiskMeta>,
    pub warnings: Vec<String>,
}

impl<C: Scalar> AssembledPotential<C> {
    /// Distinct output tags over all recorded disks, sorted.
    pub fn output_tags(&self) -> Vec<String> {
        let mut tags: Vec<String> =
            self.potential.terms().flat_map(|(_, t)| t.disks.iter().map(|d| d.output.clone())).collect();
        tags.sort();
        tags.dedup();
        tags
    }
}

/// Fiber terms plus the minimal-degree slice of the lifted base terms.
pub fn second_order_potential<C: Scalar>(
    spec: &FibrationSpec,
    trunc: &Truncation,
) -> Result<AssembledPotential<C>, FibrationError> {
    let lifted = lift_base_terms::<C>(spec, trunc)?;
    let (kept, dropped) = minimal_degree_filter(&lifted);
    let potential = fiber_inclusion_potential(spec, trunc)?.add(&assemble(&spec.vars, &kept)?)?;
    Ok(AssembledPotential {
        potential,
        discarded: dropped.into_iter().map(|t| t.disk).collect(),
        warnings: spec.warnings(),
    })
}

/// Base point and ambient size of the twisted family of tori.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistData {
    pub alphas: Vec<Q>,
    pub coupling: Q,
    /// Fiber dimension.
    pub k: usize,
}

impl TwistData {
    pub fn new(alphas: Vec<Q>, coupling: Q, k: usize) -> Result<Self, FibrationError> {
        if !coupling.is_positive() {
            return Err(FibrationError::InvalidParameter("coupling must be positive".into()));
        }
        if let Some(a) = alphas.iter().find(|a| !a.is_positive() || **a >= coupling) {
            return Err(FibrationError::InvalidParameter(format!("alpha {a} outside (0, {coupling})")));
        }
        let sum: Q = alphas.iter().sum();
        if sum >= coupling {
            return Err(ToricError::InvalidPoint { point: alphas, facet: 0 }.into());
        }
        Ok(Self { alphas, coupling, k })
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }
}

/// Vertical areas that bring every lifted disk to total degree `K/(n+1)`:
/// `K/(n+1) − α_i` for `i ≤ n` and `Σα − nK/(n+1)` for the last disk.
pub fn families_shifts(twist: &TwistData) -> Vec<Q> {
    let n = twist.n();
    let share = &twist.coupling / Q::from_integer((n + 1).into());
    let mut out: Vec<Q> = twist.alphas.iter().map(|a| &share - a).collect();
    let sum: Q = twist.alphas.iter().sum();
    out.push(sum - Q::from_integer(n.into()) * &share);
    out
}

impl FibrationSpec {
    /// The three-dimensional flag manifold as a ℙ¹-bundle over ℙ².
    ///
    /// Base disks have area `η`, fiber disks area `η − α`, so after dividing
    /// the `y_3` equation by the fiber energy the correction appears at
    /// `t^α`. The last base disk picks up `y_3^{-m}`.
    pub fn flag3(m: i64, alpha: Q, eta: Q) -> Result<Self, FibrationError> {
        if m < 0 {
            return Err(FibrationError::InvalidParameter("m must be non-negative".into()));
        }
        if !alpha.is_positive() || alpha >= eta {
            return Err(FibrationError::InvalidParameter(format!(
                "need 0 < alpha < eta, got alpha {alpha}, eta {eta}"
            )));
        }
        let base = MomentPolytope::simplex(2, Q::one())?;
        let third = Q::new(1.into(), 3.into());
        let base_point = InteriorPoint::new(&base, vec![third.clone(), third])?;
        let fiber = MomentPolytope::simplex(1, Q::from_integer(2.into()) * (&eta - &alpha))?;
        let fiber_point = InteriorPoint::new(&fiber, vec![Q::new(1.into(), 2.into())])?;
        let mut spec = Self::flat(base, base_point, fiber, fiber_point, Q::from_integer(3.into()) * eta)?;
        spec.vars = VarSet::new(["y1", "y2"], ["y3"])?;
        spec.holonomy[2][0] = BigInt::from(-m);
        spec.validate()?;
        Ok(spec)
    }

    /// Flag(ℂ³) with general holonomy `y_1 y_3^k`, `y_2 y_3^l`,
    /// `(y_1 y_2 y_3^j)^{-1}`, returned together with the unimodular change of
    /// basis that normalizes it. Applying the matrix to the lifted potential
    /// gives the shape of [`FibrationSpec::flag3`] with `m = |j − k − l|`.
    pub fn flag3_general(k: i64, l: i64, j: i64, alpha: Q, eta: Q) -> Result<(Self, IntMatrix, i64), FibrationError> {
        let mut spec = Self::flag3(0, alpha, eta)?;
        spec.holonomy = vec![vec![k.into()], vec![l.into()], vec![(-j).into()]];
        spec.validate()?;
        let m = j - k - l;
        let flip = if m < 0 { -1 } else { 1 };
        let a = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[-k * flip, -l * flip, flip]]);
        Ok((spec, a, m.abs()))
    }

    /// The twisted family over ℙⁿ with ℙᵏ Clifford fiber of size
    /// `fiber_scale`. The last base disk winds `β` times around the fiber.
    pub fn families(twist: &TwistData, beta: &[i64], fiber_scale: Q) -> Result<Self, FibrationError> {
        let n = twist.n();
        if n == 0 {
            return Err(FibrationError::InvalidParameter("base dimension must be positive".into()));
        }
        if beta.len() != twist.k {
            return Err(FibrationError::Shape { what: "twist exponents", expected: twist.k, got: beta.len() });
        }
        let base = MomentPolytope::simplex(n, Q::one())?;
        let point: Vec<Q> = twist.alphas.iter().map(|a| a / &twist.coupling).collect();
        let base_point = InteriorPoint::new(&base, point)?;
        let fiber = MomentPolytope::simplex(twist.k, fiber_scale)?;
        let fiber_point = InteriorPoint::new(&fiber, vec![Q::new(1.into(), (twist.k + 1).into()); twist.k])?;
        let mut spec = Self::flat(base, base_point, fiber, fiber_point, twist.coupling.clone())?;
        spec.mode = LiftMode::Families;
        spec.vertical_shift = families_shifts(twist);
        spec.holonomy[n] = beta.iter().map(|&b| BigInt::from(-b)).collect();
        spec.validate()?;
        Ok(spec)
    }
}
