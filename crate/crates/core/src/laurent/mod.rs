//! Laurent polynomials in holonomy variables with Novikov coefficients.
//!
//! A [`LaurentPotential`] maps integer exponent vectors to coefficients from
//! any [`Coefficient`] ring and remembers, per term, which disk classes
//! produced it. Arithmetic and differentiation drop that metadata; the
//! lifting code in [`crate::fibration`] works on the annotated term lists.

mod cover;
mod eval;
mod matrix;
mod system;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::novikov::{AlgebraError, Coefficient};

pub use cover::CoverMap;
pub use matrix::IntMatrix;
pub use system::{clear_denominators, clearing_monomial, CriticalSystem, Provenance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("change of basis is not unimodular (determinant {0})")]
    NotUnimodular(BigInt),
    #[error("metadata of disk `{label}` does not match its coefficient degree")]
    MetadataMismatch { label: String },
    #[error("exponent {0} does not fit in a machine integer")]
    ExponentOverflow(BigInt),
    #[error("variable sets differ")]
    VariableMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Ordered variable names, split into a base block (`y`) followed by a fiber
/// block (`x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    base_len: usize,
}

impl VarSet {
    pub fn new<S: Into<String>>(
        base: impl IntoIterator<Item = S>,
        fiber: impl IntoIterator<Item = S>,
    ) -> Result<Self, PotentialError> {
        let mut names: Vec<String> = base.into_iter().map(Into::into).collect();
        let base_len = names.len();
        names.extend(fiber.into_iter().map(Into::into));
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PotentialError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Self { names, base_len })
    }

    /// `y1..yn` followed by `x1..xk`.
    pub fn standard(n: usize, k: usize) -> Self {
        Self::new((1..=n).map(|i| format!("y{i}")), (1..=k).map(|j| format!("x{j}")))
            .expect("generated names are distinct")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn fiber_len(&self) -> usize {
        self.names.len() - self.base_len
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PotentialError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| PotentialError::UnknownVariable(name.to_string()))
    }
}

/// An exponent vector `ν ∈ ℤ^{n+k}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<BigInt>);

impl Monomial {
    pub fn zeros(n: usize) -> Self {
        Self(vec![BigInt::zero(); n])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|e| !e.is_negative())
    }
}

/// Sign attached to a disk count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(s: i64) -> Option<Self> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Provenance of one term: the disk class it counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskMeta {
    pub label: String,
    pub maslov: i64,
    pub base_area: BigRational,
    pub vertical_area: BigRational,
    pub sign: Sign,
    /// The critical point of the Morse function this disk outputs to.
    pub output: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<R> {
    pub coeff: R,
    pub disks: Vec<DiskMeta>,
}

#[derive(Clone, PartialEq)]
pub struct LaurentPotential<R> {
    vars: VarSet,
    terms: BTreeMap<Monomial, Term<R>>,
}

impl<R: Coefficient> LaurentPotential<R> {
    pub fn new(vars: VarSet) -> Self {
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Term<R>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&R> {
        self.terms.get(m).map(|t| &t.coeff)
    }

    /// Add `coeff · z^m`, optionally recording the disk it comes from.
    pub fn add_term(&mut self, m: Monomial, coeff: R, disk: Option<DiskMeta>) -> Result<(), PotentialError> {
        if m.len() != self.vars.len() {
            return Err(PotentialError::ShapeMismatch { expected: self.vars.len(), got: m.len() });
        }
        if let Some(d) = &disk {
            if !coeff.has_degree(&d.base_area, &d.vertical_area) {
                return Err(PotentialError::MetadataMismatch { label: d.label.clone() });
            }
        }
        self.merge(m, Term { coeff, disks: disk.into_iter().collect() });
        Ok(())
    }

    fn merge(&mut self, m: Monomial, t: Term<R>) {
        if t.coeff.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, t);
            }
            Some(mut old) => {
                old.coeff = old.coeff.plus(&t.coeff);
                old.disks.extend(t.disks);
                if !old.coeff.is_zero() {
                    self.terms.insert(m, old);
                }
            }
        }
    }

    fn same_vars(&self, other: &Self) -> Result<(), PotentialError> {
        (self.vars == other.vars).then_some(()).ok_or(PotentialError::VariableMismatch)
    }

    /// Sum; metadata of both sides is kept.
    pub fn add(&self, other: &Self) -> Result<Self, PotentialError> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, t) in &other.terms {
            out.merge(m.clone(), t.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|_, c| c.negated())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PotentialError> {
        self.add(&other.neg())
    }

    /// Product; metadata is dropped.
    pub fn mul(&self, other: &Self) -> Result<Self, PotentialError> {
        self.same_vars(other)?;
        let mut out = Self::new(self.vars.clone());
        for (ma, ta) in &self.terms {
            for (mb, tb) in &other.terms {
                out.merge(ma.add(mb), Term { coeff: ta.coeff.times(&tb.coeff), disks: Vec::new() });
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &R::Scalar) -> Self {
        let mut out = Self::new(self.vars.clone());
        for (m, t) in &self.terms {
            out.merge(m.clone(), Term { coeff: t.coeff.scaled(s), disks: t.disks.clone() });
        }
        out
    }

    /// Multiply by the monomial `z^m` (metadata kept).
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, t)| (k.add(m), t.clone())).collect() }
    }

    fn map_terms(&self, f: impl Fn(&Monomial, &R) -> R) -> Self {
        let mut out = Self::new(self.vars.clone());
        for (m, t) in &self.terms {
            out.merge(m.clone(), Term { coeff: f(m, &t.coeff), disks: t.disks.clone() });
        }
        out
    }

    /// Apply `f` to every coefficient, keeping exponents and metadata.
    pub fn map_coefficients<R2: Coefficient>(&self, mut f: impl FnMut(&R) -> R2) -> LaurentPotential<R2> {
        let mut out = LaurentPotential::new(self.vars.clone());
        for (m, t) in &self.terms {
            out.merge(m.clone(), Term { coeff: f(&t.coeff), disks: t.disks.clone() });
        }
        out
    }

    /// Keep only the terms satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial, &Term<R>) -> bool) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, t)| keep(m, t)).map(|(m, t)| (m.clone(), t.clone())).collect(),
        }
    }

    /// `∂/∂var`: `c·z^ν ↦ ν_i c·z^{ν−e_i}`; metadata is dropped.
    pub fn partial_derivative(&self, var: &str) -> Result<Self, PotentialError> {
        let i = self.vars.index_of(var)?;
        Ok(self.partial_derivative_index(i))
    }

    pub fn partial_derivative_index(&self, i: usize) -> Self {
        let mut out = Self::new(self.vars.clone());
        for (m, t) in &self.terms {
            let e = &m.0[i];
            if e.is_zero() {
                continue;
            }
            let factor = <R::Scalar as crate::scalar::Scalar>::from_rational(&BigRational::from_integer(e.clone()));
            let mut nm = m.clone();
            nm.0[i] -= 1;
            out.merge(nm, Term { coeff: t.coeff.scaled(&factor), disks: Vec::new() });
        }
        out
    }

    /// Monomial change of basis `z^ν ↦ z^{Aν}` by a unimodular matrix.
    pub fn substitute_monomial(&self, a: &IntMatrix) -> Result<Self, PotentialError> {
        if a.size() != self.vars.len() {
            return Err(PotentialError::ShapeMismatch { expected: self.vars.len(), got: a.size() });
        }
        if !a.is_unimodular() {
            return Err(PotentialError::NotUnimodular(a.det()));
        }
        let mut out = Self::new(self.vars.clone());
        for (m, t) in &self.terms {
            out.merge(Monomial(a.apply(&m.0)), t.clone());
        }
        Ok(out)
    }

    /// Re-embed into a larger variable set: variable `i` goes to slot
    /// `positions[i]` of `vars`.
    pub fn embed(&self, vars: VarSet, positions: &[usize]) -> Result<Self, PotentialError> {
        if positions.len() != self.vars.len() {
            return Err(PotentialError::ShapeMismatch { expected: self.vars.len(), got: positions.len() });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= vars.len()) {
            return Err(PotentialError::ShapeMismatch { expected: vars.len(), got: bad + 1 });
        }
        let mut out = Self::new(vars);
        for (m, t) in &self.terms {
            let mut nm = Monomial::zeros(out.vars.len());
            for (e, &p) in m.0.iter().zip(positions) {
                nm.0[p] += e;
            }
            out.merge(nm, t.clone());
        }
        Ok(out)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Monomial {
        let n = self.vars.len();
        let mut out = Monomial::zeros(n);
        for (i, slot) in out.0.iter_mut().enumerate() {
            if let Some(min) = self.terms.keys().map(|m| &m.0[i]).min() {
                *slot = min.clone();
            }
        }
        out
    }

    /// Rename variables without touching terms.
    pub fn with_vars(&self, vars: VarSet) -> Result<Self, PotentialError> {
        if vars.len() != self.vars.len() {
            return Err(PotentialError::ShapeMismatch { expected: self.vars.len(), got: vars.len() });
        }
        Ok(Self { vars, terms: self.terms.clone() })
    }
}

impl<R: Coefficient> fmt::Display for LaurentPotential<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, t)| {
                let mono: Vec<String> =
                    m.0.iter()
                        .zip(self.vars.names())
                        .filter(|(e, _)| !e.is_zero())
                        .map(|(e, n)| if *e == BigInt::from(1) { n.clone() } else { format!("{n}^{e}") })
                        .collect();
                if mono.is_empty() {
                    format!("[{}]", t.coeff)
                } else {
                    format!("[{}]*{}", t.coeff, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Coefficient> fmt::Debug for LaurentPotential<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
