//! Moment polytopes in facet presentation and the Maslov-2 disk classes of
//! their torus fibers.
//!
//! A polytope `{u : ⟨ν_i, u⟩ ≥ c_i}` with a scale `K` models the toric
//! manifold with symplectic form scaled by `K`. The fiber over an interior
//! point `u` bounds one Maslov-2 disk per facet, with boundary class `ν_i`
//! and area `K(⟨ν_i, u⟩ − c_i)`; summing `z^{ν_i} F^{area}` gives the
//! leading part of the fiber's potential.
//!
//! Validation is exact. Boundedness and vertices are found by enumerating
//! subsets of facets, which is fine for the low-dimensional polytopes used
//! here but exponential in general.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::{DiskMeta, LaurentPotential, Monomial, PotentialError, Sign, VarSet};
use crate::linalg;
use crate::novikov::{AlgebraError, BiExponent, BiNovikovSeries};
use crate::scalar::Scalar;

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToricError {
    #[error("facet {index} has normal of length {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("facet normal {0:?} is not primitive")]
    NotPrimitive(Vec<BigInt>),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(Q),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("point {point:?} is not strictly inside the polytope (facet {facet})")]
    InvalidPoint { point: Vec<Q>, facet: usize },
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Q,
}

impl Facet {
    pub fn new(normal: Vec<BigInt>, offset: Q) -> Self {
        Self { normal, offset }
    }

    pub fn from_i64(normal: &[i64], offset: Q) -> Self {
        Self::new(normal.iter().map(|&x| BigInt::from(x)).collect(), offset)
    }

    /// `⟨ν, u⟩ − c`.
    pub fn distance(&self, u: &[Q]) -> Q {
        self.normal.iter().zip(u).fold(-self.offset.clone(), |acc, (n, x)| acc + Q::from_integer(n.clone()) * x)
    }
}

/// A strictly interior point, checked against a specific polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorPoint(Vec<Q>);

impl InteriorPoint {
    pub fn new(p: &MomentPolytope, coords: Vec<Q>) -> Result<Self, ToricError> {
        if coords.len() != p.dim {
            return Err(ToricError::DimensionMismatch { index: 0, expected: p.dim, got: coords.len() });
        }
        if let Some(i) = p.facets.iter().position(|f| !f.distance(&coords).is_positive()) {
            return Err(ToricError::InvalidPoint { point: coords, facet: i });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskClass {
    pub facet: usize,
    pub boundary: Vec<BigInt>,
    pub area: Q,
    pub maslov: i64,
}

/// Which formal variable carries the disk areas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formal {
    /// Base energy.
    Q,
    /// Vertical energy.
    R,
}

/// Truncation parameters shared by every series in a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub cutoff: Q,
    pub epsilon: Q,
}

impl Truncation {
    pub fn new(cutoff: Q) -> Self {
        Self { cutoff, epsilon: crate::novikov::default_epsilon() }
    }

    pub fn monomial<C: Scalar>(&self, c: C, rho: Q, eta: Q) -> Result<BiNovikovSeries<C>, AlgebraError> {
        BiNovikovSeries::monomial(c, BiExponent::new(rho, eta), self.cutoff.clone(), self.epsilon.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentPolytope {
    dim: usize,
    facets: Vec<Facet>,
    scale: Q,
    vertices: Vec<Vec<Q>>,
}

fn q_int(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

impl MomentPolytope {
    pub fn new(dim: usize, facets: Vec<Facet>, scale: Q) -> Result<Self, ToricError> {
        if !scale.is_positive() {
            return Err(ToricError::NonPositiveScale(scale));
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(ToricError::DimensionMismatch { index: i, expected: dim, got: f.normal.len() });
            }
            let g = f.normal.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_one() {
                return Err(ToricError::NotPrimitive(f.normal.clone()));
            }
        }
        let normals: linalg::Matrix<Q> = facets.iter().map(|f| f.normal.iter().map(q_int).collect()).collect();
        if dim > 0 && linalg::rank(&normals) < dim {
            return Err(ToricError::Unbounded);
        }
        // The recession cone {r : N r ≥ 0} is pointed, so it is nonzero iff
        // it has an extreme ray, which is cut out by d−1 independent facets.
        for rows in (0..facets.len()).combinations(dim.saturating_sub(1)) {
            let sub: linalg::Matrix<Q> = rows.iter().map(|&i| normals[i].clone()).collect();
            let null = if dim == 1 { vec![vec![Q::one()]] } else { linalg::nullspace(&sub, dim) };
            if null.len() != 1 {
                continue;
            }
            let r = &null[0];
            for s in [Q::one(), -Q::one()] {
                if normals.iter().all(|n| !(dot(n, r) * &s).is_negative()) {
                    return Err(ToricError::Unbounded);
                }
            }
        }
        let mut vertices: Vec<Vec<Q>> = Vec::new();
        for rows in (0..facets.len()).combinations(dim) {
            let a: linalg::Matrix<Q> = rows.iter().map(|&i| normals[i].clone()).collect();
            let b: Vec<Q> = rows.iter().map(|&i| facets[i].offset.clone()).collect();
            let Some(v) = linalg::solve(&a, &b) else { continue };
            if facets.iter().all(|f| !f.distance(&v).is_negative()) && !vertices.contains(&v) {
                vertices.push(v);
            }
        }
        if vertices.is_empty() {
            return Err(ToricError::Empty);
        }
        vertices.sort();
        let p = Self { dim, facets, scale, vertices };
        let centroid = p.vertex_centroid();
        if p.facets.iter().any(|f| !f.distance(&centroid).is_positive()) {
            return Err(ToricError::NotFullDimensional);
        }
        Ok(p)
    }

    /// The standard simplex `{u_i ≥ 0, Σu_i ≤ 1}` of ℙⁿ, scaled by `scale`.
    /// For `n = 1` this is the interval `[0, 1]`.
    pub fn simplex(n: usize, scale: Q) -> Result<Self, ToricError> {
        let mut facets: Vec<Facet> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                Facet::from_i64(&v, Q::zero())
            })
            .collect();
        if n > 0 {
            facets.push(Facet::from_i64(&vec![-1; n], -Q::one()));
        }
        Self::new(n, facets, scale)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn scale(&self) -> &Q {
        &self.scale
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn with_scale(&self, scale: Q) -> Result<Self, ToricError> {
        if !scale.is_positive() {
            return Err(ToricError::NonPositiveScale(scale));
        }
        Ok(Self { scale, ..self.clone() })
    }

    pub fn vertex_centroid(&self) -> Vec<Q> {
        let n = Q::from_integer(self.vertices.len().into());
        (0..self.dim).map(|j| self.vertices.iter().map(|v| v[j].clone()).sum::<Q>() / &n).collect()
    }

    pub fn disk_classes(&self, u: &InteriorPoint) -> Result<Vec<DiskClass>, ToricError> {
        let u = u.coords();
        self.facets
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let d = f.distance(u);
                if !d.is_positive() {
                    return Err(ToricError::InvalidPoint { point: u.to_vec(), facet: i });
                }
                Ok(DiskClass { facet: i, boundary: f.normal.clone(), area: &self.scale * d, maslov: 2 })
            })
            .collect()
    }

    /// Whether every facet is at the same distance from `u`; the witness is
    /// the vector of scaled distances.
    pub fn monotone_check(&self, u: &[Q]) -> (bool, Vec<Q>) {
        let d: Vec<Q> = self.facets.iter().map(|f| &self.scale * f.distance(u)).collect();
        (d.iter().all_equal(), d)
    }

    /// The point at equal positive distance from every facet, if any. Its
    /// existence is the combinatorial shadow of the Fano condition the disk
    /// classification relies on.
    pub fn monotone_point(&self) -> Option<Vec<Q>> {
        // Unknowns (u, λ): ⟨ν_i, u⟩ − λ = c_i.
        let d = self.dim;
        let mut aug: linalg::Matrix<Q> = self
            .facets
            .iter()
            .map(|f| {
                let mut row: Vec<Q> = f.normal.iter().map(q_int).collect();
                row.push(-Q::one());
                row.push(f.offset.clone());
                row
            })
            .collect();
        let piv = linalg::rref(&mut aug);
        if piv.contains(&(d + 1)) || piv.len() < d + 1 {
            return None;
        }
        let sol: Vec<Q> = (0..=d).map(|r| aug[r][d + 1].clone()).collect();
        sol[d].is_positive().then(|| sol[..d].to_vec())
    }

    /// `Σ_i z^{ν_i} F^{area_i}` over the given variables, with one disk
    /// record per term labelled `{prefix}{i}` (1-based).
    pub fn toric_potential<C: Scalar>(
        &self,
        u: &InteriorPoint,
        vars: VarSet,
        formal: Formal,
        trunc: &Truncation,
        prefix: &str,
        output: &str,
    ) -> Result<LaurentPotential<BiNovikovSeries<C>>, ToricError> {
        if vars.len() != self.dim {
            return Err(PotentialError::ShapeMismatch { expected: self.dim, got: vars.len() }.into());
        }
        let mut p = LaurentPotential::new(vars);
        for d in self.disk_classes(u)? {
            let (rho, eta) = match formal {
                Formal::Q => (d.area.clone(), Q::zero()),
                Formal::R => (Q::zero(), d.area.clone()),
            };
            let coeff = trunc.monomial(C::one(), rho.clone(), eta.clone())?;
            let meta = DiskMeta {
                label: format!("{prefix}{}", d.facet + 1),
                maslov: d.maslov,
                base_area: rho,
                vertical_area: eta,
                sign: Sign::Plus,
                output: output.to_string(),
            };
            let meta = (!coeff.is_zero()).then_some(meta);
            p.add_term(Monomial(d.boundary), coeff, meta)?;
        }
        Ok(p)
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
