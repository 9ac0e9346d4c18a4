//! Root-of-unity solutions of the critical system modulo `t`.
//!
//! When every leading equation is a binomial `c₁ z^a + c₂ z^b`, the system
//! says `z^{a−b} = −c₂/c₁` for each row, which is linear in the angles of
//! the `z_i`. A diagonal reduction of the exponent matrix lists all
//! solutions directly. Other systems fall back to enumerating tuples of
//! N-th roots of unity with a float prefilter and exact confirmation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::snf::{diagonalize, IMat};
use super::system::{eval_field_poly, leading_system, FieldPoly, System};
use super::SolverError;
use crate::scalar::Scalar;

type Q = BigRational;

/// Default bound on the order of roots of unity searched.
pub const DEFAULT_CONDUCTOR_BOUND: u64 = 60;

/// Candidate tuples examined before an enumeration gives up.
pub const ENUMERATION_BUDGET: u64 = 20_000_000;

/// A solution modulo `t` whose coordinates are roots of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed<C> {
    pub values: Vec<C>,
    /// `values[i] = e^{2πi·angles[i]}`, with angles in `[0, 1)`.
    pub angles: Vec<Q>,
}

impl<C: Scalar> Seed<C> {
    pub fn from_angles(angles: Vec<Q>) -> Option<Self> {
        let values = angles
            .iter()
            .map(|a| C::root_of_unity(a.denom().to_u64()?, a.numer().to_i64()?))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { values, angles })
    }

    /// Least common multiple of the orders of the coordinates.
    pub fn conductor(&self) -> BigInt {
        self.angles.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMethod {
    /// Diagonal reduction of a binomial leading system.
    Lattice,
    /// Brute force over tuples of roots of unity.
    Enumeration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedSearch<C> {
    pub seeds: Vec<Seed<C>>,
    pub method: SeedMethod,
    /// False when the enumeration budget ran out before the bound.
    pub complete: bool,
}

pub fn find_seeds<C: Scalar>(sys: &System<C>, conductor_bound: u64) -> Result<SeedSearch<C>, SolverError> {
    let lead = leading_system(sys)?;
    if lead.iter().any(Vec::is_empty) {
        // some equation vanishes identically mod t, so seeds are not isolated
        return enumerate_leading(&lead, sys.vars().len(), conductor_bound, ENUMERATION_BUDGET);
    }
    if lead.iter().any(|p| p.len() == 1) {
        // a nonzero monomial has no unit zeros
        return Ok(SeedSearch { seeds: Vec::new(), method: SeedMethod::Lattice, complete: true });
    }
    if lead.iter().all(|p| p.len() == 2) {
        if let Some(found) = lattice_seeds(&lead, sys.vars().len(), conductor_bound) {
            return Ok(found);
        }
    }
    enumerate_leading(&lead, sys.vars().len(), conductor_bound, ENUMERATION_BUDGET)
}

/// Brute-force search, exposed for cross-checking the lattice method.
pub fn enumerate_seeds<C: Scalar>(
    sys: &System<C>,
    conductor_bound: u64,
    budget: u64,
) -> Result<SeedSearch<C>, SolverError> {
    enumerate_leading(&leading_system(sys)?, sys.vars().len(), conductor_bound, budget)
}

fn finish<C: Scalar>(
    mut seeds: Vec<Seed<C>>,
    lead: &[FieldPoly<C>],
    method: SeedMethod,
    complete: bool,
) -> SeedSearch<C> {
    seeds.retain(|s| lead.iter().all(|p| eval_field_poly(p, &s.values).is_some_and(|v| v.is_zero())));
    seeds.sort_by(|a, b| a.angles.cmp(&b.angles));
    seeds.dedup_by(|a, b| a.angles == b.angles);
    SeedSearch { seeds, method, complete }
}

/// `None` when the lattice method does not apply (the right-hand side is not
/// a root of unity within reach, or the exponent matrix is singular).
fn lattice_seeds<C: Scalar>(lead: &[FieldPoly<C>], d: usize, bound: u64) -> Option<SeedSearch<C>> {
    let mut a: IMat = Vec::with_capacity(lead.len());
    let mut beta: Vec<Q> = Vec::with_capacity(lead.len());
    for p in lead {
        let (ma, ca) = &p[0];
        let (mb, cb) = &p[1];
        let rhs = -(cb.clone() * ca.inv()?);
        match rhs.root_of_unity_angle(bound.max(2) * 2) {
            Some(angle) => beta.push(angle),
            // not a root of unity: no unit solutions of finite order
            None if C::EXACT => {
                return Some(SeedSearch { seeds: Vec::new(), method: SeedMethod::Lattice, complete: true })
            }
            None => return None,
        }
        a.push(ma.iter().zip(mb).map(|(x, y)| BigInt::from(x - y)).collect());
    }
    let (u, diag, v) = diagonalize(&a, d);
    let rank = (0..lead.len().min(d)).filter(|&i| !diag[i][i].is_zero()).count();
    // w = U β
    let w: Vec<Q> =
        u.iter().map(|row| row.iter().zip(&beta).map(|(x, b)| Q::from_integer(x.clone()) * b).sum()).collect();
    for (i, wi) in w.iter().enumerate() {
        let di = if i < d { diag[i][i].clone() } else { BigInt::zero() };
        if di.is_zero() && !wi.is_integer() {
            return Some(SeedSearch { seeds: Vec::new(), method: SeedMethod::Lattice, complete: true });
        }
    }
    if rank < d {
        return None;
    }
    let count: BigInt = (0..d).map(|i| diag[i][i].abs()).product();
    if count > BigInt::from(ENUMERATION_BUDGET) {
        return None;
    }
    // φ_k ranges over (w_k + j)/d_k, θ = V φ
    let choices: Vec<Vec<Q>> = (0..d)
        .map(|k| {
            let dk = diag[k][k].clone();
            let n = dk.abs().to_u64().expect("bounded by the budget");
            (0..n).map(|j| (&w[k] + Q::from_integer(j.into())) / Q::from_integer(dk.clone())).collect()
        })
        .collect();
    let mut seeds = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let phi: Vec<Q> = (0..d).map(|k| choices[k][idx[k]].clone()).collect();
        let theta: Vec<Q> = v
            .iter()
            .map(|row| {
                let s: Q = row.iter().zip(&phi).map(|(x, p)| Q::from_integer(x.clone()) * p).sum();
                &s - s.floor()
            })
            .collect();
        let lcm = theta.iter().fold(BigInt::one(), |l, t| l.lcm(t.denom()));
        if lcm <= BigInt::from(bound) {
            if let Some(s) = Seed::from_angles(theta) {
                seeds.push(s);
            }
        }
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    Some(finish(seeds, lead, SeedMethod::Lattice, true))
}

fn enumerate_leading<C: Scalar>(
    lead: &[FieldPoly<C>],
    d: usize,
    bound: u64,
    budget: u64,
) -> Result<SeedSearch<C>, SolverError> {
    // equations become checkable once their last variable is assigned
    let last_var: Vec<usize> =
        lead.iter().map(|p| p.iter().flat_map(|(m, _)| m.iter().rposition(|&e| e != 0)).max().unwrap_or(0)).collect();
    let floats: Vec<Vec<(Vec<i64>, Complex64, f64)>> = lead
        .iter()
        .map(|p| {
            let scale: f64 = p.iter().map(|(_, c)| c.magnitude()).sum::<f64>().max(1.0);
            p.iter().map(|(m, c)| (m.clone(), c.to_complex(), scale)).collect()
        })
        .collect();
    let mut work = 0u64;
    let mut seeds = Vec::new();
    let mut complete = true;
    'orders: for n in 1..=bound {
        let mut ks = vec![0i64; d];
        let mut depth = 0usize;
        let mut pts = vec![Complex64::new(1.0, 0.0); d];
        // iterative depth-first search over k_0..k_{d-1} in [0, n)
        let mut started = vec![false; d + 1];
        loop {
            if depth == d {
                let g = ks.iter().fold(n as i64, |g, &k| g.gcd(&k));
                if g == 1 {
                    let angles = ks.iter().map(|&k| Q::new(k.into(), (n as i64).into())).collect();
                    if let Some(s) = Seed::from_angles(angles) {
                        seeds.push(s);
                    }
                }
                depth -= 1;
                continue;
            }
            if !started[depth] {
                started[depth] = true;
                ks[depth] = 0;
            } else {
                ks[depth] += 1;
            }
            if ks[depth] >= n as i64 {
                started[depth] = false;
                if depth == 0 {
                    break;
                }
                depth -= 1;
                continue;
            }
            work += 1;
            if work > budget {
                complete = false;
                break 'orders;
            }
            let ang = std::f64::consts::TAU * ks[depth] as f64 / n as f64;
            pts[depth] = Complex64::from_polar(1.0, ang);
            let ok = floats.iter().zip(&last_var).filter(|(_, &lv)| lv == depth).all(|(p, _)| {
                let v: Complex64 =
                    p.iter().map(|(m, c, _)| m.iter().zip(&pts).fold(*c, |acc, (&e, z)| acc * z.powi(e as i32))).sum();
                v.norm() < 1e-7 * p.first().map_or(1.0, |x| x.2)
            });
            if ok {
                depth += 1;
                if depth < d {
                    started[depth] = false;
                }
            }
        }
    }
    Ok(finish(seeds, lead, SeedMethod::Enumeration, complete))
}
