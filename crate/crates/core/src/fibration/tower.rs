//! Iterated projective-space fibrations (partial flag towers).
//!
//! Level `i` is a ℙ^{d_i} Clifford torus with its own form scale `K_i`.
//! Every Maslov-2 disk of level `i` has energy `K_i/(d_i+1)`, and a disk of
//! level `i−1` picks up holonomy `x_i^{ν}` in the variables of level `i`.
//! Levels must get strictly cheaper going down the tower, so that the
//! collapsed potential splits into disjoint degree bands.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FibrationError, FIBER_MAX};
use crate::laurent::{DiskMeta, LaurentPotential, Monomial, Sign, VarSet};
use crate::novikov::{NovikovSeries, SeriesMode};
use crate::scalar::Scalar;

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    pub dim: usize,
    pub scale: Q,
    /// One row per disk of the previous level (`d_{i−1} + 1` rows), each with
    /// `dim` entries. Empty for the first level.
    pub nu: Vec<Vec<BigInt>>,
}

impl TowerLevel {
    pub fn energy(&self) -> Q {
        &self.scale / Q::from_integer((self.dim + 1).into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagTower {
    levels: Vec<TowerLevel>,
}

impl FlagTower {
    pub fn new(levels: Vec<TowerLevel>) -> Result<Self, FibrationError> {
        for (i, lv) in levels.iter().enumerate() {
            if lv.dim == 0 {
                return Err(FibrationError::InvalidParameter(format!("level {} has dimension 0", i + 1)));
            }
            if lv.scale <= Q::zero() {
                return Err(FibrationError::InvalidParameter(format!("level {} scale must be positive", i + 1)));
            }
            let rows = if i == 0 { 0 } else { levels[i - 1].dim + 1 };
            if lv.nu.len() != rows {
                return Err(FibrationError::Shape { what: "holonomy rows", expected: rows, got: lv.nu.len() });
            }
            if let Some(r) = lv.nu.iter().find(|r| r.len() != lv.dim) {
                return Err(FibrationError::Shape { what: "holonomy columns", expected: lv.dim, got: r.len() });
            }
            if i > 0 {
                let (prev, cur) = (levels[i - 1].energy(), lv.energy());
                if cur >= prev {
                    return Err(FibrationError::ScaleOrderViolation {
                        level: i + 1,
                        energy: Box::new(cur),
                        previous: Box::new(prev),
                    });
                }
            }
        }
        Ok(Self { levels })
    }

    /// The tower for `F_n^k`: level `i` is ℙ^{n+1−i}, with zero holonomy.
    pub fn full_flag(n: usize, scales: &[Q]) -> Result<Self, FibrationError> {
        if scales.len() > n {
            return Err(FibrationError::InvalidParameter(format!("at most {n} levels for n = {n}")));
        }
        let levels = scales
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let dim = n - i;
                let rows = if i == 0 { 0 } else { dim + 2 };
                TowerLevel { dim, scale: s.clone(), nu: vec![vec![BigInt::zero(); dim]; rows] }
            })
            .collect();
        Self::new(levels)
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    pub fn with_nu(mut self, level: usize, disk: usize, row: Vec<BigInt>) -> Result<Self, FibrationError> {
        let lv = self
            .levels
            .get_mut(level)
            .ok_or_else(|| FibrationError::InvalidParameter(format!("no level {}", level + 1)))?;
        let slot = lv.nu.get_mut(disk).ok_or_else(|| {
            FibrationError::InvalidParameter(format!("no disk {} below level {}", disk + 1, level + 1))
        })?;
        *slot = row;
        Self::new(self.levels)
    }

    pub fn var_names(&self) -> Vec<Vec<String>> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, lv)| (1..=lv.dim).map(|j| format!("x{}_{j}", i + 1)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelInfo {
    pub level: usize,
    pub dim: usize,
    pub energy: Q,
    pub vars: Vec<String>,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TowerPotential<C: Scalar> {
    pub potential: LaurentPotential<NovikovSeries<C>>,
    pub levels: Vec<LevelInfo>,
}

/// The potential of the first `k` levels of the tower, over `Λ_t`.
///
/// Only disks whose energy is among the `k` smallest distinct energies are
/// kept; with one energy per level that is every disk of those levels.
pub fn kth_order_potential<C: Scalar>(
    tower: &FlagTower,
    k: usize,
    cutoff: &Q,
) -> Result<TowerPotential<C>, FibrationError> {
    if k == 0 || k > tower.levels.len() {
        return Err(FibrationError::InvalidParameter(format!("order {k} outside 1..={}", tower.levels.len())));
    }
    let levels = &tower.levels[..k];
    let names = tower.var_names();
    let offsets: Vec<usize> = levels
        .iter()
        .scan(0, |acc, lv| {
            let o = *acc;
            *acc += lv.dim;
            Some(o)
        })
        .collect();
    let total: usize = levels.iter().map(|l| l.dim).sum();
    let vars = VarSet::new(names[0].clone(), names[1..k].concat())?;

    let mut energies: Vec<Q> = levels.iter().map(TowerLevel::energy).collect();
    energies.sort();
    energies.dedup();
    energies.truncate(k);

    let mut potential = LaurentPotential::new(vars);
    let mut info = Vec::with_capacity(k);
    for (i, lv) in levels.iter().enumerate() {
        let e = lv.energy();
        let keep = energies.contains(&e);
        let mut count = 0;
        for disk in 0..=lv.dim {
            let mut m = Monomial::zeros(total);
            for j in 0..lv.dim {
                m.0[offsets[i] + j] = if disk == lv.dim {
                    -BigInt::one()
                } else if disk == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
            }
            if let Some(next) = levels.get(i + 1) {
                for (j, x) in next.nu[disk].iter().enumerate() {
                    m.0[offsets[i + 1] + j] += x;
                }
            }
            if !keep {
                continue;
            }
            let coeff = NovikovSeries::monomial(C::one(), e.clone(), cutoff.clone(), SeriesMode::Ring)?;
            let meta = (!coeff.is_zero()).then(|| DiskMeta {
                label: format!("L{}v{}", i + 1, disk + 1),
                maslov: 2,
                base_area: e.clone(),
                vertical_area: Q::zero(),
                sign: Sign::Plus,
                output: FIBER_MAX.to_string(),
            });
            potential.add_term(m, coeff, meta)?;
            count += 1;
        }
        info.push(LevelInfo { level: i + 1, dim: lv.dim, energy: e, vars: names[i].clone(), terms: count });
    }
    Ok(TowerPotential { potential, levels: info })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    fn q(a: i64) -> Q {
        Q::from_integer(a.into())
    }

    #[test]
    fn level_sizes() {
        let tower = FlagTower::full_flag(3, &[q(12), q(4), q(1)]).unwrap();
        let p = kth_order_potential::<Cyclotomic>(&tower, 3, &q(10)).unwrap();
        let sizes: Vec<usize> = p.levels.iter().map(|l| l.terms).collect();
        assert_eq!(sizes, vec![4, 3, 2]);
        assert_eq!(p.potential.len(), 9);
        let one = kth_order_potential::<Cyclotomic>(&tower, 1, &q(10)).unwrap();
        assert_eq!(one.potential.len(), 4);
    }

    #[test]
    fn scale_order_is_enforced() {
        assert!(matches!(
            FlagTower::full_flag(3, &[q(4), q(4)]),
            Err(FibrationError::ScaleOrderViolation { level: 2, .. })
        ));
    }
}
