use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg;

/// A square integer matrix acting on exponent vectors (column convention).
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    /// Build from rows. Panics if rows are ragged or the matrix is not square.
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn as_rational(&self) -> linalg::Matrix<BigRational> {
        self.rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&self.as_rational()).to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Inverse over ℤ, defined exactly for unimodular matrices.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unimodular() {
            return None;
        }
        let inv = linalg::inverse(&self.as_rational())?;
        Some(Self::new(inv.into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect()))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum()).collect())
                .collect(),
        )
    }

    /// `self · v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}
