//! Diagonal reduction of integer matrices by unimodular row and column
//! operations, enough to solve `A θ ≡ β (mod ℤ^m)` over `ℚ/ℤ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

/// `(U, D, V)` with `U · A · V = D` diagonal and `U`, `V` unimodular.
///
/// The diagonal is not normalized to divisibility order; solving only
/// needs a diagonal.
pub fn diagonalize(a: &IMat, cols: usize) -> (IMat, IMat, IMat) {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by_key(|&(i, j)| d[i][j].abs())
            else {
                return (u, d, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let x = &d[t][j] * &q;
                        d[i][j] -= x;
                    }
                    for j in 0..rows {
                        let x = &u[t][j] * &q;
                        u[i][j] -= x;
                    }
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let x = &d[i][t] * &q;
                        d[i][j] -= x;
                    }
                    for i in 0..cols {
                        let x = &v[i][t] * &q;
                        v[i][j] -= x;
                    }
                }
                clean &= d[t][j].is_zero();
            }
            if clean {
                break;
            }
        }
    }
    (u, d, v)
}

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|r| (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_big(a: &[Vec<i64>]) -> IMat {
        a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn is_diagonal(d: &IMat) -> bool {
        d.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    #[test]
    fn clifford_exponents() {
        let a = to_big(&[vec![2, 1], vec![1, 2]]);
        let (u, d, v) = diagonalize(&a, 2);
        assert_eq!(mat_mul(&mat_mul(&u, &a), &v), d);
        assert!(is_diagonal(&d));
        let det: BigInt = (0..2).map(|i| d[i][i].clone()).product();
        assert_eq!(det.abs(), BigInt::from(3));
    }

    proptest! {
        #[test]
        fn reduction_identity(a in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 3)) {
            let a = to_big(&a);
            let (u, d, v) = diagonalize(&a, 3);
            prop_assert_eq!(mat_mul(&mat_mul(&u, &a), &v), d.clone());
            prop_assert!(is_diagonal(&d));
        }
    }
}
