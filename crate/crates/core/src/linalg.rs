//! Dense Gaussian elimination over a [`Scalar`] field.
//!
//! Matrices are plain row vectors. Exact fields pivot on the first nonzero
//! entry, the float field on the entry of largest modulus.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

fn pick_pivot<S: Scalar>(m: &Matrix<S>, col: usize, from: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&r| !m[r][col].is_zero())
    } else {
        (from..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
    }
}

/// Row-reduce in place to reduced row echelon form; returns pivot columns.
pub fn rref<S: Scalar>(m: &mut Matrix<S>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Determinant of a square matrix.
pub fn det<S: Scalar>(m: &Matrix<S>) -> S {
    let n = m.len();
    let mut a = m.clone();
    let mut d = S::one();
    for c in 0..n {
        let Some(p) = pick_pivot(&a, c, c) else { return S::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d = d * piv.clone();
        let inv = piv.inv().expect("pivot is nonzero");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for j in c..n {
                let v = a[c][j].clone();
                a[i][j] = a[i][j].clone() - f.clone() * v;
            }
        }
    }
    d
}

/// Solve `m x = b` for square nonsingular `m`.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let n = m.len();
    let mut aug: Matrix<S> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Option<Matrix<S>> {
    let n = m.len();
    let mut aug: Matrix<S> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A basis of the right null space `{x : m x = 0}`.
pub fn nullspace<S: Scalar>(m: &Matrix<S>, cols: usize) -> Vec<Vec<S>> {
    let mut w = m.clone();
    let piv = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = -w[r][f].clone();
            }
            v
        })
        .collect()
}
