//! Nondegeneracy of the Hessian of a potential at a lifted critical point.

use num_rational::BigRational;
use num_traits::Signed;

use super::{Poly, SolverError};
use crate::novikov::{NovikovSeries, Valuation};
use crate::scalar::Scalar;

type Q = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub struct HessianCheck<C> {
    pub nondegenerate: bool,
    /// Leading term `c · t^v` of the Hessian determinant, when nonzero to the
    /// available precision.
    pub leading: Option<(Q, C)>,
}

/// Evaluate the matrix of second partials of `w` at `point` and decide
/// whether its determinant is nonzero.
///
/// The point is only known modulo `t^N` for its own cutoff `N`, so entries
/// are trusted below `N + (lowest degree of w)`.
pub fn hessian_check<C: Scalar>(w: &Poly<C>, point: &[NovikovSeries<C>]) -> Result<HessianCheck<C>, SolverError> {
    let d = w.vars().len();
    if point.len() != d {
        return Err(SolverError::InvalidSeed(format!("{} values for {d} variables", point.len())));
    }
    let Some((_, first)) = w.terms().next() else {
        return Ok(HessianCheck { nondegenerate: false, leading: None });
    };
    let w_cut = first.coeff.cutoff().clone();
    let w_min = w.terms().filter_map(|(_, t)| t.coeff.valuation().finite().cloned()).min().expect("nonzero potential");
    let p_cut = point.iter().map(|p| p.cutoff().clone()).min().expect("nonempty point");
    let trusted = w_cut.clone().min(p_cut + w_min);
    let lifted: Vec<NovikovSeries<C>> = point.iter().map(|p| p.with_cutoff(w_cut.clone())).collect();
    let mut h = Vec::with_capacity(d);
    for i in 0..d {
        let di = w.partial_derivative_index(i);
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            row.push(di.partial_derivative_index(j).evaluate(&lifted)?.with_cutoff(trusted.clone()));
        }
        h.push(row);
    }
    Ok(leading_determinant(h))
}

/// Leading term of `det(h)` over `Λ_t`.
///
/// Each row is first divided by its lowest power of `t`; elimination then
/// pivots on an entry of minimal valuation, which keeps every quotient
/// inside the ring. Entries are trusted below the smallest cutoff, minus
/// the largest row shift.
pub fn leading_determinant<C: Scalar>(mut h: Vec<Vec<NovikovSeries<C>>>) -> HessianCheck<C> {
    let degenerate = HessianCheck { nondegenerate: false, leading: None };
    let n = h.len();
    let Some(cut) = h.iter().flatten().map(|s| s.cutoff().clone()).min() else {
        return HessianCheck { nondegenerate: true, leading: Some((Q::from_integer(0.into()), C::one())) };
    };
    let mut total_shift = Q::from_integer(0.into());
    let mut row_shifts = Vec::with_capacity(n);
    for row in &h {
        match row.iter().map(NovikovSeries::valuation).min() {
            Some(Valuation::Finite(v)) => row_shifts.push(v),
            _ => return degenerate,
        }
    }
    let max_shift = row_shifts.iter().max().cloned().unwrap_or_else(|| Q::from_integer(0.into()));
    let cut = &cut - &max_shift;
    if !cut.is_positive() {
        return degenerate;
    }
    for (row, v) in h.iter_mut().zip(&row_shifts) {
        total_shift += v;
        for s in row.iter_mut() {
            *s = s.shift(&-v.clone()).expect("row minimum is the smallest exponent").with_cutoff(cut.clone());
        }
    }
    let mut coeff = C::one();
    for k in 0..n {
        let best = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !h[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| h[a][b].valuation().cmp(&h[c][d].valuation()));
        let Some((pi, pj)) = best else { return degenerate };
        if pi != k {
            h.swap(pi, k);
            coeff = -coeff;
        }
        if pj != k {
            for row in h.iter_mut() {
                row.swap(pj, k);
            }
            coeff = -coeff;
        }
        let v = h[k][k].valuation().finite().cloned().expect("nonzero pivot");
        let (_, lead) = h[k][k].leading_term().expect("nonzero pivot");
        coeff = coeff * lead.clone();
        total_shift += &v;
        if k + 1 == n {
            break;
        }
        // The quotient is only known modulo t^{cut-v}, but it multiplies
        // entries of valuation at least v, so products stay exact below cut.
        let low = &cut - &v;
        if !low.is_positive() {
            return degenerate;
        }
        let unit = h[k][k].shift(&-v.clone()).expect("pivot valuation").with_cutoff(low.clone());
        let inv = unit.invert().expect("unit by construction");
        for i in k + 1..n {
            if h[i][k].is_zero() {
                continue;
            }
            let ratio = h[i][k].shift(&-v.clone()).expect("pivot has minimal valuation").with_cutoff(low.clone());
            let f = (&ratio * &inv).with_cutoff(cut.clone());
            for j in k..n {
                let x = &f * &h[k][j];
                h[i][j] = &h[i][j] - &x;
            }
        }
    }
    HessianCheck { nondegenerate: true, leading: Some((total_shift, coeff)) }
}
