//! Shared builders and proptest strategies for the integration tests.
#![allow(dead_code)]

use fpk_core::laurent::{Monomial, VarSet};
use fpk_core::novikov::{BiExponent, BiNovikovSeries, NovikovSeries, SeriesMode};
use fpk_core::scalar::{Cyclotomic, Scalar};
use fpk_core::solver::{normalize_equations, Poly, System};
use fpk_core::BigRational;
use proptest::prelude::*;

pub type Q = BigRational;
pub type S = NovikovSeries<Cyclotomic>;
pub type B = BiNovikovSeries<Cyclotomic>;

pub fn q(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

pub fn cutoff() -> Q {
    q(4, 1)
}

pub fn epsilon() -> Q {
    q(1, 100)
}

pub fn zeta(order: u64, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(order, k).expect("cyclotomic field has every root of unity")
}

pub fn int(n: i64) -> Cyclotomic {
    Cyclotomic::from_integer(n)
}

/// Nonnegative rationals `a/b` with small denominators.
pub fn exponent(max: i64) -> impl Strategy<Value = Q> {
    (0..=max, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(a, b)| q(a, b))
}

pub fn positive_exponent(max: i64) -> impl Strategy<Value = Q> {
    (1..=max, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(a, b)| q(a, b))
}

/// `a·ζ_n^k + b·ζ_m^l` with small integers and orders dividing 12.
pub fn coefficient() -> impl Strategy<Value = Cyclotomic> {
    let order = || prop::sample::select(vec![1u64, 2, 3, 4, 6, 12]);
    (-3i64..=3, order(), 0i64..12, -2i64..=2, order(), 0i64..12)
        .prop_map(|(a, n, k, b, m, l)| int(a) * zeta(n, k) + int(b) * zeta(m, l))
}

pub fn nonzero_coefficient() -> impl Strategy<Value = Cyclotomic> {
    coefficient().prop_filter("nonzero", |c| !num_traits::Zero::is_zero(c))
}

pub fn series() -> impl Strategy<Value = S> {
    prop::collection::vec((exponent(14), coefficient()), 0..5)
        .prop_map(|terms| S::from_terms(terms, cutoff(), SeriesMode::Ring).expect("ring exponents"))
}

pub fn unit_series() -> impl Strategy<Value = S> {
    (nonzero_coefficient(), series()).prop_map(|(c, s)| {
        let rest: Vec<(Q, Cyclotomic)> = s.terms().iter().filter(|(e, _)| *e > q(0, 1)).cloned().collect();
        S::from_terms(std::iter::once((q(0, 1), c)).chain(rest), cutoff(), SeriesMode::Ring).expect("ring exponents")
    })
}

/// Series with zero constant term.
pub fn positive_series() -> impl Strategy<Value = S> {
    prop::collection::vec((positive_exponent(14), coefficient()), 0..5)
        .prop_map(|terms| S::from_terms(terms, cutoff(), SeriesMode::Ring).expect("ring exponents"))
}

/// Cone exponents `(ρ, η)` with `η ≥ −ρ/2`, so `(1−ε)ρ + η ≥ 0`.
pub fn bi_exponent() -> impl Strategy<Value = BiExponent> {
    (exponent(8), exponent(8)).prop_map(|(rho, extra)| {
        let eta = extra - &rho / q(2, 1);
        BiExponent::new(rho, eta)
    })
}

pub fn bi_series() -> impl Strategy<Value = B> {
    prop::collection::vec((bi_exponent(), coefficient()), 0..5)
        .prop_map(|terms| B::from_terms(terms, cutoff(), epsilon()).expect("cone exponents"))
}

pub fn bi_positive_series() -> impl Strategy<Value = B> {
    bi_series().prop_map(|b| {
        let terms: Vec<_> = b.terms().iter().filter(|(e, _)| e.total() > q(0, 1)).cloned().collect();
        B::from_terms(terms, cutoff(), epsilon()).expect("cone exponents")
    })
}

/// A Laurent polynomial in `d` variables with exponents in `−2..=2`.
pub fn potential(d: usize) -> impl Strategy<Value = Poly<Cyclotomic>> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, d), series()), 0..5).prop_map(move |terms| {
        let mut p = Poly::new(VarSet::standard(d, 0));
        for (m, c) in terms {
            p.add_term(Monomial::from_i64(&m), c, None).expect("matching shape");
        }
        p
    })
}

pub fn unit_point(d: usize) -> impl Strategy<Value = Vec<S>> {
    prop::collection::vec(unit_series(), d)
}

/// `Σ c·t^e·z^m` from `(m, e, c)` triples.
pub fn poly(d: usize, terms: &[(Vec<i64>, Q, Cyclotomic)], cut: &Q) -> Poly<Cyclotomic> {
    let mut p = Poly::new(VarSet::standard(d, 0));
    for (m, e, c) in terms {
        let s = S::monomial(c.clone(), e.clone(), cut.clone(), SeriesMode::Ring).expect("ring exponent");
        p.add_term(Monomial::from_i64(m), s, None).expect("matching shape");
    }
    p
}

pub fn system(eqs: Vec<Poly<Cyclotomic>>) -> System<Cyclotomic> {
    let vars = eqs[0].vars().clone();
    let named = eqs.into_iter().enumerate().map(|(i, e)| (format!("f{}", i + 1), e)).collect();
    normalize_equations(vars, named).expect("nonzero equations")
}

/// Leading exponent matrix, perturbation terms and seed angles of a random
/// square binomial system with a unit Jacobian at the seed.
#[derive(Debug, Clone)]
pub struct HenselCase {
    pub matrix: Vec<Vec<i64>>,
    pub angles: Vec<Q>,
    /// `(equation, monomial, t-exponent, coefficient)`.
    pub perturbation: Vec<(usize, Vec<i64>, Q, Cyclotomic)>,
}

impl HenselCase {
    /// Equation `i`: `z^{a_i} − ζ^{a_i} + Σ perturbations`, which vanishes
    /// at the seed `ζ` modulo `t`. Its Jacobian there is `diag(ζ^{a_i})·A·
    /// diag(ζ^{-1})`, a unit exactly when `det A ≠ 0`.
    pub fn system(&self, cut: &Q) -> System<Cyclotomic> {
        let d = self.matrix.len();
        let eqs = (0..d)
            .map(|i| {
                let a = &self.matrix[i];
                let value = a
                    .iter()
                    .zip(&self.angles)
                    .map(|(e, th)| seed_value(th).powi(*e).expect("unit"))
                    .fold(int(1), |acc, x| acc * x);
                let mut terms = vec![(a.clone(), q(0, 1), int(1)), (vec![0; d], q(0, 1), -value)];
                terms.extend(
                    self.perturbation.iter().filter(|p| p.0 == i).map(|p| (p.1.clone(), p.2.clone(), p.3.clone())),
                );
                poly(d, &terms, cut)
            })
            .collect();
        system(eqs)
    }
}

pub fn seed_value(angle: &Q) -> Cyclotomic {
    let n: u64 = angle.denom().try_into().expect("small");
    let k: i64 = angle.numer().try_into().expect("small");
    zeta(n, k)
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => unreachable!("cases have at most two variables"),
    }
}

/// Univariate and two-variable cases with nonsingular exponent matrices.
pub fn hensel_case() -> impl Strategy<Value = HenselCase> {
    (1usize..=2)
        .prop_flat_map(|d| {
            let matrix = prop::collection::vec(prop::collection::vec(-3i64..=3, d), d)
                .prop_filter("nonsingular", |m| det(m) != 0);
            let angles = prop::collection::vec(
                (0i64..6, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(k, n)| q(k.rem_euclid(n), n)),
                d,
            );
            let pert = prop::collection::vec(
                (0..d, prop::collection::vec(-2i64..=2, d), positive_exponent(6), nonzero_coefficient()),
                1..4,
            );
            (matrix, angles, pert)
        })
        .prop_map(|(matrix, angles, perturbation)| HenselCase { matrix, angles, perturbation })
}
