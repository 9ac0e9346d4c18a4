//! Laurent potentials: derivations, monomial substitutions, clearing and evaluation.

#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use fpk_core::laurent::{clear_denominators, IntMatrix, Monomial};
use fpk_core::novikov::SeriesMode;
use num_bigint::BigInt;
use proptest::prelude::*;

const D: usize = 3;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, ..ProptestConfig::default() }
}

/// A unimodular matrix from elementary row operations.
fn unimodular() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..D, 0..D, -2i64..=2, any::<bool>()), 0..6).prop_map(|ops| {
        let mut rows: Vec<Vec<i64>> = (0..D).map(|i| (0..D).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k, flip) in ops {
            if i != j {
                for c in 0..D {
                    rows[i][c] += k * rows[j][c];
                }
            }
            if flip {
                rows.swap(i, j);
            }
        }
        IntMatrix::new(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
    })
}

/// `x^m` evaluated at a unit point.
fn monomial_value(m: &Monomial, x: &[S]) -> S {
    m.exponents().iter().zip(x).fold(S::one(cutoff(), SeriesMode::Ring), |acc, (e, v)| {
        &acc * &v.powi(i64::try_from(e).expect("small")).expect("unit")
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn derivative_is_a_derivation(p in potential(D), r in potential(D), i in 0..D) {
        let lhs = p.mul(&r).unwrap().partial_derivative_index(i);
        let rhs = p.partial_derivative_index(i).mul(&r).unwrap().add(&p.mul(&r.partial_derivative_index(i)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = p.add(&r).unwrap().partial_derivative_index(i);
        prop_assert_eq!(sum, p.partial_derivative_index(i).add(&r.partial_derivative_index(i)).unwrap());
    }

    #[test]
    fn substitution_is_an_automorphism(p in potential(D), r in potential(D), a in unimodular(), b in unimodular()) {
        let back = p.substitute_monomial(&a).unwrap().substitute_monomial(&a.inverse().unwrap()).unwrap();
        prop_assert_eq!(back, p.clone());
        let prod = p.mul(&r).unwrap().substitute_monomial(&a).unwrap();
        prop_assert_eq!(prod, p.substitute_monomial(&a).unwrap().mul(&r.substitute_monomial(&a).unwrap()).unwrap());
        let twice = p.substitute_monomial(&a).unwrap().substitute_monomial(&b).unwrap();
        prop_assert_eq!(twice, p.substitute_monomial(&b.mul(&a)).unwrap());
    }

    #[test]
    fn clearing_only_multiplies_by_a_unit(eqs in prop::collection::vec(potential(D), D), x in unit_point(D)) {
        prop_assume!(eqs.iter().all(|e| !e.is_zero()));
        let vars = eqs[0].vars().clone();
        let sys = clear_denominators(&vars, eqs.clone()).unwrap();
        for ((e, cleared), prov) in eqs.iter().zip(sys.equations()).zip(sys.provenance()) {
            prop_assert!(cleared.terms().all(|(m, _)| m.is_nonnegative()));
            let expected = &e.evaluate(&x).unwrap() * &monomial_value(&prov.clearing_monomial, &x);
            prop_assert_eq!(cleared.evaluate(&x).unwrap(), expected);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in potential(D), r in potential(D), x in unit_point(D)) {
        let (vp, vr) = (p.evaluate(&x).unwrap(), r.evaluate(&x).unwrap());
        prop_assert_eq!(p.mul(&r).unwrap().evaluate(&x).unwrap(), &vp * &vr);
        prop_assert_eq!(p.add(&r).unwrap().evaluate(&x).unwrap(), &vp + &vr);
    }
}
