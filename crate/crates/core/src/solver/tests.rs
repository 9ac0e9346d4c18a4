use num_rational::BigRational;

use super::*;
use crate::fibration::{second_order_potential, FibrationSpec};
use crate::laurent::{Monomial, VarSet};
use crate::novikov::{NovikovSeries, SeriesMode};
use crate::scalar::Cyclotomic;
use crate::toric::Truncation;

type S = NovikovSeries<Cyclotomic>;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn series(terms: &[(BigRational, i64)], cutoff: &BigRational) -> S {
    S::from_terms(
        terms.iter().map(|(e, c)| (e.clone(), Cyclotomic::from_integer(*c))),
        cutoff.clone(),
        SeriesMode::Ring,
    )
    .unwrap()
}

type TermSpec<'a> = (&'a [i64], &'a [(BigRational, i64)]);

/// `Σ c · t^e · z^m` from `(m, [(e, c)])` pairs.
fn poly(vars: VarSet, terms: &[TermSpec<'_>], cutoff: &BigRational) -> Poly<Cyclotomic> {
    let mut p = Poly::new(vars);
    for (m, cs) in terms {
        p.add_term(Monomial::from_i64(m), series(cs, cutoff), None).unwrap();
    }
    p
}

fn one_var() -> VarSet {
    VarSet::standard(1, 0)
}

fn clifford(cutoff: &BigRational) -> Poly<Cyclotomic> {
    let e = q(1, 3);
    poly(
        VarSet::standard(2, 0),
        &[(&[1, 0], &[(e.clone(), 1)]), (&[0, 1], &[(e.clone(), 1)]), (&[-1, -1], &[(e, 1)])],
        cutoff,
    )
}

fn system_of(eqs: Vec<Poly<Cyclotomic>>) -> System<Cyclotomic> {
    let vars = eqs[0].vars().clone();
    normalize_equations(vars, eqs.into_iter().enumerate().map(|(i, e)| (format!("f{i}"), e)).collect()).unwrap()
}

#[test]
fn clifford_system_is_binomial() {
    let c = q(3, 1);
    let sys = build_system(&clifford(&c)).unwrap();
    let cut = system_cutoff(&sys);
    assert_eq!(cut, q(8, 3));
    let v = VarSet::standard(2, 0);
    let e1 = poly(v.clone(), &[(&[2, 1], &[(q(0, 1), 1)]), (&[0, 0], &[(q(0, 1), -1)])], &cut);
    let e2 = poly(v, &[(&[1, 2], &[(q(0, 1), 1)]), (&[0, 0], &[(q(0, 1), -1)])], &cut);
    assert_eq!(sys.equations(), &[e1, e2]);
    assert_eq!(sys.provenance()[0].t_shift, q(1, 3));
}

#[test]
fn y_plus_inverse() {
    let c = q(2, 1);
    let w = poly(one_var(), &[(&[1], &[(q(0, 1), 1)]), (&[-1], &[(q(0, 1), 1)])], &c);
    let sys = build_system(&w).unwrap();
    let expect = poly(one_var(), &[(&[2], &[(q(0, 1), 1)]), (&[0], &[(q(0, 1), -1)])], &c);
    assert_eq!(sys.equations()[0], expect);
    let h = hessian_check(&w, &[S::one(c.clone(), SeriesMode::Ring)]).unwrap();
    assert!(h.nondegenerate);
    assert_eq!(h.leading, Some((q(0, 1), Cyclotomic::from_integer(2))));
}

#[test]
fn missing_variable_is_degenerate() {
    let c = q(2, 1);
    let w = poly(VarSet::standard(2, 0), &[(&[1, 0], &[(q(1, 1), 1)])], &c);
    assert!(matches!(build_system(&w), Err(SolverError::DegenerateDirection(s)) if s == "dW/dy2"));
}

#[test]
fn seeds_of_small_systems() {
    let c = q(3, 1);
    let sys = system_of(vec![poly(one_var(), &[(&[2], &[(q(0, 1), 1)]), (&[0], &[(q(0, 1), -1), (q(1, 1), -1)])], &c)]);
    let found = find_seeds(&sys, 60).unwrap();
    let angles: Vec<_> = found.seeds.iter().map(|s| s.angles.clone()).collect();
    assert_eq!(angles, vec![vec![q(0, 1)], vec![q(1, 2)]]);

    let sys = build_system(&clifford(&c)).unwrap();
    let found = find_seeds(&sys, 60).unwrap();
    assert_eq!(found.method, SeedMethod::Lattice);
    assert_eq!(found.seeds.len(), 3);
    for s in &found.seeds {
        assert_eq!(s.values[0], s.values[1]);
        assert_eq!(s.values[0].powi(3).unwrap(), Cyclotomic::from_integer(1));
    }
    let brute = enumerate_seeds(&sys, 12, ENUMERATION_BUDGET).unwrap();
    assert_eq!(brute.seeds, found.seeds);

    let sys = system_of(vec![poly(one_var(), &[(&[1], &[(q(0, 1), 1)]), (&[0], &[(q(0, 1), -2)])], &c)]);
    assert!(find_seeds(&sys, 12).unwrap().seeds.is_empty());
    assert!(enumerate_seeds(&sys, 12, ENUMERATION_BUDGET).unwrap().seeds.is_empty());
}

#[test]
fn clifford_jacobian() {
    let sys = build_system(&clifford(&q(3, 1))).unwrap();
    let seed = Seed::from_angles(vec![q(0, 1), q(0, 1)]).unwrap();
    let (j, unit) = jacobian_mod_t(&sys, &seed).unwrap();
    let n = |k| Cyclotomic::from_integer(k);
    assert_eq!(j, vec![vec![n(2), n(1)], vec![n(1), n(2)]]);
    assert!(unit);
    assert_eq!(crate::linalg::det(&j), n(3));
}

#[test]
fn square_root_of_one_plus_t() {
    let c = q(3, 1);
    let sys = system_of(vec![poly(one_var(), &[(&[2], &[(q(0, 1), 1)]), (&[0], &[(q(0, 1), -1), (q(1, 1), -1)])], &c)]);
    let seed = Seed::from_angles(vec![q(0, 1)]).unwrap();
    let r = hensel_lift(&sys, &seed, &q(3, 1)).unwrap();
    let qc = |a, b| Cyclotomic::rational(q(a, b));
    let expect =
        S::from_terms([(q(0, 1), qc(1, 1)), (q(1, 1), qc(1, 2)), (q(2, 1), qc(-1, 8))], q(3, 1), SeriesMode::Ring)
            .unwrap();
    assert_eq!(r.solution[0], expect);
    assert!(r.residual_valuations.iter().all(|v| v.at_least(&q(3, 1))));
    assert_eq!(r.iterations, 2);
}

#[test]
fn flag_equation_first_correction() {
    let c = q(2, 1);
    let sys = system_of(vec![poly(
        one_var(),
        &[(&[8], &[(q(0, 1), 1)]), (&[6], &[(q(0, 1), -1)]), (&[0], &[(q(1, 1), -1)])],
        &c,
    )]);
    let seed = Seed::from_angles(vec![q(0, 1)]).unwrap();
    let r = hensel_lift(&sys, &seed, &q(2, 1)).unwrap();
    assert_eq!(
        r.steps[0].correction[0],
        S::monomial(Cyclotomic::rational(q(1, 2)), q(1, 1), c.clone(), SeriesMode::Ring).unwrap()
    );
    assert_eq!(r.solution[0].coefficient(&q(1, 1)), Cyclotomic::rational(q(1, 2)));
}

#[test]
fn exact_root_needs_no_steps() {
    let c = q(2, 1);
    let sys = system_of(vec![poly(one_var(), &[(&[2], &[(q(0, 1), 1)]), (&[0], &[(q(0, 1), -1)])], &c)]);
    let seed = Seed::from_angles(vec![q(0, 1)]).unwrap();
    let r = hensel_lift(&sys, &seed, &q(1, 1)).unwrap();
    assert_eq!(r.iterations, 0);
    assert_eq!(r.solution[0], S::one(q(1, 1), SeriesMode::Ring));
}

#[test]
fn zero_jacobian_is_rejected() {
    let c = q(2, 1);
    // y² − 2y + 1 − t at y = 1: double root mod t
    let sys = system_of(vec![poly(
        one_var(),
        &[(&[2], &[(q(0, 1), 1)]), (&[1], &[(q(0, 1), -2)]), (&[0], &[(q(0, 1), 1), (q(1, 1), -1)])],
        &c,
    )]);
    let seed = Seed::from_angles(vec![q(0, 1)]).unwrap();
    assert_eq!(hensel_lift(&sys, &seed, &q(1, 1)), Err(SolverError::JacobianNotUnit));
    assert!(matches!(hensel_lift(&sys, &seed, &q(3, 1)), Err(SolverError::InsufficientPrecision { .. })));
}

#[test]
fn degenerate_hessian() {
    let c = q(2, 1);
    let third = Cyclotomic::rational(q(1, 3));
    let mut w = Poly::new(one_var());
    w.add_term(Monomial::from_i64(&[3]), S::constant(third, c.clone(), SeriesMode::Ring), None).unwrap();
    w.add_term(Monomial::from_i64(&[2]), series(&[(q(0, 1), -1)], &c), None).unwrap();
    w.add_term(Monomial::from_i64(&[1]), series(&[(q(0, 1), 1)], &c), None).unwrap();
    let h = hessian_check(&w, &[S::one(c, SeriesMode::Ring)]).unwrap();
    assert!(!h.nondegenerate);
}

#[test]
fn clifford_pipeline() {
    let w = clifford(&q(3, 1));
    let out = solve_scenario(&w, &SolveOptions::default()).unwrap();
    assert_eq!(out.reports.len(), 3);
    for r in &out.reports {
        assert_eq!(r.verdict, Verdict::FloerNontrivialCandidate);
        let (v, c) = r.hessian_leading.clone().unwrap();
        assert_eq!(v, q(2, 3));
        // at (ζ, ζ) the Hessian is q^{1/3} ζ^{-4} [[2, 1], [1, 2]]
        assert_eq!(c, Cyclotomic::from_integer(3) * r.seed.values[0].powi(-8).unwrap());
    }
}

#[test]
fn flag3_reduction_on_the_cover() {
    let spec = FibrationSpec::flag3(1, q(1, 2), q(1, 1)).unwrap();
    let trunc = Truncation::new(q(3, 1));
    let w = second_order_potential::<Cyclotomic>(&spec, &trunc).unwrap().potential.collapse();
    let (_, sys) = flag3_reduced_system(&w, 1).unwrap();
    let cut = system_cutoff(&sys);
    let s = VarSet::new(["s"], []).unwrap();
    let expect = poly(s, &[(&[6], &[(q(0, 1), 1)]), (&[0], &[(q(0, 1), -1)]), (&[2], &[(q(1, 2), -1)])], &cut);
    assert_eq!(sys.equations()[0], expect);
    let literal_sys = flag3_literal_system::<Cyclotomic>(1, &q(1, 2), &cut).unwrap();
    assert_ne!(literal_sys.equations()[0].terms().count(), 0);
    assert_ne!(literal_sys.equations()[0].clone().with_vars(sys.vars().clone()).unwrap(), sys.equations()[0]);

    let out = solve_flag3_cover(&w, 1, &SolveOptions::default()).unwrap();
    assert_eq!(out.solve.reports.len(), 6);
    assert_eq!(out.solve.target, q(3, 2));
    for (r, y) in out.solve.reports.iter().zip(&out.pushed) {
        assert_eq!(r.verdict, Verdict::FloerNontrivialCandidate, "{r:?}");
        let y3 = y[2].constant_term();
        assert!(y3 == Cyclotomic::from_integer(1) || y3 == Cyclotomic::from_integer(-1));
    }
    let first = &out.pushed[0][2];
    assert_eq!(first.coefficient(&q(1, 2)), Cyclotomic::rational(q(1, 2)));
    assert_eq!(first.coefficient(&q(0, 1)), Cyclotomic::from_integer(1));
}
