//! Disk areas of toric fibers, lifted degrees in fibrations and flag towers.

mod common;

use common::*;
use fpk_core::fibration::{
    kth_order_potential, lift_base_terms, minimal_degree_filter, second_order_potential, FibrationSpec, FlagTower,
    TwistData,
};
use fpk_core::novikov::Valuation;
use fpk_core::scalar::Cyclotomic;
use fpk_core::toric::{InteriorPoint, MomentPolytope, Truncation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 100, ..ProptestConfig::default() }
}

/// A point strictly inside the standard simplex of dimension `n`, scaled by
/// `total`: positive weights normalized against a positive slack.
fn simplex_point(n: usize, total: Q) -> impl Strategy<Value = Vec<Q>> {
    (prop::collection::vec(1i64..=9, n), 1i64..=9).prop_map(move |(w, slack)| {
        let sum: i64 = w.iter().sum::<i64>() + slack;
        w.iter().map(|&x| &total * q(x, sum)).collect()
    })
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=4).prop_map(|(a, b)| q(a, b))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn simplex_areas_sum_to_scale(
        (n, u) in (1usize..=4).prop_flat_map(|n| (Just(n), simplex_point(n, q(1, 1)))),
        scale in positive(),
    ) {
        let p = MomentPolytope::simplex(n, scale.clone()).unwrap();
        let classes = p.disk_classes(&InteriorPoint::new(&p, u.clone()).unwrap()).unwrap();
        prop_assert_eq!(classes.len(), n + 1);
        prop_assert_eq!(classes.iter().map(|c| c.area.clone()).sum::<Q>(), scale.clone());
        prop_assert!(classes.iter().all(|c| c.maslov == 2));
        // the barycenter is the monotone point
        let bary = p.monotone_point().unwrap();
        let (mono, d) = p.monotone_check(&bary);
        prop_assert!(mono);
        prop_assert_eq!(d[0].clone(), &scale / q((n + 1) as i64, 1));
    }

    #[test]
    fn areas_move_linearly(a in simplex_point(2, q(1, 2)), b in simplex_point(2, q(1, 2)), scale in positive()) {
        let p = MomentPolytope::simplex(2, scale.clone()).unwrap();
        let at = |u: &[Q]| p.disk_classes(&InteriorPoint::new(&p, u.to_vec()).unwrap()).unwrap();
        for ((ca, cb), f) in at(&a).iter().zip(at(&b)).zip(p.facets()) {
            let dot: Q = f.normal.iter().zip(a.iter().zip(&b)).map(|(n, (x, y))| Q::from_integer(n.clone()) * (x - y)).sum();
            prop_assert_eq!(&ca.area - &cb.area, &scale * dot);
        }
    }

    #[test]
    fn families_lifts_share_one_degree(
        (n, coupling, alphas) in (1usize..=3, positive())
            .prop_flat_map(|(n, c)| (Just(n), Just(c.clone()), simplex_point(n, c))),
        k in 1usize..=2,
        fiber_scale in positive(),
        beta in prop::collection::vec(-2i64..=2, 2),
    ) {
        let twist = TwistData::new(alphas, coupling.clone(), k).unwrap();
        let spec = FibrationSpec::families(&twist, &beta[..k], fiber_scale.clone()).unwrap();
        let trunc = Truncation::new(&coupling + &fiber_scale + q(1, 1));
        let w = second_order_potential::<Cyclotomic>(&spec, &trunc).unwrap();
        let share = &coupling / q((n + 1) as i64, 1);
        prop_assert!(w.discarded.is_empty());
        let lifted: Vec<_> = w.potential.terms().filter(|(_, t)| t.disks.iter().any(|d| d.label.starts_with("Lv"))).collect();
        prop_assert_eq!(lifted.len(), n + 1);
        for (_, t) in lifted {
            let d = &t.disks[0];
            prop_assert_eq!(&d.base_area + &d.vertical_area, share.clone());
            prop_assert_eq!(t.coeff.collapse().valuation(), Valuation::Finite(share.clone()));
        }
    }

    #[test]
    fn minimal_degree_filter_is_idempotent(
        u in simplex_point(2, q(1, 1)),
        coupling in positive(),
        fiber_scale in positive(),
    ) {
        let base = MomentPolytope::simplex(2, q(1, 1)).unwrap();
        let bp = InteriorPoint::new(&base, u).unwrap();
        let fiber = MomentPolytope::simplex(1, fiber_scale).unwrap();
        let fp = InteriorPoint::new(&fiber, vec![q(1, 2)]).unwrap();
        let spec = FibrationSpec::flat(base, bp, fiber, fp, coupling.clone()).unwrap();
        let terms = lift_base_terms::<Cyclotomic>(&spec, &Truncation::new(&coupling + q(1, 1))).unwrap();
        let (kept, dropped) = minimal_degree_filter(&terms);
        prop_assert_eq!(kept.len() + dropped.len(), terms.len());
        prop_assert!(!kept.is_empty());
        let min = kept[0].total_degree();
        prop_assert!(kept.iter().all(|t| t.total_degree() == min));
        prop_assert!(dropped.iter().all(|t| t.total_degree() > min));
        let (again, none) = minimal_degree_filter(&kept);
        prop_assert_eq!(again, kept);
        prop_assert!(none.is_empty());
    }

    #[test]
    fn tower_levels_occupy_disjoint_bands(
        n in 2usize..=5,
        gaps in prop::collection::vec(1i64..=5, 5),
        nu in prop::collection::vec(-2i64..=2, 64),
        k_frac in 0.0f64..1.0,
    ) {
        // energies strictly decreasing: e_i = Σ_{j ≥ i} gaps_j / 6
        let energies: Vec<Q> = (0..n).map(|i| q(gaps[i..n].iter().sum(), 6)).collect();
        let scales: Vec<Q> = energies.iter().enumerate().map(|(i, e)| e * q((n - i + 1) as i64, 1)).collect();
        let mut tower = FlagTower::full_flag(n, &scales).unwrap();
        let mut it = nu.iter().cycle();
        for level in 1..n {
            let dim = n - level;
            for disk in 0..dim + 2 {
                let row: Vec<BigInt> = (0..dim).map(|_| BigInt::from(*it.next().unwrap())).collect();
                tower = tower.with_nu(level, disk, row).unwrap();
            }
        }
        let k = 1 + ((n as f64) * k_frac) as usize;
        let k = k.min(n);
        let tp = kth_order_potential::<Cyclotomic>(&tower, k, &q(10, 1)).unwrap();
        prop_assert_eq!(tp.levels.len(), k);
        let mut total = 0;
        for (i, info) in tp.levels.iter().enumerate() {
            prop_assert_eq!(info.terms, n + 1 - i);
            prop_assert_eq!(info.energy.clone(), energies[i].clone());
            total += info.terms;
        }
        prop_assert_eq!(tp.potential.len(), total);
        for (_, t) in tp.potential.terms() {
            let e = t.coeff.valuation();
            prop_assert_eq!(t.coeff.terms().len(), 1);
            prop_assert!(energies[..k].iter().any(|x| e == Valuation::Finite(x.clone())));
        }
    }
}
