//! Rendering a scenario and parsing it back is the identity.

use std::collections::BTreeMap;

use fpk_cli::config::{default_scales, FieldMode, SolverConfig, Q};
use fpk_cli::{parse_config, render, Scenario, ScenarioKind};
use proptest::prelude::*;

fn rat(max_num: i64, max_den: i64) -> impl Strategy<Value = Q> {
    (1..=max_num, 1..=max_den).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

fn solver() -> impl Strategy<Value = SolverConfig> {
    (prop::option::of(rat(9, 4)), 1u64..=60, any::<bool>(), prop::option::of(1usize..100)).prop_map(
        |(target_order, conductor_bound, float, max_seeds)| SolverConfig {
            target_order,
            conductor_bound,
            field: if float { FieldMode::Float } else { FieldMode::Exact },
            max_seeds,
        },
    )
}

fn flag3() -> impl Strategy<Value = ScenarioKind> {
    (0i64..6, rat(5, 6), rat(3, 3)).prop_map(|(m, alpha, extra)| {
        let eta = &alpha + extra;
        ScenarioKind::Flag3 { m, alpha, eta }
    })
}

/// Interior barycentric-style points: `α_i = K·w_i / (Σw + 1)`.
fn families() -> impl Strategy<Value = ScenarioKind> {
    (1usize..=3, 1usize..=2, rat(6, 2)).prop_flat_map(|(n, k, coupling)| {
        (prop::collection::vec(1i64..5, n + 1), prop::collection::vec(-2i64..=2, k), rat(3, 2)).prop_map(
            move |(w, beta, fiber_scale)| {
                let total: i64 = w.iter().sum();
                let alphas = w[..n].iter().map(|&x| &coupling * Q::new(x.into(), total.into())).collect();
                ScenarioKind::Families { coupling: coupling.clone(), alphas, beta, fiber_scale }
            },
        )
    })
}

fn fullflag() -> impl Strategy<Value = ScenarioKind> {
    (2usize..=4).prop_flat_map(|n| {
        (1..n, prop::collection::vec((-1i64..=1, -1i64..=1), 0..3)).prop_map(move |(k, rows)| {
            let mut nu = BTreeMap::new();
            // a tower of order k has levels 1..=k, so twisting needs k ≥ 2
            for (i, (a, b)) in rows.into_iter().enumerate().filter(|_| k >= 2) {
                // level 2 sits over a base of dimension n−1 ≥ 1 with n disks
                let mut row = vec![0; n - 1];
                row[0] = a;
                row[n - 2] += b;
                nu.insert((2, 1 + i % n), row);
            }
            ScenarioKind::FullFlag { n, k, scales: default_scales(n, k), nu }
        })
    })
}

fn scenario() -> impl Strategy<Value = Scenario> {
    ("[a-z][a-z0-9_-]{0,12}", prop_oneof![flag3(), families(), fullflag()], solver())
        .prop_map(|(name, kind, solver)| Scenario { name, kind, solver })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn render_then_parse_is_identity(s in scenario()) {
        let text = render(&s);
        let back = parse_config(&text);
        prop_assert_eq!(back.as_ref(), Ok(&s), "{}", text);
        prop_assert_eq!(render(&back.unwrap()), text);
    }
}
