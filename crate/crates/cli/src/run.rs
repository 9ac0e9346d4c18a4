//! From a scenario to a report.

use std::time::Instant;

use fpk_core::fibration::{kth_order_potential, lift_base_terms, second_order_potential, FibrationSpec};
use fpk_core::novikov::NovikovSeries;
use fpk_core::scalar::{ApproxComplex, Cyclotomic};
use fpk_core::solver::{
    flag3_literal_system, leading_determinant, solve_flag3_cover, solve_scenario, solve_system, system_cutoff, Poly,
    ScenarioSolve, SeedMethod, SolveOptions, SolverError, Verdict,
};
use fpk_core::toric::Truncation;
use fpk_core::treed::run_identity_suite;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::config::{render, ConfigError, FieldMode, Scenario, ScenarioKind, Q};
use crate::report::{
    rational, CoeffJson, DegreeBalance, DiskJson, IndexSample, LevelJson, PotentialJson, Report, Role, ScenarioEcho,
    SolveJson, Summary, SystemJson, Timings, FORMAT,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Size of the treed-type identity sample to include, if any.
    pub index_sample: Option<usize>,
    pub index_seed: u64,
    pub timings: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{stage}: {message}")]
    Stage { stage: String, message: String },
}

fn stage<E: std::fmt::Display>(stage: impl Into<String>) -> impl FnOnce(E) -> RunError {
    let stage = stage.into();
    move |e| RunError::Stage { stage, message: e.to_string() }
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<Report, RunError> {
    scenario.validate()?;
    match scenario.solver.field {
        FieldMode::Exact => run_in::<Cyclotomic>(scenario, opts),
        FieldMode::Float => run_in::<ApproxComplex>(scenario, opts),
    }
}

/// Largest total degree of any disk of the fibration.
fn max_degree(spec: &FibrationSpec) -> Result<Q, RunError> {
    let lifted =
        lift_base_terms::<Cyclotomic>(spec, &Truncation::new(Q::zero())).map_err(stage("lifting base disks"))?;
    let fiber = spec.fiber.disk_classes(&spec.fiber_point).map_err(stage("fiber disks"))?;
    Ok(lifted.iter().map(|t| t.total_degree()).chain(fiber.into_iter().map(|d| d.area)).max().unwrap_or_else(Q::zero))
}

/// Enough precision for the requested target above every term, or four
/// times the largest degree when the target is left to the solver.
fn cutoff_for(max: &Q, target: Option<&Q>) -> Q {
    match target {
        Some(t) => max + t,
        None => max * Q::from_integer(4.into()),
    }
}

struct Assembled<C: CoeffJson> {
    w: Poly<C>,
    cutoff: Q,
    discarded: Vec<DiskJson>,
    degree_balance: Option<DegreeBalance>,
    levels: Option<Vec<LevelJson>>,
    warnings: Vec<String>,
}

fn assemble<C: CoeffJson>(s: &Scenario) -> Result<Assembled<C>, RunError> {
    let target = s.solver.target_order.as_ref();
    if let Some((tower, k)) = s.tower()? {
        let top = tower.levels().iter().map(|l| l.energy()).max().unwrap_or_else(Q::zero);
        let cutoff = cutoff_for(&top, target);
        let tp = kth_order_potential::<C>(&tower, k, &cutoff).map_err(stage("assembling the tower potential"))?;
        let levels = tp
            .levels
            .iter()
            .map(|l| LevelJson {
                level: l.level,
                dim: l.dim,
                energy: rational(&l.energy),
                vars: l.vars.clone(),
                terms: l.terms,
            })
            .collect();
        return Ok(Assembled {
            w: tp.potential,
            cutoff,
            discarded: Vec::new(),
            degree_balance: None,
            levels: Some(levels),
            warnings: Vec::new(),
        });
    }
    let spec = s.fibration_spec()?.expect("every other kind is a fibration");
    let cutoff = cutoff_for(&max_degree(&spec)?, target);
    let assembled = second_order_potential::<C>(&spec, &Truncation::new(cutoff.clone()))
        .map_err(stage("assembling the potential"))?;
    let degree_balance = match &s.kind {
        ScenarioKind::Families { coupling, alphas, .. } => {
            let expected = coupling / Q::from_integer((alphas.len() + 1).into());
            let degrees: Vec<Q> = assembled
                .potential
                .terms()
                .flat_map(|(_, t)| t.disks.iter())
                .filter(|d| d.label.starts_with("Lv"))
                .map(|d| &d.base_area + &d.vertical_area)
                .collect();
            let balanced = degrees.len() == alphas.len() + 1 && degrees.iter().all(|d| *d == expected);
            Some(DegreeBalance {
                expected: rational(&expected),
                degrees: degrees.iter().map(rational).collect(),
                balanced,
            })
        }
        _ => None,
    };
    Ok(Assembled {
        w: assembled.potential.collapse(),
        cutoff,
        discarded: assembled.discarded.iter().map(DiskJson::from).collect(),
        degree_balance,
        levels: None,
        warnings: assembled.warnings,
    })
}

fn system_json<C: CoeffJson>(
    name: &str,
    role: Role,
    out: &ScenarioSolve<C>,
    pushed: Option<&[Vec<NovikovSeries<C>>]>,
) -> SystemJson {
    let mut j = SystemJson::new(name, role, &out.system);
    j.target = rational(&out.target);
    j.seed_method = match out.seed_method {
        SeedMethod::Lattice => "lattice",
        SeedMethod::Enumeration => "enumeration",
    };
    j.seeds_complete = out.seeds_complete;
    j.solves =
        out.reports.iter().enumerate().map(|(i, r)| SolveJson::new(r, pushed.map(|p| p[i].as_slice()))).collect();
    j
}

fn solve_all<C: CoeffJson>(s: &Scenario, w: &Poly<C>) -> Result<Vec<(SystemJson, Vec<Verdict>)>, RunError> {
    let opts = SolveOptions {
        target_order: s.solver.target_order.clone(),
        conductor_bound: s.solver.conductor_bound,
        max_seeds: s.solver.max_seeds,
        parallel: false,
    };
    let verdicts = |o: &ScenarioSolve<C>| o.reports.iter().map(|r| r.verdict).collect::<Vec<_>>();
    let full = solve_scenario(w, &opts).map_err(stage("solving the critical system"))?;
    let mut out = vec![(system_json("full", Role::Primary, &full, None), verdicts(&full))];
    if let ScenarioKind::Flag3 { m, alpha, .. } = &s.kind {
        let cover = solve_flag3_cover(w, *m, &opts).map_err(stage("solving the reduced equation on the cover"))?;
        out.push((system_json("cover", Role::Primary, &cover.solve, Some(&cover.pushed)), verdicts(&cover.solve)));
        // the literal one-variable form y^{5m+3} - y^{5m+1} - m t^a, whose
        // "Hessian" is its derivative
        let cut = system_cutoff(&cover.solve.system);
        let literal_sys = flag3_literal_system::<C>(*m, alpha, &cut).map_err(stage("building the literal equation"))?;
        let f = literal_sys.equations()[0].clone();
        let df = f.partial_derivative_index(0);
        let literal = solve_system(literal_sys, &opts, |sol| {
            let p_cut = sol.iter().map(|x| x.cutoff().clone()).min().unwrap_or_else(|| cut.clone());
            let at: Vec<_> = sol.iter().map(|x| x.with_cutoff(cut.clone())).collect();
            let d = df.evaluate(&at).map_err(SolverError::from)?;
            Ok(leading_determinant(vec![vec![d.with_cutoff(p_cut.min(cut.clone()))]]))
        })
        .map_err(stage("solving the literal equation"))?;
        out.push((system_json("literal", Role::Reference, &literal, None), verdicts(&literal)));
    }
    Ok(out)
}

fn run_in<C: CoeffJson>(s: &Scenario, opts: &RunOptions) -> Result<Report, RunError> {
    let start = Instant::now();
    let a = assemble::<C>(s)?;
    let assembled_at = Instant::now();
    let systems = solve_all(s, &a.w)?;
    let solved_at = Instant::now();
    let index_sample = opts
        .index_sample
        .map(|n| run_identity_suite(opts.index_seed, n).map(|suite| IndexSample::from(&suite)))
        .transpose()
        .map_err(stage("index identity sample"))?;
    let done = Instant::now();

    let mut summary = Summary::default();
    let mut warnings = a.warnings;
    for (sys, verdicts) in &systems {
        if !sys.seeds_complete {
            warnings.push(format!("seed search for `{}` stopped at the enumeration budget", sys.name));
        }
        if sys.role != Role::Primary {
            continue;
        }
        for v in verdicts {
            match v {
                Verdict::FloerNontrivialCandidate => summary.candidates += 1,
                Verdict::Inconclusive => summary.inconclusive += 1,
                Verdict::Failed => summary.failed += 1,
            }
        }
    }
    summary.exit_code = if summary.candidates > 0 && summary.inconclusive == 0 && summary.failed == 0 { 0 } else { 2 };
    if s.solver.field == FieldMode::Float {
        warnings.push("float field: zero tests use a relative tolerance".into());
    }
    if a.cutoff.is_negative() || a.cutoff.is_zero() {
        warnings.push("potential has no positive degree".into());
    }
    let ms = |a: Instant, b: Instant| (b - a).as_secs_f64() * 1000.0;
    Ok(Report {
        format: FORMAT,
        scenario: ScenarioEcho { name: s.name.clone(), kind: s.kind.name(), config: render(s) },
        field: s.solver.field.as_str(),
        cutoff: rational(&a.cutoff),
        potential: PotentialJson::new(&a.w),
        discarded: a.discarded,
        degree_balance: a.degree_balance,
        levels: a.levels,
        systems: systems.into_iter().map(|(j, _)| j).collect(),
        index_sample,
        summary,
        warnings,
        timings: opts.timings.then(|| Timings {
            assemble_ms: ms(start, assembled_at),
            solve_ms: ms(assembled_at, solved_at),
            index_ms: ms(solved_at, done),
            total_ms: ms(start, done),
        }),
    })
}
