//! The JSON report. Field order follows declaration order, so identical
//! runs serialize to identical bytes.

use fpk_core::laurent::{DiskMeta, LaurentPotential, Monomial, VarSet};
use fpk_core::novikov::{NovikovSeries, Valuation};
use fpk_core::scalar::{ApproxComplex, Cyclotomic, Scalar};
use fpk_core::solver::{SolveReport, System};
use fpk_core::treed::IdentitySuite;
use fpk_core::BigRational;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

pub const FORMAT: &str = "fpk-report/1";

/// JSON form of a coefficient.
pub trait CoeffJson: Scalar {
    fn to_json(&self) -> Value;
}

/// Rationals as `"p/q"` strings; anything else by its power-basis
/// coordinates over `ℚ(ζ_N)`.
impl CoeffJson for Cyclotomic {
    fn to_json(&self) -> Value {
        match self.as_rational() {
            Some(r) => Value::String(r.to_string()),
            None => json!({
                "conductor": self.conductor(),
                "power_basis": self.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        }
    }
}

/// `[re, im]`.
impl CoeffJson for ApproxComplex {
    fn to_json(&self) -> Value {
        json!([self.0.re, self.0.im])
    }
}

fn int(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

pub fn rational(q: &BigRational) -> String {
    q.to_string()
}

/// `[[exponent_num, exponent_den, coeff], ...]`.
pub fn series<C: CoeffJson>(s: &NovikovSeries<C>) -> Value {
    Value::Array(s.terms().iter().map(|(e, c)| json!([int(e.numer()), int(e.denom()), c.to_json()])).collect())
}

pub fn valuation(v: &Valuation) -> String {
    match v {
        Valuation::Finite(q) => rational(q),
        Valuation::Infinite => "inf".to_string(),
    }
}

fn monomial(m: &Monomial) -> Vec<Value> {
    m.exponents().iter().map(int).collect()
}

fn names(vars: &VarSet) -> Vec<String> {
    vars.names().to_vec()
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskJson {
    pub label: String,
    pub maslov: i64,
    pub base_area: String,
    pub vertical_area: String,
    pub sign: i64,
    pub output: String,
}

impl From<&DiskMeta> for DiskJson {
    fn from(d: &DiskMeta) -> Self {
        Self {
            label: d.label.clone(),
            maslov: d.maslov,
            base_area: rational(&d.base_area),
            vertical_area: rational(&d.vertical_area),
            sign: d.sign.as_i64(),
            output: d.output.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub monomial: Vec<Value>,
    pub coeff: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub disks: Vec<DiskJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl PotentialJson {
    pub fn new<C: CoeffJson>(p: &LaurentPotential<NovikovSeries<C>>) -> Self {
        let terms = p
            .terms()
            .map(|(m, t)| TermJson {
                monomial: monomial(m),
                coeff: series(&t.coeff),
                disks: t.disks.iter().map(DiskJson::from).collect(),
            })
            .collect();
        Self { vars: names(p.vars()), terms }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquationJson {
    pub source: String,
    pub clearing_monomial: Vec<Value>,
    pub t_shift: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepJson {
    pub residual_valuation: String,
    pub correction: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianJson {
    pub valuation: String,
    pub coeff: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveJson {
    pub seed_angles: Vec<String>,
    pub seed: Vec<Value>,
    pub solution: Vec<Value>,
    /// The solution in the original variables, for solves on a cover.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pushed: Option<Vec<Value>>,
    pub achieved_order: String,
    pub residual_valuations: Vec<String>,
    pub jacobian_unit: bool,
    pub hessian_nondegenerate: bool,
    pub hessian_leading: Option<HessianJson>,
    pub verdict: &'static str,
    pub iterations: usize,
    pub steps: Vec<StepJson>,
    pub error: Option<String>,
}

impl SolveJson {
    pub fn new<C: CoeffJson>(r: &SolveReport<C>, pushed: Option<&[NovikovSeries<C>]>) -> Self {
        Self {
            seed_angles: r.seed.angles.iter().map(rational).collect(),
            seed: r.seed.values.iter().map(CoeffJson::to_json).collect(),
            solution: r.solution.iter().map(series).collect(),
            pushed: pushed.map(|p| p.iter().map(series).collect()),
            achieved_order: rational(&r.achieved_order),
            residual_valuations: r.residual_valuations.iter().map(valuation).collect(),
            jacobian_unit: r.jacobian_unit,
            hessian_nondegenerate: r.hessian_nondegenerate,
            hessian_leading: r
                .hessian_leading
                .as_ref()
                .map(|(v, c)| HessianJson { valuation: rational(v), coeff: c.to_json() }),
            verdict: r.verdict.as_str(),
            iterations: r.iterations,
            steps: r
                .steps
                .iter()
                .map(|s| StepJson {
                    residual_valuation: valuation(&s.residual_valuation),
                    correction: s.correction.iter().map(series).collect(),
                })
                .collect(),
            error: r.error.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Counts towards the exit status.
    Primary,
    /// Solved for comparison only.
    Reference,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemJson {
    pub name: String,
    pub role: Role,
    pub vars: Vec<String>,
    pub equations: Vec<EquationJson>,
    pub target: String,
    pub seed_method: &'static str,
    pub seeds_complete: bool,
    pub solves: Vec<SolveJson>,
}

impl SystemJson {
    pub fn new<C: CoeffJson>(name: &str, role: Role, sys: &System<C>) -> Self {
        let equations = sys
            .equations()
            .iter()
            .zip(sys.provenance())
            .map(|(e, p)| EquationJson {
                source: p.source.clone(),
                clearing_monomial: monomial(&p.clearing_monomial),
                t_shift: rational(&p.t_shift),
                terms: PotentialJson::new(e).terms,
            })
            .collect();
        Self {
            name: name.to_string(),
            role,
            vars: names(sys.vars()),
            equations,
            target: String::new(),
            seed_method: "",
            seeds_complete: true,
            solves: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeBalance {
    pub expected: String,
    pub degrees: Vec<String>,
    pub balanced: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelJson {
    pub level: usize,
    pub dim: usize,
    pub energy: String,
    pub vars: Vec<String>,
    pub terms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexSample {
    pub seed: u64,
    pub types: usize,
    pub identity_checked: usize,
    pub identity_failures: usize,
    pub unsupported: usize,
    pub idempotence_failures: usize,
    pub inequality_checked: usize,
    pub lower_checked: usize,
    pub inequality_failures: usize,
    pub hypothesis_violations: usize,
    pub lift_checked: usize,
    pub lift_failures: usize,
    pub cut_checked: usize,
    pub cut_failures: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl From<&IdentitySuite> for IndexSample {
    fn from(s: &IdentitySuite) -> Self {
        Self {
            seed: s.seed,
            types: s.types,
            identity_checked: s.identity_checked,
            identity_failures: s.identity_failures,
            unsupported: s.unsupported,
            idempotence_failures: s.idempotence_failures,
            inequality_checked: s.inequality_checked,
            lower_checked: s.lower_checked,
            inequality_failures: s.inequality_failures,
            hypothesis_violations: s.hypothesis_violations,
            lift_checked: s.lift_checked,
            lift_failures: s.lift_failures,
            cut_checked: s.cut_checked,
            cut_failures: s.cut_failures,
            passed: s.passed(),
            failures: s.failures.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub candidates: usize,
    pub inconclusive: usize,
    pub failed: usize,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub assemble_ms: f64,
    pub solve_ms: f64,
    pub index_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub kind: &'static str,
    /// The canonical configuration text; parsing and running it again
    /// reproduces this report.
    pub config: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub scenario: ScenarioEcho,
    pub field: &'static str,
    pub cutoff: String,
    pub potential: PotentialJson,
    pub discarded: Vec<DiskJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_balance: Option<DegreeBalance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelJson>>,
    pub systems: Vec<SystemJson>,
    pub index_sample: Option<IndexSample>,
    pub summary: Summary,
    pub warnings: Vec<String>,
    pub timings: Option<Timings>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialize")
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }
}
