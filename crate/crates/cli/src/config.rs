//! The scenario configuration language.
//!
//! A file is a sequence of `[section]` headers followed by `key = value`
//! lines. Values are integers, exact rationals `p/q`, bare words, or
//! parenthesized tuples `(a, b, ...)`. In `[base]` and `[fiber]` a facet is
//! written `normal = (a, b); offset = c` on a single line. `#` starts a
//! comment.
//!
//! ```text
//! [scenario]
//! name = flag3-m1
//! kind = flag3
//! m = 1
//! alpha = 1/2
//!
//! [solver]
//! order = 3/2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use fpk_core::fibration::{FibrationSpec, FlagTower, LiftMode, TwistData, FIBER_MAX};
use fpk_core::laurent::{Sign, VarSet};
use fpk_core::solver::DEFAULT_CONDUCTOR_BOUND;
use fpk_core::toric::{Facet, InteriorPoint, MomentPolytope};
use fpk_core::BigRational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn semantic(path: impl Into<String>, message: impl fmt::Display) -> ConfigError {
    ConfigError::Semantic { path: path.into(), message: message.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldMode {
    #[default]
    Exact,
    Float,
}

impl FieldMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldMode::Exact => "exact",
            FieldMode::Float => "float",
        }
    }
}

impl FromStr for FieldMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(FieldMode::Exact),
            "float" => Ok(FieldMode::Float),
            other => Err(format!("field must be `exact` or `float`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Lift target; `None` uses three times the smallest positive degree.
    pub target_order: Option<Q>,
    pub conductor_bound: u64,
    pub field: FieldMode,
    pub max_seeds: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { target_order: None, conductor_bound: DEFAULT_CONDUCTOR_BOUND, field: FieldMode::Exact, max_seeds: None }
    }
}

/// A moment polytope `{u : ⟨ν_i, u⟩ ≥ c_i}` with a chosen interior point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeConfig {
    pub scale: Q,
    pub facets: Vec<(Vec<i64>, Q)>,
    pub point: Vec<Q>,
    pub vars: Vec<String>,
}

impl PolytopeConfig {
    fn polytope(&self, path: &str) -> Result<MomentPolytope, ConfigError> {
        let facets = self.facets.iter().map(|(n, c)| Facet::from_i64(n, c.clone())).collect();
        MomentPolytope::new(self.point.len(), facets, self.scale.clone()).map_err(|e| semantic(path, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomSpec {
    pub coupling: Q,
    pub families: bool,
    pub base: PolytopeConfig,
    pub fiber: PolytopeConfig,
    /// 1-based base disk → holonomy row; missing rows are zero.
    pub holonomy: BTreeMap<usize, Vec<i64>>,
    pub signs: BTreeMap<usize, i64>,
    pub shifts: BTreeMap<usize, Q>,
    pub outputs: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioKind {
    Flag3 {
        m: i64,
        alpha: Q,
        eta: Q,
    },
    Families {
        coupling: Q,
        alphas: Vec<Q>,
        beta: Vec<i64>,
        fiber_scale: Q,
    },
    /// `nu[(level, disk)]` is the holonomy row of `disk` of the level below
    /// `level`, both 1-based.
    FullFlag {
        n: usize,
        k: usize,
        scales: Vec<Q>,
        nu: BTreeMap<(usize, usize), Vec<i64>>,
    },
    Custom(Box<CustomSpec>),
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Flag3 { .. } => "flag3",
            ScenarioKind::Families { .. } => "families",
            ScenarioKind::FullFlag { .. } => "fullflag",
            ScenarioKind::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub solver: SolverConfig,
}

impl Scenario {
    /// The fibration behind a `flag3`, `families` or `custom` scenario.
    pub fn fibration_spec(&self) -> Result<Option<FibrationSpec>, ConfigError> {
        match &self.kind {
            ScenarioKind::Flag3 { m, alpha, eta } => {
                FibrationSpec::flag3(*m, alpha.clone(), eta.clone()).map(Some).map_err(|e| semantic("scenario", e))
            }
            ScenarioKind::Families { coupling, alphas, beta, fiber_scale } => {
                let twist = TwistData::new(alphas.clone(), coupling.clone(), beta.len())
                    .map_err(|e| semantic("scenario.alpha", format!("{e}; α must be an interior point of K·Δ")))?;
                FibrationSpec::families(&twist, beta, fiber_scale.clone())
                    .map(Some)
                    .map_err(|e| semantic("scenario", e))
            }
            ScenarioKind::FullFlag { .. } => Ok(None),
            ScenarioKind::Custom(c) => custom_spec(c).map(Some),
        }
    }

    /// The tower and order of a `fullflag` scenario.
    pub fn tower(&self) -> Result<Option<(FlagTower, usize)>, ConfigError> {
        let ScenarioKind::FullFlag { n, k, scales, nu } = &self.kind else { return Ok(None) };
        let mut tower = FlagTower::full_flag(*n, scales).map_err(|e| semantic("scenario.scales", e))?;
        for ((level, disk), row) in nu {
            let path = format!("holonomy.nu.{level}.{disk}");
            let row = row.iter().map(|&x| BigInt::from(x)).collect();
            if *level < 2 || *disk < 1 {
                return Err(semantic(path, "levels start at 2 and disks at 1"));
            }
            tower = tower.with_nu(level - 1, disk - 1, row).map_err(|e| semantic(path, e))?;
        }
        Ok(Some((tower, *k)))
    }

    /// Check every precondition of the modules the scenario feeds.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.fibration_spec()?;
        self.tower()?;
        if let Some(t) = &self.solver.target_order {
            if !t.is_positive() {
                return Err(semantic("solver.order", "target order must be positive"));
            }
        }
        Ok(())
    }
}

fn custom_spec(c: &CustomSpec) -> Result<FibrationSpec, ConfigError> {
    let base = c.base.polytope("base")?;
    let fiber = c.fiber.polytope("fiber")?;
    let bp = InteriorPoint::new(&base, c.base.point.clone()).map_err(|e| semantic("base.point", e))?;
    let fp = InteriorPoint::new(&fiber, c.fiber.point.clone()).map_err(|e| semantic("fiber.point", e))?;
    let nb = base.facets().len();
    let k = fiber.dim();
    let mut spec = FibrationSpec {
        vars: VarSet::new(c.base.vars.clone(), c.fiber.vars.clone()).map_err(|e| semantic("base.vars", e))?,
        holonomy: vec![vec![BigInt::zero(); k]; nb],
        vertical_shift: vec![Q::zero(); nb],
        signs: vec![Sign::Plus; nb],
        outputs: vec![FIBER_MAX.to_string(); nb],
        mode: if c.families { LiftMode::Families } else { LiftMode::Flat },
        base,
        base_point: bp,
        fiber,
        fiber_point: fp,
        coupling: c.coupling.clone(),
    };
    let slot = |table: &str, disk: usize| {
        if disk == 0 || disk > nb {
            Err(semantic(format!("holonomy.{table}.{disk}"), format!("base has disks 1..={nb}")))
        } else {
            Ok(disk - 1)
        }
    };
    for (d, row) in &c.holonomy {
        spec.holonomy[slot("disk", *d)?] = row.iter().map(|&x| BigInt::from(x)).collect();
    }
    for (d, s) in &c.signs {
        spec.signs[slot("sign", *d)?] =
            Sign::from_i64(*s).ok_or_else(|| semantic(format!("holonomy.sign.{d}"), "sign must be 1 or -1"))?;
    }
    for (d, s) in &c.shifts {
        spec.vertical_shift[slot("shift", *d)?] = s.clone();
    }
    for (d, o) in &c.outputs {
        spec.outputs[slot("output", *d)?] = o.clone();
    }
    spec.validate().map_err(|e| semantic("scenario", e))?;
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Clone)]
enum Value {
    Word(String),
    Tuple(Vec<String>),
}

#[derive(Debug, Clone)]
struct Entry {
    value: Value,
    line: usize,
    column: usize,
}

#[derive(Debug, Default)]
struct Section {
    entries: BTreeMap<String, Entry>,
    facets: Vec<(Entry, Entry)>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, column, message: message.into() }
}

fn lex_value(raw: &str, line: usize, column: usize) -> Result<Value, ConfigError> {
    if let Some(inner) = raw.strip_prefix('(') {
        let inner = inner.strip_suffix(')').ok_or_else(|| syntax(line, column, "unterminated tuple"))?;
        if inner.trim().is_empty() {
            return Ok(Value::Tuple(Vec::new()));
        }
        let items: Vec<String> = inner.split(',').map(|s| s.trim().to_string()).collect();
        if items.iter().any(|s| s.is_empty() || s.contains(char::is_whitespace)) {
            return Err(syntax(line, column, "malformed tuple element"));
        }
        return Ok(Value::Tuple(items));
    }
    if raw.is_empty() {
        return Err(syntax(line, column, "missing value"));
    }
    if raw.contains(char::is_whitespace) || raw.contains([',', '(', ')']) {
        return Err(syntax(line, column, format!("unexpected value `{raw}`")));
    }
    Ok(Value::Word(raw.to_string()))
}

const SECTIONS: [&str; 5] = ["scenario", "base", "fiber", "holonomy", "solver"];

fn lex(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| syntax(line, indent + 1, "unterminated section header"))?;
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(syntax(line, indent + 2, format!("unknown section `{name}`")));
            }
            if sections.contains_key(name) {
                return Err(syntax(line, indent + 2, format!("section `{name}` appears twice")));
            }
            sections.insert(name.to_string(), Section::default());
            current = Some(name.to_string());
            continue;
        }
        let section_name = current.clone().ok_or_else(|| syntax(line, indent + 1, "entry outside any section"))?;
        let mut pairs: Vec<(String, Entry)> = Vec::new();
        let mut offset = indent;
        for part in content.split(';') {
            let lead = part.len() - part.trim_start().len();
            let column = offset + lead + 1;
            offset += part.len() + 1;
            let (key, value) = part.split_once('=').ok_or_else(|| syntax(line, column, "expected `key = value`"))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                return Err(syntax(line, column, format!("invalid key `{key}`")));
            }
            let vcol = column + part.trim_start().find('=').unwrap_or(0) + 1;
            let value = lex_value(value.trim(), line, vcol + 1)?;
            pairs.push((key.to_string(), Entry { value, line, column }));
        }
        let section = sections.get_mut(&section_name).expect("inserted on header");
        match &pairs[..] {
            [(k1, e1), (k2, e2)] if k1 == "normal" && k2 == "offset" && section_name != "scenario" => {
                section.facets.push((e1.clone(), e2.clone()));
            }
            [(k, e)] => {
                if section.entries.contains_key(k) {
                    return Err(syntax(line, e.column, format!("duplicate key `{k}`")));
                }
                section.entries.insert(k.clone(), e.clone());
            }
            _ => return Err(syntax(line, indent + 1, "only facet lines may hold several entries")),
        }
    }
    Ok(sections)
}

// ---------------------------------------------------------------------------
// Interpretation

/// The entries of one section, consumed key by key so that leftovers can be
/// reported as unknown.
struct Fields {
    section: &'static str,
    entries: BTreeMap<String, Entry>,
}

impl Fields {
    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.section)
    }

    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn word(&mut self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Entry { value: Value::Word(w), .. }) => Ok(Some(w)),
            Some(_) => Err(semantic(self.path(key), "expected a single value, not a tuple")),
        }
    }

    fn parsed<T: FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        let path = self.path(key);
        self.word(key)?
            .map(|w| w.parse::<T>().map_err(|_| semantic(path, format!("expected {what}, got `{w}`"))))
            .transpose()
    }

    fn rational(&mut self, key: &str) -> Result<Option<Q>, ConfigError> {
        let path = self.path(key);
        self.word(key)?.map(|w| parse_rational(&w).map_err(|m| semantic(path, m))).transpose()
    }

    fn tuple(&mut self, key: &str) -> Result<Option<Vec<String>>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Entry { value: Value::Tuple(t), .. }) => Ok(Some(t)),
            Some(Entry { value: Value::Word(w), .. }) => Ok(Some(vec![w])),
        }
    }

    fn rationals(&mut self, key: &str) -> Result<Option<Vec<Q>>, ConfigError> {
        let path = self.path(key);
        self.tuple(key)?
            .map(|t| t.iter().map(|w| parse_rational(w).map_err(|m| semantic(path.clone(), m))).collect())
            .transpose()
    }

    fn integers(&mut self, key: &str) -> Result<Option<Vec<i64>>, ConfigError> {
        let path = self.path(key);
        self.tuple(key)?
            .map(|t| t.iter().map(|w| parse_int(w).map_err(|m| semantic(path.clone(), m))).collect())
            .transpose()
    }

    /// Keys `prefix.<a>` or `prefix.<a>.<b>` with positive integer indices.
    fn indexed(&mut self, prefix: &str) -> Result<Vec<(Vec<usize>, String)>, ConfigError> {
        let keys: Vec<String> = self.entries.keys().filter(|k| k.starts_with(&format!("{prefix}."))).cloned().collect();
        keys.into_iter()
            .map(|k| {
                let idx = k[prefix.len() + 1..]
                    .split('.')
                    .map(|s| s.parse::<usize>().ok().filter(|&i| i > 0))
                    .collect::<Option<Vec<usize>>>()
                    .ok_or_else(|| semantic(self.path(&k), "indices must be positive integers"))?;
                Ok((idx, k))
            })
            .collect()
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((k, e)) => Err(ConfigError::Syntax {
                line: e.line,
                column: e.column,
                message: format!("unknown key `{k}` in [{}]", self.section),
            }),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Q, String> {
    if let Some((_, d)) = s.split_once('/') {
        if d.trim_start_matches('+').chars().all(|c| c == '0') {
            return Err(format!("zero denominator in `{s}`"));
        }
    }
    Q::from_str(s).map_err(|_| format!("expected a rational p/q, got `{s}`"))
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.parse::<i64>().map_err(|_| format!("expected an integer, got `{s}`"))
}

fn required<T>(v: Option<T>, path: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| semantic(path, "missing"))
}

fn fields(sections: &mut BTreeMap<String, Section>, name: &'static str) -> Fields {
    let entries = sections.get_mut(name).map(|s| std::mem::take(&mut s.entries)).unwrap_or_default();
    Fields { section: name, entries }
}

fn positive(v: Q, path: &str, what: &str) -> Result<Q, ConfigError> {
    if v.is_positive() {
        Ok(v)
    } else {
        Err(semantic(path, format!("{what} must be positive")))
    }
}

/// Parse and validate a scenario.
pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let mut sections = lex(text)?;
    if !sections.contains_key("scenario") {
        return Err(semantic("scenario", "missing [scenario] section"));
    }
    let mut sc = fields(&mut sections, "scenario");
    let kind_name = required(sc.word("kind")?, "scenario.kind")?;
    let name = sc.word("name")?.unwrap_or_else(|| kind_name.clone());
    let kind = match kind_name.as_str() {
        "flag3" => parse_flag3(&mut sc)?,
        "families" => parse_families(&mut sc)?,
        "fullflag" => parse_fullflag(&mut sc, &mut sections)?,
        "custom" => parse_custom(&mut sc, &mut sections)?,
        other => {
            return Err(semantic(
                "scenario.kind",
                format!("unknown kind `{other}` (flag3, families, fullflag, custom)"),
            ))
        }
    };
    sc.finish()?;
    let solver = parse_solver(&mut sections)?;
    for name in SECTIONS {
        if let Some(s) = sections.get(name) {
            if let Some((normal, _)) = s.facets.first() {
                return Err(syntax(
                    normal.line,
                    normal.column,
                    format!("facets are not used by this scenario kind in [{name}]"),
                ));
            }
        }
        fields(&mut sections, name).finish()?;
    }
    let scenario = Scenario { name, kind, solver };
    scenario.validate()?;
    Ok(scenario)
}

fn parse_flag3(sc: &mut Fields) -> Result<ScenarioKind, ConfigError> {
    let m = sc.parsed::<i64>("m", "an integer")?.unwrap_or(1);
    if m < 0 {
        return Err(semantic("scenario.m", "m must be non-negative"));
    }
    let alpha =
        positive(sc.rational("alpha")?.unwrap_or_else(|| Q::new(1.into(), 2.into())), "scenario.alpha", "alpha")?;
    let eta = sc.rational("eta")?.unwrap_or_else(Q::one);
    if eta <= alpha {
        return Err(semantic("scenario.eta", "eta must exceed alpha"));
    }
    Ok(ScenarioKind::Flag3 { m, alpha, eta })
}

fn parse_families(sc: &mut Fields) -> Result<ScenarioKind, ConfigError> {
    let coupling = positive(required(sc.rational("coupling")?, "scenario.coupling")?, "scenario.coupling", "coupling")?;
    let alphas = required(sc.rationals("alpha")?, "scenario.alpha")?;
    if let Some(n) = sc.parsed::<usize>("n", "a dimension")? {
        if n != alphas.len() {
            return Err(semantic("scenario.alpha", format!("n = {n} but alpha has {} entries", alphas.len())));
        }
    }
    let beta = match (sc.parsed::<usize>("k", "a dimension")?, sc.integers("beta")?) {
        (Some(k), Some(b)) if b.len() != k => {
            return Err(semantic("scenario.beta", format!("k = {k} but beta has {} entries", b.len())))
        }
        (_, Some(b)) => b,
        (Some(k), None) => vec![0; k],
        (None, None) => return Err(semantic("scenario.k", "missing")),
    };
    if beta.is_empty() {
        return Err(semantic("scenario.k", "fiber dimension must be positive"));
    }
    let fiber_scale =
        positive(sc.rational("fiber_scale")?.unwrap_or_else(Q::one), "scenario.fiber_scale", "fiber scale")?;
    Ok(ScenarioKind::Families { coupling, alphas, beta, fiber_scale })
}

/// Scales giving level `i` (0-based) the energy `k − i`.
pub fn default_scales(n: usize, k: usize) -> Vec<Q> {
    (0..k).map(|i| Q::from_integer(((k - i) * (n - i + 1)).into())).collect()
}

fn parse_fullflag(sc: &mut Fields, sections: &mut BTreeMap<String, Section>) -> Result<ScenarioKind, ConfigError> {
    let n = required(sc.parsed::<usize>("n", "a dimension")?, "scenario.n")?;
    let k = sc.parsed::<usize>("k", "an order")?.unwrap_or(1);
    if n == 0 || k == 0 || k > n {
        return Err(semantic("scenario.k", format!("need 1 ≤ k ≤ n, got n = {n}, k = {k}")));
    }
    let scales = sc.rationals("scales")?.unwrap_or_else(|| default_scales(n, k));
    if scales.len() != k {
        return Err(semantic("scenario.scales", format!("expected {k} scales, got {}", scales.len())));
    }
    let mut hol = fields(sections, "holonomy");
    let mut nu = BTreeMap::new();
    for (idx, key) in hol.indexed("nu")? {
        let path = hol.path(&key);
        let [level, disk] = idx[..] else { return Err(semantic(path, "expected nu.<level>.<disk>")) };
        let row = hol.integers(&key)?.expect("listed key");
        nu.insert((level, disk), row);
    }
    hol.finish()?;
    Ok(ScenarioKind::FullFlag { n, k, scales, nu })
}

fn parse_polytope(
    sections: &mut BTreeMap<String, Section>,
    name: &'static str,
    default_prefix: &str,
) -> Result<PolytopeConfig, ConfigError> {
    let facets_raw = sections.get_mut(name).map(|s| std::mem::take(&mut s.facets)).unwrap_or_default();
    let mut f = fields(sections, name);
    let scale = positive(f.rational("scale")?.unwrap_or_else(Q::one), &f.path("scale"), "scale")?;
    let point = required(f.rationals("point")?, &f.path("point"))?;
    let vars = match f.tuple("vars")? {
        Some(v) => v,
        None => (1..=point.len()).map(|i| format!("{default_prefix}{i}")).collect(),
    };
    if vars.len() != point.len() {
        return Err(semantic(f.path("vars"), format!("{} names for a point of dimension {}", vars.len(), point.len())));
    }
    let mut facets = Vec::new();
    for (i, (normal, offset)) in facets_raw.into_iter().enumerate() {
        let path = format!("{name}.facet.{}", i + 1);
        let to_tuple = |v: Value| match v {
            Value::Tuple(t) => t,
            Value::Word(w) => vec![w],
        };
        let n = to_tuple(normal.value).iter().map(|w| parse_int(w)).collect::<Result<Vec<_>, _>>();
        let n = n.map_err(|m| semantic(format!("{path}.normal"), m))?;
        let Value::Word(c) = offset.value else {
            return Err(semantic(format!("{path}.offset"), "expected a rational"));
        };
        let c = parse_rational(&c).map_err(|m| semantic(format!("{path}.offset"), m))?;
        facets.push((n, c));
    }
    if facets.is_empty() {
        return Err(semantic(name, "no facets"));
    }
    f.finish()?;
    Ok(PolytopeConfig { scale, facets, point, vars })
}

fn parse_custom(sc: &mut Fields, sections: &mut BTreeMap<String, Section>) -> Result<ScenarioKind, ConfigError> {
    let coupling = positive(required(sc.rational("coupling")?, "scenario.coupling")?, "scenario.coupling", "coupling")?;
    let families = match sc.word("mode")?.as_deref() {
        None | Some("flat") => false,
        Some("families") => true,
        Some(other) => {
            return Err(semantic("scenario.mode", format!("mode must be `flat` or `families`, got `{other}`")))
        }
    };
    let base = parse_polytope(sections, "base", "y")?;
    let fiber = parse_polytope(sections, "fiber", "x")?;
    let mut hol = fields(sections, "holonomy");
    let mut spec = CustomSpec {
        coupling,
        families,
        base,
        fiber,
        holonomy: BTreeMap::new(),
        signs: BTreeMap::new(),
        shifts: BTreeMap::new(),
        outputs: BTreeMap::new(),
    };
    for table in ["disk", "sign", "shift", "output"] {
        for (idx, key) in hol.indexed(table)? {
            let path = hol.path(&key);
            let [d] = idx[..] else { return Err(semantic(path, format!("expected {table}.<disk>"))) };
            match table {
                "disk" => {
                    spec.holonomy.insert(d, hol.integers(&key)?.expect("listed key"));
                }
                "sign" => {
                    spec.signs.insert(d, hol.parsed::<i64>(&key, "1 or -1")?.expect("listed key"));
                }
                "shift" => {
                    spec.shifts.insert(d, hol.rational(&key)?.expect("listed key"));
                }
                _ => {
                    spec.outputs.insert(d, hol.word(&key)?.expect("listed key"));
                }
            }
        }
    }
    hol.finish()?;
    Ok(ScenarioKind::Custom(Box::new(spec)))
}

fn parse_solver(sections: &mut BTreeMap<String, Section>) -> Result<SolverConfig, ConfigError> {
    let mut f = fields(sections, "solver");
    let mut s = SolverConfig::default();
    if let Some(o) = f.rational("order")? {
        s.target_order = Some(positive(o, "solver.order", "target order")?);
    }
    if let Some(c) = f.parsed::<u64>("conductor", "a positive integer")? {
        if c == 0 {
            return Err(semantic("solver.conductor", "conductor bound must be positive"));
        }
        s.conductor_bound = c;
    }
    if let Some(w) = f.word("field")? {
        s.field = w.parse().map_err(|m| semantic("solver.field", m))?;
    }
    s.max_seeds = f.parsed::<usize>("max_seeds", "a count")?;
    f.finish()?;
    Ok(s)
}

// ---------------------------------------------------------------------------
// Rendering

fn tuple<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn render_polytope(out: &mut String, name: &str, p: &PolytopeConfig) {
    let _ = writeln!(out, "\n[{name}]");
    let _ = writeln!(out, "scale = {}", p.scale);
    let _ = writeln!(out, "vars = {}", tuple(&p.vars));
    let _ = writeln!(out, "point = {}", tuple(&p.point));
    for (n, c) in &p.facets {
        let _ = writeln!(out, "normal = {}; offset = {c}", tuple(n));
    }
}

/// The canonical text of a scenario; `parse_config(&render(s)) == s`.
pub fn render(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[scenario]");
    let _ = writeln!(out, "name = {}", s.name);
    let _ = writeln!(out, "kind = {}", s.kind.name());
    match &s.kind {
        ScenarioKind::Flag3 { m, alpha, eta } => {
            let _ = writeln!(out, "m = {m}\nalpha = {alpha}\neta = {eta}");
        }
        ScenarioKind::Families { coupling, alphas, beta, fiber_scale } => {
            let _ = writeln!(out, "n = {}\nk = {}", alphas.len(), beta.len());
            let _ = writeln!(out, "coupling = {coupling}\nalpha = {}", tuple(alphas));
            let _ = writeln!(out, "beta = {}\nfiber_scale = {fiber_scale}", tuple(beta));
        }
        ScenarioKind::FullFlag { n, k, scales, nu } => {
            let _ = writeln!(out, "n = {n}\nk = {k}\nscales = {}", tuple(scales));
            if !nu.is_empty() {
                let _ = writeln!(out, "\n[holonomy]");
                for ((l, d), row) in nu {
                    let _ = writeln!(out, "nu.{l}.{d} = {}", tuple(row));
                }
            }
        }
        ScenarioKind::Custom(c) => {
            let _ = writeln!(out, "coupling = {}", c.coupling);
            let _ = writeln!(out, "mode = {}", if c.families { "families" } else { "flat" });
            render_polytope(&mut out, "base", &c.base);
            render_polytope(&mut out, "fiber", &c.fiber);
            let used: BTreeSet<usize> = c
                .holonomy
                .keys()
                .chain(c.signs.keys())
                .chain(c.shifts.keys())
                .chain(c.outputs.keys())
                .copied()
                .collect();
            if !used.is_empty() {
                let _ = writeln!(out, "\n[holonomy]");
                for (d, row) in &c.holonomy {
                    let _ = writeln!(out, "disk.{d} = {}", tuple(row));
                }
                for (d, v) in &c.signs {
                    let _ = writeln!(out, "sign.{d} = {v}");
                }
                for (d, v) in &c.shifts {
                    let _ = writeln!(out, "shift.{d} = {v}");
                }
                for (d, v) in &c.outputs {
                    let _ = writeln!(out, "output.{d} = {v}");
                }
            }
        }
    }
    let _ = writeln!(out, "\n[solver]");
    if let Some(t) = &s.solver.target_order {
        let _ = writeln!(out, "order = {t}");
    }
    let _ = writeln!(out, "conductor = {}", s.solver.conductor_bound);
    let _ = writeln!(out, "field = {}", s.solver.field.as_str());
    if let Some(m) = s.solver.max_seeds {
        let _ = writeln!(out, "max_seeds = {m}");
    }
    out
}
