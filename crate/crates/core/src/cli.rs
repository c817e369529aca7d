//! Command-line front end.
//!
//! Configurations are JSON documents. Classes are integer arrays or names
//! declared under `classes`; map keys naming a class may be a declared name
//! or a comma-separated vector such as `"1,0"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::classes::{fmt_class, Class, EffectiveMonoid};
use crate::descendent::{default_names, dt_to_pt, format_vertex, y_explicit, y_series, Names};
use crate::freelie::{bracketing, LieElement};
use crate::ring::{fmt_q, parse_q, Ext, Laurent, RatFn, SlopeValue};
use crate::selftest;
use crate::ucoeff::{s_coeff, simple_type, u_coeff, utilde_coeff, utilde_lie_element, StabilityData};
use crate::wallcross::{wcf_rhs, FreeLie, InvariantTable, QuantumTorus};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read configuration: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration at {path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("{0}")]
    Compute(String),
}

fn invalid(path: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Invalid { path: path.into(), msg: msg.into() }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Free,
    Qtorus,
}

#[derive(Debug, Parser)]
#[command(name = "owc", version, about = "Exact operational wall-crossing computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: Format,
    /// Cap on the number of parts in a decomposition.
    #[arg(long, default_value_t = 8, global = true)]
    pub max_parts: usize,
    /// Series truncation order.
    #[arg(long, default_value_t = 12, global = true)]
    pub order: usize,
    /// Lie algebra backend for wall-crossing; defaults to `qtorus` when the
    /// configuration has a `chi` form.
    #[arg(long, value_enum, global = true)]
    pub backend: Option<Backend>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Configuration file; standard input when omitted or `-`.
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate S, U and Ũ for every decomposition of the target class.
    Ucoeff(ConfigArg),
    /// Evaluate the wall-crossing formula for the invariant table.
    Wallcross(ConfigArg),
    /// Wall-crossing in the quantum-torus backend.
    Vwnum(ConfigArg),
    /// DT/PT descendent correspondence for `σ{k_1..k_N}`.
    Descendent {
        /// Number of keys; ignored when `--keys` is given.
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        /// Integer keys, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        keys: Option<Vec<i64>>,
        /// Also print the corner entry of exp(-Δ) truncated at `--order`.
        #[arg(long)]
        series: bool,
    },
    /// Run every acceptance criterion.
    Selftest,
}

/// A stability condition in a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StabilitySpec {
    /// Explicit slope tuples per class.
    Table(BTreeMap<String, Vec<String>>),
    /// `(d . c) / (r . c)`.
    Ratio { d: Vec<i64>, r: Vec<i64> },
    /// The two-dimensional simple-type family at parameter `t`.
    SimpleType(i64),
}

/// A class reference: a declared name or an integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassRef {
    Name(String),
    Vector(Vec<i64>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classes: BTreeMap<String, Vec<i64>>,
    /// Generators of the effective monoid; the standard basis by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<ClassRef>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub stabilities: BTreeMap<String, StabilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fr: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub o: Option<BTreeMap<String, u64>>,
    /// Invariant per class: a rational number or a symbol name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub invariants: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ClassRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<ClassRef>>,
    /// Name of the initial stability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    /// Name of the final stability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    /// Use `(-1)^(n-1) n` in place of `[n]` in the quantum torus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unrefined: Option<bool>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn dimension(&self) -> Option<usize> {
        self.classes
            .values()
            .map(|v| v.len())
            .chain(self.target.iter().filter_map(|t| match t {
                ClassRef::Vector(v) => Some(v.len()),
                ClassRef::Name(_) => None,
            }))
            .chain(self.chi.iter().map(|m| m.len()))
            .chain(self.invariants.keys().filter_map(|k| self.resolve_key(k).ok().map(|c| c.len())))
            .next()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let dim = self.dimension();
        for (name, v) in &self.classes {
            if Some(v.len()) != dim {
                return Err(invalid(format!("classes.{name}"), "dimension differs from the other classes"));
            }
        }
        if let Some(m) = &self.chi {
            for (i, row) in m.iter().enumerate() {
                if row.len() != m.len() {
                    return Err(invalid(format!("chi[{i}]"), "chi must be square"));
                }
                for (j, x) in row.iter().enumerate() {
                    if *x != -m[j][i] {
                        return Err(invalid(format!("chi[{i}][{j}]"), "chi is not antisymmetric"));
                    }
                }
            }
        }
        for (name, spec) in &self.stabilities {
            if let StabilitySpec::Table(t) = spec {
                let mut len = None;
                for (k, tuple) in t {
                    self.resolve_key(k).map_err(|e| invalid(format!("stabilities.{name}.{k}"), e))?;
                    if *len.get_or_insert(tuple.len()) != tuple.len() {
                        return Err(invalid(format!("stabilities.{name}.{k}"), "slope tuples must have uniform length"));
                    }
                    for s in tuple {
                        Ext::parse(s).map_err(|e| invalid(format!("stabilities.{name}.{k}"), e.to_string()))?;
                    }
                }
            }
        }
        for (field, name) in [("from", &self.from), ("to", &self.to)] {
            if let Some(n) = name {
                if !self.stabilities.contains_key(n) {
                    return Err(invalid(field, format!("unknown stability '{n}'")));
                }
            }
        }
        let maps: [(&str, Vec<&String>); 3] = [
            ("fr", self.fr.iter().flat_map(|m| m.keys()).collect()),
            ("o", self.o.iter().flat_map(|m| m.keys()).collect()),
            ("invariants", self.invariants.keys().collect()),
        ];
        for (field, keys) in maps {
            for k in keys {
                self.resolve_key(k).map_err(|e| invalid(format!("{field}.{k}"), e))?;
            }
        }
        for r in self.target.iter().chain(self.targets.iter().flatten()) {
            self.resolve(r).map_err(|e| invalid("target", e))?;
        }
        Ok(())
    }

    fn resolve(&self, r: &ClassRef) -> Result<Class, String> {
        match r {
            ClassRef::Vector(v) => Ok(v.clone()),
            ClassRef::Name(n) => self.resolve_key(n),
        }
    }

    fn resolve_key(&self, key: &str) -> Result<Class, String> {
        if let Some(v) = self.classes.get(key) {
            return Ok(v.clone());
        }
        let body = key.trim().trim_start_matches('[').trim_end_matches(']');
        body.split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| format!("'{key}' is neither a declared class nor an integer vector"))
    }

    fn monoid(&self) -> Result<EffectiveMonoid, CliError> {
        match &self.generators {
            Some(g) => {
                let gens = g.iter().map(|r| self.resolve(r)).collect::<Result<Vec<_>, _>>().map_err(|e| invalid("generators", e))?;
                EffectiveMonoid::new(gens).map_err(|e| invalid("generators", e.to_string()))
            }
            None => {
                let d = self.dimension().ok_or_else(|| invalid("classes", "cannot infer the lattice dimension"))?;
                Ok(EffectiveMonoid::standard(d))
            }
        }
    }

    fn stability(&self, name: &str) -> Result<StabilityData, CliError> {
        let spec = self.stabilities.get(name).ok_or_else(|| invalid("stabilities", format!("unknown stability '{name}'")))?;
        Ok(match spec {
            StabilitySpec::Ratio { d, r } => StabilityData::ratio(d.clone(), r.clone()),
            StabilitySpec::SimpleType(t) => simple_type(*t),
            StabilitySpec::Table(t) => {
                let mut table = BTreeMap::new();
                for (k, tuple) in t {
                    let c = self.resolve_key(k).map_err(|e| invalid(format!("stabilities.{name}"), e))?;
                    let vals = tuple.iter().map(|s| Ext::parse(s)).collect::<Result<Vec<_>, _>>().map_err(compute)?;
                    table.insert(c, SlopeValue(vals));
                }
                StabilityData::from_table(table)
            }
        })
    }

    fn pair(&self) -> Result<(StabilityData, StabilityData), CliError> {
        let from = self.from.as_deref().ok_or_else(|| invalid("from", "missing"))?;
        let to = self.to.as_deref().ok_or_else(|| invalid("to", "missing"))?;
        Ok((self.stability(from)?, self.stability(to)?))
    }

    fn target_class(&self) -> Result<Class, CliError> {
        let t = self.target.as_ref().ok_or_else(|| invalid("target", "missing"))?;
        self.resolve(t).map_err(|e| invalid("target", e))
    }

    fn invariant_table(&self) -> Result<BTreeMap<Class, String>, CliError> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.invariants {
            out.insert(self.resolve_key(k).map_err(|e| invalid(format!("invariants.{k}"), e))?, v.clone());
        }
        Ok(out)
    }

    /// Classes to evaluate: `targets`, else `target`, else the invariant table.
    fn target_list(&self) -> Result<Vec<Class>, CliError> {
        if let Some(ts) = &self.targets {
            return ts.iter().map(|r| self.resolve(r).map_err(|e| invalid("targets", e))).collect();
        }
        if self.target.is_some() {
            return Ok(vec![self.target_class()?]);
        }
        Ok(self.invariant_table()?.into_keys().collect())
    }
}

/// Entry for a class in the invariant table: a number or a symbol.
fn entry_value(v: &str) -> Laurent {
    match parse_q(v) {
        Ok(c) => Laurent::constant(c),
        Err(_) => Laurent::var(v.trim()),
    }
}

fn read_config(arg: &ConfigArg) -> Result<Config, CliError> {
    let text = match &arg.config {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Config::parse(&text)
}

/// Result of running a command: human text and machine JSON.
pub struct Report {
    pub human: String,
    pub machine: Value,
    pub success: bool,
}

impl Report {
    fn ok(human: String, machine: Value) -> Self {
        Report { human, machine, success: true }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human.clone(),
            Format::Machine => serde_json::to_string_pretty(&self.machine).expect("json") + "\n",
        }
    }
}

pub fn cmd_ucoeff(cfg: &Config, max_parts: usize) -> Result<Report, CliError> {
    let (tau, tau2) = cfg.pair()?;
    let monoid = cfg.monoid()?;
    let alpha = cfg.target_class()?;
    let decs = monoid.decompositions(&alpha, &|_| true, max_parts).map_err(compute)?;
    let mut human = format!("decompositions of {}\n{:<32} {:>10} {:>12} {:>12}\n", fmt_class(&alpha), "parts", "S", "U", "Ũ");
    let mut rows = Vec::new();
    for parts in &decs {
        let s = s_coeff(parts, &tau, &tau2).map_err(compute)?;
        let u = u_coeff(parts, &tau, &tau2).map_err(compute)?;
        let ut = utilde_coeff(parts, &tau, &tau2).map_err(compute)?;
        let label = parts.iter().map(|c| fmt_class(c)).collect::<Vec<_>>().join(" ");
        writeln!(human, "{:<32} {:>10} {:>12} {:>12}", label, fmt_q(&s), fmt_q(&u), fmt_q(&ut)).unwrap();
        rows.push(json!({"parts": parts, "S": fmt_q(&s), "U": fmt_q(&u), "Utilde": fmt_q(&ut)}));
    }
    let lie = utilde_lie_element(&alpha, &tau, &tau2, &monoid, max_parts).map_err(compute)?;
    let lie_named: LieElement<String> = lie.map_letters(|c| fmt_class(c)).map_err(compute)?;
    let terms: Vec<Value> = lie_named.terms().map(|(w, c)| json!({"bracket": bracketing(w), "coeff": fmt_q(c)})).collect();
    writeln!(human, "Lie element: {}", lie_named).unwrap();
    Ok(Report::ok(human, json!({"target": alpha, "rows": rows, "lie_element": terms})))
}

pub fn cmd_wallcross(cfg: &Config, backend: Option<Backend>, max_parts: usize) -> Result<Report, CliError> {
    let (tau, tau2) = cfg.pair()?;
    let monoid = cfg.monoid()?;
    let targets = cfg.target_list()?;
    let entries = cfg.invariant_table()?;
    let mut o_table = None;
    if let Some(o) = &cfg.o {
        let mut m = BTreeMap::new();
        for (k, v) in o {
            m.insert(cfg.resolve_key(k).map_err(|e| invalid(format!("o.{k}"), e))?, *v);
        }
        o_table = Some(m);
    }
    let backend = backend.unwrap_or(if cfg.chi.is_some() { Backend::Qtorus } else { Backend::Free });
    let mut human = String::new();
    let mut out = serde_json::Map::new();
    match backend {
        Backend::Qtorus => {
            let chi = cfg.chi.clone().ok_or_else(|| invalid("chi", "the quantum-torus backend needs chi"))?;
            let qt = QuantumTorus::new(chi, !cfg.unrefined.unwrap_or(false)).map_err(|e| invalid("chi", e.to_string()))?;
            let mut table = InvariantTable::new(entries.iter().map(|(c, v)| (c.clone(), RatFn::from(entry_value(v)))).collect());
            table.o = o_table;
            for a in &targets {
                let v = wcf_rhs(a, &tau, &tau2, &table, &qt, &monoid, max_parts).map_err(compute)?;
                writeln!(human, "{}\t{}", fmt_class(a), v).unwrap();
                out.insert(fmt_class(a), Value::String(v.to_string()));
            }
        }
        Backend::Free => {
            let mut table = InvariantTable::new(BTreeMap::new());
            for (c, v) in &entries {
                let e = match parse_q(v) {
                    Ok(x) => LieElement::letter(format!("z{}", fmt_class(c))).scale(&x),
                    Err(_) => LieElement::letter(v.trim().to_string()),
                };
                table.entries.insert(c.clone(), e);
            }
            table.o = o_table;
            for a in &targets {
                let v = wcf_rhs(a, &tau, &tau2, &table, &FreeLie, &monoid, max_parts).map_err(compute)?;
                writeln!(human, "{}\t{}", fmt_class(a), v).unwrap();
                out.insert(fmt_class(a), Value::String(v.to_string()));
            }
        }
    }
    Ok(Report::ok(human, Value::Object(out)))
}

pub fn cmd_descendent(keys: &[i64], series: Option<usize>) -> Result<Report, CliError> {
    let n = keys.len();
    let names = Names::new(default_names(n)).map_err(compute)?;
    let id = dt_to_pt(&names);
    if !id.agrees(&names).map_err(compute)? {
        return Err(CliError::Compute("Y-form and double-partition form disagree".into()));
    }
    let mut human = format!("{id}\n");
    let legend: Vec<String> = default_names(n).iter().zip(keys).map(|(k, v)| format!("{k} = {v}")).collect();
    if !legend.is_empty() {
        writeln!(human, "keys: {}", legend.join(", ")).unwrap();
    }
    let mut ys = serde_json::Map::new();
    let ground = names.ground();
    for s in 0..=ground {
        if s & ground == s {
            let y = y_explicit(s, &names);
            ys.insert(names.y(s), Value::String(format_vertex(&y)));
        }
    }
    let mut machine = json!({
        "lhs": id.lhs,
        "rhs": format_vertex(&id.theorem_form),
        "y_form": format_vertex(&id.y_form),
        "keys": keys,
        "y": ys,
    });
    if let Some(order) = series {
        let corner = y_series(ground, &names, order).eval_one("@t");
        writeln!(human, "<{}|exp(-Δ)|{}> = {} + O(x^{})", names.sigma(&crate::descendent::SetPartition::whole(ground)), names.sigma(&crate::descendent::SetPartition::singletons(ground)), corner, order + 1).unwrap();
        machine["series"] = Value::String(corner.to_string());
    }
    Ok(Report::ok(human, machine))
}

pub fn cmd_selftest() -> Report {
    let results = selftest::run_all();
    let mut human = String::new();
    let mut rows = Vec::new();
    for r in &results {
        writeln!(human, "{}", r.line()).unwrap();
        rows.push(json!({
            "criterion": r.number,
            "title": r.title,
            "passed": r.passed(),
            "millis": r.millis as u64,
            "detail": r.outcome.as_ref().err(),
        }));
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    writeln!(human, "{} passed, {} failed", results.len() - failed, failed).unwrap();
    Report { human, machine: json!({"criteria": rows, "failed": failed}), success: failed == 0 }
}

/// Run the parsed command. Returns the rendered output and whether the
/// command succeeded.
pub fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let report = match &cli.command {
        Command::Ucoeff(arg) => cmd_ucoeff(&read_config(arg)?, cli.max_parts)?,
        Command::Wallcross(arg) => cmd_wallcross(&read_config(arg)?, cli.backend, cli.max_parts)?,
        Command::Vwnum(arg) => cmd_wallcross(&read_config(arg)?, Some(Backend::Qtorus), cli.max_parts)?,
        Command::Descendent { n, keys, series } => {
            let keys = keys.clone().unwrap_or_else(|| vec![0; *n]);
            cmd_descendent(&keys, series.then_some(cli.order))?
        }
        Command::Selftest => cmd_selftest(),
    };
    Ok((report.render(cli.format), report.success))
}
