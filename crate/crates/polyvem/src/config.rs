//! Plain `key = value` configuration files for the solver and for whole
//! runs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use polyvem_core::datasets::{Generator, ParamClass};
use polyvem_core::linalg::SolverKind;
use polyvem_core::perf::TestCase;
use polyvem_core::vem::{Stabilization, VemConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("missing key '{0}'")]
    MissingKey(String),
    #[error("bad value for '{key}': {message}")]
    Value { key: String, message: String },
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    raw.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        message: e.to_string(),
    })
}

pub fn solver_kind_name(kind: SolverKind) -> &'static str {
    match kind {
        SolverKind::Auto => "auto",
        SolverKind::Direct => "direct",
        SolverKind::Cg => "cg",
    }
}

pub fn parse_solver_kind(s: &str) -> Result<SolverKind, String> {
    match s {
        "auto" => Ok(SolverKind::Auto),
        "direct" => Ok(SolverKind::Direct),
        "cg" => Ok(SolverKind::Cg),
        _ => Err(format!("unknown solver '{s}' (auto, direct, cg)")),
    }
}

/// Solver settings file: `k`, `stabilization`, `solver`, `cg_tol`. Missing
/// keys keep their defaults.
pub fn parse_solver_config(text: &str) -> Result<VemConfig, ConfigError> {
    let mut cfg = VemConfig::default();
    for (key, raw) in parse_pairs(text)? {
        match key.as_str() {
            "k" => cfg.k = value(&key, &raw)?,
            "stabilization" => cfg.stabilization = value(&key, &raw)?,
            "solver" => {
                cfg.solver = parse_solver_kind(&raw).map_err(|message| ConfigError::Value { key: key.clone(), message })?
            }
            "cg_tol" => cfg.cg_tol = value(&key, &raw)?,
            _ => return Err(ConfigError::UnknownKey(key)),
        }
    }
    if !(1..=3).contains(&cfg.k) {
        return Err(ConfigError::Value {
            key: "k".into(),
            message: format!("{} not in 1..=3", cfg.k),
        });
    }
    Ok(cfg)
}

pub fn solver_config_to_string(cfg: &VemConfig) -> String {
    format!(
        "k = {}\nstabilization = {}\nsolver = {}\ncg_tol = {:e}\n",
        cfg.k,
        cfg.stabilization,
        solver_kind_name(cfg.solver),
        cfg.cg_tol
    )
}

/// Everything a command needs, as resolved from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub datasets: Vec<Generator>,
    pub levels: (usize, usize),
    pub ks: Vec<usize>,
    pub stabilization: Stabilization,
    pub solver: SolverKind,
    pub cg_tol: f64,
    pub test: TestCase,
    pub out: PathBuf,
    pub seed: u64,
    pub formats: Vec<String>,
    /// Skip the conditioning estimates and element diagnostics.
    pub quick: bool,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn dump(&self) -> String {
        format!(
            "command = {}\ndatasets = {}\nlevels = {}..{}\nk = {}\nstabilization = {}\nsolver = {}\ncg_tol = {:e}\ntest = {}\nout = {}\nseed = {}\nformat = {}\nquick = {}\n",
            self.command,
            join(&self.datasets),
            self.levels.0,
            self.levels.1,
            join(&self.ks),
            self.stabilization,
            solver_kind_name(self.solver),
            self.cg_tol,
            self.test.name(),
            self.out.display(),
            self.seed,
            self.formats.join(","),
            self.quick,
        )
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = parse_pairs(text)?;
        let mut take = |k: &str| map.remove(k).ok_or_else(|| ConfigError::MissingKey(k.to_string()));
        let bad = |key: &str, message: String| ConfigError::Value {
            key: key.to_string(),
            message,
        };
        let command = take("command")?;
        let datasets = parse_datasets(&take("datasets")?).map_err(|m| bad("datasets", m))?;
        let levels = parse_levels(&take("levels")?).map_err(|m| bad("levels", m))?;
        let ks = split(&take("k")?).map(|s| value("k", s)).collect::<Result<_, _>>()?;
        let stabilization = value("stabilization", &take("stabilization")?)?;
        let solver = parse_solver_kind(&take("solver")?).map_err(|m| bad("solver", m))?;
        let cg_tol = value("cg_tol", &take("cg_tol")?)?;
        let test = value("test", &take("test")?)?;
        let out = PathBuf::from(take("out")?);
        let seed = value("seed", &take("seed")?)?;
        let formats = split(&take("format")?).map(str::to_string).collect();
        let quick = value("quick", &take("quick")?)?;
        if let Some(extra) = map.into_keys().next() {
            return Err(ConfigError::UnknownKey(extra));
        }
        Ok(Self {
            command,
            datasets,
            levels,
            ks,
            stabilization,
            solver,
            cg_tol,
            test,
            out,
            seed,
            formats,
            quick,
        })
    }

    pub fn vem(&self, k: usize) -> VemConfig {
        VemConfig {
            k,
            stabilization: self.stabilization,
            solver: self.solver,
            cg_tol: self.cg_tol,
        }
    }

    pub fn level_range(&self) -> std::ops::RangeInclusive<usize> {
        self.levels.0..=self.levels.1
    }
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Comma-separated dataset ids. `reference` expands to the nine reference
/// datasets, `parametric` to the eight parametric classes.
pub fn parse_datasets(s: &str) -> Result<Vec<Generator>, String> {
    let mut out = Vec::new();
    for id in split(s) {
        match id {
            "reference" => out.extend(Generator::REFERENCE),
            "parametric" => out.extend(ParamClass::ALL.map(Generator::Parametric)),
            _ => out.push(id.parse().map_err(|e: polyvem_core::Error| e.to_string())?),
        }
    }
    if out.is_empty() {
        return Err("no datasets given".into());
    }
    Ok(out)
}

/// `A..B` (inclusive) or a single level `A`.
pub fn parse_levels(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(format!("empty level range {a}..{b}"));
    }
    Ok((a, b))
}
