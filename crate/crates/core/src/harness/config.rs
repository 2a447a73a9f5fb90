//! Flat `key = value` run configuration.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{DeformSpec, DEFAULT_PHASE};
use crate::mesh::{ChildGeometry, MeshSpec};
use crate::metrics::Strategy;
use crate::solver::{Primitive, SolverConfig};
use crate::spectral::NodeKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckMetrics,
    Watertight,
    AppendixDemo,
    RunFreestream,
    Sweep,
    Checks,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::CheckMetrics,
        Command::Watertight,
        Command::AppendixDemo,
        Command::RunFreestream,
        Command::Sweep,
        Command::Checks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckMetrics => "check-metrics",
            Command::Watertight => "watertight",
            Command::AppendixDemo => "appendix-demo",
            Command::RunFreestream => "run-freestream",
            Command::Sweep => "sweep",
            Command::Checks => "checks",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('_', "-");
        Command::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown command `{s}`")))
    }
}

/// Combinations visited by a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRanges {
    pub n: RangeInclusive<usize>,
    pub ng: RangeInclusive<usize>,
    pub strategies: Vec<Strategy>,
    pub kinds: Vec<NodeKind>,
}

impl Default for SweepRanges {
    fn default() -> Self {
        SweepRanges {
            n: 1..=8,
            ng: 1..=4,
            strategies: vec![Strategy::CurlForm],
            kinds: vec![NodeKind::Gauss],
        }
    }
}

/// Everything one invocation needs.
///
/// `m` is only meaningful for the overintegrated strategy; when it is left
/// unset there, the quadrature degree defaults to `2N`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub k: usize,
    pub refine: Vec<usize>,
    pub amplitude: f64,
    pub phase: f64,
    pub extruded: bool,
    pub ng: usize,
    pub child_geometry: ChildGeometry,
    pub n: usize,
    pub kind: NodeKind,
    pub cfl: f64,
    pub t_final: f64,
    pub m: Option<usize>,
    pub strategy: Strategy,
    pub freestream: Primitive,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub sweep: SweepRanges,
    /// Where each key was last set, for error messages.
    origins: HashMap<&'static str, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            k: 2,
            refine: vec![0],
            amplitude: 0.05,
            phase: DEFAULT_PHASE,
            extruded: false,
            ng: 2,
            child_geometry: ChildGeometry::Restricted,
            n: 4,
            kind: NodeKind::Gauss,
            cfl: 0.5,
            t_final: 0.5,
            m: None,
            strategy: Strategy::CurlForm,
            freestream: Primitive::default(),
            output: None,
            seed: 0,
            sweep: SweepRanges::default(),
            origins: HashMap::new(),
        }
    }
}

/// Canonical key names and their accepted spellings.
const KEYS: &[(&str, &[&str])] = &[
    ("command", &["command"]),
    ("K", &["k"]),
    ("refine", &["refine", "refine_set"]),
    ("a", &["a", "amplitude"]),
    ("phase", &["phase"]),
    ("extruded", &["extruded"]),
    ("Ng", &["ng"]),
    ("child_geometry", &["child_geometry"]),
    ("N", &["n"]),
    ("node_kind", &["node_kind", "nodes", "kind"]),
    ("CFL", &["cfl"]),
    ("T", &["t", "t_final"]),
    ("M", &["m"]),
    ("strategy", &["strategy", "metrics"]),
    ("rho", &["rho"]),
    ("v1", &["v1"]),
    ("v2", &["v2"]),
    ("v3", &["v3"]),
    ("p", &["p", "pressure"]),
    ("output", &["output", "out"]),
    ("seed", &["seed"]),
    ("sweep_N", &["sweep_n"]),
    ("sweep_Ng", &["sweep_ng"]),
    ("sweep_strategies", &["sweep_strategies"]),
    ("sweep_node_kinds", &["sweep_node_kinds"]),
];

fn canonical_key(key: &str) -> Option<&'static str> {
    let lower = key.trim().to_ascii_lowercase().replace('-', "_");
    KEYS.iter()
        .find(|(_, aliases)| aliases.contains(&lower.as_str()))
        .map(|(name, _)| *name)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse `{value}` as a value for {key}"))
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("`{value}` is not a boolean")),
    }
}

fn parse_list<T>(
    value: &str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> std::result::Result<Vec<T>, String> {
    let v = value.trim().trim_start_matches('[').trim_end_matches(']');
    if v.trim().is_empty() || v.trim() == "none" {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| item(s.trim())).collect()
}

/// `a..b`, `a..=b`, `a-b` or a single value.
fn parse_range(key: &str, value: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let v = value.trim();
    let (lo, hi) = if let Some((a, b)) = v.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = v.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = v.split_once('-') {
        (a, b)
    } else {
        (v, v)
    };
    let lo: usize = parse_num(key, lo.trim())?;
    let hi: usize = parse_num(key, hi.trim())?;
    if lo > hi {
        return Err(format!("empty range `{value}` for {key}"));
    }
    Ok(lo..=hi)
}

impl RunConfig {
    /// Parses a config file's text on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("line {}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{origin}: expected `key = value`, got `{line}`")))?;
            self.set(key, value, &origin)?;
        }
        Ok(())
    }

    /// Applies `key=value` command-line overrides.
    pub fn apply_flags<S: AsRef<str>>(&mut self, flags: &[S]) -> Result<()> {
        for flag in flags {
            let flag = flag.as_ref();
            let origin = format!("flag `{flag}`");
            let (key, value) = flag
                .trim_start_matches("--")
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{origin}: expected key=value")))?;
            self.set(key, value, &origin)?;
        }
        Ok(())
    }

    /// Sets one key; `origin` names the line or flag in error messages.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<()> {
        let name = canonical_key(key)
            .ok_or_else(|| Error::Config(format!("{origin}: unknown key `{}`", key.trim())))?;
        let value = value.trim();
        self.set_canonical(name, value)
            .map_err(|msg| Error::Config(format!("{origin}: {msg}")))?;
        self.origins.insert(name, origin.to_string());
        Ok(())
    }

    fn set_canonical(&mut self, name: &str, v: &str) -> std::result::Result<(), String> {
        let strategy = |s: &str| s.parse::<Strategy>().map_err(|e| e.to_string());
        let kind = |s: &str| s.parse::<NodeKind>().map_err(|e| e.to_string());
        match name {
            "command" => self.command = Some(v.parse().map_err(|e: Error| e.to_string())?),
            "K" => self.k = parse_num(name, v)?,
            "refine" => self.refine = parse_list(v, |s| parse_num(name, s))?,
            "a" => self.amplitude = parse_num(name, v)?,
            "phase" => self.phase = parse_num(name, v)?,
            "extruded" => self.extruded = parse_bool(v)?,
            "Ng" => self.ng = parse_num(name, v)?,
            "child_geometry" => {
                self.child_geometry = match v {
                    "restricted" => ChildGeometry::Restricted,
                    "resampled" => ChildGeometry::Resampled,
                    _ => return Err(format!("child_geometry `{v}` is not restricted|resampled")),
                }
            }
            "N" => self.n = parse_num(name, v)?,
            "node_kind" => self.kind = kind(v)?,
            "CFL" => self.cfl = parse_num(name, v)?,
            "T" => self.t_final = parse_num(name, v)?,
            "M" => self.m = Some(parse_num(name, v)?),
            "strategy" => self.strategy = strategy(v)?,
            "rho" => self.freestream.rho = parse_num(name, v)?,
            "v1" => self.freestream.velocity[0] = parse_num(name, v)?,
            "v2" => self.freestream.velocity[1] = parse_num(name, v)?,
            "v3" => self.freestream.velocity[2] = parse_num(name, v)?,
            "p" => self.freestream.pressure = parse_num(name, v)?,
            "output" => self.output = (!v.is_empty()).then(|| PathBuf::from(v)),
            "seed" => self.seed = parse_num(name, v)?,
            "sweep_N" => self.sweep.n = parse_range(name, v)?,
            "sweep_Ng" => self.sweep.ng = parse_range(name, v)?,
            "sweep_strategies" => self.sweep.strategies = parse_list(v, strategy)?,
            "sweep_node_kinds" => self.sweep.kinds = parse_list(v, kind)?,
            _ => unreachable!("key table and setter disagree on {name}"),
        }
        Ok(())
    }

    fn invalid(&self, key: &'static str, msg: String) -> Error {
        match self.origins.get(key) {
            Some(origin) => Error::Config(format!("{origin}: {msg}")),
            None => Error::Config(msg),
        }
    }

    /// Checks the invariants the drivers rely on.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(self.invalid("N", format!("N = {} must be at least 1", self.n)));
        }
        if self.ng < 1 {
            return Err(self.invalid("Ng", format!("Ng = {} must be at least 1", self.ng)));
        }
        if self.k < 2 {
            return Err(self.invalid("K", format!("K = {} must be at least 2", self.k)));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(self.invalid("a", format!("a = {} must be finite and non-negative", self.amplitude)));
        }
        if !self.phase.is_finite() {
            return Err(self.invalid("phase", format!("phase = {} must be finite", self.phase)));
        }
        let w = &self.freestream;
        if !(w.rho > 0.0 && w.rho.is_finite()) {
            return Err(self.invalid("rho", format!("freestream rho = {} must be positive", w.rho)));
        }
        if !(w.pressure > 0.0 && w.pressure.is_finite()) {
            return Err(self.invalid("p", format!("freestream p = {} must be positive", w.pressure)));
        }
        if w.velocity.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("freestream velocity must be finite".into()));
        }
        if let Some(m) = self.m {
            if !matches!(self.strategy, Strategy::Overintegrated(_))
                && !self.sweep.strategies.iter().any(|s| matches!(s, Strategy::Overintegrated(_)))
            {
                return Err(self.invalid("M", format!("M = {m} is only used by the overintegrated strategy")));
            }
        }
        if self.sweep.strategies.is_empty() {
            return Err(self.invalid("sweep_strategies", "no strategies to sweep".into()));
        }
        if self.sweep.kinds.is_empty() {
            return Err(self.invalid("sweep_node_kinds", "no node kinds to sweep".into()));
        }
        if *self.sweep.n.start() < 1 || *self.sweep.ng.start() < 1 {
            return Err(Error::Config("sweep ranges must start at 1 or above".into()));
        }
        self.solver_config(self.n, self.strategy, self.kind)
            .validate()
            .map_err(|e| match e {
                Error::Config(msg) => {
                    let key = if msg.starts_with("CFL") {
                        "CFL"
                    } else if msg.starts_with('T') {
                        "T"
                    } else {
                        "M"
                    };
                    self.invalid(key, msg)
                }
                other => other,
            })
    }

    /// `strategy` with its quadrature degree filled in for solution degree `n`.
    pub fn resolve_strategy(&self, strategy: Strategy, n: usize) -> Strategy {
        match strategy {
            Strategy::Overintegrated(0) => Strategy::Overintegrated(self.m.unwrap_or(2 * n)),
            s => s,
        }
    }

    pub fn deform(&self) -> DeformSpec {
        let mut d = if self.extruded {
            DeformSpec::extruded(self.amplitude)
        } else {
            DeformSpec::general(self.amplitude)
        };
        d.phase = self.phase;
        d
    }

    pub fn mesh_spec(&self, ng: usize) -> MeshSpec {
        MeshSpec {
            k: self.k,
            refine: self.refine.clone(),
            deform: self.deform(),
            ng,
            child_geometry: self.child_geometry,
        }
    }

    pub fn solver_config(&self, n: usize, strategy: Strategy, kind: NodeKind) -> SolverConfig {
        SolverConfig {
            n,
            kind,
            cfl: self.cfl,
            t_final: self.t_final,
            strategy: self.resolve_strategy(strategy, n),
        }
    }

    /// Short mesh label for reports: `3d` or `extruded`, with `-conforming`
    /// when nothing is refined.
    pub fn mesh_label(&self) -> String {
        let base = if self.extruded { "extruded" } else { "3d" };
        if self.refine.is_empty() {
            format!("{base}-conforming")
        } else {
            base.to_string()
        }
    }
}
