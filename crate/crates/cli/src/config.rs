//! `key = value` run configuration with per-experiment key schemas.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    Dispersion,
    Harmonics,
    PhasedArray,
    Frames,
    CausalCheck,
    Bell,
    Clock,
    PermDist,
    Ca,
    Acceptance,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Self::Dispersion,
        Self::Harmonics,
        Self::PhasedArray,
        Self::Frames,
        Self::CausalCheck,
        Self::Bell,
        Self::Clock,
        Self::PermDist,
        Self::Ca,
        Self::Acceptance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Dispersion => "dispersion",
            Self::Harmonics => "harmonics",
            Self::PhasedArray => "phased-array",
            Self::Frames => "frames",
            Self::CausalCheck => "causal-check",
            Self::Bell => "bell",
            Self::Clock => "clock",
            Self::PermDist => "perm-dist",
            Self::Ca => "ca",
            Self::Acceptance => "acceptance",
        }
    }

    fn schema(self) -> &'static [KeySpec] {
        use Kind::*;
        match self {
            Self::Dispersion => {
                const S: &[KeySpec] = &[
                    KeySpec::opt("hops", Hops),
                    KeySpec::opt("mass", Float),
                    KeySpec::opt("spacing", Float),
                    KeySpec::opt("points", Uint),
                ];
                S
            }
            Self::Harmonics => {
                const S: &[KeySpec] = &[
                    KeySpec::opt("hop", Uint),
                    KeySpec::opt("stiffness", Float),
                    KeySpec::opt("n_sites", Uint),
                    KeySpec::opt("ticks_per_unit", Uint),
                    KeySpec::opt("threshold_fraction", Float),
                    KeySpec::opt("tolerance", Float),
                ];
                S
            }
            Self::PhasedArray => {
                const S: &[KeySpec] = &[
                    KeySpec::req("c_mult", Uint),
                    KeySpec::opt("n_sites", Uint),
                    KeySpec::opt("max_tick", Uint),
                    KeySpec::opt("hop", Uint),
                    KeySpec::opt("chain_sites", Uint),
                    KeySpec::opt("impulse", Float),
                    KeySpec::opt("ticks_per_unit", Uint),
                    KeySpec::opt("n_ticks", Uint),
                ];
                S
            }
            Self::Frames => {
                const S: &[KeySpec] = &[
                    KeySpec::opt("c_s", Float),
                    KeySpec::opt("epsilon", Float),
                    KeySpec::opt("vA", Float),
                    KeySpec::req("vB", Float),
                    KeySpec::opt("n_events", Uint),
                ];
                S
            }
            Self::CausalCheck => {
                const S: &[KeySpec] = &[
                    KeySpec::req("map", Text),
                    KeySpec::opt("c_s", Float),
                    KeySpec::opt("relation", Text),
                    KeySpec::opt("v", Float),
                    KeySpec::opt("lambda", Float),
                    KeySpec::opt("shift_t", Float),
                    KeySpec::opt("shift_x", Float),
                    KeySpec::opt("amplitude", Float),
                    KeySpec::opt("scale_x", Float),
                    KeySpec::opt("n_trials", Uint),
                    KeySpec::opt("n_events", Uint),
                ];
                S
            }
            Self::Bell => {
                const S: &[KeySpec] = &[
                    KeySpec::req("theta_a", Float),
                    KeySpec::req("theta_b", Float),
                    KeySpec::opt("n", Uint),
                    KeySpec::opt("max_k", Uint),
                ];
                S
            }
            Self::Clock => {
                const S: &[KeySpec] = &[KeySpec::opt("ticks", Uint), KeySpec::opt("seconds", Rational)];
                S
            }
            Self::PermDist => {
                const S: &[KeySpec] = &[
                    KeySpec::req("p", Perm),
                    KeySpec::req("q", Perm),
                    KeySpec::opt("metric", Text),
                ];
                S
            }
            Self::Ca => {
                const S: &[KeySpec] = &[
                    KeySpec::opt("width", Uint),
                    KeySpec::opt("radius", Uint),
                    KeySpec::opt("rule", Text),
                    KeySpec::opt("steps", Uint),
                    KeySpec::opt("seed_site", Uint),
                    KeySpec::opt("random_seed_layer", Bool),
                ];
                S
            }
            Self::Acceptance => {
                const S: &[KeySpec] = &[KeySpec::req("criterion", Uint)];
                S
            }
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Uint,
    Float,
    Bool,
    Text,
    Hops,
    Perm,
    Rational,
}

#[derive(Debug, Clone, Copy)]
struct KeySpec {
    name: &'static str,
    kind: Kind,
    required: bool,
}

impl KeySpec {
    const fn req(name: &'static str, kind: Kind) -> Self {
        Self {
            name,
            kind,
            required: true,
        }
    }

    const fn opt(name: &'static str, kind: Kind) -> Self {
        Self {
            name,
            kind,
            required: false,
        }
    }
}

fn check_kind(kind: Kind, value: &str) -> Result<(), String> {
    let ok = match kind {
        Kind::Uint => value.parse::<u64>().is_ok(),
        Kind::Float => value.parse::<f64>().is_ok_and(f64::is_finite),
        Kind::Bool => value.parse::<bool>().is_ok(),
        Kind::Text => !value.is_empty(),
        Kind::Hops => hoplab::substrate::CouplingProfile::parse_hops(value).is_ok_and(|h| !h.is_empty()),
        Kind::Perm => value.split(',').all(|s| s.trim().parse::<usize>().is_ok()),
        Kind::Rational => value.parse::<num_rational::Ratio<i64>>().is_ok(),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("`{value}` is not a valid {kind:?} value").to_lowercase())
    }
}

/// A validated run: experiment, typed-checked parameters, seed, output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub output: PathBuf,
}

impl RunConfig {
    pub fn get<T: FromStr>(&self, key: &str) -> Option<T> {
        self.params.get(key).and_then(|v| v.parse().ok())
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> T {
        self.get(key).unwrap_or(default)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: Option<usize>,
    key: String,
    value: String,
}

impl Entry {
    fn error(&self, message: impl Into<String>) -> ConfigError {
        match self.line {
            Some(l) => ConfigError::at(l, message),
            None => ConfigError::general(format!("--set {}={}: {}", self.key, self.value, message.into())),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line_no, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::at(line_no, "empty key"));
        }
        if let Some(first) = entries.iter().find(|e| e.key == key) {
            let first = first.line.unwrap_or(0);
            return Err(ConfigError::at(
                line_no,
                format!("key `{key}` already set on line {first}"),
            ));
        }
        entries.push(Entry {
            line: Some(line_no),
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(entries)
}

/// Parses `key = value` lines; `#` starts a comment. Keys are checked
/// against the named experiment's schema.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_with_overrides(text, &[])
}

/// As [`parse_config`], with `(key, value)` pairs that replace or extend the
/// file's entries.
pub fn parse_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, ConfigError> {
    let mut entries = tokenize(text)?;
    for (key, value) in overrides {
        let entry = Entry {
            line: None,
            key: key.trim().to_string(),
            value: value.trim().to_string(),
        };
        match entries.iter_mut().find(|e| e.key == entry.key) {
            Some(existing) => *existing = entry,
            None => entries.push(entry),
        }
    }
    validate(&entries)
}

fn validate(entries: &[Entry]) -> Result<RunConfig, ConfigError> {
    let experiment = match entries.iter().find(|e| e.key == "experiment") {
        Some(e) => e.value.parse::<Experiment>().map_err(|m| e.error(m))?,
        None => return Err(ConfigError::general("missing required key `experiment`")),
    };
    let schema = experiment.schema();

    let mut params = BTreeMap::new();
    let mut seed = 0;
    let mut output = PathBuf::from("out");
    for entry in entries {
        let (key, value) = (entry.key.as_str(), entry.value.as_str());
        match key {
            "experiment" => {}
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|_| entry.error(format!("seed `{value}` is not a 64-bit unsigned integer")))?
            }
            "output" if !value.is_empty() => output = PathBuf::from(value),
            "output" => return Err(entry.error("output directory must not be empty")),
            _ => {
                let spec = schema
                    .iter()
                    .find(|s| s.name == key)
                    .ok_or_else(|| entry.error(format!("unknown key `{key}` for experiment {experiment}")))?;
                check_kind(spec.kind, value).map_err(|m| entry.error(format!("{key}: {m}")))?;
                params.insert(key.to_string(), value.to_string());
            }
        }
    }
    if let Some(missing) = schema.iter().find(|s| s.required && !params.contains_key(s.name)) {
        return Err(ConfigError::general(format!(
            "missing required key `{}` for experiment {experiment}",
            missing.name
        )));
    }
    Ok(RunConfig {
        experiment,
        params,
        seed,
        output,
    })
}
