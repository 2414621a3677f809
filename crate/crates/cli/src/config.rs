//! Plain-text run configuration: `key = value` lines, `[section]` headers
//! that prefix the keys below them with `section.`, and `#` comments.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    LzSweepTau,
    LzSweepBures,
    PenningSweepEta,
    PenningSweepBures,
    CircuitValidate,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::LzSweepTau,
        Experiment::LzSweepBures,
        Experiment::PenningSweepEta,
        Experiment::PenningSweepBures,
        Experiment::CircuitValidate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::LzSweepTau => "lz-sweep-tau",
            Experiment::LzSweepBures => "lz-sweep-bures",
            Experiment::PenningSweepEta => "penning-sweep-eta",
            Experiment::PenningSweepBures => "penning-sweep-bures",
            Experiment::CircuitValidate => "circuit-validate",
        }
    }

    /// Keys accepted by this experiment besides `experiment`, `seed`, `output` and `svg`.
    pub fn keys(self) -> &'static [KeySpec] {
        match self {
            Experiment::LzSweepTau => LZ_SWEEP_TAU,
            Experiment::LzSweepBures => LZ_SWEEP_BURES,
            Experiment::PenningSweepEta => PENNING_SWEEP_ETA,
            Experiment::PenningSweepBures => PENNING_SWEEP_BURES,
            Experiment::CircuitValidate => CIRCUIT_VALIDATE,
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
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                format!(
                    "unknown experiment `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bounds {
    Positive,
    NonNegative,
    /// Open interval `(lo, hi)`.
    Open(f64, f64),
}

impl Bounds {
    fn check(self, x: f64) -> Result<(), String> {
        let ok = match self {
            Bounds::Positive => x > 0.0,
            Bounds::NonNegative => x >= 0.0,
            Bounds::Open(lo, hi) => x > lo && x < hi,
        };
        if ok && x.is_finite() {
            return Ok(());
        }
        Err(match self {
            Bounds::Positive => "must be positive".to_owned(),
            Bounds::NonNegative => "must be non-negative".to_owned(),
            Bounds::Open(lo, hi) => format!("must lie strictly between {lo} and {hi}"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Number(Bounds),
    Count { min: u64 },
    Flag,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Default {
    None,
    Number(f64),
    Count(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Default,
}

const fn number(name: &'static str, bounds: Bounds, default: f64) -> KeySpec {
    KeySpec {
        name,
        kind: Kind::Number(bounds),
        default: Default::Number(default),
    }
}

const fn count(name: &'static str, min: u64, default: u64) -> KeySpec {
    KeySpec {
        name,
        kind: Kind::Count { min },
        default: Default::Count(default),
    }
}

const BURES: Bounds = Bounds::Open(0.0, FRAC_PI_2);

const LZ_SWEEP_TAU: &[KeySpec] = &[
    number("g0", Bounds::Positive, 0.2),
    number("delta", Bounds::Positive, 1.0),
    number("tau_lo", Bounds::Positive, 0.05),
    number("tau_hi", Bounds::Positive, 50.0),
    count("points", 2, 200),
];

const LZ_SWEEP_BURES: &[KeySpec] = &[
    number("delta", Bounds::Positive, 1.0),
    number("tau", Bounds::Positive, 1.0),
    number("bures_lo", BURES, 0.1),
    number("bures_hi", BURES, 1.4),
    count("points", 2, 14),
];

const PENNING_SWEEP_ETA: &[KeySpec] = &[
    number("c", Bounds::Positive, 4.0 / 3.0),
    number("nu", Bounds::Open(0.0, SQRT_2), 0.5),
    KeySpec {
        name: "eta_min",
        kind: Kind::Number(Bounds::Positive),
        default: Default::None,
    },
    number("eta_max", Bounds::Positive, 5.0),
    count("points", 2, 100),
];

const PENNING_SWEEP_BURES: &[KeySpec] = &[
    number("eta", Bounds::Positive, 1.0),
    number("nu", Bounds::Open(0.0, SQRT_2), 0.5),
    number("bures_lo", BURES, 0.05),
    number("bures_hi", BURES, 0.6),
    count("points", 2, 12),
];

const CIRCUIT_VALIDATE: &[KeySpec] = &[
    number("circuit.resistance", Bounds::Positive, 1.0),
    number("circuit.inductance", Bounds::Positive, 1e-3),
    number("circuit.temperature", Bounds::Positive, 300.0),
    number("circuit.coil_constant", Bounds::Positive, 1e-3),
    count("trajectories", 2, 1000),
    number("duration", Bounds::Positive, 10.0),
    number("amplitude", Bounds::NonNegative, 5.0),
    KeySpec {
        name: "dt",
        kind: Kind::Number(Bounds::Positive),
        default: Default::None,
    },
    count("record_every", 1, 10),
];

const COMMON: &[KeySpec] = &[
    KeySpec {
        name: "seed",
        kind: Kind::Count { min: 0 },
        default: Default::Count(0),
    },
    KeySpec {
        name: "output",
        kind: Kind::Text,
        default: Default::None,
    },
    KeySpec {
        name: "svg",
        kind: Kind::Flag,
        default: Default::None,
    },
];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Count(u64),
    Flag(bool),
    Text(String),
}

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    CommandLine,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::CommandLine => f.write_str("command line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("missing key: {0}")]
    MissingKey(String),

    #[error("{origin}: expected `key = value` or `[section]`, found `{text}`")]
    Syntax { origin: Origin, text: String },

    #[error("unknown key `{key}` ({origin}) for experiment {experiment}")]
    UnknownKey {
        key: String,
        origin: Origin,
        experiment: Experiment,
    },

    #[error("duplicate key `{key}` on lines {first} and {second}")]
    DuplicateKey {
        key: String,
        first: usize,
        second: usize,
    },

    #[error("malformed number `{value}` for key `{key}` on {origin}")]
    MalformedNumber {
        key: String,
        value: String,
        origin: Origin,
    },

    #[error("invalid value `{value}` for key `{key}` on {origin}: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        origin: Origin,
        reason: String,
    },

    #[error("{0}")]
    UnknownExperiment(String),

    #[error("config selects experiment `{in_file}` but `{requested}` was requested")]
    ExperimentMismatch { in_file: String, requested: String },

    #[error("inconsistent settings: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Every key of the experiment that has a value, defaults included.
    pub parameters: BTreeMap<String, Value>,
    pub output_path: Option<PathBuf>,
    pub emit_svg: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn number(&self, key: &str) -> Option<f64> {
        match self.parameters.get(key) {
            Some(Value::Number(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        match self.parameters.get(key) {
            Some(Value::Count(n)) => usize::try_from(*n).ok(),
            _ => None,
        }
    }

    /// Like [`number`](Self::number) for keys that always carry a default.
    pub(crate) fn num(&self, key: &str) -> f64 {
        self.number(key)
            .unwrap_or_else(|| panic!("`{key}` has a default"))
    }

    pub(crate) fn cnt(&self, key: &str) -> usize {
        self.count(key)
            .unwrap_or_else(|| panic!("`{key}` has a default"))
    }
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    origin: Origin,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, None, &[])
}

/// Parses `text`, then applies command-line `overrides` (which replace file
/// values instead of clashing with them). `requested` supplies the experiment
/// when the file does not name one and must agree with it when it does.
pub fn parse_config_with(
    text: &str,
    requested: Option<&str>,
    overrides: &[(String, String)],
) -> Result<RunConfig, ConfigError> {
    let mut entries = read_entries(text)?;
    for (key, value) in overrides {
        entries.retain(|e| &e.key != key);
        entries.push(Entry {
            key: key.clone(),
            value: value.clone(),
            origin: Origin::CommandLine,
        });
    }

    let experiment = match (entries.iter().find(|e| e.key == "experiment"), requested) {
        (Some(e), Some(r)) if e.value != r => {
            return Err(ConfigError::ExperimentMismatch {
                in_file: e.value.clone(),
                requested: r.to_owned(),
            })
        }
        (Some(e), _) => e.value.as_str(),
        (None, Some(r)) => r,
        (None, None) => return Err(ConfigError::MissingKey("experiment".to_owned())),
    };
    let experiment: Experiment = experiment.parse().map_err(ConfigError::UnknownExperiment)?;

    let mut parameters = BTreeMap::new();
    let (mut output_path, mut emit_svg, mut seed) = (None, false, 0);
    for entry in entries.iter().filter(|e| e.key != "experiment") {
        let spec = COMMON
            .iter()
            .chain(experiment.keys())
            .find(|s| s.name == entry.key)
            .ok_or_else(|| ConfigError::UnknownKey {
                key: entry.key.clone(),
                origin: entry.origin,
                experiment,
            })?;
        let value = parse_value(spec, entry)?;
        match (spec.name, value) {
            ("seed", Value::Count(n)) => seed = n,
            ("output", Value::Text(p)) => output_path = Some(PathBuf::from(p)),
            ("svg", Value::Flag(b)) => emit_svg = b,
            (_, v) => {
                parameters.insert(entry.key.clone(), v);
            }
        }
    }
    for spec in experiment.keys() {
        if !parameters.contains_key(spec.name) {
            match spec.default {
                Default::Number(x) => parameters.insert(spec.name.to_owned(), Value::Number(x)),
                Default::Count(n) => parameters.insert(spec.name.to_owned(), Value::Count(n)),
                Default::None => None,
            };
        }
    }

    let cfg = RunConfig {
        experiment,
        parameters,
        output_path,
        emit_svg,
        seed,
    };
    check_consistency(&cfg)?;
    Ok(cfg)
}

fn read_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = || ConfigError::Syntax {
            origin: Origin::Line(line_no),
            text: raw.trim().to_owned(),
        };
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(syntax)?.trim();
            if !is_identifier(name) {
                return Err(syntax());
            }
            section = format!("{name}.");
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(syntax)?;
        let (key, value) = (key.trim(), value.trim());
        if !is_identifier(key) || value.is_empty() {
            return Err(syntax());
        }
        let key = format!("{section}{key}");
        if let Some(&first) = seen.get(&key) {
            return Err(ConfigError::DuplicateKey {
                key,
                first,
                second: line_no,
            });
        }
        seen.insert(key.clone(), line_no);
        entries.push(Entry {
            key,
            value: value.to_owned(),
            origin: Origin::Line(line_no),
        });
    }
    Ok(entries)
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Decimal with optional sign, fraction and exponent; no `inf`, `nan` or hex.
fn is_decimal(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match mantissa.split_once('.') {
        Some((a, b)) => {
            (digits(a) || a.is_empty())
                && (digits(b) || b.is_empty())
                && !(a.is_empty() && b.is_empty())
        }
        None => digits(mantissa),
    };
    let exponent_ok = exponent.is_none_or(|e| digits(e.strip_prefix(['+', '-']).unwrap_or(e)));
    mantissa_ok && exponent_ok
}

fn parse_value(spec: &KeySpec, entry: &Entry) -> Result<Value, ConfigError> {
    let invalid = |reason: String| ConfigError::InvalidValue {
        key: entry.key.clone(),
        value: entry.value.clone(),
        origin: entry.origin,
        reason,
    };
    let v = entry.value.as_str();
    match spec.kind {
        Kind::Number(bounds) => {
            let x: f64 = if is_decimal(v) { v.parse().ok() } else { None }.ok_or_else(|| {
                ConfigError::MalformedNumber {
                    key: entry.key.clone(),
                    value: entry.value.clone(),
                    origin: entry.origin,
                }
            })?;
            bounds.check(x).map_err(invalid)?;
            Ok(Value::Number(x))
        }
        Kind::Count { min } => {
            let n: u64 = v
                .parse()
                .map_err(|_| invalid("expected a non-negative integer".to_owned()))?;
            if n < min {
                return Err(invalid(format!("must be at least {min}")));
            }
            Ok(Value::Count(n))
        }
        Kind::Flag => match v {
            "true" => Ok(Value::Flag(true)),
            "false" => Ok(Value::Flag(false)),
            _ => Err(invalid("expected `true` or `false`".to_owned())),
        },
        Kind::Text => Ok(Value::Text(v.to_owned())),
    }
}

fn check_consistency(cfg: &RunConfig) -> Result<(), ConfigError> {
    let ordered = |lo: &str, hi: &str| -> Result<(), ConfigError> {
        match (cfg.number(lo), cfg.number(hi)) {
            (Some(a), Some(b)) if a >= b => Err(ConfigError::Inconsistent(format!(
                "`{lo}` ({a}) must be smaller than `{hi}` ({b})"
            ))),
            _ => Ok(()),
        }
    };
    match cfg.experiment {
        Experiment::LzSweepTau => ordered("tau_lo", "tau_hi"),
        Experiment::LzSweepBures | Experiment::PenningSweepBures => ordered("bures_lo", "bures_hi"),
        Experiment::PenningSweepEta => ordered("eta_min", "eta_max"),
        Experiment::CircuitValidate => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_grammar() {
        for ok in ["1", "-2.5", "+.5", "5.", "1e-3", "6.02E+23", "0.0"] {
            assert!(is_decimal(ok), "{ok}");
        }
        for bad in [
            "", ".", "e5", "1e", "inf", "NaN", "0x10", "1.2.3", "1,5", "--1",
        ] {
            assert!(!is_decimal(bad), "{bad}");
        }
    }

    #[test]
    fn sections_prefix_keys() {
        let cfg = parse_config("experiment = circuit-validate\n[circuit]\nresistance = 2 # ohm\n")
            .unwrap();
        assert_eq!(cfg.number("circuit.resistance"), Some(2.0));
        assert_eq!(cfg.number("circuit.inductance"), Some(1e-3));
    }

    #[test]
    fn overrides_replace_file_values() {
        let over = [("g0".to_owned(), "0.5".to_owned())];
        let cfg = parse_config_with("experiment=lz-sweep-tau\ng0=0.2\n", None, &over).unwrap();
        assert_eq!(cfg.number("g0"), Some(0.5));
    }
}
