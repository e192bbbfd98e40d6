//! Flat `section.key = value` configuration.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Numbers use `.` as the decimal separator. Lists are comma-separated and
//! ranges are written `lo, hi`. Booleans are `true` or `false`. Unknown and
//! repeated keys are errors. Missing keys keep their defaults: the
//! differential reference set, the attack-and-defend baseline set, N = 100,
//! z = 0, β = 0.1.
//!
//! | key | value |
//! |-----|-------|
//! | `run.model` | `baseline` or `differential` |
//! | `run.seed` | u64 |
//! | `population.n`, `population.z` | integers |
//! | `population.beta` | number |
//! | `population.subsidised` | bool |
//! | `baseline.<w, c_a, c_d, b_a, b_d, p_d>` | number |
//! | `diff.<c_aH, …, W_L>` | number |
//! | `sweep.parameter` | parameter name of the selected model |
//! | `sweep.grid` | number list |
//! | `heatmap.z`, `heatmap.beta` | integer list, number list |
//! | `random.games` | integer |
//! | `random.scenarios` | list of zealot counts, `s` suffix = subsidised |
//! | `ranges.<any parameter>` | `lo, hi`, sampled in `(lo, hi]` |
//! | `robustness.samples` | integer |
//! | `abm.mu` | number |
//! | `abm.steps`, `abm.burn_in` | integers |
//! | `welfare.z` | integer list |
//! | `welfare.budget` | number |

use secgame_core::experiments::{BaselineRanges, DiffRanges, Range, Scenario};
use secgame_core::model::ModelError;
use secgame_core::{BaselineParams, DiffParams, ModelKind, PopulationConfig};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameters: {0}")]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub model: ModelKind,
    pub seed: u64,
    pub population: PopulationConfig,
    pub baseline: BaselineParams,
    pub diff: DiffParams,
    pub sweep_parameter: Option<String>,
    pub sweep_grid: Option<Vec<f64>>,
    pub heatmap_z: Vec<usize>,
    pub heatmap_beta: Vec<f64>,
    pub random_games: usize,
    pub random_scenarios: Vec<Scenario>,
    pub diff_ranges: DiffRanges,
    pub baseline_ranges: BaselineRanges,
    pub robustness_samples: usize,
    pub abm_mu: f64,
    pub abm_steps: u64,
    pub abm_burn_in: u64,
    pub welfare_z: Vec<usize>,
    pub welfare_budget: Option<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            model: ModelKind::Differential,
            seed: 0,
            population: PopulationConfig::default(),
            baseline: BaselineParams::default(),
            diff: DiffParams::default(),
            sweep_parameter: None,
            sweep_grid: None,
            heatmap_z: (0..=20).collect(),
            heatmap_beta: vec![0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0],
            random_games: 10_000,
            random_scenarios: vec![
                Scenario::new(0, false),
                Scenario::new(6, false),
                Scenario::new(6, true),
                Scenario::new(100, false),
            ],
            diff_ranges: DiffRanges::default(),
            baseline_ranges: BaselineRanges::default(),
            robustness_samples: 1000,
            abm_mu: 1e-3,
            abm_steps: 10_000_000,
            abm_burn_in: 100_000,
            welfare_z: vec![0, 10],
            welfare_budget: None,
        }
    }
}

const FIXED_KEYS: [&str; 18] = [
    "run.model",
    "run.seed",
    "population.n",
    "population.z",
    "population.beta",
    "population.subsidised",
    "sweep.parameter",
    "sweep.grid",
    "heatmap.z",
    "heatmap.beta",
    "random.games",
    "random.scenarios",
    "robustness.samples",
    "abm.mu",
    "abm.steps",
    "abm.burn_in",
    "welfare.z",
    "welfare.budget",
];

/// Every accepted key, in serialisation order.
pub fn known_keys() -> Vec<String> {
    let mut keys: Vec<String> = FIXED_KEYS[..6].iter().map(|k| k.to_string()).collect();
    keys.extend(BaselineParams::NAMES.iter().map(|n| format!("baseline.{n}")));
    keys.extend(DiffParams::NAMES.iter().map(|n| format!("diff.{n}")));
    keys.extend(FIXED_KEYS[6..12].iter().map(|k| k.to_string()));
    keys.extend(DiffParams::NAMES.iter().map(|n| format!("ranges.{n}")));
    keys.extend(BaselineParams::NAMES.iter().map(|n| format!("ranges.{n}")));
    keys.extend(FIXED_KEYS[12..18].iter().map(|k| k.to_string()));
    keys
}

fn suggestion(key: &str) -> Option<String> {
    let (section, name) = key.split_once('.')?;
    let candidates: Vec<String> = known_keys()
        .into_iter()
        .filter_map(|k| {
            let (s, n) = k.split_once('.')?;
            (s == section).then(|| n.to_string())
        })
        .collect();
    if let Some(c) = candidates.iter().find(|c| c.eq_ignore_ascii_case(name)) {
        return Some(c.clone());
    }
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(&c, name), c))
        .filter(|(d, _)| *d <= 2)
        .min()
        .map(|(_, c)| c)
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("expected a number, got '{s}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got '{s}'"))
    }
}

fn integer<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("expected a non-negative integer, got '{s}'"))
}

fn list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| item(p.trim())).collect()
}

fn boolean(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got '{s}'")),
    }
}

fn scenario(s: &str) -> Result<Scenario, String> {
    match s.strip_suffix('s') {
        Some(z) => Ok(Scenario::new(integer(z)?, true)),
        None => Ok(Scenario::new(integer(s)?, false)),
    }
}

fn range(s: &str) -> Result<Range, String> {
    match list(s, number)?.as_slice() {
        [lo, hi] if lo <= hi => Ok(Range::new(*lo, *hi)),
        [lo, hi] => Err(format!("range lower bound {lo} exceeds upper bound {hi}")),
        _ => Err(format!("expected 'lo, hi', got '{s}'")),
    }
}

impl Config {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "run.model" => {
                self.model = match value {
                    "baseline" => ModelKind::Baseline,
                    "differential" => ModelKind::Differential,
                    _ => return Err(format!("expected baseline or differential, got '{value}'")),
                }
            }
            "run.seed" => self.seed = integer(value)?,
            "population.n" => self.population.n = integer(value)?,
            "population.z" => self.population.zealots = integer(value)?,
            "population.beta" => self.population.beta = number(value)?,
            "population.subsidised" => self.population.subsidised = boolean(value)?,
            "sweep.parameter" => self.sweep_parameter = Some(value.to_string()),
            "sweep.grid" => self.sweep_grid = Some(list(value, number)?),
            "heatmap.z" => self.heatmap_z = list(value, integer)?,
            "heatmap.beta" => self.heatmap_beta = list(value, number)?,
            "random.games" => self.random_games = integer(value)?,
            "random.scenarios" => self.random_scenarios = list(value, scenario)?,
            "robustness.samples" => self.robustness_samples = integer(value)?,
            "abm.mu" => self.abm_mu = number(value)?,
            "abm.steps" => self.abm_steps = integer(value)?,
            "abm.burn_in" => self.abm_burn_in = integer(value)?,
            "welfare.z" => self.welfare_z = list(value, integer)?,
            "welfare.budget" => self.welfare_budget = Some(number(value)?),
            _ => {
                let unknown = || match suggestion(key) {
                    Some(s) => format!("unknown key '{key}' (did you mean {s})"),
                    None => format!("unknown key '{key}'"),
                };
                let (section, name) = key.split_once('.').ok_or_else(unknown)?;
                let slot = match section {
                    "baseline" => self.baseline.field_mut(name),
                    "diff" => self.diff.field_mut(name),
                    "ranges" => {
                        let r = range(value)?;
                        return if DiffParams::NAMES.contains(&name) {
                            self.diff_ranges.set(name, r).map_err(|e| e.to_string())
                        } else if BaselineParams::NAMES.contains(&name) {
                            self.baseline_ranges.set(name, r).map_err(|e| e.to_string())
                        } else {
                            Err(unknown())
                        };
                    }
                    _ => None,
                };
                *slot.ok_or_else(unknown)? = number(value)?;
            }
        }
        Ok(())
    }

    /// Parses and validates configuration text.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ConfigError::Parse { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'section.key = value', got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
                return Err(err(format!("key '{key}' already set on line {first}")));
            }
            cfg.set(key, value).map_err(err)?;
            seen.push((key.to_string(), line));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.population.validate()?;
        match self.model {
            ModelKind::Baseline => self.baseline.validate().map(|_| ()),
            ModelKind::Differential => self.diff.validate().map(|_| ()),
        }
    }

    /// Every key with its resolved value, in [`known_keys`] order. Unset
    /// optional keys are omitted.
    pub fn entries(&self) -> Vec<(String, String)> {
        let f = |v: f64| format!("{v:.16e}");
        let fl = |v: &[f64]| v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(", ");
        let il = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let r = |r: Range| format!("{}, {}", f(r.lo), f(r.hi));
        let mut out = Vec::new();
        for key in known_keys() {
            let (section, name) = key.split_once('.').expect("keys are dotted");
            let value = match key.as_str() {
                "run.model" => Some(self.model.name().to_string()),
                "run.seed" => Some(self.seed.to_string()),
                "population.n" => Some(self.population.n.to_string()),
                "population.z" => Some(self.population.zealots.to_string()),
                "population.beta" => Some(f(self.population.beta)),
                "population.subsidised" => Some(self.population.subsidised.to_string()),
                "sweep.parameter" => self.sweep_parameter.clone(),
                "sweep.grid" => self.sweep_grid.as_deref().map(fl),
                "heatmap.z" => Some(il(&self.heatmap_z)),
                "heatmap.beta" => Some(fl(&self.heatmap_beta)),
                "random.games" => Some(self.random_games.to_string()),
                "random.scenarios" => Some(
                    self.random_scenarios
                        .iter()
                        .map(|s| s.tag()[1..].to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
                "robustness.samples" => Some(self.robustness_samples.to_string()),
                "abm.mu" => Some(f(self.abm_mu)),
                "abm.steps" => Some(self.abm_steps.to_string()),
                "abm.burn_in" => Some(self.abm_burn_in.to_string()),
                "welfare.z" => Some(il(&self.welfare_z)),
                "welfare.budget" => self.welfare_budget.map(f),
                _ => match section {
                    "baseline" => self.baseline.get(name).map(f),
                    "diff" => self.diff.get(name).map(f),
                    "ranges" => self
                        .diff_ranges
                        .get(name)
                        .or_else(|| self.baseline_ranges.get(name))
                        .map(r),
                    _ => None,
                },
            };
            if let Some(v) = value {
                out.push((key, v));
            }
        }
        out
    }

    /// Canonical text form; parses back to an identical configuration.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = Config::parse("").unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!(cfg.diff, DiffParams::reference());
        assert_eq!(cfg.baseline, BaselineParams::attack_and_defend());
    }

    #[test]
    fn single_override() {
        let cfg = Config::parse("diff.C_H = 0.45  # raised\n").unwrap();
        let mut expected = Config::default();
        expected.diff.cost_h = 0.45;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn unknown_key_suggests_spelling() {
        let err = Config::parse("\n\ndiff.C_h = 0.41").unwrap_err().to_string();
        assert_eq!(err, "line 3: unknown key 'diff.C_h' (did you mean C_H)");
        let err = Config::parse("population.bta = 1").unwrap_err().to_string();
        assert!(err.contains("(did you mean beta)"), "{err}");
        let err = Config::parse("nothing.here = 1").unwrap_err().to_string();
        assert_eq!(err, "line 1: unknown key 'nothing.here'");
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        assert!(Config::parse("# c\nrun.model differential")
            .unwrap_err()
            .to_string()
            .starts_with("line 2:"));
        assert!(Config::parse("population.beta = 0,1").unwrap_err().to_string().contains("number"));
        assert!(Config::parse("population.beta = nan").is_err());
        assert!(Config::parse("run.seed = 1\nrun.seed = 2")
            .unwrap_err()
            .to_string()
            .contains("already set on line 1"));
        assert!(Config::parse("ranges.C_H = 0.5, 0.1").is_err());
    }

    #[test]
    fn constraint_violation_is_reported() {
        let err = Config::parse("diff.C_L = 0.5").unwrap_err();
        assert!(matches!(err, ConfigError::Model(_)));
        assert!(Config::parse("run.model = baseline\nbaseline.c_a = 0.99").is_err());
        assert!(Config::parse("population.z = 101").is_err());
    }

    #[test]
    fn lists_and_scenarios() {
        let cfg = Config::parse("random.scenarios = 0, 6, 6s, 100\nheatmap.z = 1,2, 3\nsweep.grid = 0.1, 0.2").unwrap();
        assert_eq!(
            cfg.random_scenarios,
            vec![
                Scenario::new(0, false),
                Scenario::new(6, false),
                Scenario::new(6, true),
                Scenario::new(100, false)
            ]
        );
        assert_eq!(cfg.heatmap_z, vec![1, 2, 3]);
        assert_eq!(cfg.sweep_grid, Some(vec![0.1, 0.2]));
    }

    #[test]
    fn round_trip() {
        let text = "run.model = baseline\nrun.seed = 99\npopulation.beta = 0.30000000000000004\n\
                    baseline.p_d = 0.3\nsweep.parameter = p_d\nsweep.grid = 0.1, 0.7\n\
                    ranges.b_aH = 0.5, 1.7\nranges.w = 0.9, 1\nwelfare.budget = 4.1\nrandom.scenarios = 3s, 0";
        let cfg = Config::parse(text).unwrap();
        let again = Config::parse(&cfg.serialize()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(again.serialize(), cfg.serialize());
        assert_eq!(Config::parse(&Config::default().serialize()).unwrap(), Config::default());
    }

    #[test]
    fn every_key_is_accepted() {
        let cfg = Config::default();
        for (k, v) in cfg.entries() {
            assert!(Config::parse(&format!("{k} = {v}")).is_ok(), "{k}");
        }
    }
}
