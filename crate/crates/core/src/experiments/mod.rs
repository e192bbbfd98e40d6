//! Seed-reproducible experiment protocols: 1-D sweeps, `(z, β)` heatmaps,
//! randomized robustness sweeps and the random-game study.
//!
//! Work is spread over rayon, but every result lands in an indexed slot and
//! all aggregation runs sequentially in index order, so outputs do not
//! depend on the worker count.

pub mod sampling;
pub mod stats;

use crate::markov::{build_baseline_chain, build_diff_chain, stationary, MarkovError, ModelKind, StationaryDist};
use crate::model::{BaselineParams, DiffParams, ModelError, PopulationConfig};
use crate::welfare::{social_welfare, success_rate, WelfareReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use sampling::{
    sample_baseline_game, sample_random_game, stream_rng, BaselineRanges, DiffRanges, Range, SamplingError,
    GENERATOR_VERSION,
};
pub use stats::{summarize, StreamingStats, SummaryStats};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("unknown parameter '{name}' for the {model} model")]
    UnknownParameter { model: &'static str, name: String },
    #[error("grid must not be empty")]
    EmptyGrid,
    #[error("grid must be finite and strictly increasing (position {0})")]
    GridNotIncreasing(usize),
    #[error("zealot count {z} exceeds population size {n}")]
    ZealotsOutOfRange { z: usize, n: usize },
    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("no records to summarise")]
    EmptyRecords,
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

/// Both parameter sets travel together; `model` picks the one in use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: ModelKind,
    pub baseline: BaselineParams,
    pub diff: DiffParams,
    pub population: PopulationConfig,
}

impl ModelParams {
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            baseline: BaselineParams::default(),
            diff: DiffParams::default(),
            population: PopulationConfig::default(),
        }
    }

    fn check_parameter(&self, name: &str) -> Result<()> {
        let known = match self.model {
            ModelKind::Baseline => BaselineParams::NAMES.contains(&name),
            ModelKind::Differential => DiffParams::NAMES.contains(&name),
        };
        if known {
            Ok(())
        } else {
            Err(ExperimentError::UnknownParameter {
                model: self.model.name(),
                name: name.to_string(),
            })
        }
    }

    /// Copy with `name` set to `value`, without constraint checks.
    fn with_value(&self, name: &str, value: f64) -> Result<Self> {
        let mut out = *self;
        let slot = match self.model {
            ModelKind::Baseline => out.baseline.field_mut(name),
            ModelKind::Differential => out.diff.field_mut(name),
        };
        match slot {
            Some(v) => *v = value,
            None => {
                return Err(ExperimentError::UnknownParameter {
                    model: self.model.name(),
                    name: name.to_string(),
                })
            }
        }
        Ok(out)
    }

    pub fn constraints_hold(&self) -> bool {
        match self.model {
            ModelKind::Baseline => self.baseline.is_valid(),
            ModelKind::Differential => self.diff.is_valid(),
        }
    }

    /// Stationary distribution of the selected model. The baseline model
    /// ignores zealots and subsidy.
    pub fn stationary(&self) -> Result<StationaryDist> {
        let chain = match self.model {
            ModelKind::Baseline => {
                let cfg = self.population.validate()?;
                build_baseline_chain(&self.baseline, cfg.n, cfg.beta)
            }
            ModelKind::Differential => build_diff_chain(&self.diff, &self.population)?,
        };
        Ok(stationary(&chain)?)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(ExperimentError::EmptyGrid);
    }
    for (i, v) in grid.iter().enumerate() {
        if !v.is_finite() || (i > 0 && *v <= grid[i - 1]) {
            return Err(ExperimentError::GridNotIncreasing(i));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub parameter: String,
    pub grid: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.check_parameter(&self.parameter)?;
        check_grid(&self.grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub pi: [f64; 4],
    /// Whether the swept point satisfies the model's parameter constraints.
    pub constraints_ok: bool,
}

/// One stationary distribution per grid point. Points that break the
/// ordering constraints are evaluated anyway and flagged.
pub fn sweep_1d(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid
        .par_iter()
        .map(|&value| {
            let params = spec.base.with_value(&spec.parameter, value)?;
            Ok(SweepRow {
                value,
                pi: params.stationary()?.pi,
                constraints_ok: params.constraints_hold(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapRow {
    pub z: usize,
    pub beta: f64,
    pub pi: [f64; 4],
    /// `π(A,H) + π(NA,H)`.
    pub pi_high: f64,
}

/// Differential-model stationary distribution over a `(z, β)` grid,
/// z-major row order.
pub fn heatmap_zbeta(p: &DiffParams, n: usize, zs: &[usize], betas: &[f64], subsidised: bool) -> Result<Vec<HeatmapRow>> {
    if let Some(&z) = zs.iter().find(|&&z| z > n) {
        return Err(ExperimentError::ZealotsOutOfRange { z, n });
    }
    let cells: Vec<(usize, f64)> = zs.iter().flat_map(|&z| betas.iter().map(move |&b| (z, b))).collect();
    cells
        .par_iter()
        .map(|&(z, beta)| {
            let cfg = PopulationConfig::new(n, z, beta, subsidised)?;
            let pi = stationary(&build_diff_chain(p, &cfg)?)?.pi;
            Ok(HeatmapRow {
                z,
                beta,
                pi,
                pi_high: pi[0] + pi[2],
            })
        })
        .collect()
}

/// Zealot count and subsidy flag for one arm of the random-game study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub zealots: usize,
    pub subsidised: bool,
}

impl Scenario {
    pub const fn new(zealots: usize, subsidised: bool) -> Self {
        Self { zealots, subsidised }
    }

    /// `z6`, or `z6s` when subsidised.
    pub fn tag(&self) -> String {
        if self.subsidised {
            format!("z{}s", self.zealots)
        } else {
            format!("z{}", self.zealots)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub game: usize,
    pub scenario: Scenario,
    pub params: DiffParams,
    pub pi: StationaryDist,
    /// `π(A,H) + π(A,L)`.
    pub attack: f64,
    /// `1 − π(A,L) − π(NA,L)`.
    pub high_defence: f64,
    pub success: f64,
    pub welfare: WelfareReport,
    /// `f_A^H < f_A^L`: attacking is less rewarding against high defence.
    pub deterrent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Attack,
    HighDefence,
    Success,
    SwDefender,
    SwAttacker,
    SwTotal,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Attack,
        Metric::HighDefence,
        Metric::Success,
        Metric::SwDefender,
        Metric::SwAttacker,
        Metric::SwTotal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Attack => "attack",
            Metric::HighDefence => "high_defence",
            Metric::Success => "success",
            Metric::SwDefender => "sw_defender",
            Metric::SwAttacker => "sw_attacker",
            Metric::SwTotal => "sw_total",
        }
    }

    pub fn value(self, r: &GameRecord) -> f64 {
        match self {
            Metric::Attack => r.attack,
            Metric::HighDefence => r.high_defence,
            Metric::Success => r.success,
            Metric::SwDefender => r.welfare.sw_defender,
            Metric::SwAttacker => r.welfare.sw_attacker,
            Metric::SwTotal => r.welfare.sw_total,
        }
    }
}

/// Summary of one metric over a record set.
pub fn summarize_records<'a, I>(records: I, metric: Metric) -> Result<SummaryStats>
where
    I: IntoIterator<Item = &'a GameRecord>,
{
    summarize(records.into_iter().map(|r| metric.value(r))).ok_or(ExperimentError::EmptyRecords)
}

/// Evaluates one sampled game under one scenario.
pub fn evaluate_game(game: usize, params: &DiffParams, scenario: Scenario, n: usize, beta: f64) -> Result<GameRecord> {
    let cfg = PopulationConfig::new(n, scenario.zealots, beta, scenario.subsidised)?;
    let pi = stationary(&build_diff_chain(params, &cfg)?)?;
    let a = params.attacker_payoffs();
    Ok(GameRecord {
        game,
        scenario,
        params: *params,
        pi,
        attack: (pi.pi[0] + pi.pi[1]).clamp(0.0, 1.0),
        high_defence: (1.0 - (pi.pi[1] + pi.pi[3])).clamp(0.0, 1.0),
        success: success_rate(&pi, params),
        welfare: social_welfare(&pi, params, &cfg),
        deterrent: a.attack_vs_high < a.attack_vs_low,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomGamesSpec {
    pub games: usize,
    pub scenarios: Vec<Scenario>,
    pub n: usize,
    pub beta: f64,
    pub seed: u64,
    pub ranges: DiffRanges,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub all: SummaryStats,
    /// Over records with the deterrent flag; `None` if there are none.
    pub deterrent: Option<SummaryStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub scenario: Scenario,
    pub metrics: Vec<MetricSummary>,
}

impl ScenarioSummary {
    pub fn get(&self, metric: Metric) -> &MetricSummary {
        self.metrics
            .iter()
            .find(|m| m.metric == metric)
            .expect("every metric is summarised")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomGamesOutput {
    /// Game-major, scenario-minor.
    pub records: Vec<GameRecord>,
    pub summaries: Vec<ScenarioSummary>,
}

/// Samples `games` parameter sets and evaluates each under every scenario.
/// Game `k` is drawn from stream `k` of the seed, so all scenarios see the
/// same games.
pub fn random_games(spec: &RandomGamesSpec) -> Result<RandomGamesOutput> {
    if spec.games < 1 {
        return Err(ExperimentError::TooFewSamples { min: 1, got: spec.games });
    }
    for s in &spec.scenarios {
        if s.zealots > spec.n {
            return Err(ExperimentError::ZealotsOutOfRange { z: s.zealots, n: spec.n });
        }
    }
    spec.ranges.check()?;
    let per_game: Vec<Vec<GameRecord>> = (0..spec.games)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(spec.seed, k as u64);
            let params = sample_random_game(&mut rng, &spec.ranges)?;
            spec.scenarios
                .iter()
                .map(|&s| evaluate_game(k, &params, s, spec.n, spec.beta))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let records: Vec<GameRecord> = per_game.into_iter().flatten().collect();

    let summaries = spec
        .scenarios
        .iter()
        .map(|&scenario| {
            let arm: Vec<&GameRecord> = records.iter().filter(|r| r.scenario == scenario).collect();
            let metrics = Metric::ALL
                .iter()
                .map(|&metric| {
                    Ok(MetricSummary {
                        metric,
                        all: summarize_records(arm.iter().copied(), metric)?,
                        deterrent: summarize_records(arm.iter().copied().filter(|r| r.deterrent), metric).ok(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ScenarioSummary { scenario, metrics })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RandomGamesOutput { records, summaries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessSpec {
    pub base: ModelParams,
    pub parameter: String,
    pub grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub baseline_ranges: BaselineRanges,
    pub diff_ranges: DiffRanges,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessRow {
    pub value: f64,
    pub mean: [f64; 4],
    pub sd: [f64; 4],
}

/// Stream id of sample `k` at grid point `i`.
fn robustness_stream(i: usize, k: usize) -> u64 {
    ((i as u64) << 32) | k as u64
}

/// At each grid value the swept parameter is pinned and every other one is
/// redrawn `samples` times; fresh draws per point.
pub fn robustness_sweep(spec: &RobustnessSpec) -> Result<Vec<RobustnessRow>> {
    spec.base.check_parameter(&spec.parameter)?;
    check_grid(&spec.grid)?;
    if spec.samples < 2 {
        return Err(ExperimentError::TooFewSamples { min: 2, got: spec.samples });
    }
    spec.grid
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let dists: Vec<[f64; 4]> = (0..spec.samples)
                .into_par_iter()
                .map(|k| {
                    let mut rng = stream_rng(spec.seed, robustness_stream(i, k));
                    let mut params = spec.base;
                    match spec.base.model {
                        ModelKind::Baseline => {
                            let ranges = spec.baseline_ranges.pinned(&spec.parameter, value)?;
                            params.baseline = sample_baseline_game(&mut rng, &ranges)?;
                        }
                        ModelKind::Differential => {
                            let ranges = spec.diff_ranges.pinned(&spec.parameter, value)?;
                            params.diff = sample_random_game(&mut rng, &ranges)?;
                        }
                    }
                    Ok(params.stationary()?.pi)
                })
                .collect::<Result<_>>()?;
            let mut mean = [0.0; 4];
            let mut sd = [0.0; 4];
            for s in 0..4 {
                let st = summarize(dists.iter().map(|d| d[s])).ok_or(ExperimentError::EmptyRecords)?;
                mean[s] = st.mean;
                sd[s] = st.sd;
            }
            Ok(RobustnessRow { value, mean, sd })
        })
        .collect()
}
