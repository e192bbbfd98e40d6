//! Command implementations. Each command turns a resolved configuration
//! into in-memory output files; [`run_command`] writes them with the
//! manifest.

use crate::config::Config;
use crate::output::{fmt_f64, state_column, write_outputs, OutputFile, RunManifest, Table};
use anyhow::{bail, Context, Result};
use secgame_core::abm::{compare, simulate, SimConfig};
use secgame_core::experiments::{
    heatmap_zbeta, random_games, robustness_sweep, sweep_1d, Metric, ModelParams, RandomGamesSpec, RobustnessSpec,
    SweepSpec, GENERATOR_VERSION,
};
use secgame_core::markov::{
    build_baseline_chain, build_diff_chain, export_chain, risk_dominance_baseline, risk_dominance_diff, stationary,
    EmbeddedChain, RiskDominance,
};
use secgame_core::welfare::{max_subsidised, social_welfare};
use secgame_core::{ModelKind, PopulationConfig};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CommandName {
    Stationary,
    Sweep,
    Heatmap,
    RandomGames,
    Robustness,
    Welfare,
    Simulate,
    ExportChain,
}

impl CommandName {
    pub fn name(self) -> &'static str {
        match self {
            CommandName::Stationary => "stationary",
            CommandName::Sweep => "sweep",
            CommandName::Heatmap => "heatmap",
            CommandName::RandomGames => "random-games",
            CommandName::Robustness => "robustness",
            CommandName::Welfare => "welfare",
            CommandName::Simulate => "simulate",
            CommandName::ExportChain => "export-chain",
        }
    }
}

/// Files produced by a command plus warnings for the user.
pub struct CommandOutput {
    pub files: Vec<OutputFile>,
    pub warnings: Vec<String>,
}

impl From<Vec<OutputFile>> for CommandOutput {
    fn from(files: Vec<OutputFile>) -> Self {
        Self {
            files,
            warnings: Vec::new(),
        }
    }
}

fn model_params(cfg: &Config) -> ModelParams {
    ModelParams {
        model: cfg.model,
        baseline: cfg.baseline,
        diff: cfg.diff,
        population: cfg.population,
    }
}

fn chain_and_dominance(cfg: &Config) -> Result<(EmbeddedChain, RiskDominance)> {
    Ok(match cfg.model {
        ModelKind::Baseline => (
            build_baseline_chain(&cfg.baseline, cfg.population.n, cfg.population.beta),
            risk_dominance_baseline(&cfg.baseline),
        ),
        ModelKind::Differential => (build_diff_chain(&cfg.diff, &cfg.population)?, risk_dominance_diff(&cfg.diff)),
    })
}

fn pi_columns(prefix: &str, model: ModelKind) -> Vec<String> {
    model
        .labels()
        .iter()
        .map(|l| format!("{prefix}{}", state_column(l)))
        .collect()
}

fn sweep_inputs(cfg: &Config) -> Result<(String, Vec<f64>)> {
    let parameter = cfg.sweep_parameter.clone().context("sweep.parameter is required")?;
    let grid = cfg.sweep_grid.clone().context("sweep.grid is required")?;
    Ok((parameter, grid))
}

fn cmd_stationary(cfg: &Config) -> Result<CommandOutput> {
    let (chain, _) = chain_and_dominance(cfg)?;
    let pi = stationary(&chain)?;
    let mut t = Table::new(&["state", "pi"]);
    for (label, p) in chain.labels.iter().zip(pi.pi) {
        t.row(&[label.to_string(), fmt_f64(p)]);
    }
    let mut m = Table::new(&["from", "to", "fixation", "probability"]);
    for i in 0..4 {
        for j in 0..4 {
            m.row(&[
                chain.labels[i].to_string(),
                chain.labels[j].to_string(),
                fmt_f64(chain.fixation[i][j]),
                fmt_f64(chain.matrix[i][j]),
            ]);
        }
    }
    Ok(vec![
        OutputFile::new("stationary.csv", t.into_bytes()),
        OutputFile::new("transitions.csv", m.into_bytes()),
    ]
    .into())
}

fn cmd_sweep(cfg: &Config) -> Result<CommandOutput> {
    let (parameter, grid) = sweep_inputs(cfg)?;
    let rows = sweep_1d(&SweepSpec {
        base: model_params(cfg),
        parameter: parameter.clone(),
        grid,
    })?;
    let mut header = vec![parameter];
    header.extend(pi_columns("pi_", cfg.model));
    header.push("constraints_ok".into());
    let mut t = Table::new(&header);
    for r in rows {
        let mut fields = vec![fmt_f64(r.value)];
        fields.extend(r.pi.iter().map(|p| fmt_f64(*p)));
        fields.push(r.constraints_ok.to_string());
        t.row(&fields);
    }
    Ok(vec![OutputFile::new("sweep.csv", t.into_bytes())].into())
}

fn cmd_heatmap(cfg: &Config) -> Result<CommandOutput> {
    let rows = heatmap_zbeta(
        &cfg.diff,
        cfg.population.n,
        &cfg.heatmap_z,
        &cfg.heatmap_beta,
        cfg.population.subsidised,
    )?;
    let mut header = vec!["z".to_string(), "beta".to_string()];
    header.extend(pi_columns("pi_", ModelKind::Differential));
    header.push("pi_high".into());
    let mut t = Table::new(&header);
    for r in rows {
        let mut fields = vec![r.z.to_string(), fmt_f64(r.beta)];
        fields.extend(r.pi.iter().map(|p| fmt_f64(*p)));
        fields.push(fmt_f64(r.pi_high));
        t.row(&fields);
    }
    Ok(vec![OutputFile::new("heatmap.csv", t.into_bytes())].into())
}

fn cmd_random_games(cfg: &Config) -> Result<CommandOutput> {
    let out = random_games(&RandomGamesSpec {
        games: cfg.random_games,
        scenarios: cfg.random_scenarios.clone(),
        n: cfg.population.n,
        beta: cfg.population.beta,
        seed: cfg.seed,
        ranges: cfg.diff_ranges,
    })?;
    let mut header = vec!["game".to_string(), "scenario".to_string()];
    header.extend(secgame_core::DiffParams::NAMES.iter().map(|n| n.to_string()));
    header.extend(pi_columns("pi_", ModelKind::Differential));
    header.extend(
        [
            "attack",
            "high_defence",
            "success",
            "sw_defender",
            "sw_attacker",
            "sw_total",
            "deterrent",
        ]
        .map(String::from),
    );
    let mut records = Table::new(&header);
    for r in &out.records {
        let mut fields = vec![r.game.to_string(), r.scenario.tag()];
        fields.extend(r.params.values().iter().map(|v| fmt_f64(*v)));
        fields.extend(r.pi.pi.iter().map(|p| fmt_f64(*p)));
        fields.extend(
            [
                r.attack,
                r.high_defence,
                r.success,
                r.welfare.sw_defender,
                r.welfare.sw_attacker,
                r.welfare.sw_total,
            ]
            .map(fmt_f64),
        );
        fields.push(r.deterrent.to_string());
        records.row(&fields);
    }
    let mut summary = Table::new(&["scenario", "subset", "metric", "mean", "sd", "count"]);
    for s in &out.summaries {
        for metric in Metric::ALL {
            let m = s.get(metric);
            for (subset, stats) in [("all", Some(m.all)), ("deterrent", m.deterrent)] {
                match stats {
                    Some(st) => summary.row(&[
                        s.scenario.tag(),
                        subset.to_string(),
                        metric.name().to_string(),
                        fmt_f64(st.mean),
                        fmt_f64(st.sd),
                        st.count.to_string(),
                    ]),
                    None => summary.row(&[
                        s.scenario.tag(),
                        subset.to_string(),
                        metric.name().to_string(),
                        String::new(),
                        String::new(),
                        "0".to_string(),
                    ]),
                }
            }
        }
    }
    Ok(vec![
        OutputFile::new("records.csv", records.into_bytes()),
        OutputFile::new("summary.csv", summary.into_bytes()),
    ]
    .into())
}

fn cmd_robustness(cfg: &Config) -> Result<CommandOutput> {
    let (parameter, grid) = sweep_inputs(cfg)?;
    let rows = robustness_sweep(&RobustnessSpec {
        base: model_params(cfg),
        parameter: parameter.clone(),
        grid,
        samples: cfg.robustness_samples,
        seed: cfg.seed,
        baseline_ranges: cfg.baseline_ranges,
        diff_ranges: cfg.diff_ranges,
    })?;
    let mut header = vec![parameter];
    header.extend(pi_columns("mean_", cfg.model));
    header.extend(pi_columns("sd_", cfg.model));
    let mut t = Table::new(&header);
    for r in rows {
        let mut fields = vec![fmt_f64(r.value)];
        fields.extend(r.mean.iter().chain(r.sd.iter()).map(|v| fmt_f64(*v)));
        t.row(&fields);
    }
    Ok(vec![OutputFile::new("robustness.csv", t.into_bytes())].into())
}

fn cmd_welfare(cfg: &Config) -> Result<CommandOutput> {
    let mut header = vec!["z".to_string(), "subsidised".to_string()];
    header.extend(pi_columns("pi_", ModelKind::Differential));
    header.extend(["success", "sw_defender", "sw_attacker", "sw_total"].map(String::from));
    let mut t = Table::new(&header);
    for &z in &cfg.welfare_z {
        for subsidised in [false, true] {
            let pop = PopulationConfig::new(cfg.population.n, z, cfg.population.beta, subsidised)?;
            let pi = stationary(&build_diff_chain(&cfg.diff, &pop)?)?;
            let w = social_welfare(&pi, &cfg.diff, &pop);
            let mut fields = vec![z.to_string(), subsidised.to_string()];
            fields.extend(pi.pi.iter().map(|p| fmt_f64(*p)));
            fields.extend([w.pi_succ, w.sw_defender, w.sw_attacker, w.sw_total].map(fmt_f64));
            t.row(&fields);
        }
    }
    let mut files = vec![OutputFile::new("welfare.csv", t.into_bytes())];
    if let Some(budget) = cfg.welfare_budget {
        let mut b = Table::new(&["budget", "C_H", "max_subsidised"]);
        let z = max_subsidised(budget, cfg.diff.cost_h)?;
        b.row(&[fmt_f64(budget), fmt_f64(cfg.diff.cost_h), z.to_string()]);
        files.push(OutputFile::new("budget.csv", b.into_bytes()));
    }
    Ok(files.into())
}

fn cmd_simulate(cfg: &Config) -> Result<CommandOutput> {
    let sim = SimConfig {
        model: cfg.model,
        baseline: cfg.baseline,
        diff: cfg.diff,
        population: cfg.population,
        mu: cfg.abm_mu,
        steps: cfg.abm_steps,
        burn_in: cfg.abm_burn_in,
        seed: cfg.seed,
    };
    let est = simulate(&sim)?;
    let (chain, _) = chain_and_dominance(cfg)?;
    let pi = stationary(&chain)?;
    let cmp = compare(&est, &pi, chain.labels)?;
    let mut occ = Table::new(&["state", "occupancy", "pi"]);
    for i in 0..4 {
        occ.row(&[est.labels[i].to_string(), fmt_f64(est.fractions[i]), fmt_f64(pi.pi[i])]);
    }
    occ.row(&["mixed".to_string(), fmt_f64(est.residual), String::new()]);
    let mut c = Table::new(&["l1", "residual", "mu_too_large", "steps"]);
    c.row(&[
        fmt_f64(cmp.l1),
        fmt_f64(cmp.residual),
        cmp.mu_too_large.to_string(),
        est.steps.to_string(),
    ]);
    let mut warnings = Vec::new();
    if cmp.mu_too_large {
        warnings.push(format!(
            "mixed-state fraction {:.3} exceeds 0.2; mutation rate {} is too large for a rare-mutation comparison",
            cmp.residual, cfg.abm_mu
        ));
    }
    Ok(CommandOutput {
        files: vec![
            OutputFile::new("occupancy.csv", occ.into_bytes()),
            OutputFile::new("comparison.csv", c.into_bytes()),
        ],
        warnings,
    })
}

fn cmd_export_chain(cfg: &Config) -> Result<CommandOutput> {
    let (chain, rd) = chain_and_dominance(cfg)?;
    let pi = stationary(&chain)?;
    Ok(vec![OutputFile::new("chain.dot", export_chain(&chain, &pi, &rd).into_bytes())].into())
}

/// Runs `name` without touching the file system.
pub fn build_outputs(name: CommandName, cfg: &Config) -> Result<CommandOutput> {
    match name {
        CommandName::Stationary => cmd_stationary(cfg),
        CommandName::Sweep => cmd_sweep(cfg),
        CommandName::Heatmap => cmd_heatmap(cfg),
        CommandName::RandomGames => cmd_random_games(cfg),
        CommandName::Robustness => cmd_robustness(cfg),
        CommandName::Welfare => cmd_welfare(cfg),
        CommandName::Simulate => cmd_simulate(cfg),
        CommandName::ExportChain => cmd_export_chain(cfg),
    }
}

/// Runs `name` and writes its files and `manifest.json` into `out`.
/// Returns the manifest and any warnings.
pub fn run_command(name: CommandName, cfg: &Config, out: &Path) -> Result<(RunManifest, Vec<String>)> {
    if cfg.population.n < 2 {
        bail!("population.n must be at least 2");
    }
    let output = build_outputs(name, cfg).with_context(|| format!("running {}", name.name()))?;
    let manifest = RunManifest {
        command: name.name().to_string(),
        config: cfg.entries().into_iter().collect(),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        generator: GENERATOR_VERSION.to_string(),
        files: Vec::new(),
    };
    let manifest = write_outputs(out, &output.files, manifest)
        .with_context(|| format!("writing outputs to {}", out.display()))?;
    Ok((manifest, output.warnings))
}
