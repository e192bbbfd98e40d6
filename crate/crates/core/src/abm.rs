//! Agent-based simulation of the two-population imitation process with
//! mutation and committed defenders, used as an independent check on the
//! embedded Markov chain.
//!
//! Each step picks the attacker or the defender population with
//! probability ½, then one revising agent uniformly among that population's
//! non-committed members. With probability μ the agent adopts a uniformly
//! random strategy of its population. Otherwise it picks a role model
//! uniformly from the whole population, committed defenders included, and
//! copies its strategy with the Fermi probability on current average
//! payoffs. Runs start in the first canonical state, all attacking and all
//! free defenders on D/H.

use crate::experiments::sampling::stream_rng;
use crate::fixation::fermi;
use crate::markov::{ModelKind, StationaryDist};
use crate::model::{
    avg_payoffs_with_zealots, AttackerMove, BaselineParams, DefenderMove, DiffParams, ModelError, PopulationConfig,
};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mixed-time fraction above which μ is considered too large for the
/// rare-mutation comparison.
pub const RESIDUAL_LIMIT: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbmError {
    #[error("mutation rate must lie in (0, 1), got {0}")]
    MutationRate(f64),
    #[error("steps ({steps}) must exceed burn-in ({burn_in})")]
    Steps { steps: u64, burn_in: u64 },
    #[error("state labels differ: {left} vs {right}")]
    LabelMismatch { left: String, right: String },
    #[error("no post-burn-in step was monomorphic")]
    NoMonomorphicTime,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: ModelKind,
    pub baseline: BaselineParams,
    pub diff: DiffParams,
    /// Zealots and subsidy apply to the differential model only.
    pub population: PopulationConfig,
    pub mu: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), AbmError> {
        self.population.validate()?;
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(AbmError::MutationRate(self.mu));
        }
        if self.steps <= self.burn_in {
            return Err(AbmError::Steps {
                steps: self.steps,
                burn_in: self.burn_in,
            });
        }
        Ok(())
    }

    fn zealots(&self) -> usize {
        match self.model {
            ModelKind::Baseline => 0,
            ModelKind::Differential => self.population.zealots,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupancyEstimate {
    pub labels: [&'static str; 4],
    /// Fraction of post-burn-in steps spent in each monomorphic state.
    pub fractions: [f64; 4],
    /// Fraction of post-burn-in steps in mixed states.
    pub residual: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// L1 distance after renormalising the monomorphic fractions.
    pub l1: f64,
    pub residual: f64,
    pub mu_too_large: bool,
}

/// Payoffs of both strategies of one population given the counts.
struct Payoffs<'a> {
    cfg: &'a SimConfig,
    pop: PopulationConfig,
}

impl Payoffs<'_> {
    /// `(f_A, f_NA)` with `attackers` attacking and `high` free defenders on D/H.
    fn attacker(&self, high: usize) -> Result<(f64, f64), ModelError> {
        match self.cfg.model {
            ModelKind::Baseline => {
                let y = high as f64 / self.pop.n as f64;
                let p = &self.cfg.baseline;
                let (a_d, na_d) = p.attacker_payoffs_against(DefenderMove::Defend);
                let (a_nd, na_nd) = p.attacker_payoffs_against(DefenderMove::NoDefend);
                Ok((y * a_d + (1.0 - y) * a_nd, y * na_d + (1.0 - y) * na_nd))
            }
            ModelKind::Differential => {
                let avg = avg_payoffs_with_zealots(0, high, &self.cfg.diff, &self.pop)?;
                Ok((avg.attack, avg.no_attack))
            }
        }
    }

    /// `(f_D/H, f_ND/L)`.
    fn defender(&self, attackers: usize) -> Result<(f64, f64), ModelError> {
        match self.cfg.model {
            ModelKind::Baseline => {
                let x = attackers as f64 / self.pop.n as f64;
                let p = &self.cfg.baseline;
                let (d_a, nd_a) = p.defender_payoffs_against(AttackerMove::Attack);
                let (d_na, nd_na) = p.defender_payoffs_against(AttackerMove::NoAttack);
                Ok((x * d_a + (1.0 - x) * d_na, x * nd_a + (1.0 - x) * nd_na))
            }
            ModelKind::Differential => {
                let avg = avg_payoffs_with_zealots(attackers, 0, &self.cfg.diff, &self.pop)?;
                Ok((avg.high, avg.low))
            }
        }
    }
}

/// One revision. `count` agents of `free` play the first strategy; `fixed`
/// committed agents always play the first strategy and act as role models.
#[allow(clippy::too_many_arguments)]
fn revise<R: Rng>(
    rng: &mut R,
    count: &mut usize,
    free: usize,
    fixed: usize,
    n: usize,
    mu: f64,
    beta: f64,
    payoffs: (f64, f64),
) {
    if free == 0 {
        return;
    }
    let first = rng.gen_range(0..free) < *count;
    let adopt_first = if rng.gen::<f64>() < mu {
        rng.gen::<bool>()
    } else {
        let model_first = rng.gen_range(0..n) < *count + fixed;
        if model_first == first {
            return;
        }
        let (f_self, f_model) = if first { payoffs } else { (payoffs.1, payoffs.0) };
        if rng.gen::<f64>() < fermi(beta, f_model, f_self) {
            model_first
        } else {
            return;
        }
    };
    match (first, adopt_first) {
        (true, false) => *count -= 1,
        (false, true) => *count += 1,
        _ => {}
    }
}

fn run<R: Rng>(cfg: &SimConfig, rng: &mut R) -> Result<OccupancyEstimate, AbmError> {
    cfg.validate()?;
    let z = cfg.zealots();
    let pop = match cfg.model {
        ModelKind::Baseline => PopulationConfig { zealots: 0, ..cfg.population },
        ModelKind::Differential => cfg.population,
    };
    let n = pop.n;
    let free_def = n - z;
    let payoffs = Payoffs { cfg, pop };
    let beta = pop.beta;

    // Attack-count and free high-defender count.
    let mut attackers = n;
    let mut high = free_def;
    let mut tally = [0u64; 5];
    for step in 0..cfg.steps {
        if rng.gen::<bool>() {
            let f = payoffs.attacker(high)?;
            revise(rng, &mut attackers, n, 0, n, cfg.mu, beta, f);
        } else {
            let f = payoffs.defender(attackers)?;
            revise(rng, &mut high, free_def, z, n, cfg.mu, beta, f);
        }
        if step < cfg.burn_in {
            continue;
        }
        let a = if attackers == n {
            Some(0)
        } else if attackers == 0 {
            Some(1)
        } else {
            None
        };
        // An empty free population counts as D/H.
        let d = if high == free_def {
            Some(0)
        } else if high == 0 {
            Some(1)
        } else {
            None
        };
        let slot = match (a, d) {
            // Canonical order: attacker varies fastest in the baseline
            // model, defence level fastest in the differential model.
            (Some(a), Some(d)) => match cfg.model {
                ModelKind::Baseline => 2 * d + a,
                ModelKind::Differential => 2 * a + d,
            },
            _ => 4,
        };
        tally[slot] += 1;
    }
    let total = (cfg.steps - cfg.burn_in) as f64;
    Ok(OccupancyEstimate {
        labels: cfg.model.labels(),
        fractions: std::array::from_fn(|i| tally[i] as f64 / total),
        residual: tally[4] as f64 / total,
        steps: cfg.steps - cfg.burn_in,
    })
}

/// Single run on stream 0 of `cfg.seed`.
pub fn simulate(cfg: &SimConfig) -> Result<OccupancyEstimate, AbmError> {
    run(cfg, &mut stream_rng(cfg.seed, 0))
}

/// Independent replicas on streams `0..replicas` of `cfg.seed`.
pub fn simulate_replicas(cfg: &SimConfig, replicas: usize) -> Result<Vec<OccupancyEstimate>, AbmError> {
    (0..replicas)
        .into_par_iter()
        .map(|r| run(cfg, &mut stream_rng(cfg.seed, r as u64)))
        .collect()
}

/// L1 distance between renormalised occupancy and `pi`, whose states are
/// labelled `labels`.
pub fn compare(est: &OccupancyEstimate, pi: &StationaryDist, labels: [&'static str; 4]) -> Result<Comparison, AbmError> {
    if est.labels != labels {
        return Err(AbmError::LabelMismatch {
            left: est.labels.join(" "),
            right: labels.join(" "),
        });
    }
    let mono: f64 = est.fractions.iter().sum();
    if mono <= 0.0 {
        return Err(AbmError::NoMonomorphicTime);
    }
    let l1 = est
        .fractions
        .iter()
        .zip(pi.pi.iter())
        .map(|(f, p)| (f / mono - p).abs())
        .sum();
    Ok(Comparison {
        l1,
        residual: est.residual,
        mu_too_large: est.residual > RESIDUAL_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{build_baseline_chain, stationary};

    fn config(model: ModelKind, z: usize, beta: f64, steps: u64) -> SimConfig {
        SimConfig {
            model,
            baseline: BaselineParams::attack_and_defend(),
            diff: DiffParams::reference(),
            population: PopulationConfig::new(100, z, beta, false).unwrap(),
            mu: 1e-3,
            steps,
            burn_in: steps / 10,
            seed: 17,
        }
    }

    #[test]
    fn fractions_sum_to_one() {
        let est = simulate(&config(ModelKind::Differential, 5, 0.1, 200_000)).unwrap();
        let s: f64 = est.fractions.iter().sum::<f64>() + est.residual;
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = config(ModelKind::Baseline, 0, 0.1, 100_000);
        assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
    }

    #[test]
    fn full_commitment_freezes_defenders() {
        let est = simulate(&config(ModelKind::Differential, 100, 0.1, 200_000)).unwrap();
        assert_eq!(est.fractions[1], 0.0);
        assert_eq!(est.fractions[3], 0.0);
        assert_eq!(est.residual + est.fractions[0] + est.fractions[2], 1.0);
    }

    #[test]
    fn neutral_drift_is_uniform() {
        // All four states are equivalent without selection, so any μ gives
        // uniform occupancy; a small population and larger μ mix faster.
        let cfg = SimConfig {
            population: PopulationConfig::new(10, 0, 0.0, false).unwrap(),
            mu: 1e-2,
            ..config(ModelKind::Baseline, 0, 0.0, 20_000_000)
        };
        let est = simulate(&cfg).unwrap();
        let uniform = StationaryDist { pi: [0.25; 4] };
        let c = compare(&est, &uniform, ModelKind::Baseline.labels()).unwrap();
        assert!(c.l1 < 0.05, "{est:?}");
    }

    #[test]
    fn baseline_argmax_matches_chain() {
        let cfg = config(ModelKind::Baseline, 0, 0.1, 10_000_000);
        let est = simulate(&cfg).unwrap();
        let pi = stationary(&build_baseline_chain(&cfg.baseline, 100, 0.1)).unwrap();
        let best = (0..4).max_by(|&a, &b| est.fractions[a].total_cmp(&est.fractions[b])).unwrap();
        assert_eq!(best, pi.argmax());
    }

    #[test]
    fn compare_checks() {
        let est = OccupancyEstimate {
            labels: ModelKind::Differential.labels(),
            fractions: [0.1, 0.1, 0.2, 0.1],
            residual: 0.5,
            steps: 10,
        };
        let pi = StationaryDist { pi: [0.2, 0.2, 0.4, 0.2] };
        let c = compare(&est, &pi, ModelKind::Differential.labels()).unwrap();
        assert!(c.l1 < 1e-15);
        assert!(c.mu_too_large);
        assert!(matches!(
            compare(&est, &pi, ModelKind::Baseline.labels()),
            Err(AbmError::LabelMismatch { .. })
        ));
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = config(ModelKind::Baseline, 0, 0.1, 100);
        cfg.mu = 0.0;
        assert!(simulate(&cfg).is_err());
        cfg.mu = 1e-3;
        cfg.burn_in = 100;
        assert!(simulate(&cfg).is_err());
    }
}
