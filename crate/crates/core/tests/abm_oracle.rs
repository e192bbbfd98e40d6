//! Agent-based simulation against the analytic embedded chain.

use secgame_core::abm::{compare, simulate, simulate_replicas, SimConfig};
use secgame_core::markov::{build_baseline_chain, build_diff_chain, stationary};
use secgame_core::{BaselineParams, DiffParams, ModelKind, PopulationConfig};

fn diff_config(n: usize, z: usize, beta: f64, mu: f64, steps: u64, seed: u64) -> SimConfig {
    SimConfig {
        model: ModelKind::Differential,
        baseline: BaselineParams::default(),
        diff: DiffParams::reference(),
        population: PopulationConfig::new(n, z, beta, false).unwrap(),
        mu,
        steps,
        burn_in: steps / 100,
        seed,
    }
}

#[test]
fn distance_shrinks_as_mutation_becomes_rare() {
    // Small population under strong selection: the mixed-state bias at
    // large μ is visible and 2e8 steps keep the μ = 1e-4 estimate tight.
    let mut l1 = Vec::new();
    for mu in [1e-2, 1e-3, 1e-4] {
        let cfg = diff_config(10, 0, 1.0, mu, 200_000_000, 0);
        let est = simulate(&cfg).unwrap();
        let pi = stationary(&build_diff_chain(&cfg.diff, &cfg.population).unwrap()).unwrap();
        l1.push(compare(&est, &pi, ModelKind::Differential.labels()).unwrap().l1);
    }
    for w in l1.windows(2) {
        assert!(w[1] <= w[0] + 0.03, "{l1:?}");
    }
}

#[test]
fn committed_defenders_never_change() {
    let est = simulate(&diff_config(20, 20, 0.5, 1e-3, 2_000_000, 4)).unwrap();
    assert_eq!(est.fractions[1] + est.fractions[3], 0.0);
    let partial = simulate(&diff_config(20, 5, 0.5, 1e-3, 2_000_000, 4)).unwrap();
    let total: f64 = partial.fractions.iter().sum::<f64>() + partial.residual;
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn replicas_are_reproducible_and_distinct() {
    let cfg = diff_config(20, 2, 0.5, 1e-3, 1_000_000, 8);
    let a = simulate_replicas(&cfg, 3).unwrap();
    let b = simulate_replicas(&cfg, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0], simulate(&cfg).unwrap());
    assert_ne!(a[0], a[1]);
}

#[test]
fn baseline_sets_recover_dominant_state() {
    for p in [
        BaselineParams::attack_and_defend(),
        BaselineParams::attack_no_defence(),
        BaselineParams::no_attack_defend(),
    ] {
        let cfg = SimConfig {
            model: ModelKind::Baseline,
            baseline: p,
            diff: DiffParams::default(),
            population: PopulationConfig::new(20, 0, 1.0, false).unwrap(),
            mu: 1e-3,
            steps: 50_000_000,
            burn_in: 500_000,
            seed: 2,
        };
        let est = simulate(&cfg).unwrap();
        let pi = stationary(&build_baseline_chain(&p, 20, 1.0)).unwrap();
        let best = (0..4).max_by(|&a, &b| est.fractions[a].total_cmp(&est.fractions[b])).unwrap();
        assert_eq!(best, pi.argmax(), "{p:?}: {est:?} vs {pi:?}");
    }
}
