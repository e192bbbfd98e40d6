//! Fermi imitation, birth-death transition rates and fixation probabilities.
//!
//! Fixation sums are accumulated in the log domain: each partial product of
//! `T⁻(j)/T⁺(j)` is kept as a running sum of logs and the final
//! `1 + Σ exp(·)` is evaluated with a max shift, so selection strengths with
//! `|β·Δ·N|` in the thousands neither overflow nor lose the leading terms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixationError {
    #[error("no free defenders: z = {zealots} >= N = {n}")]
    NoFreeDefenders { zealots: usize, n: usize },
    #[error("count {count} outside 0..={max}")]
    CountOutOfRange { count: usize, max: usize },
}

/// Below this `|β·Δ|` the closed form switches to its neutral limit `1/n`.
pub const NEUTRAL_TOLERANCE: f64 = 1e-12;

/// Probability that an agent with payoff `f_self` copies one with payoff
/// `f_target`: `(1 + exp(-β (f_target - f_self)))⁻¹`, saturating cleanly.
pub fn fermi(beta: f64, f_target: f64, f_self: f64) -> f64 {
    logistic(beta * (f_target - f_self))
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRates {
    pub t_plus: f64,
    pub t_minus: f64,
}

impl TransitionRates {
    pub const ZERO: TransitionRates = TransitionRates {
        t_plus: 0.0,
        t_minus: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FixationProb(pub f64);

impl FixationProb {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// One-step rates for `i` focal agents out of `n` with constant payoff
/// advantage `delta` of the focal strategy.
pub fn rates_baseline(i: usize, delta: f64, n: usize, beta: f64) -> TransitionRates {
    if i == 0 || i >= n {
        return TransitionRates::ZERO;
    }
    let nf = n as f64;
    let pre = ((n - i) as f64 / nf) * (i as f64 / nf);
    TransitionRates {
        t_plus: pre * fermi(beta, delta, 0.0),
        t_minus: pre * fermi(beta, -delta, 0.0),
    }
}

/// Rates for the number of ordinary H defenders when `z` committed H
/// defenders also serve as role models. `delta = Π_H − Π_L`.
pub fn rates_defenders_zealots(
    n_h: usize,
    delta: f64,
    n: usize,
    z: usize,
    beta: f64,
) -> Result<TransitionRates, FixationError> {
    if z >= n {
        return Err(FixationError::NoFreeDefenders { zealots: z, n });
    }
    let free = n - z;
    if n_h > free {
        return Err(FixationError::CountOutOfRange {
            count: n_h,
            max: free,
        });
    }
    let nf = n as f64;
    let ff = free as f64;
    let t_plus = ((free - n_h) as f64 / ff) * ((n_h + z) as f64 / nf) * fermi(beta, delta, 0.0);
    let t_minus = (n_h as f64 / ff) * ((free - n_h) as f64 / nf) * fermi(beta, -delta, 0.0);
    Ok(TransitionRates { t_plus, t_minus })
}

/// Rates for the number of attacking agents, `delta = Π_A − Π_NA`.
pub fn rates_attackers(n_a: usize, delta: f64, n: usize, beta: f64) -> TransitionRates {
    rates_baseline(n_a, delta, n, beta)
}

/// `ρ = (1 + Σ_{k=1..steps} Π_{j=1..k} ratio(j))⁻¹` for a ratio function
/// `ratio(j) = T⁻(j)/T⁺(j)`. Ratios must be finite and positive.
pub fn fixation_probability<F>(ratio: F, steps: usize) -> FixationProb
where
    F: Fn(usize) -> f64,
{
    fixation_probability_log(|j| ratio(j).ln(), steps)
}

/// Same as [`fixation_probability`] but takes `ln(T⁻(j)/T⁺(j))` directly,
/// which stays finite where the ratio itself would overflow.
pub fn fixation_probability_log<F>(log_ratio: F, steps: usize) -> FixationProb
where
    F: Fn(usize) -> f64,
{
    if steps == 0 {
        return FixationProb(1.0);
    }
    // Terms of 1 + Σ exp(L_k); the leading 1 is exp(0).
    let mut logs = Vec::with_capacity(steps + 1);
    logs.push(0.0);
    let mut acc = 0.0;
    for j in 1..=steps {
        acc += log_ratio(j);
        logs.push(acc);
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    FixationProb((-(max + sum.ln())).exp())
}

/// Fixation of a single mutant among `n` free agents with constant payoff
/// advantage `delta`: `(1 − e^{−βδ}) / (1 − e^{−nβδ})`.
pub fn closed_form_fixation(beta: f64, delta: f64, n: usize) -> FixationProb {
    let x = beta * delta;
    if n <= 1 {
        return FixationProb(1.0);
    }
    if x.abs() <= NEUTRAL_TOLERANCE {
        return FixationProb(1.0 / n as f64);
    }
    let num = (-x).exp_m1();
    let den = (-(n as f64) * x).exp_m1();
    FixationProb((num / den).clamp(0.0, 1.0))
}

/// Fixation of a single mutant among `n` free agents with constant advantage
/// `delta`, via the product form.
pub fn constant_fixation(beta: f64, delta: f64, n: usize) -> FixationProb {
    let lr = -beta * delta;
    fixation_probability_log(|_| lr, n.saturating_sub(1))
}

/// `ln(T⁻/T⁺)` for ordinary H defenders at count `j` with `z` zealots:
/// `ln(j/(j+z)) − β·delta`.
pub fn zealot_high_log_ratio(j: usize, z: usize, beta: f64, delta: f64) -> f64 {
    (j as f64 / (j + z) as f64).ln() - beta * delta
}

/// `ln(T⁻/T⁺)` for ordinary L defenders at count `j` (in L-count
/// coordinates) with `z` zealots: `ln((N−j)/(N−z−j)) + β·delta`,
/// where `delta = Π_H − Π_L`.
pub fn zealot_low_log_ratio(j: usize, n: usize, z: usize, beta: f64, delta: f64) -> f64 {
    ((n - j) as f64 / (n - z - j) as f64).ln() + beta * delta
}

/// Fixation of one H defender among `N−z−1` free L defenders.
pub fn fixation_high_mutant(beta: f64, delta: f64, n: usize, z: usize) -> Result<FixationProb, FixationError> {
    if z >= n {
        return Err(FixationError::NoFreeDefenders { zealots: z, n });
    }
    Ok(fixation_probability_log(
        |j| zealot_high_log_ratio(j, z, beta, delta),
        n - z - 1,
    ))
}

/// Fixation of one L defender among `N−z−1` free H defenders.
pub fn fixation_low_mutant(beta: f64, delta: f64, n: usize, z: usize) -> Result<FixationProb, FixationError> {
    if z >= n {
        return Err(FixationError::NoFreeDefenders { zealots: z, n });
    }
    Ok(fixation_probability_log(
        |j| zealot_low_log_ratio(j, n, z, beta, delta),
        n - z - 1,
    ))
}
