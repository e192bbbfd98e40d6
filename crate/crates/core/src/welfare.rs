//! Successful-attack rate and social welfare of the differential-access
//! game, evaluated on a stationary distribution.

use crate::markov::StationaryDist;
use crate::model::{effective_defender_payoffs, DiffParams, PopulationConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WelfareError {
    #[error("high-defence cost must be positive, got {0}")]
    NonPositiveCost(f64),
    #[error("budget must be non-negative and finite, got {0}")]
    InvalidBudget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareReport {
    pub sw_total: f64,
    pub sw_defender: f64,
    pub sw_attacker: f64,
    pub pi_succ: f64,
    pub per_state: [f64; 4],
}

/// `π(A,H)(1 − p_dH) + π(A,L)(1 − p_dL)`.
pub fn success_rate(pi: &StationaryDist, p: &DiffParams) -> f64 {
    pi.pi[0] * (1.0 - p.p_dh) + pi.pi[1] * (1.0 - p.p_dl)
}

/// Per-state attacker and defender payoffs, canonical state order.
fn state_payoffs(p: &DiffParams, cfg: Option<&PopulationConfig>) -> ([f64; 4], [f64; 4]) {
    let a = p.attacker_payoffs();
    let d = match cfg {
        Some(cfg) => effective_defender_payoffs(p, cfg),
        None => p.defender_payoffs(),
    };
    (
        [a.attack_vs_high, a.attack_vs_low, a.no_attack_vs_high, a.no_attack_vs_low],
        [d.high_vs_attack, d.low_vs_attack, d.high_vs_no_attack, d.low_vs_no_attack],
    )
}

/// Sum of attacker and defender payoff in each state.
pub fn per_state_welfare(p: &DiffParams) -> [f64; 4] {
    let (att, def) = state_payoffs(p, None);
    std::array::from_fn(|i| att[i] + def[i])
}

/// Stationary-expected welfare. Under subsidy the high-defence payoffs are
/// raised by `(z/N)·C_H`; the cost of the subsidy itself is not booked.
pub fn social_welfare(pi: &StationaryDist, p: &DiffParams, cfg: &PopulationConfig) -> WelfareReport {
    let (att, def) = state_payoffs(p, Some(cfg));
    let per_state: [f64; 4] = std::array::from_fn(|i| att[i] + def[i]);
    let sw_defender: f64 = (0..4).map(|i| pi.pi[i] * def[i]).sum();
    let sw_attacker: f64 = (0..4).map(|i| pi.pi[i] * att[i]).sum();
    WelfareReport {
        sw_total: sw_defender + sw_attacker,
        sw_defender,
        sw_attacker,
        pi_succ: success_rate(pi, p),
        per_state,
    }
}

/// Largest number of committed defenders a budget can subsidise: `⌊G/C_H⌋`.
pub fn max_subsidised(budget: f64, cost_h: f64) -> Result<usize, WelfareError> {
    if !(cost_h.is_finite() && cost_h > 0.0) {
        return Err(WelfareError::NonPositiveCost(cost_h));
    }
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(WelfareError::InvalidBudget(budget));
    }
    let ratio = budget / cost_h;
    // G = k·C_H computed in floating point can land a hair under k.
    let nearest = ratio.round();
    let z = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        ratio.floor()
    };
    Ok(z as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dist(pi: [f64; 4]) -> StationaryDist {
        StationaryDist { pi }
    }

    #[test]
    fn success_rate_cases() {
        let p = DiffParams::reference();
        assert_abs_diff_eq!(success_rate(&dist([1.0, 0.0, 0.0, 0.0]), &p), 0.18, epsilon = 1e-15);
        assert_eq!(success_rate(&dist([0.0, 0.0, 0.5, 0.5]), &p), 0.0);
        assert_abs_diff_eq!(success_rate(&dist([0.2, 0.3, 0.25, 0.25]), &p), 0.111, epsilon = 1e-15);
    }

    #[test]
    fn per_state_values() {
        let p = DiffParams::reference();
        let w = per_state_welfare(&p);
        assert_abs_diff_eq!(w[0], -0.3426, epsilon = 1e-12);
        assert_abs_diff_eq!(w[2], p.benefit_h - p.cost_h, epsilon = 1e-15);
        assert_abs_diff_eq!(w[3], 0.35, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_distribution() {
        let p = DiffParams::reference();
        let cfg = PopulationConfig::default();
        let r = social_welfare(&dist([0.0, 0.0, 0.0, 1.0]), &p, &cfg);
        assert_eq!(r.sw_total, p.benefit_l - p.cost_l);
        assert_eq!(r.sw_attacker, 0.0);
    }

    #[test]
    fn subsidy_flag_off_is_bit_identical() {
        let p = DiffParams::reference();
        let pi = dist([0.1, 0.2, 0.3, 0.4]);
        let plain = PopulationConfig::new(100, 0, 0.1, false).unwrap();
        let flagged = PopulationConfig::new(100, 0, 0.1, true).unwrap();
        assert_eq!(social_welfare(&pi, &p, &plain), social_welfare(&pi, &p, &flagged));
    }

    #[test]
    fn subsidy_raises_defender_welfare_in_high_states() {
        let p = DiffParams::reference();
        let pi = dist([0.0, 0.0, 1.0, 0.0]);
        let plain = PopulationConfig::new(100, 10, 0.1, false).unwrap();
        let sub = PopulationConfig::new(100, 10, 0.1, true).unwrap();
        let gain = social_welfare(&pi, &p, &sub).sw_defender - social_welfare(&pi, &p, &plain).sw_defender;
        assert_abs_diff_eq!(gain, 0.041, epsilon = 1e-12);
    }

    #[test]
    fn budget_threshold() {
        assert_eq!(max_subsidised(4.1, 0.41).unwrap(), 10);
        assert_eq!(max_subsidised(0.0, 0.41).unwrap(), 0);
        assert_eq!(max_subsidised(2.5, 0.41).unwrap(), 6);
        assert!(max_subsidised(1.0, 0.0).is_err());
        assert!(max_subsidised(-1.0, 0.4).is_err());
    }

    proptest! {
        #[test]
        fn additivity_and_bounds(raw in prop::array::uniform4(0.0f64..1.0), z in 0usize..=100, sub: bool) {
            let s: f64 = raw.iter().sum();
            prop_assume!(s > 1e-6);
            let pi = dist(raw.map(|x| x / s));
            let p = DiffParams::reference();
            let cfg = PopulationConfig::new(100, z, 0.1, sub).unwrap();
            let r = social_welfare(&pi, &p, &cfg);
            prop_assert!((r.sw_total - (r.sw_defender + r.sw_attacker)).abs() < 1e-12);
            prop_assert!(r.pi_succ >= 0.0);
            prop_assert!(r.pi_succ <= (1.0 - p.p_dh).max(1.0 - p.p_dl) + 1e-15);
        }
    }
}
