//! Embedded four-state Markov chain over monomorphic attacker/defender
//! states in the rare-mutation limit.
//!
//! Only one population changes per transition, so entries between states
//! that differ in both populations are exactly zero. Each allowed
//! off-diagonal entry is `½·ρ` for the corresponding single-mutant fixation;
//! the diagonal takes the remainder of the row.
//!
//! # Graph text format
//!
//! [`export_chain`] writes a Graphviz `digraph`, LF line endings:
//!
//! ```text
//! digraph embedded_chain {
//!   s0 [label="(A,D)\npi=0.865"];
//!   s1 -> s0 [label="rho=4.8431e-02 rd=1"];
//! }
//! ```
//!
//! One node line per state in canonical order, `pi` with 3 decimals. One
//! edge line per ordered pair `i -> j` (ascending `i`, then `j`) whose
//! fixation probability strictly exceeds the reverse direction; `rho` is in
//! scientific notation with 4 decimals and `rd=k` names the risk-dominance
//! row covering the pair, when there is one.

use crate::fixation::{constant_fixation, fixation_high_mutant, fixation_low_mutant, FixationError};
use crate::model::{
    avg_payoffs_with_zealots, effective_defender_payoffs, AttackerMove, BaselineParams, BaselineState,
    DefenceLevel, DiffParams, DiffState, ModelError, PopulationConfig,
};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarkovError {
    #[error("chain is reducible into {} closed classes: {classes:?}", classes.len())]
    Reducible { classes: Vec<Vec<&'static str>> },
    #[error("singular stationary system")]
    Singular,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fixation(#[from] FixationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Baseline,
    Differential,
}

impl ModelKind {
    pub fn labels(self) -> [&'static str; 4] {
        match self {
            ModelKind::Baseline => BaselineState::LABELS,
            ModelKind::Differential => DiffState::LABELS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Baseline => "baseline",
            ModelKind::Differential => "differential",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedChain {
    pub model: ModelKind,
    pub labels: [&'static str; 4],
    /// Row-stochastic transition matrix.
    pub matrix: [[f64; 4]; 4],
    /// `fixation[i][j]` is ρ for the event moving state `i` to state `j`;
    /// zero where the move is not a single-population change.
    pub fixation: [[f64; 4]; 4],
}

impl EmbeddedChain {
    fn from_fixation(model: ModelKind, fixation: [[f64; 4]; 4]) -> Self {
        let mut matrix = [[0.0; 4]; 4];
        for i in 0..4 {
            let mut off = 0.0;
            for j in 0..4 {
                if i != j {
                    matrix[i][j] = 0.5 * fixation[i][j];
                    off += matrix[i][j];
                }
            }
            matrix[i][i] = 1.0 - off;
        }
        Self {
            model,
            labels: model.labels(),
            matrix,
            fixation,
        }
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.matrix[i].iter().sum()
    }

    /// `π·M`.
    pub fn apply(&self, pi: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, p) in pi.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += p * self.matrix[i][j];
            }
        }
        out
    }
}

/// Embedded chain of the baseline game. States flip one population at a
/// time; payoffs are constant so every fixation is the closed product form.
pub fn build_baseline_chain(p: &BaselineParams, n: usize, beta: f64) -> EmbeddedChain {
    let mut fixation = [[0.0; 4]; 4];
    for from in BaselineState::ALL {
        let defender = from.defender();
        let attacker = from.attacker();

        // Attacker population changes, defenders fixed.
        let (f_a, f_na) = p.attacker_payoffs_against(defender);
        let (resident, mutant, flipped) = match attacker {
            AttackerMove::Attack => (f_a, f_na, AttackerMove::NoAttack),
            AttackerMove::NoAttack => (f_na, f_a, AttackerMove::Attack),
        };
        let to = BaselineState::new(flipped, defender);
        fixation[from.index()][to.index()] = constant_fixation(beta, mutant - resident, n).value();

        // Defender population changes, attackers fixed.
        let (f_d, f_nd) = p.defender_payoffs_against(attacker);
        let (resident, mutant, flipped) = match defender {
            crate::model::DefenderMove::Defend => (f_d, f_nd, crate::model::DefenderMove::NoDefend),
            crate::model::DefenderMove::NoDefend => (f_nd, f_d, crate::model::DefenderMove::Defend),
        };
        let to = BaselineState::new(attacker, flipped);
        fixation[from.index()][to.index()] = constant_fixation(beta, mutant - resident, n).value();
    }
    EmbeddedChain::from_fixation(ModelKind::Baseline, fixation)
}

/// Embedded chain of the differential-access game with `cfg.zealots`
/// committed H defenders.
///
/// With `z = N` no defender can revise: the H→L event is impossible and the
/// L macro-states cannot persist, so L→H is taken as certain. This makes
/// the L states transient and the stationary mass sits on H states only.
pub fn build_diff_chain(p: &DiffParams, cfg: &PopulationConfig) -> Result<EmbeddedChain, MarkovError> {
    let cfg = cfg.validate()?;
    let n = cfg.n;
    let z = cfg.zealots;
    let beta = cfg.beta;
    let d = effective_defender_payoffs(p, &cfg);
    let attack_vs_all_high = avg_payoffs_with_zealots(0, n - z, p, &cfg)?.attack;
    let attack_vs_all_low = avg_payoffs_with_zealots(0, 0, p, &cfg)?.attack;

    let defender_rho = |mutant: DefenceLevel, attackers: AttackerMove| -> Result<f64, MarkovError> {
        let delta = match attackers {
            AttackerMove::Attack => d.high_vs_attack - d.low_vs_attack,
            AttackerMove::NoAttack => d.high_vs_no_attack - d.low_vs_no_attack,
        };
        if z == n {
            return Ok(match mutant {
                DefenceLevel::High => 1.0,
                DefenceLevel::Low => 0.0,
            });
        }
        Ok(match mutant {
            DefenceLevel::High => fixation_high_mutant(beta, delta, n, z)?.value(),
            DefenceLevel::Low => fixation_low_mutant(beta, delta, n, z)?.value(),
        })
    };
    let attacker_rho = |mutant: AttackerMove, defence: DefenceLevel| -> f64 {
        let pi_a = match defence {
            DefenceLevel::High => attack_vs_all_high,
            DefenceLevel::Low => attack_vs_all_low,
        };
        let delta = match mutant {
            AttackerMove::Attack => pi_a,
            AttackerMove::NoAttack => -pi_a,
        };
        constant_fixation(beta, delta, n).value()
    };

    let mut fixation = [[0.0; 4]; 4];
    for from in DiffState::ALL {
        let attacker = from.attacker();
        let defence = from.defence();
        let other_defence = match defence {
            DefenceLevel::High => DefenceLevel::Low,
            DefenceLevel::Low => DefenceLevel::High,
        };
        let other_attacker = match attacker {
            AttackerMove::Attack => AttackerMove::NoAttack,
            AttackerMove::NoAttack => AttackerMove::Attack,
        };
        let to = DiffState::new(attacker, other_defence);
        fixation[from.index()][to.index()] = defender_rho(other_defence, attacker)?;
        let to = DiffState::new(other_attacker, defence);
        fixation[from.index()][to.index()] = attacker_rho(other_attacker, defence);
    }
    Ok(EmbeddedChain::from_fixation(ModelKind::Differential, fixation))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryDist {
    pub pi: [f64; 4],
}

impl StationaryDist {
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for i in 1..4 {
            if self.pi[i] > self.pi[best] {
                best = i;
            }
        }
        best
    }

    /// `‖πM − π‖∞`.
    pub fn residual(&self, chain: &EmbeddedChain) -> f64 {
        let next = chain.apply(&self.pi);
        next.iter()
            .zip(self.pi.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.pi.iter().sum()
    }
}

/// Stationary distribution of the chain.
///
/// States outside the unique closed class get exactly zero mass. On the
/// closed class the Grassmann–Taksar–Heyman state reduction is used: it
/// works only with off-diagonal entries and never subtracts, so it stays
/// accurate when fixation probabilities are tiny. More than one closed class
/// is reported as an error.
pub fn stationary(chain: &EmbeddedChain) -> Result<StationaryDist, MarkovError> {
    let classes = closed_classes(chain);
    if classes.len() != 1 {
        return Err(MarkovError::Reducible {
            classes: classes
                .iter()
                .map(|c| c.iter().map(|&i| chain.labels[i]).collect())
                .collect(),
        });
    }
    let class = &classes[0];
    let p: Vec<Vec<f64>> = class
        .iter()
        .map(|&si| class.iter().map(|&sj| if si == sj { 0.0 } else { chain.matrix[si][sj] }).collect())
        .collect();
    let x = gth_solve(&p).ok_or(MarkovError::Singular)?;
    let mut pi = [0.0; 4];
    for (r, &si) in class.iter().enumerate() {
        pi[si] = x[r].clamp(0.0, 1.0);
    }
    Ok(StationaryDist { pi })
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// GTH reduction on an irreducible off-diagonal matrix `p`. Every quantity
/// is non-negative, so the reduction runs on logarithms and cannot overflow.
fn gth_solve(p: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = p.len();
    let mut lp: Vec<Vec<f64>> = p.iter().map(|row| row.iter().map(|v| v.ln()).collect()).collect();
    for m in (1..k).rev() {
        let ls = lp[m][..m].iter().fold(f64::NEG_INFINITY, |acc, &v| log_add(acc, v));
        if ls == f64::NEG_INFINITY {
            return None;
        }
        for row in lp.iter_mut().take(m) {
            row[m] -= ls;
        }
        for i in 0..m {
            let lim = lp[i][m];
            if lim != f64::NEG_INFINITY {
                let (head, tail) = lp.split_at_mut(m);
                let row_m = &tail[0];
                for (j, v) in head[i][..m].iter_mut().enumerate() {
                    if i != j {
                        *v = log_add(*v, lim + row_m[j]);
                    }
                }
            }
        }
    }
    let mut lx = vec![f64::NEG_INFINITY; k];
    lx[0] = 0.0;
    for m in 1..k {
        lx[m] = (0..m).fold(f64::NEG_INFINITY, |acc, i| log_add(acc, lx[i] + lp[i][m]));
    }
    let max = lx.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x: Vec<f64> = lx.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = x.iter().sum();
    Some(x.into_iter().map(|v| v / total).collect())
}

/// Closed communicating classes, each sorted, in order of smallest member.
pub fn closed_classes(chain: &EmbeddedChain) -> Vec<Vec<usize>> {
    let mut reach = [[false; 4]; 4];
    for (i, row) in reach.iter_mut().enumerate() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = i == j || chain.matrix[i][j] > 0.0;
        }
    }
    for m in 0..4 {
        let via = reach[m];
        for row in reach.iter_mut().filter(|row| row[m]) {
            for (r, &v) in row.iter_mut().zip(&via) {
                *r |= v;
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, row) in reach.iter().enumerate() {
        let closed = (0..4).all(|j| !row[j] || reach[j][i]);
        if !closed || classes.iter().any(|c| c.contains(&i)) {
            continue;
        }
        classes.push((0..4).filter(|&j| row[j] && reach[j][i]).collect());
    }
    classes
}

/// One row of a risk-dominance table: the arrow `from → to` is risk
/// dominant when `lhs > rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceCondition {
    pub from: usize,
    pub to: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl DominanceCondition {
    pub fn holds(&self) -> bool {
        self.lhs > self.rhs
    }

    pub fn tie(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn direction(&self) -> Direction {
        if self.tie() {
            Direction::None
        } else if self.holds() {
            Direction::Forward
        } else {
            Direction::Reverse
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskDominance {
    pub rows: [DominanceCondition; 4],
}

impl RiskDominance {
    pub fn flags(&self) -> [bool; 4] {
        self.rows.map(|r| r.holds())
    }

    /// 1-based row covering the unordered pair `{a, b}`.
    pub fn row_for(&self, a: usize, b: usize) -> Option<usize> {
        self.rows
            .iter()
            .position(|r| (r.from == a && r.to == b) || (r.from == b && r.to == a))
            .map(|i| i + 1)
    }
}

pub fn risk_dominance_baseline(p: &BaselineParams) -> RiskDominance {
    use BaselineState::*;
    let row = |from: BaselineState, to: BaselineState, lhs, rhs| DominanceCondition {
        from: from.index(),
        to: to.index(),
        lhs,
        rhs,
    };
    RiskDominance {
        rows: [
            row(AttackDefend, NoAttackDefend, p.c_a, p.b_a * (1.0 - p.p_d)),
            row(AttackNoDefend, NoAttackNoDefend, p.c_a, p.b_a),
            row(AttackDefend, AttackNoDefend, p.c_d, p.p_d * (p.b_d + p.w)),
            row(NoAttackDefend, NoAttackNoDefend, p.c_d, p.b_d),
        ],
    }
}

pub fn risk_dominance_diff(p: &DiffParams) -> RiskDominance {
    use DiffState::*;
    let d = p.defender_payoffs();
    let row = |from: DiffState, to: DiffState, lhs, rhs| DominanceCondition {
        from: from.index(),
        to: to.index(),
        lhs,
        rhs,
    };
    RiskDominance {
        rows: [
            row(AttackHigh, NoAttackHigh, p.c_ah, p.b_ah * (1.0 - p.p_dh)),
            row(AttackLow, NoAttackLow, p.c_al, p.b_al * (1.0 - p.p_dl)),
            row(AttackHigh, AttackLow, d.low_vs_attack, d.high_vs_attack),
            row(NoAttackHigh, NoAttackLow, d.low_vs_no_attack, d.high_vs_no_attack),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairConsistency {
    /// 1-based table row.
    pub row: usize,
    pub from: usize,
    pub to: usize,
    pub condition: Direction,
    pub fixation: Direction,
    pub rho_forward: f64,
    pub rho_reverse: f64,
}

impl PairConsistency {
    pub fn agrees(&self) -> bool {
        self.condition == self.fixation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub pairs: [PairConsistency; 4],
}

impl DominanceReport {
    pub fn all_agree(&self) -> bool {
        self.pairs.iter().all(PairConsistency::agrees)
    }

    pub fn agreement(&self) -> [bool; 4] {
        self.pairs.map(|p| p.agrees())
    }

    /// True when no pair has a strictly larger fixation in either direction.
    pub fn no_dominant_direction(&self) -> bool {
        self.pairs.iter().all(|p| p.fixation == Direction::None)
    }
}

/// Compares each risk-dominance row with the direction of the larger
/// fixation probability between the two states it covers.
pub fn dominance_consistency(chain: &EmbeddedChain, rd: &RiskDominance) -> DominanceReport {
    let pairs = std::array::from_fn(|k| {
        let c = rd.rows[k];
        let fwd = chain.fixation[c.from][c.to];
        let rev = chain.fixation[c.to][c.from];
        let fixation = if fwd > rev {
            Direction::Forward
        } else if rev > fwd {
            Direction::Reverse
        } else {
            Direction::None
        };
        PairConsistency {
            row: k + 1,
            from: c.from,
            to: c.to,
            condition: c.direction(),
            fixation,
            rho_forward: fwd,
            rho_reverse: rev,
        }
    });
    DominanceReport { pairs }
}

/// Deterministic Graphviz text for the chain; see the module docs.
pub fn export_chain(chain: &EmbeddedChain, pi: &StationaryDist, rd: &RiskDominance) -> String {
    let mut out = String::new();
    out.push_str("digraph embedded_chain {\n");
    for i in 0..4 {
        let _ = writeln!(out, "  s{i} [label=\"{}\\npi={:.3}\"];", chain.labels[i], pi.pi[i]);
    }
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let fwd = chain.fixation[i][j];
            let rev = chain.fixation[j][i];
            if fwd > rev {
                let _ = write!(out, "  s{i} -> s{j} [label=\"rho={fwd:.4e}");
                if let Some(r) = rd.row_for(i, j) {
                    let _ = write!(out, " rd={r}");
                }
                out.push_str("\"];\n");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn power_iterate(chain: &EmbeddedChain, steps: usize) -> [f64; 4] {
        let mut pi = [0.25; 4];
        for _ in 0..steps {
            pi = chain.apply(&pi);
        }
        pi
    }

    #[test]
    fn structural_zeros_and_row_sums() {
        let chain = build_baseline_chain(&BaselineParams::attack_and_defend(), 100, 0.1);
        assert_eq!(chain.matrix[0][3], 0.0);
        assert_eq!(chain.matrix[3][0], 0.0);
        assert_eq!(chain.matrix[1][2], 0.0);
        assert_eq!(chain.matrix[2][1], 0.0);
        for i in 0..4 {
            assert!((chain.row_sum(i) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn neutral_chain_is_uniform() {
        let chain = build_baseline_chain(&BaselineParams::attack_and_defend(), 100, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                if i != j && chain.fixation[i][j] > 0.0 {
                    assert_abs_diff_eq!(chain.matrix[i][j], 0.005, epsilon = 1e-15);
                }
            }
        }
        let pi = stationary(&chain).unwrap();
        for p in pi.pi {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn attack_and_defend_set_concentrates_on_ad() {
        let chain = build_baseline_chain(&BaselineParams::attack_and_defend(), 100, 0.1);
        let pi = stationary(&chain).unwrap();
        assert_eq!(pi.argmax(), BaselineState::AttackDefend.index());
        assert!(pi.residual(&chain) < 1e-12);
    }

    #[test]
    fn no_attack_defend_set_prefers_nad() {
        let chain = build_baseline_chain(&BaselineParams::no_attack_defend(), 100, 0.1);
        let pi = stationary(&chain).unwrap();
        assert_eq!(pi.argmax(), BaselineState::NoAttackDefend.index());
    }

    #[test]
    fn uniform_for_doubly_stochastic() {
        let mut fixation = [[0.0; 4]; 4];
        for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 3), (3, 1), (2, 3), (3, 2)] {
            fixation[i][j] = 0.3;
        }
        let chain = EmbeddedChain::from_fixation(ModelKind::Baseline, fixation);
        let pi = stationary(&chain).unwrap();
        for p in pi.pi {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn reducible_chain_is_reported() {
        let mut fixation = [[0.0; 4]; 4];
        fixation[0][1] = 0.2;
        fixation[1][0] = 0.2;
        fixation[2][3] = 0.2;
        fixation[3][2] = 0.1;
        let chain = EmbeddedChain::from_fixation(ModelKind::Baseline, fixation);
        match stationary(&chain) {
            Err(MarkovError::Reducible { classes }) => {
                assert_eq!(classes, vec![vec!["(A,D)", "(NA,D)"], vec!["(A,ND)", "(NA,ND)"]]);
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }

    #[test]
    fn transient_states_get_zero_mass() {
        let mut fixation = [[0.0; 4]; 4];
        fixation[0][1] = 0.2;
        fixation[1][0] = 0.6;
        fixation[2][0] = 0.2;
        fixation[3][1] = 0.5;
        let chain = EmbeddedChain::from_fixation(ModelKind::Baseline, fixation);
        let pi = stationary(&chain).unwrap();
        assert_eq!(pi.pi[2], 0.0);
        assert_eq!(pi.pi[3], 0.0);
        assert_abs_diff_eq!(pi.pi[0], 0.75, epsilon = 1e-15);
    }

    #[test]
    fn diff_chain_reference_set() {
        let p = DiffParams::reference();
        let cfg = PopulationConfig::new(100, 0, 0.1, false).unwrap();
        let chain = build_diff_chain(&p, &cfg).unwrap();
        let pi = stationary(&chain).unwrap();
        assert_eq!(pi.argmax(), DiffState::AttackLow.index());
        let power = power_iterate(&chain, 200_000);
        let l1: f64 = power.iter().zip(pi.pi.iter()).map(|(a, b)| (a - b).abs()).sum();
        assert!(l1 < 1e-8, "l1 = {l1}");

        let cfg = PopulationConfig::new(100, 10, 0.1, true).unwrap();
        let pi = stationary(&build_diff_chain(&p, &cfg).unwrap()).unwrap();
        assert_eq!(pi.argmax(), DiffState::NoAttackHigh.index());
    }

    #[test]
    fn subsidy_flag_is_inert_without_zealots() {
        let p = DiffParams::reference();
        let a = build_diff_chain(&p, &PopulationConfig::new(100, 0, 0.7, false).unwrap()).unwrap();
        let b = build_diff_chain(&p, &PopulationConfig::new(100, 0, 0.7, true).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_commitment_leaves_only_high_states() {
        let p = DiffParams::reference();
        let cfg = PopulationConfig::new(100, 100, 1.0, false).unwrap();
        let chain = build_diff_chain(&p, &cfg).unwrap();
        assert_eq!(chain.fixation[0][1], 0.0);
        assert_eq!(chain.fixation[1][0], 1.0);
        let pi = stationary(&chain).unwrap();
        assert_eq!(pi.pi[1], 0.0);
        assert_eq!(pi.pi[3], 0.0);
    }

    #[test]
    fn risk_dominance_rows() {
        let rd = risk_dominance_baseline(&BaselineParams::attack_and_defend());
        assert!(!rd.rows[0].holds());
        assert_abs_diff_eq!(rd.rows[0].rhs, 0.666, epsilon = 1e-12);
        let rd = risk_dominance_baseline(&BaselineParams::no_attack_defend());
        assert!(!rd.rows[3].holds());

        let mut p = BaselineParams::attack_and_defend();
        p.b_a = 0.3;
        let rd = risk_dominance_baseline(&p);
        assert!(rd.rows[0].holds() && rd.rows[1].holds());

        let rd = risk_dominance_diff(&DiffParams::reference());
        assert!(rd.rows[3].holds());
        assert!(rd.rows[0].holds());
        assert_abs_diff_eq!(rd.rows[0].rhs, 0.342, epsilon = 1e-12);

        let mut p = DiffParams::reference();
        p.cost_l = p.cost_h;
        assert!(!risk_dominance_diff(&p).rows[3].holds());
    }

    #[test]
    fn ties_report_no_direction() {
        let mut p = BaselineParams::attack_and_defend();
        p.c_d = p.b_d;
        let rd = risk_dominance_baseline(&p);
        assert!(rd.rows[3].tie());
        assert!(!rd.rows[3].holds());
        assert_eq!(rd.rows[3].direction(), Direction::None);
    }

    #[test]
    fn consistency_on_reference_sets() {
        let p = BaselineParams::attack_and_defend();
        let chain = build_baseline_chain(&p, 100, 0.1);
        let report = dominance_consistency(&chain, &risk_dominance_baseline(&p));
        assert!(report.all_agree(), "{report:?}");

        let chain = build_baseline_chain(&p, 100, 0.0);
        let report = dominance_consistency(&chain, &risk_dominance_baseline(&p));
        assert!(report.no_dominant_direction());
    }

    #[test]
    fn subsidised_defenders_point_to_high() {
        let p = DiffParams::reference();
        let cfg = PopulationConfig::new(100, 10, 0.1, true).unwrap();
        let chain = build_diff_chain(&p, &cfg).unwrap();
        let report = dominance_consistency(&chain, &risk_dominance_diff(&p));
        // Rows 3 and 4 are the defender pairs, written H -> L.
        assert_eq!(report.pairs[2].fixation, Direction::Reverse);
        assert_eq!(report.pairs[3].fixation, Direction::Reverse);
    }

    #[test]
    fn export_is_deterministic_and_filtered() {
        let p = BaselineParams::attack_and_defend();
        let chain = build_baseline_chain(&p, 100, 0.1);
        let pi = stationary(&chain).unwrap();
        let rd = risk_dominance_baseline(&p);
        let a = export_chain(&chain, &pi, &rd);
        let b = export_chain(&chain, &pi, &rd);
        assert_eq!(a, b);
        assert_eq!(a.lines().filter(|l| l.contains("[label=\"(")).count(), 4);
        let edges = a.lines().filter(|l| l.contains("->")).count();
        assert!(edges <= 8 && edges > 0);
        assert!(a.contains("pi=0.865"));
        assert!(!a.contains('\r'));

        let chain = build_baseline_chain(&p, 100, 0.0);
        let pi = stationary(&chain).unwrap();
        let text = export_chain(&chain, &pi, &rd);
        assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 0);
    }
}
