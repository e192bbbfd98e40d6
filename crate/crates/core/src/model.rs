//! Parameter sets, strategy/state enumerations and payoff formulas for the
//! baseline attack/defence game and the differential-access game.
//!
//! Every payoff here is a constant per-capita value: against a monomorphic
//! opponent population the payoff of a strategy does not depend on the
//! composition of the focal population. Committed defenders (zealots) enter
//! only through the population averages of [`avg_payoffs_with_zealots`].

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0} violated")]
    Constraint(&'static str),
    #[error("count out of range: {name} = {value} (allowed 0..={max})")]
    CountOutOfRange {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error("invalid population config: {0}")]
    Population(&'static str),
}

fn require(cond: bool, what: &'static str) -> Result<(), ModelError> {
    if cond {
        Ok(())
    } else {
        Err(ModelError::Constraint(what))
    }
}

/// Baseline game parameters: asset value, attack/defence costs and benefits,
/// and the probability that a defence succeeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineParams {
    pub w: f64,
    pub c_a: f64,
    pub c_d: f64,
    pub b_a: f64,
    pub b_d: f64,
    pub p_d: f64,
}

impl BaselineParams {
    /// Validated constructor.
    pub fn new(w: f64, c_a: f64, c_d: f64, b_a: f64, b_d: f64, p_d: f64) -> Result<Self, ModelError> {
        Self::new_unchecked(w, c_a, c_d, b_a, b_d, p_d).validate()
    }

    /// Builds a parameter set without checking the ordering constraints.
    /// Sweeps use this to cross the valid region on purpose.
    pub const fn new_unchecked(w: f64, c_a: f64, c_d: f64, b_a: f64, b_d: f64, p_d: f64) -> Self {
        Self {
            w,
            c_a,
            c_d,
            b_a,
            b_d,
            p_d,
        }
    }

    /// Set where attack-and-defend dominates under strong selection.
    pub const fn attack_and_defend() -> Self {
        Self::new_unchecked(0.98, 0.41, 0.20, 0.90, 0.79, 0.26)
    }

    /// Set where attack-without-defence dominates.
    pub const fn attack_no_defence() -> Self {
        Self::new_unchecked(0.43, 0.29, 0.34, 0.52, 0.37, 0.09)
    }

    /// Set where no-attack-and-defend dominates.
    pub const fn no_attack_defend() -> Self {
        Self::new_unchecked(0.47, 0.18, 0.41, 0.24, 0.47, 0.54)
    }

    /// Returns `self` unchanged when every constraint holds, otherwise the
    /// first violated inequality.
    pub fn validate(self) -> Result<Self, ModelError> {
        let p = &self;
        let finite = [p.w, p.c_a, p.c_d, p.b_a, p.b_d, p.p_d]
            .iter()
            .all(|v| v.is_finite());
        require(finite, "finite parameters")?;
        require(0.0 < p.w, "0 < w")?;
        require(p.w <= 1.0, "w <= 1")?;
        require(0.0 < p.c_a, "0 < c_a")?;
        require(p.c_a < p.w, "c_a < w")?;
        require(0.0 < p.c_d, "0 < c_d")?;
        require(p.c_d < p.w, "c_d < w")?;
        require(p.c_a < p.b_a, "c_a < b_a")?;
        require(p.c_d < p.b_d, "c_d < b_d")?;
        require(p.b_d <= p.w, "b_d <= w")?;
        require(0.0 < p.p_d, "0 < p_d")?;
        require(p.p_d <= 1.0, "p_d <= 1")?;
        Ok(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Payoff cell for one pairwise encounter.
    pub fn payoffs(&self, defender: DefenderMove, attacker: AttackerMove) -> PayoffPair {
        let p = self;
        let (d, a) = match (defender, attacker) {
            (DefenderMove::NoDefend, AttackerMove::NoAttack) => (0.0, 0.0),
            (DefenderMove::NoDefend, AttackerMove::Attack) => (-p.w, -p.c_a + p.b_a),
            (DefenderMove::Defend, AttackerMove::NoAttack) => (-p.c_d + p.b_d, 0.0),
            (DefenderMove::Defend, AttackerMove::Attack) => (
                -p.c_d + p.p_d * p.b_d - p.w * (1.0 - p.p_d),
                -p.c_a + p.b_a * (1.0 - p.p_d),
            ),
        };
        PayoffPair {
            defender_payoff: d,
            attacker_payoff: a,
        }
    }

    /// `(f_A, f_NA)` when every defender plays `defenders`.
    pub fn attacker_payoffs_against(&self, defenders: DefenderMove) -> (f64, f64) {
        (
            self.payoffs(defenders, AttackerMove::Attack).attacker_payoff,
            self.payoffs(defenders, AttackerMove::NoAttack).attacker_payoff,
        )
    }

    /// `(f_D, f_ND)` when every attacker plays `attackers`.
    pub fn defender_payoffs_against(&self, attackers: AttackerMove) -> (f64, f64) {
        (
            self.payoffs(DefenderMove::Defend, attackers).defender_payoff,
            self.payoffs(DefenderMove::NoDefend, attackers).defender_payoff,
        )
    }

    pub const NAMES: [&'static str; 6] = ["w", "c_a", "c_d", "b_a", "b_d", "p_d"];

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "w" => self.w,
            "c_a" => self.c_a,
            "c_d" => self.c_d,
            "b_a" => self.b_a,
            "b_d" => self.b_d,
            "p_d" => self.p_d,
            _ => return None,
        })
    }

    pub fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "w" => &mut self.w,
            "c_a" => &mut self.c_a,
            "c_d" => &mut self.c_d,
            "b_a" => &mut self.b_a,
            "b_d" => &mut self.b_d,
            "p_d" => &mut self.p_d,
            _ => return None,
        })
    }
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self::attack_and_defend()
    }
}

/// Differential-access parameters. Attack cost and benefit depend on the
/// defence level met; each defence level has its own success probability,
/// benefit, cost and loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffParams {
    pub c_ah: f64,
    pub c_al: f64,
    pub b_ah: f64,
    pub b_al: f64,
    pub p_dh: f64,
    pub p_dl: f64,
    pub benefit_h: f64,
    pub benefit_l: f64,
    pub cost_h: f64,
    pub cost_l: f64,
    pub loss_h: f64,
    pub loss_l: f64,
}

impl DiffParams {
    /// Reference set used throughout the committed-defender experiments.
    pub const fn reference() -> Self {
        Self {
            c_ah: 0.85,
            c_al: 0.10,
            b_ah: 1.90,
            b_al: 1.60,
            p_dh: 0.82,
            p_dl: 0.75,
            benefit_h: 0.75,
            benefit_l: 0.55,
            cost_h: 0.41,
            cost_l: 0.20,
            loss_h: 0.22,
            loss_l: 0.10,
        }
    }

    /// Configuration-facing parameter names, in canonical order.
    pub const NAMES: [&'static str; 12] = [
        "c_aH", "c_aL", "b_aH", "b_aL", "p_dH", "p_dL", "B_H", "B_L", "C_H", "C_L", "W_H", "W_L",
    ];

    pub fn validate(self) -> Result<Self, ModelError> {
        let p = &self;
        require(self.values().iter().all(|v| v.is_finite()), "finite parameters")?;
        require(p.c_al < p.c_ah, "c_aL < c_aH")?;
        require(p.b_al < p.b_ah, "b_aL < b_aH")?;
        require(p.p_dl < p.p_dh, "p_dL < p_dH")?;
        require(p.benefit_l < p.benefit_h, "B_L < B_H")?;
        require(p.cost_l < p.cost_h, "C_L < C_H")?;
        require(p.loss_l < p.loss_h, "W_L < W_H")?;
        require(0.0 < p.p_dl && p.p_dl <= 1.0, "0 < p_dL <= 1")?;
        require(0.0 < p.p_dh && p.p_dh <= 1.0, "0 < p_dH <= 1")?;
        require(0.0 < p.c_al, "0 < c_aL")?;
        require(0.0 < p.b_al, "0 < b_aL")?;
        require(0.0 < p.benefit_l, "0 < B_L")?;
        require(0.0 < p.cost_l, "0 < C_L")?;
        require(0.0 < p.loss_l, "0 < W_L")?;
        Ok(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn values(&self) -> [f64; 12] {
        [
            self.c_ah,
            self.c_al,
            self.b_ah,
            self.b_al,
            self.p_dh,
            self.p_dl,
            self.benefit_h,
            self.benefit_l,
            self.cost_h,
            self.cost_l,
            self.loss_h,
            self.loss_l,
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let idx = Self::NAMES.iter().position(|n| *n == name)?;
        Some(self.values()[idx])
    }

    pub fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "c_aH" => &mut self.c_ah,
            "c_aL" => &mut self.c_al,
            "b_aH" => &mut self.b_ah,
            "b_aL" => &mut self.b_al,
            "p_dH" => &mut self.p_dh,
            "p_dL" => &mut self.p_dl,
            "B_H" => &mut self.benefit_h,
            "B_L" => &mut self.benefit_l,
            "C_H" => &mut self.cost_h,
            "C_L" => &mut self.cost_l,
            "W_H" => &mut self.loss_h,
            "W_L" => &mut self.loss_l,
            _ => return None,
        })
    }

    /// Attacker payoffs against each defence level; not attacking pays 0.
    pub fn attacker_payoffs(&self) -> AttackerPayoffs {
        AttackerPayoffs {
            attack_vs_high: -self.c_ah + self.b_ah * (1.0 - self.p_dh),
            attack_vs_low: -self.c_al + self.b_al * (1.0 - self.p_dl),
            no_attack_vs_high: 0.0,
            no_attack_vs_low: 0.0,
        }
    }

    /// Defender payoffs for each defence level against attack and no attack.
    pub fn defender_payoffs(&self) -> DefenderPayoffs {
        DefenderPayoffs {
            high_vs_attack: self.p_dh * self.benefit_h - self.cost_h - (1.0 - self.p_dh) * self.loss_h,
            low_vs_attack: self.p_dl * self.benefit_l - self.cost_l - (1.0 - self.p_dl) * self.loss_l,
            high_vs_no_attack: self.benefit_h - self.cost_h,
            low_vs_no_attack: self.benefit_l - self.cost_l,
        }
    }
}

impl Default for DiffParams {
    fn default() -> Self {
        Self::reference()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackerPayoffs {
    pub attack_vs_high: f64,
    pub attack_vs_low: f64,
    pub no_attack_vs_high: f64,
    pub no_attack_vs_low: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefenderPayoffs {
    pub high_vs_attack: f64,
    pub low_vs_attack: f64,
    pub high_vs_no_attack: f64,
    pub low_vs_no_attack: f64,
}

/// Population size, committed-defender count, selection intensity and the
/// subsidy switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationConfig {
    pub n: usize,
    pub zealots: usize,
    pub beta: f64,
    pub subsidised: bool,
}

impl PopulationConfig {
    pub fn new(n: usize, zealots: usize, beta: f64, subsidised: bool) -> Result<Self, ModelError> {
        Self {
            n,
            zealots,
            beta,
            subsidised,
        }
        .validate()
    }

    pub fn validate(self) -> Result<Self, ModelError> {
        if self.n < 2 {
            return Err(ModelError::Population("N >= 2"));
        }
        if self.zealots > self.n {
            return Err(ModelError::Population("z <= N"));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(ModelError::Population("beta >= 0 and finite"));
        }
        Ok(self)
    }

    /// Number of defenders that revise their strategy.
    pub fn free_defenders(&self) -> usize {
        self.n - self.zealots
    }

    pub fn zealot_fraction(&self) -> f64 {
        self.zealots as f64 / self.n as f64
    }
}

impl Default for PopulationConfig {
    fn default() -> Self {
        Self {
            n: 100,
            zealots: 0,
            beta: 0.1,
            subsidised: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackerMove {
    Attack,
    NoAttack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefenderMove {
    Defend,
    NoDefend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefenceLevel {
    High,
    Low,
}

/// Monomorphic states of the baseline game, canonical order
/// `(A,D), (NA,D), (A,ND), (NA,ND)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaselineState {
    AttackDefend,
    NoAttackDefend,
    AttackNoDefend,
    NoAttackNoDefend,
}

impl BaselineState {
    pub const ALL: [BaselineState; 4] = [
        BaselineState::AttackDefend,
        BaselineState::NoAttackDefend,
        BaselineState::AttackNoDefend,
        BaselineState::NoAttackNoDefend,
    ];
    pub const LABELS: [&'static str; 4] = ["(A,D)", "(NA,D)", "(A,ND)", "(NA,ND)"];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        Self::LABELS[self.index()]
    }

    pub fn new(attacker: AttackerMove, defender: DefenderMove) -> Self {
        match (attacker, defender) {
            (AttackerMove::Attack, DefenderMove::Defend) => Self::AttackDefend,
            (AttackerMove::NoAttack, DefenderMove::Defend) => Self::NoAttackDefend,
            (AttackerMove::Attack, DefenderMove::NoDefend) => Self::AttackNoDefend,
            (AttackerMove::NoAttack, DefenderMove::NoDefend) => Self::NoAttackNoDefend,
        }
    }

    pub fn attacker(self) -> AttackerMove {
        match self {
            Self::AttackDefend | Self::AttackNoDefend => AttackerMove::Attack,
            _ => AttackerMove::NoAttack,
        }
    }

    pub fn defender(self) -> DefenderMove {
        match self {
            Self::AttackDefend | Self::NoAttackDefend => DefenderMove::Defend,
            _ => DefenderMove::NoDefend,
        }
    }
}

impl fmt::Display for BaselineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Monomorphic states of the differential-access game, canonical order
/// `(A,H), (A,L), (NA,H), (NA,L)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiffState {
    AttackHigh,
    AttackLow,
    NoAttackHigh,
    NoAttackLow,
}

impl DiffState {
    pub const ALL: [DiffState; 4] = [
        DiffState::AttackHigh,
        DiffState::AttackLow,
        DiffState::NoAttackHigh,
        DiffState::NoAttackLow,
    ];
    pub const LABELS: [&'static str; 4] = ["(A,H)", "(A,L)", "(NA,H)", "(NA,L)"];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        Self::LABELS[self.index()]
    }

    pub fn new(attacker: AttackerMove, defence: DefenceLevel) -> Self {
        match (attacker, defence) {
            (AttackerMove::Attack, DefenceLevel::High) => Self::AttackHigh,
            (AttackerMove::Attack, DefenceLevel::Low) => Self::AttackLow,
            (AttackerMove::NoAttack, DefenceLevel::High) => Self::NoAttackHigh,
            (AttackerMove::NoAttack, DefenceLevel::Low) => Self::NoAttackLow,
        }
    }

    pub fn attacker(self) -> AttackerMove {
        match self {
            Self::AttackHigh | Self::AttackLow => AttackerMove::Attack,
            _ => AttackerMove::NoAttack,
        }
    }

    pub fn defence(self) -> DefenceLevel {
        match self {
            Self::AttackHigh | Self::NoAttackHigh => DefenceLevel::High,
            _ => DefenceLevel::Low,
        }
    }
}

impl fmt::Display for DiffState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffPair {
    pub defender_payoff: f64,
    pub attacker_payoff: f64,
}

/// `(f_H^A(z), f_H^NA(z))`: high-defence payoffs raised by `(z/N)·C_H`.
pub fn subsidised_high_payoffs(p: &DiffParams, cfg: &PopulationConfig) -> (f64, f64) {
    let d = p.defender_payoffs();
    let bonus = cfg.zealot_fraction() * p.cost_h;
    (d.high_vs_attack + bonus, d.high_vs_no_attack + bonus)
}

/// Defender payoffs as seen by imitating defenders: subsidy-adjusted for
/// high defence when `cfg.subsidised`, plain otherwise.
pub fn effective_defender_payoffs(p: &DiffParams, cfg: &PopulationConfig) -> DefenderPayoffs {
    let mut d = p.defender_payoffs();
    if cfg.subsidised {
        let (ha, hna) = subsidised_high_payoffs(p, cfg);
        d.high_vs_attack = ha;
        d.high_vs_no_attack = hna;
    }
    d
}

/// Population-average payoffs `(Π_H, Π_L, Π_A, Π_NA)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragePayoffs {
    pub high: f64,
    pub low: f64,
    pub attack: f64,
    pub no_attack: f64,
}

/// Average payoffs with `attackers` attacking agents out of N and
/// `ordinary_high` non-committed defenders playing H (the z zealots always
/// play H on top of these).
pub fn avg_payoffs_with_zealots(
    attackers: usize,
    ordinary_high: usize,
    p: &DiffParams,
    cfg: &PopulationConfig,
) -> Result<AveragePayoffs, ModelError> {
    let n = cfg.n;
    let z = cfg.zealots;
    if attackers > n {
        return Err(ModelError::CountOutOfRange {
            name: "m_A",
            value: attackers,
            max: n,
        });
    }
    if z > n || ordinary_high > n - z {
        return Err(ModelError::CountOutOfRange {
            name: "m_H",
            value: ordinary_high,
            max: n.saturating_sub(z),
        });
    }
    let d = effective_defender_payoffs(p, cfg);
    let a = p.attacker_payoffs();
    // Weights as fractions so a homogeneous population gives its pure
    // payoff exactly.
    let nf = n as f64;
    let x_a = attackers as f64 / nf;
    let x_na = (n - attackers) as f64 / nf;
    let high = x_a * d.high_vs_attack + x_na * d.high_vs_no_attack;
    let low = x_a * d.low_vs_attack + x_na * d.low_vs_no_attack;
    let y_h = (ordinary_high + z) as f64 / nf;
    let y_l = (n - z - ordinary_high) as f64 / nf;
    let attack = y_h * a.attack_vs_high + y_l * a.attack_vs_low;
    Ok(AveragePayoffs {
        high,
        low,
        attack,
        no_attack: 0.0,
    })
}
