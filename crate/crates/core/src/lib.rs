//! Finite-population attacker-defender evolutionary dynamics.
//!
//! Two populations, attackers and defenders, revise strategies by Fermi
//! imitation. In the rare-mutation limit the dynamics reduce to a
//! four-state embedded Markov chain over monomorphic states, whose
//! transition probabilities are single-mutant fixation probabilities.
//!
//! - [`model`]: parameter sets, payoffs and state labels.
//! - [`fixation`]: birth-death rates and fixation probabilities.
//! - [`markov`]: embedded chains, stationary distributions, risk dominance.
//! - [`welfare`]: successful-attack rate and social welfare.
//! - [`experiments`]: sweeps, heatmaps and randomized studies.
//! - [`abm`]: agent-based simulation used as an oracle for the chain.

pub mod abm;
pub mod experiments;
pub mod fixation;
pub mod markov;
pub mod model;
pub mod welfare;

pub use markov::{ModelKind, StationaryDist};
pub use model::{BaselineParams, DiffParams, PopulationConfig};
