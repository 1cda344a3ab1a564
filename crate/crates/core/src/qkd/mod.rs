//! Entanglement-based key distribution under a one-parameter individual attack.
//!
//! Eve attaches a four-dimensional probe to every pair so that the joint state is
//! Ψ = Σ √λ_i |Bell_i⟩|e_i⟩ with λ(D) = ((1−D)², D(1−D), D(1−D), D²). Alice and Bob see a
//! Bell-diagonal ρ_AB with error rate D in both protocol bases; after the basis announcement Eve
//! measures her probe, which yields the classical table P(A, B, E).

mod attack;
mod distribution;
mod helstrom;
mod threshold;

use thiserror::Error;

pub use attack::{
    attack_state, attack_weights, AttackParams, Basis, EveMeasurement, TripartitePureState,
};
pub use distribution::{
    binary_entropy, entropy, mutual_information, mutual_information_table, symbol_distribution,
    SymbolDistribution, VariablePair,
};
pub use helstrom::{helstrom, trace_norm, HelstromResult};
pub use threshold::{one_way_margin, threshold, threshold_margin, ThresholdKind};


#[derive(Debug, Error, Clone, PartialEq)]
pub enum QkdError {
    #[error("disturbance {0} outside [0, 1/2]")]
    Disturbance(f64),
    #[error("prior {0} outside [0, 1]")]
    Prior(f64),
    #[error("unknown Eve measurement '{0}'")]
    UnknownMeasurement(String),
    #[error("invalid symbol distribution: {0}")]
    Table(&'static str),
    #[error("tolerance {0} below the 1e-6 floor")]
    Tolerance(f64),
    #[error("no sign change of the threshold margin on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Qcore(#[from] crate::qcore::QcoreError),
}
