//! The two purification routes: classical advantage distillation on P(A, B, E) and quantum
//! recurrence distillation on ρ_AB, plus the sweep that puts their critical disturbances side
//! by side.

mod advantage;
mod monte_carlo;
mod recurrence;
mod sweep;

use thiserror::Error;

pub use advantage::{
    ad_exact, ad_min_block, AdOutcome, ADVANTAGE_FLOOR, MAX_BLOCK, MAX_EVE_ALPHABET,
};
pub use monte_carlo::{ad_monte_carlo, AdEstimate, McConfig, MIN_TRIALS};
pub use recurrence::{
    isotropic_twirl, recurrence_iterate, recurrence_step, recurrence_step_state, RecurrenceTrace,
};
pub use sweep::{ad_threshold, equivalence_row, equivalence_sweep, linear_grid, EquivalenceRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistillError {
    #[error("block size {0} outside the supported range 1..=64")]
    BlockSize(usize),
    #[error("Eve alphabet of size {0} exceeds 4")]
    Alphabet(usize),
    #[error("{0} trials is below the Monte Carlo minimum of 10000")]
    Trials(u64),
    #[error("no block was accepted; the block size is too large for the trial budget")]
    NoAcceptance,
    #[error("fidelity {0} outside [0, 1]")]
    Fidelity(f64),
    #[error(transparent)]
    Qkd(#[from] crate::qkd::QkdError),
    #[error(transparent)]
    Qcore(#[from] crate::qcore::QcoreError),
}
