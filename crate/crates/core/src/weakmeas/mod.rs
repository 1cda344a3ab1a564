//! Polarized pulses through PMD (differential group delay) and PDL (polarization-dependent
//! loss) elements, read out through the mean time of arrival.
//!
//! Time conventions: a PMD element delays its slow axis by +δτ/2 and advances its fast axis by
//! −δτ/2; the input envelope is centered at t = 0.

mod elements;
mod io;
mod jones;
mod pulse;
mod toa;

pub use elements::{OpticalElement, PdlElement, PmdElement, PostSelection};
pub use io::{write_profile_csv, write_summary_csv, ProfileRow, SummaryRow};
pub use jones::{Jones, JonesMatrix};
pub use pulse::{
    mean_toa_numeric, propagate, simpson, Envelope, FieldTerm, OutputField, PolarizedPulse,
    SampledField, TimeGrid,
};
pub use toa::{
    discrimination_error_closed, discrimination_error_numeric, mean_toa_closed,
    toa_transition_sweep, weak_value, TransitionRow,
};

/// Transmitted energy below this fraction of the input energy counts as fully blocked.
pub const BLOCKED_FRACTION: f64 = 1e-20;
/// Post-selection probability at or below which the weak value is reported as divergent.
pub const DIVERGENCE_FLOOR: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum WeakError {
    #[error("invalid pulse: {0}")]
    Pulse(&'static str),
    #[error("invalid element: {0}")]
    Element(&'static str),
    #[error("grid step {step} exceeds t_c/20 = {limit}")]
    UnderResolved { step: f64, limit: f64 },
    #[error("grid [{start}, {end}] does not cover the pulse support [{need_start}, {need_end}]")]
    GridSpan {
        start: f64,
        end: f64,
        need_start: f64,
        need_end: f64,
    },
    #[error("Simpson integration needs an odd number of at least 3 grid points, got {0}")]
    GridPoints(usize),
    #[error("no energy transmitted: post-selection blocks the pulse")]
    ZeroEnergy,
    #[error("post-selection probability {0:e} is in the weak-value divergence regime")]
    Divergent(f64),
    #[error("closed forms need the Gaussian envelope")]
    NotGaussian,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
