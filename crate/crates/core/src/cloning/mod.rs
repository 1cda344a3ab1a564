//! Optimal N→M cloning, its classical-amplifier counterpart and recovery of the amplifier
//! quality parameter from fidelity data.

mod birth;
mod fit;
mod formulas;
mod mixture;

pub use birth::{birth_process_distribution, birth_process_exact, birth_process_mc, McFidelity};
pub use fit::{fit_q, synthetic_dataset, FidelityDataset, FidelityRecord, QFit, SyntheticDesign};
pub use formulas::{fidelity_classical, fidelity_opt, AmplifierSetting, CopyCounts};
pub use mixture::{poisson_mixture_fidelity, PoissonMixture, MAX_MIXTURE_INTENSITY};

#[derive(Debug, thiserror::Error)]
pub enum CloningError {
    #[error("copy counts need M ≥ N ≥ 1, got N = {n}, M = {m}")]
    Counts { n: u64, m: u64 },
    #[error("invalid amplifier setting: {0}")]
    Amplifier(&'static str),
    #[error("input intensity exceeds output intensity")]
    InputExceedsOutput,
    #[error("at least {min} trials required, got {0}", min = crate::cloning::birth::MIN_TRIALS)]
    Trials(u64),
    #[error("mixture needs 0 < μ_in ≤ 50 and gain ≥ 1, got μ_in = {mu_in}, gain = {gain}")]
    Mixture { mu_in: f64, gain: f64 },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("fit needs at least 3 records, got {0}")]
    TooFewRecords(usize),
    #[error("record {index}: {reason}")]
    Record { index: usize, reason: &'static str },
    #[error("dataset i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("dataset csv: {0}")]
    Csv(#[from] csv::Error),
}
