use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

#[derive(Debug, Parser)]
#[command(name = "qclink", version, about = "Classical/quantum correspondence workbench")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Seed for every random stream; runs are reproducible by default.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, env = "QCLINK_OUT_DIR", default_value = ".")]
    pub outdir: PathBuf,
    /// Output formats.
    #[arg(long, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,
    /// Flat JSON object of flag values; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Key distribution under the individual attack.
    #[command(subcommand)]
    Qkd(QkdCommand),
    /// Classical and quantum distillation.
    #[command(subcommand)]
    Distill(DistillCommand),
    /// Cloning and amplifier fidelities.
    #[command(subcommand)]
    Clone(CloneCommand),
    /// Weak measurements with PMD and PDL.
    #[command(subcommand)]
    Weak(WeakCommand),
}

#[derive(Debug, Subcommand)]
pub enum QkdCommand {
    /// Information and entanglement diagnostics over a disturbance grid.
    Sweep(QkdSweep),
    /// One-way, CHSH and entanglement thresholds.
    Thresholds(QkdThresholds),
}

#[derive(Debug, Subcommand)]
pub enum DistillCommand {
    /// Repetition-code advantage distillation at one disturbance.
    Classical(DistillClassical),
    /// Recurrence entanglement distillation.
    Quantum(DistillQuantum),
    /// Both purification routes over a disturbance grid.
    Equivalence(DistillEquivalence),
}

#[derive(Debug, Subcommand)]
pub enum CloneCommand {
    /// Optimal N→M cloning fidelity.
    Fidelity(CloneFidelity),
    /// Amplifier fidelity for mean intensities.
    Amplifier(CloneAmplifier),
    /// Birth-process Monte Carlo.
    Mc(CloneMc),
    /// Photon-number mixture of optimal fidelities.
    Mixture(CloneMixture),
    /// Least-squares fit of the amplifier quality.
    Fit(CloneFit),
}

#[derive(Debug, Subcommand)]
pub enum WeakCommand {
    /// Mean arrival time: closed form, numerical and weak-value prediction.
    Toa(WeakToa),
    /// Weak-to-strong transition over a delay grid.
    Sweep(WeakSweep),
    /// Sampled output intensity profile.
    Profile(WeakProfile),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EveArg {
    #[value(name = "helstrom_binary")]
    #[serde(rename = "helstrom_binary")]
    HelstromBinary,
    #[value(name = "square_root_4")]
    #[serde(rename = "square_root_4")]
    SquareRoot4,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QkdSweep {
    /// Smallest disturbance (QBER).
    #[arg(long, default_value_t = 0.0)]
    pub d_min: f64,
    /// Largest disturbance (QBER).
    #[arg(long, default_value_t = 0.4)]
    pub d_max: f64,
    #[arg(long, default_value_t = 81)]
    pub steps: usize,
    /// Largest advantage-distillation block.
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = EveArg::HelstromBinary)]
    pub eve: EveArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QkdThresholds {
    #[arg(long, value_enum, default_value_t = EveArg::HelstromBinary)]
    pub eve: EveArg,
    /// Bisection tolerance, at least 1e-6.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistillClassical {
    /// Disturbance (QBER).
    #[arg(long, default_value_t = 0.2)]
    pub d: f64,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = EveArg::HelstromBinary)]
    pub eve: EveArg,
    /// Monte Carlo trials per block size; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistillQuantum {
    /// Initial singlet fidelity.
    #[arg(long, default_value_t = 0.7)]
    pub fidelity: f64,
    #[arg(long, default_value_t = 10)]
    pub rounds: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistillEquivalence {
    #[arg(long, default_value_t = 0.2)]
    pub d_min: f64,
    #[arg(long, default_value_t = 0.36)]
    pub d_max: f64,
    #[arg(long, default_value_t = 33)]
    pub steps: usize,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = EveArg::HelstromBinary)]
    pub eve: EveArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CloneFidelity {
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub m: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CloneAmplifier {
    #[arg(long, default_value_t = 1.0)]
    pub mu_in: f64,
    #[arg(long, default_value_t = 10.0)]
    pub mu_out: f64,
    #[arg(long, default_value_t = 0.8)]
    pub q: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CloneMc {
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub m: u64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CloneMixture {
    #[arg(long, default_value_t = 5.0)]
    pub mu_in: f64,
    #[arg(long, default_value_t = 10.0)]
    pub gain: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CloneFit {
    /// CSV with header `mu_in,mu_out,fidelity`; without it, synthetic data are generated.
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    /// Quality used for synthetic data.
    #[arg(long, default_value_t = 0.8)]
    pub q_true: f64,
    /// Output-to-input intensity ratio of the synthetic amplifier.
    #[arg(long, default_value_t = 10.0)]
    pub gain: f64,
    /// Standard deviation of the Gaussian noise added to each fidelity.
    #[arg(long, default_value_t = 0.005)]
    pub noise: f64,
    /// Log-spaced input intensities on [0.5, 50].
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Synthetic repetitions, seeded `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    pub repetitions: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Pre-selected pulse, PMD element and post-selection stage.
#[derive(Debug, Clone, Args, Serialize)]
pub struct WeakSetup {
    /// Pulse width t_c.
    #[arg(long, default_value_t = 1.0)]
    pub tc: f64,
    /// Pre-selected polarization angle from H (rad).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    pub theta_pre: f64,
    /// Relative phase of the V component (rad).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi_pre: f64,
    /// PMD slow-axis angle (rad).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub pmd_axis: f64,
    /// PDL in dB; `inf` for a polarizer.
    #[arg(long, default_value_t = 0.0)]
    #[serde(serialize_with = "float_or_text")]
    pub pdl_db: f64,
    /// Transmitting PDL axis (rad).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub pdl_axis: f64,
    /// Pure analyzer angle (rad); replaces the PDL stage when given.
    #[arg(long, allow_hyphen_values = true)]
    pub analyzer_theta: Option<f64>,
    /// Relative phase of the analyzer's V component (rad).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub analyzer_phi: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeakToa {
    /// Differential group delay δτ.
    #[arg(long, default_value_t = 0.01)]
    pub dtau: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub setup: WeakSetup,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeakSweep {
    #[arg(long, default_value_t = 1e-3)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub ratio_max: f64,
    /// Log-spaced δτ/t_c points.
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub setup: WeakSetup,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeakProfile {
    /// Differential group delay δτ.
    #[arg(long, default_value_t = 2.0)]
    pub dtau: f64,
    /// Grid step; defaults to t_c/100.
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub setup: WeakSetup,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

impl EveArg {
    pub fn to_possible_value_name(self) -> String {
        self.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string())
    }
}

/// JSON has no infinities; they are echoed as text.
fn float_or_text<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&x.to_string())
    }
}
