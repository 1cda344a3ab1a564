mod clone;
mod distill;
mod qkd;
mod weak;

use serde::Serialize;
use serde_json::Value;

use crate::args::{CloneCommand, Command, Common, DistillCommand, EveArg, QkdCommand, WeakCommand};
use crate::error::{invalid, CliError};
use crate::report::Report;
use qclink::qkd::EveMeasurement;

/// A parsed command ready to run.
pub struct Job<'a> {
    /// File stem and report label, e.g. `qkd-sweep`.
    pub name: &'static str,
    pub common: &'a Common,
    pub config: Value,
    run: Box<dyn FnOnce() -> Result<Report, CliError> + 'a>,
}

impl Job<'_> {
    pub fn run(self) -> Result<Report, CliError> {
        (self.run)()
    }
}

fn job<'a, A: Serialize>(
    name: &'static str,
    args: &'a A,
    common: &'a Common,
    run: impl FnOnce(&'a A) -> Result<Report, CliError> + 'a,
) -> Job<'a> {
    let config = serde_json::to_value(args).unwrap_or(Value::Null);
    Job { name, common, config, run: Box::new(move || run(args)) }
}

pub fn dispatch(command: &Command) -> Job<'_> {
    match command {
        Command::Qkd(QkdCommand::Sweep(a)) => job("qkd-sweep", a, &a.common, qkd::sweep),
        Command::Qkd(QkdCommand::Thresholds(a)) => job("qkd-thresholds", a, &a.common, qkd::thresholds),
        Command::Distill(DistillCommand::Classical(a)) => {
            job("distill-classical", a, &a.common, distill::classical)
        }
        Command::Distill(DistillCommand::Quantum(a)) => job("distill-quantum", a, &a.common, distill::quantum),
        Command::Distill(DistillCommand::Equivalence(a)) => {
            job("distill-equivalence", a, &a.common, distill::equivalence)
        }
        Command::Clone(CloneCommand::Fidelity(a)) => job("clone-fidelity", a, &a.common, clone::fidelity),
        Command::Clone(CloneCommand::Amplifier(a)) => job("clone-amplifier", a, &a.common, clone::amplifier),
        Command::Clone(CloneCommand::Mc(a)) => job("clone-mc", a, &a.common, clone::mc),
        Command::Clone(CloneCommand::Mixture(a)) => job("clone-mixture", a, &a.common, clone::mixture),
        Command::Clone(CloneCommand::Fit(a)) => job("clone-fit", a, &a.common, clone::fit),
        Command::Weak(WeakCommand::Toa(a)) => job("weak-toa", a, &a.common, weak::toa),
        Command::Weak(WeakCommand::Sweep(a)) => job("weak-sweep", a, &a.common, weak::sweep),
        Command::Weak(WeakCommand::Profile(a)) => job("weak-profile", a, &a.common, weak::profile),
    }
}

impl From<EveArg> for EveMeasurement {
    fn from(e: EveArg) -> Self {
        match e {
            EveArg::HelstromBinary => EveMeasurement::HelstromBinary,
            EveArg::SquareRoot4 => EveMeasurement::SquareRoot4,
        }
    }
}

fn require(ok: bool, flag: &str, msg: impl std::fmt::Display) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(invalid(flag, msg))
    }
}

/// `[lo, hi]` with `steps` points inside the disturbance domain.
fn disturbance_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    require((0.0..=0.5).contains(&lo), "d-min", format!("{lo} outside [0, 0.5]"))?;
    require((0.0..=0.5).contains(&hi), "d-max", format!("{hi} outside [0, 0.5]"))?;
    require(hi >= lo, "d-max", "must not be below --d-min")?;
    require(steps >= 1, "steps", "must be at least 1")?;
    Ok(qclink::distill::linear_grid(lo, hi, steps))
}

fn block_limit(n_max: usize) -> Result<(), CliError> {
    require(
        (1..=qclink::distill::MAX_BLOCK).contains(&n_max),
        "n-max",
        format!("{n_max} outside 1..={}", qclink::distill::MAX_BLOCK),
    )
}
