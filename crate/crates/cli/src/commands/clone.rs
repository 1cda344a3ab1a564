use qclink::cloning::{
    birth_process_exact, birth_process_mc, fidelity_classical, fidelity_opt, fit_q,
    poisson_mixture_fidelity, synthetic_dataset, AmplifierSetting, CopyCounts, FidelityDataset,
    SyntheticDesign,
};
use qclink::Rational;

use super::require;
use crate::args::{CloneAmplifier, CloneFidelity, CloneFit, CloneMc, CloneMixture};
use crate::error::{invalid, CliError};
use crate::report::{Report, Table};

/// Largest M for which the exact rational fidelity is reported; its terms stay far from i64 overflow.
const EXACT_RATIONAL_LIMIT: u64 = 1 << 20;

fn counts(n: u64, m: u64) -> Result<CopyCounts, CliError> {
    require(n >= 1, "n", "must be at least 1")?;
    require(m >= n, "m", format!("{m} is below --n {n}"))?;
    Ok(CopyCounts::new(n, m)?)
}

pub fn fidelity(a: &CloneFidelity) -> Result<Report, CliError> {
    let c = counts(a.n, a.m)?;
    let value: f64 = fidelity_opt(c);
    let exact = (a.m <= EXACT_RATIONAL_LIMIT).then(|| fidelity_opt::<Rational>(c).to_string());
    let mut table = Table::new(&["n", "m", "fidelity", "fidelity_exact"]);
    table.push(vec![a.n.into(), a.m.into(), value.into(), exact.clone().into()]);
    let mut report = Report::new(table);
    report.set_float("fidelity", value);
    report.set("fidelity_exact", exact);
    Ok(report)
}

pub fn amplifier(a: &CloneAmplifier) -> Result<Report, CliError> {
    require(a.mu_in > 0.0 && a.mu_in.is_finite(), "mu-in", format!("{} is not a positive intensity", a.mu_in))?;
    require(a.mu_out >= a.mu_in && a.mu_out.is_finite(), "mu-out", format!("{} is below --mu-in", a.mu_out))?;
    require((0.0..=1.0).contains(&a.q), "q", format!("{} outside [0, 1]", a.q))?;
    let f = fidelity_classical(&AmplifierSetting::new(a.mu_in, a.mu_out, a.q)?)?;
    let mut table = Table::new(&["mu_in", "mu_out", "q", "fidelity"]);
    table.push(vec![a.mu_in.into(), a.mu_out.into(), a.q.into(), f.into()]);
    let mut report = Report::new(table);
    report.set_float("fidelity", f);
    Ok(report)
}

pub fn mc(a: &CloneMc) -> Result<Report, CliError> {
    let c = counts(a.n, a.m)?;
    let est = birth_process_mc(c, a.trials, a.common.seed).map_err(|e| invalid("trials", e))?;
    let exact: f64 = birth_process_exact(c);
    let optimal: f64 = fidelity_opt(c);
    let z = if est.std_error > 0.0 { (est.mean - optimal) / est.std_error } else { 0.0 };
    let mut table = Table::new(&["n", "m", "trials", "mean", "std_error", "exact", "optimal", "z_score"]);
    table.push(vec![
        a.n.into(),
        a.m.into(),
        est.trials.into(),
        est.mean.into(),
        est.std_error.into(),
        exact.into(),
        optimal.into(),
        z.into(),
    ]);
    let mut report = Report::new(table);
    report.set_float("mean", est.mean);
    report.set_float("std_error", est.std_error);
    report.set_float("optimal", optimal);
    report.set("within_3_sigma", z.abs() <= 3.0);
    Ok(report)
}

pub fn mixture(a: &CloneMixture) -> Result<Report, CliError> {
    let mix = poisson_mixture_fidelity(a.mu_in, a.gain)?;
    let mu_out = a.gain * a.mu_in;
    let classical = fidelity_classical(&AmplifierSetting::new(a.mu_in, mu_out, 1.0)?)?;
    let mut table = Table::new(&["mu_in", "gain", "mixture_fidelity", "classical_q1", "deviation", "terms"]);
    table.push(vec![
        a.mu_in.into(),
        a.gain.into(),
        mix.value.into(),
        classical.into(),
        mix.deviation.into(),
        mix.terms.into(),
    ]);
    let mut report = Report::new(table);
    report.set_float("mixture_fidelity", mix.value);
    report.set_float("classical_q1", classical);
    report.set_float("deviation", mix.deviation);
    Ok(report)
}

pub fn fit(a: &CloneFit) -> Result<Report, CliError> {
    let mut table = Table::new(&["repetition", "seed", "points", "q", "rss", "degenerate"]);
    let mut report;
    if let Some(path) = &a.input {
        let data = FidelityDataset::read_csv(path)
            .map_err(|e| CliError::Validation(format!("--input {}: {e}", path.display())))?;
        let fit = fit_q(&data).map_err(|e| CliError::Validation(format!("--input {}: {e}", path.display())))?;
        table.push(vec![0u64.into(), Option::<u64>::None.into(), data.len().into(), fit.q.into(), fit.rss.into(), fit.degenerate.into()]);
        report = Report::new(table);
        report.set("input", path.display().to_string());
        report.set_float("q", fit.q);
        report.set_float("rss", fit.rss);
        report.set("degenerate", fit.degenerate);
        return Ok(report);
    }
    require((0.0..=1.0).contains(&a.q_true), "q-true", format!("{} outside [0, 1]", a.q_true))?;
    require(a.gain >= 1.0 && a.gain.is_finite(), "gain", format!("{} is below 1", a.gain))?;
    require(a.noise >= 0.0 && a.noise.is_finite(), "noise", format!("{} is not a non-negative number", a.noise))?;
    require(a.points >= 3, "points", format!("{} is below 3", a.points))?;
    require(a.repetitions >= 1, "repetitions", "must be at least 1")?;
    let design = SyntheticDesign {
        q: a.q_true,
        gain: a.gain,
        noise_sigma: a.noise,
        points: a.points,
        ..SyntheticDesign::default()
    };
    let mut qs = Vec::new();
    for k in 0..a.repetitions {
        let seed = a.common.seed.wrapping_add(k);
        let fit = fit_q(&synthetic_dataset(&design, seed)?)?;
        table.push(vec![k.into(), seed.into(), a.points.into(), fit.q.into(), fit.rss.into(), fit.degenerate.into()]);
        qs.push(fit.q);
    }
    let mean = qs.iter().sum::<f64>() / qs.len() as f64;
    let recovered = qs.iter().filter(|q| (*q - a.q_true).abs() <= 0.02).count();
    report = Report::new(table);
    report.set_float("q_true", a.q_true);
    report.set_float("q_mean", mean);
    report.set("recovered_within_0_02", recovered);
    report.set("repetitions", a.repetitions);
    Ok(report)
}
