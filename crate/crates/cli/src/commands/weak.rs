use qclink::weakmeas::{
    mean_toa_closed, mean_toa_numeric, propagate, toa_transition_sweep, weak_value, OpticalElement,
    PdlElement, PmdElement, PolarizedPulse, PostSelection, TimeGrid,
};
use qclink::Jones64;

use super::require;
use crate::args::{WeakProfile, WeakSetup, WeakSweep, WeakToa};
use crate::error::{invalid, CliError};
use crate::report::{Report, Table};

/// Range of δτ/t_c over which the error-scaling slope is fitted.
const SLOPE_RANGE: (f64, f64) = (1e-3, 1e-1);

struct Setup {
    pre: Jones64,
    post: PostSelection<f64>,
}

fn setup(s: &WeakSetup) -> Result<Setup, CliError> {
    require(s.tc > 0.0 && s.tc.is_finite(), "tc", format!("{} is not a positive width", s.tc))?;
    for (flag, v) in [("theta-pre", s.theta_pre), ("phi-pre", s.phi_pre), ("pmd-axis", s.pmd_axis), ("pdl-axis", s.pdl_axis)] {
        require(v.is_finite(), flag, format!("{v} is not finite"))?;
    }
    require(s.pdl_db >= 0.0, "pdl-db", format!("{} is negative", s.pdl_db))?;
    let post = match s.analyzer_theta {
        Some(theta) => {
            require(theta.is_finite(), "analyzer-theta", format!("{theta} is not finite"))?;
            require(s.analyzer_phi.is_finite(), "analyzer-phi", format!("{} is not finite", s.analyzer_phi))?;
            PostSelection::Analyzer(Jones64::from_angles(theta, s.analyzer_phi))
        }
        None if s.pdl_db == 0.0 => PostSelection::None,
        None => PostSelection::Pdl(PdlElement::new(s.pdl_db, s.pdl_axis).map_err(|e| invalid("pdl-db", e))?),
    };
    Ok(Setup { pre: Jones64::from_angles(s.theta_pre, s.phi_pre), post })
}

fn chain(pmd: PmdElement<f64>, post: PostSelection<f64>) -> Vec<OpticalElement<f64>> {
    std::iter::once(OpticalElement::Pmd(pmd)).chain(post.into_element()).collect()
}

fn pmd(dtau: f64, axis: f64) -> Result<PmdElement<f64>, CliError> {
    require(dtau >= 0.0 && dtau.is_finite(), "dtau", format!("{dtau} is not a non-negative delay"))?;
    PmdElement::new(dtau, axis).map_err(|e| invalid("dtau", e))
}

pub fn toa(a: &WeakToa) -> Result<Report, CliError> {
    let s = &a.setup;
    let Setup { pre, post } = setup(s)?;
    let pmd = pmd(a.dtau, s.pmd_axis)?;
    let pulse = PolarizedPulse::gaussian(s.tc, pre)?;
    let exact = mean_toa_closed(&pulse, &pmd, &post)?;
    let weak = weak_value(&pre, &pmd, &post)?;
    let out = propagate(&pulse, &chain(pmd, post));
    let field = out.sample(&out.default_grid())?;
    let numeric = mean_toa_numeric(&field)?;
    let transmitted = field.energy()? / field.input_energy;
    let mut table = Table::new(&[
        "dtau", "tc", "theta_pre", "phi_pre", "pdl_db", "pdl_axis", "toa_exact", "toa_weak", "abs_error",
    ]);
    table.push(vec![
        a.dtau.into(),
        s.tc.into(),
        s.theta_pre.into(),
        s.phi_pre.into(),
        s.pdl_db.into(),
        s.pdl_axis.into(),
        exact.into(),
        weak.into(),
        (exact - weak).abs().into(),
    ]);
    let mut report = Report::new(table);
    report.set_float("toa_exact", exact);
    report.set_float("toa_weak", weak);
    report.set_float("toa_numeric", numeric);
    report.set_float("transmitted_fraction", transmitted);
    report.set("beyond_eigenvalues", exact.abs() > a.dtau / 2.0);
    Ok(report)
}

fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln();
    (0..steps).map(|k| lo * (ratio * k as f64 / (steps - 1) as f64).exp()).collect()
}

/// Least-squares slope of ln y against ln x.
fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn sweep(a: &WeakSweep) -> Result<Report, CliError> {
    let s = &a.setup;
    let Setup { pre, post } = setup(s)?;
    require(a.ratio_min > 0.0 && a.ratio_min.is_finite(), "ratio-min", format!("{} is not positive", a.ratio_min))?;
    require(a.ratio_max >= a.ratio_min && a.ratio_max.is_finite(), "ratio-max", "must not be below --ratio-min")?;
    require(a.steps >= 1, "steps", "must be at least 1")?;
    let dtaus: Vec<f64> = log_grid(a.ratio_min, a.ratio_max, a.steps).iter().map(|r| r * s.tc).collect();
    let rows = toa_transition_sweep(&pre, s.pmd_axis, &post, &dtaus, s.tc)?;
    let mut table = Table::new(&[
        "ratio", "dtau", "toa_exact", "toa_weak", "abs_error", "scaled_error", "discrimination_error",
    ]);
    for r in &rows {
        table.push(vec![
            r.ratio.into(),
            r.delta_tau.into(),
            r.toa_exact.into(),
            r.toa_weak.into(),
            r.abs_error.into(),
            r.scaled_error.into(),
            r.discrimination_error.into(),
        ]);
    }
    let in_range: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ratio >= SLOPE_RANGE.0 * (1.0 - 1e-12) && r.ratio <= SLOPE_RANGE.1 * (1.0 + 1e-12))
        .map(|r| (r.ratio, r.scaled_error))
        .collect();
    let mut report = Report::new(table);
    report.set("scaled_error_slope", log_slope(&in_range).map(crate::report::float));
    report.set("slope_points", in_range.len());
    Ok(report)
}

pub fn profile(a: &WeakProfile) -> Result<Report, CliError> {
    let s = &a.setup;
    let Setup { pre, post } = setup(s)?;
    let pmd = pmd(a.dtau, s.pmd_axis)?;
    let pulse = PolarizedPulse::gaussian(s.tc, pre)?;
    let out = propagate(&pulse, &chain(pmd, post));
    let default = out.default_grid();
    let grid = match a.step {
        None => default,
        Some(step) => {
            require(step > 0.0 && step.is_finite(), "step", format!("{step} is not positive"))?;
            TimeGrid::symmetric(default.end(), step)
        }
    };
    let field = out.sample(&grid).map_err(|e| invalid("step", e))?;
    let (ix, iy) = (field.intensity_x(), field.intensity_y());
    let mut table = Table::new(&["t", "intensity_x", "intensity_y", "intensity_total"]);
    for (k, t) in grid.times().enumerate() {
        table.push(vec![t.into(), ix[k].into(), iy[k].into(), (ix[k] + iy[k]).into()]);
    }
    let mut report = Report::new(table);
    report.set("points", grid.points);
    report.set_float("step", grid.step);
    report.set_float("transmitted_fraction", field.energy()? / field.input_energy);
    report.set_float("toa_numeric", mean_toa_numeric(&field)?);
    report.set_float("toa_closed", out.mean_toa_closed()?);
    Ok(report)
}
