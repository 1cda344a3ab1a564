use qclink::distill::equivalence_sweep;
use qclink::qkd::{threshold, ThresholdKind};

use super::{block_limit, disturbance_grid, require};
use crate::args::{QkdSweep, QkdThresholds};
use crate::error::CliError;
use crate::report::{Report, Table};

pub fn sweep(a: &QkdSweep) -> Result<Report, CliError> {
    let grid = disturbance_grid(a.d_min, a.d_max, a.steps)?;
    block_limit(a.n_max)?;
    let rows = equivalence_sweep(&grid, a.n_max, a.eve.into())?;
    let mut table = Table::new(&[
        "D",
        "i_ab",
        "i_ae",
        "one_way_margin",
        "chsh",
        "min_pt_eigenvalue",
        "entangled",
        "ad_min_block",
    ]);
    for r in &rows {
        table.push(vec![
            r.disturbance.into(),
            r.i_ab.into(),
            r.i_ae.into(),
            (r.i_ab - r.i_ae).into(),
            r.chsh.into(),
            r.min_pt_eigenvalue.into(),
            r.entangled.into(),
            r.ad_min_block.into(),
        ]);
    }
    let mut report = Report::new(table);
    report.set("eve", a.eve.to_possible_value_name());
    report.set("points", rows.len());
    Ok(report)
}

pub fn thresholds(a: &QkdThresholds) -> Result<Report, CliError> {
    require(a.tol >= 1e-6 && a.tol < 0.5, "tol", format!("{} outside [1e-6, 0.5)", a.tol))?;
    let mut table = Table::new(&["kind", "threshold"]);
    let mut report_values = Vec::new();
    for kind in ThresholdKind::ALL {
        let d = threshold(kind, a.eve.into(), a.tol)?;
        table.push(vec![kind.name().into(), d.into()]);
        report_values.push((kind.name(), d));
    }
    let mut report = Report::new(table);
    report.set("eve", a.eve.to_possible_value_name());
    for (name, d) in report_values {
        report.set_float(name, d);
    }
    Ok(report)
}
