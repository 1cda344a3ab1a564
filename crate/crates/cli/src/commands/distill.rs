use qclink::distill::{
    ad_exact, ad_monte_carlo, ad_threshold, equivalence_sweep, recurrence_iterate, DistillError,
    McConfig, MIN_TRIALS,
};
use qclink::qkd::{symbol_distribution, AttackParams, Basis};

use super::{block_limit, disturbance_grid, require};
use crate::args::{DistillClassical, DistillEquivalence, DistillQuantum};
use crate::error::CliError;
use crate::report::{Cell, Report, Table};

const THRESHOLD_TOL: f64 = 1e-6;

pub fn classical(a: &DistillClassical) -> Result<Report, CliError> {
    require((0.0..=0.5).contains(&a.d), "d", format!("{} outside [0, 0.5]", a.d))?;
    block_limit(a.n_max)?;
    require(
        a.trials == 0 || a.trials >= MIN_TRIALS,
        "trials",
        format!("{} is neither 0 nor at least {MIN_TRIALS}", a.trials),
    )?;
    let table_p = symbol_distribution(&AttackParams::new(a.d, a.eve.into())?, Basis::Z)?;
    let mut columns = vec![
        "N", "p_accept", "eps_post", "i_ab", "i_ae", "h_bob", "h_eve", "advantage", "has_advantage",
    ];
    if a.trials > 0 {
        columns.extend([
            "mc_p_accept",
            "mc_p_accept_se",
            "mc_eps_post",
            "mc_eps_post_se",
            "mc_i_ab",
            "mc_i_ab_se",
            "mc_i_ae",
            "mc_i_ae_se",
            "mc_accepted",
        ]);
    }
    let mut table = Table::new(&columns);
    let mut min_block = None;
    let mut starved = Vec::new();
    for n in 1..=a.n_max {
        let exact = ad_exact(&table_p, n)?;
        if min_block.is_none() && exact.has_advantage() {
            min_block = Some(n);
        }
        let mut row: Vec<Cell> = vec![
            n.into(),
            exact.p_accept.into(),
            exact.eps_post.into(),
            exact.i_ab.into(),
            exact.i_ae.into(),
            exact.h_bob.into(),
            exact.h_eve.into(),
            exact.advantage().into(),
            exact.has_advantage().into(),
        ];
        if a.trials > 0 {
            // one independent stream per block size
            let config = McConfig::new(a.trials, a.common.seed.wrapping_add(n as u64));
            match ad_monte_carlo(&table_p, n, config) {
                Ok(mc) => row.extend([
                    mc.estimate.p_accept.into(),
                    mc.se_p_accept.into(),
                    mc.estimate.eps_post.into(),
                    mc.se_eps_post.into(),
                    mc.estimate.i_ab.into(),
                    mc.se_i_ab.into(),
                    mc.estimate.i_ae.into(),
                    mc.se_i_ae.into(),
                    mc.accepted.into(),
                ]),
                Err(DistillError::NoAcceptance) => {
                    starved.push(n);
                    row.extend(std::iter::repeat_n(Cell::Empty, 8));
                    row.push(0u64.into());
                }
                Err(e) => return Err(e.into()),
            }
        }
        table.push(row);
    }
    let mut report = Report::new(table);
    report.set_float("d", a.d);
    report.set("eve", a.eve.to_possible_value_name());
    report.set("ad_min_block", min_block);
    if a.trials > 0 {
        report.set("mc_blocks_without_acceptance", starved);
    }
    Ok(report)
}

pub fn quantum(a: &DistillQuantum) -> Result<Report, CliError> {
    require((0.0..=1.0).contains(&a.fidelity), "fidelity", format!("{} outside [0, 1]", a.fidelity))?;
    let trace = recurrence_iterate(a.fidelity, a.rounds)?;
    let mut table = Table::new(&["round", "fidelity", "p_success", "yield"]);
    table.push(vec![0usize.into(), a.fidelity.into(), Cell::Empty, 1.0.into()]);
    let mut cumulative = 1.0;
    for (k, &(f, p)) in trace.rounds.iter().enumerate() {
        cumulative *= p;
        table.push(vec![(k + 1).into(), f.into(), p.into(), cumulative.into()]);
    }
    let mut report = Report::new(table);
    report.set_float("final_fidelity", trace.final_fidelity());
    report.set_float("yield", trace.yield_probability());
    report.set("distillable", a.fidelity > 0.5);
    Ok(report)
}

pub fn equivalence(a: &DistillEquivalence) -> Result<Report, CliError> {
    let grid = disturbance_grid(a.d_min, a.d_max, a.steps)?;
    block_limit(a.n_max)?;
    let eve = a.eve.into();
    let rows = equivalence_sweep(&grid, a.n_max, eve)?;
    let mut table = Table::new(&["D", "entangled", "chsh", "i_ab", "i_ae", "ad_min_block"]);
    for r in &rows {
        table.push(vec![
            r.disturbance.into(),
            r.entangled.into(),
            r.chsh.into(),
            r.i_ab.into(),
            r.i_ae.into(),
            r.ad_min_block.into(),
        ]);
    }
    let last_present = rows.iter().rev().find(|r| r.ad_min_block.is_some()).map(|r| r.disturbance);
    let first_absent = rows
        .iter()
        .find(|r| r.ad_min_block.is_none() && last_present.is_none_or(|d| r.disturbance > d))
        .map(|r| r.disturbance);
    let last_entangled = rows.iter().rev().find(|r| r.entangled).map(|r| r.disturbance);
    let mut report = Report::new(table);
    report.set("eve", a.eve.to_possible_value_name());
    report.set("n_max", a.n_max);
    report.set("last_present", last_present);
    report.set("first_absent", first_absent);
    report.set("last_entangled", last_entangled);
    report.set_float("ad_threshold", ad_threshold(eve, a.n_max, THRESHOLD_TOL)?);
    Ok(report)
}
