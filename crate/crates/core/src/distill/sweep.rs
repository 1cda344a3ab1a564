use rayon::prelude::*;

use super::advantage::{ad_min_block, MAX_BLOCK};
use super::DistillError;
use crate::qkd::{
    attack_state, mutual_information, symbol_distribution, AttackParams, Basis, EveMeasurement,
    VariablePair,
};

/// One disturbance value seen through both purification routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceRow {
    pub disturbance: f64,
    pub entangled: bool,
    pub min_pt_eigenvalue: f64,
    pub chsh: f64,
    pub i_ab: f64,
    pub i_ae: f64,
    pub ad_min_block: Option<usize>,
}

pub fn equivalence_row(
    d: f64,
    n_max: usize,
    eve: EveMeasurement,
) -> Result<EquivalenceRow, DistillError> {
    let params = AttackParams::new(d, eve)?;
    let rho = attack_state(&params).reduced_ab();
    let (entangled, min_pt) = rho.is_entangled()?;
    let chsh = rho.chsh_max()?;
    let table = symbol_distribution(&params, Basis::Z)?;
    Ok(EquivalenceRow {
        disturbance: d,
        entangled,
        min_pt_eigenvalue: min_pt,
        chsh,
        i_ab: mutual_information(&table, VariablePair::AliceBob),
        i_ae: mutual_information(&table, VariablePair::AliceEve),
        ad_min_block: ad_min_block(&table, n_max)?,
    })
}

/// Rows in grid order; grid points are evaluated in parallel.
pub fn equivalence_sweep(
    grid: &[f64],
    n_max: usize,
    eve: EveMeasurement,
) -> Result<Vec<EquivalenceRow>, DistillError> {
    if n_max == 0 || n_max > MAX_BLOCK {
        return Err(DistillError::BlockSize(n_max));
    }
    if let Some(&bad) = grid.iter().find(|d| !(0.0..=0.5).contains(*d)) {
        return Err(DistillError::Qkd(crate::qkd::QkdError::Disturbance(bad)));
    }
    grid.par_iter().map(|&d| equivalence_row(d, n_max, eve)).collect()
}

/// `steps` evenly spaced points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Largest disturbance at which some block size ≤ `n_max` still gives an advantage, located by
/// bisection on D ∈ [0, 1/2] to within `tol`.
pub fn ad_threshold(eve: EveMeasurement, n_max: usize, tol: f64) -> Result<f64, DistillError> {
    let present = |d: f64| -> Result<bool, DistillError> {
        let table = symbol_distribution(&AttackParams::new(d, eve)?, Basis::Z)?;
        Ok(ad_min_block(&table, n_max)?.is_some())
    };
    let (mut lo, mut hi) = (0.0, 0.5);
    if !present(lo)? || present(hi)? {
        return Err(DistillError::Qkd(crate::qkd::QkdError::NoBracket { lo, hi }));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if present(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
