use super::attack::{attack_state, attack_weights, AttackParams, Basis, EveMeasurement};
use super::distribution::{mutual_information, symbol_distribution, VariablePair};
use super::QkdError;
use crate::qcore::bell_diagonal;

/// Critical disturbance located by [`threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    /// I(A;B) = I(A;E): one-way key extraction stops.
    OneWay,
    /// Maximal CHSH value of ρ_AB equals 2.
    Chsh,
    /// Smallest partial-transpose eigenvalue of ρ_AB crosses 0.
    Entanglement,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 3] =
        [ThresholdKind::OneWay, ThresholdKind::Chsh, ThresholdKind::Entanglement];

    pub fn name(self) -> &'static str {
        match self {
            ThresholdKind::OneWay => "one_way",
            ThresholdKind::Chsh => "chsh",
            ThresholdKind::Entanglement => "entanglement",
        }
    }
}

/// I(A;B) − I(A;E) in the Z basis.
pub fn one_way_margin(params: &AttackParams) -> Result<f64, QkdError> {
    let p = symbol_distribution(params, Basis::Z)?;
    Ok(mutual_information(&p, VariablePair::AliceBob) - mutual_information(&p, VariablePair::AliceEve))
}

/// Quantity whose sign change marks the threshold; positive on the secure side.
pub fn threshold_margin(kind: ThresholdKind, eve: EveMeasurement, d: f64) -> Result<f64, QkdError> {
    match kind {
        ThresholdKind::OneWay => one_way_margin(&AttackParams::new(d, eve)?),
        ThresholdKind::Chsh => {
            let rho = bell_diagonal(&attack_weights(d)?);
            Ok(rho.chsh_max()? - 2.0)
        }
        ThresholdKind::Entanglement => {
            let rho = attack_state(&AttackParams::new(d, eve)?).reduced_ab();
            Ok(-rho.min_pt_eigenvalue()?)
        }
    }
}

/// Bisection on D ∈ [0, 1/2] for the zero of the margin; the result is bracketed within `tol`.
pub fn threshold(kind: ThresholdKind, eve: EveMeasurement, tol: f64) -> Result<f64, QkdError> {
    if !(tol >= 1e-6) {
        return Err(QkdError::Tolerance(tol));
    }
    bisect(|d| threshold_margin(kind, eve, d), 0.0, 0.5, tol)
}

fn bisect(
    mut f: impl FnMut(f64) -> Result<f64, QkdError>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, QkdError> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.signum() == f_hi.signum() || f_lo == 0.0 && f_hi == 0.0 {
        return Err(QkdError::NoBracket { lo, hi });
    }
    let lo_positive = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
