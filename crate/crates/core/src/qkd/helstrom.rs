use super::QkdError;
use crate::qcore::{eig_hermitian, ComplexMatrix, DensityMatrix};

/// Optimal two-outcome discrimination of two states.
#[derive(Debug, Clone)]
pub struct HelstromResult {
    pub success_probability: f64,
    /// Π₀ (guess "0") and Π₁ = I − Π₀.
    pub povm: [ComplexMatrix<f64>; 2],
}

/// Helstrom measurement for ρ₀ (prior `prior0`) against ρ₁.
///
/// Π₀ projects onto the positive part of prior0·ρ₀ − prior1·ρ₁. The null space is shared evenly
/// between the two outcomes, which leaves the success probability unchanged and keeps the
/// POVM symmetric under exchange of the hypotheses.
pub fn helstrom(
    rho0: &DensityMatrix<f64>,
    rho1: &DensityMatrix<f64>,
    prior0: f64,
) -> Result<HelstromResult, QkdError> {
    if !(0.0..=1.0).contains(&prior0) {
        return Err(QkdError::Prior(prior0));
    }
    if rho0.dim() != rho1.dim() {
        return Err(QkdError::Qcore(crate::qcore::QcoreError::Dimension {
            expected: rho0.dim(),
            found: rho1.dim(),
        }));
    }
    helstrom_operators(rho0.matrix(), rho1.matrix(), prior0, 1.0 - prior0)
}

/// Helstrom measurement on weighted (possibly unnormalized) operators `w0·a − w1·b`.
pub(crate) fn helstrom_operators(
    a: &ComplexMatrix<f64>,
    b: &ComplexMatrix<f64>,
    w0: f64,
    w1: f64,
) -> Result<HelstromResult, QkdError> {
    let delta = &a.scale_real(w0) - &b.scale_real(w1);
    let eig = eig_hermitian(&delta)?;
    let scale = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let tol = 1e-12 * scale.max(1.0);
    let pi0 = eig.reconstruct_with(|lambda| {
        if lambda > tol {
            1.0
        } else if lambda.abs() <= tol {
            0.5
        } else {
            0.0
        }
    });
    let n = a.rows();
    let pi1 = &ComplexMatrix::identity(n) - &pi0;
    let success = w0 * (&pi0 * a).trace().re + w1 * (&pi1 * b).trace().re;
    Ok(HelstromResult {
        success_probability: success,
        povm: [pi0, pi1],
    })
}

/// ‖A‖₁ for a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix<f64>) -> Result<f64, QkdError> {
    Ok(eig_hermitian(m)?.values.iter().map(|v| v.abs()).sum())
}
