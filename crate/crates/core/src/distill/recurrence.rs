//! Two-copy recurrence distillation of Werner-twirled pairs.

use super::DistillError;
use crate::qcore::{partial_trace, BellState, BellWeights, ComplexMatrix, DensityMatrix};

/// Per-round fidelities and success probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTrace {
    pub initial_fidelity: f64,
    /// `(fidelity after the round, success probability of the round)`.
    pub rounds: Vec<(f64, f64)>,
}

impl RecurrenceTrace {
    pub fn final_fidelity(&self) -> f64 {
        self.rounds.last().map_or(self.initial_fidelity, |r| r.0)
    }

    /// Product of the per-round success probabilities.
    pub fn yield_probability(&self) -> f64 {
        self.rounds.iter().map(|r| r.1).product()
    }
}

fn check_fidelity(f: f64) -> Result<(), DistillError> {
    if !(0.0..=1.0).contains(&f) {
        return Err(DistillError::Fidelity(f));
    }
    Ok(())
}

/// One round on two Werner pairs of fidelity `f`: returns `(F', p_success)`.
pub fn recurrence_step(f: f64) -> Result<(f64, f64), DistillError> {
    check_fidelity(f)?;
    let r = (1.0 - f) / 3.0;
    let num = f * f + r * r;
    let den = f * f + 2.0 * f * r + 5.0 * r * r;
    Ok(((num / den).clamp(0.0, 1.0), den))
}

pub fn recurrence_iterate(f0: f64, rounds: usize) -> Result<RecurrenceTrace, DistillError> {
    check_fidelity(f0)?;
    let mut f = f0;
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let (next, p) = recurrence_step(f)?;
        out.push((next, p));
        f = next;
    }
    Ok(RecurrenceTrace {
        initial_fidelity: f0,
        rounds: out,
    })
}

/// Isotropic twirl: keeps ⟨Φ+|ρ|Φ+⟩ and spreads the rest evenly over the other Bell states.
pub fn isotropic_twirl(rho: &DensityMatrix<f64>) -> Result<DensityMatrix<f64>, DistillError> {
    let f = rho.singlet_fidelity()?;
    Ok(BellWeights::isotropic(f.clamp(0.0, 1.0))?.to_density())
}

/// Bilateral CNOT on copies ordered (A1, B1, A2, B2): A1→A2 and B1→B2.
fn bilateral_cnot(rho: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let image = |i: usize| {
        let (a1, b1, a2, b2) = ((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1);
        (a1 << 3) | (b1 << 2) | ((a2 ^ a1) << 1) | (b2 ^ b1)
    };
    let mut out = ComplexMatrix::zeros(16, 16);
    for i in 0..16 {
        for j in 0..16 {
            out.set(image(i), image(j), rho.get(i, j));
        }
    }
    out
}

/// Full two-pair simulation of one round on Bell-diagonal input: explicit twirl, bilateral
/// CNOT, Z measurement of the target pair and post-selection on equal outcomes.
/// Returns the Bell weights of the kept pair and the success probability.
pub fn recurrence_step_state(
    w: &BellWeights<f64>,
) -> Result<(BellWeights<f64>, f64), DistillError> {
    let twirled = isotropic_twirl(&w.to_density())?;
    let pair = twirled.matrix();
    let two = pair.kron(pair);
    let after = bilateral_cnot(&two);
    let keep = ComplexMatrix::from_fn(16, 16, |i, j| {
        let equal = ((i >> 1) & 1) == (i & 1);
        if i == j && equal {
            num_complex::Complex::new(1.0, 0.0)
        } else {
            num_complex::Complex::new(0.0, 0.0)
        }
    });
    let selected = &(&keep * &after) * &keep;
    let reduced = partial_trace(&selected, &[2, 2, 2, 2], &[0, 1])?;
    let p_success = reduced.trace().re;
    let normalized = DensityMatrix::new(reduced.scale_real(1.0 / p_success))?;
    let mut weights = [0.0; 4];
    for (slot, state) in weights.iter_mut().zip(BellState::ALL) {
        *slot = normalized.expectation(&state.state::<f64>().projector());
    }
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|x| *x /= sum);
    Ok((BellWeights::new(weights)?, p_success))
}
