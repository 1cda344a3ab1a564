use num_traits::Zero;

use super::QkdError;
use crate::qcore::{
    norm_sqr, partial_trace, BellState, BellWeights, ComplexMatrix, DensityMatrix, PureState,
};
use crate::C64;

/// Measurement Eve applies to her probe once the basis has been announced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EveMeasurement {
    /// Optimal two-outcome guess of Alice's bit.
    #[default]
    HelstromBinary,
    /// Four-outcome square-root measurement on the conditional probes, one outcome per (a, b).
    SquareRoot4,
}

impl EveMeasurement {
    pub fn alphabet(self) -> usize {
        match self {
            EveMeasurement::HelstromBinary => 2,
            EveMeasurement::SquareRoot4 => 4,
        }
    }

    /// Relabeling of Eve's symbol under the simultaneous flip of Alice's and Bob's bits.
    pub fn flip(self, e: usize) -> usize {
        match self {
            EveMeasurement::HelstromBinary => e ^ 1,
            EveMeasurement::SquareRoot4 => e ^ 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EveMeasurement::HelstromBinary => "helstrom_binary",
            EveMeasurement::SquareRoot4 => "square_root_4",
        }
    }
}

impl std::str::FromStr for EveMeasurement {
    type Err = QkdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "helstrom_binary" | "helstrom" | "binary" => Ok(EveMeasurement::HelstromBinary),
            "square_root_4" | "srm" | "square_root" => Ok(EveMeasurement::SquareRoot4),
            other => Err(QkdError::UnknownMeasurement(other.to_string())),
        }
    }
}

/// Disturbance D (the QBER) and Eve's measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParams {
    disturbance: f64,
    eve: EveMeasurement,
}

impl AttackParams {
    pub fn new(disturbance: f64, eve: EveMeasurement) -> Result<Self, QkdError> {
        if !(0.0..=0.5).contains(&disturbance) {
            return Err(QkdError::Disturbance(disturbance));
        }
        Ok(Self { disturbance, eve })
    }

    pub fn disturbance(&self) -> f64 {
        self.disturbance
    }

    pub fn eve(&self) -> EveMeasurement {
        self.eve
    }
}

/// Bell weights λ(D) = ((1−D)², D(1−D), D(1−D), D²) of the attacked pair.
pub fn attack_weights(disturbance: f64) -> Result<BellWeights<f64>, QkdError> {
    if !(0.0..=0.5).contains(&disturbance) {
        return Err(QkdError::Disturbance(disturbance));
    }
    let d = disturbance;
    Ok(BellWeights::new([(1.0 - d).powi(2), d * (1.0 - d), d * (1.0 - d), d * d])?)
}

/// Measurement basis shared by Alice and Bob after sifting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn states(self) -> [PureState<f64>; 2] {
        match self {
            Basis::Z => [PureState::basis(2, 0), PureState::basis(2, 1)],
            Basis::X => [PureState::x_basis(true), PureState::x_basis(false)],
        }
    }
}

pub(crate) const EVE_DIM: usize = 4;

/// Pure state of Alice ⊗ Bob ⊗ Eve on 2 ⊗ 2 ⊗ 4, index `(2a + b)·4 + e`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartitePureState {
    amplitudes: [C64; 16],
}

impl TripartitePureState {
    pub fn new(amplitudes: [C64; 16]) -> Result<Self, QkdError> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(QkdError::Qcore(crate::qcore::QcoreError::NotNormalized(norm)));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64; 16] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// ρ_AB = Tr_E |Ψ⟩⟨Ψ|.
    pub fn reduced_ab(&self) -> DensityMatrix<f64> {
        let full = ComplexMatrix::outer(&self.amplitudes, &self.amplitudes);
        let reduced = partial_trace(&full, &[2, 2, EVE_DIM], &[0, 1]).expect("fixed dimensions");
        DensityMatrix::new(reduced).expect("reduced state of a normalized vector")
    }

    /// Eve's unnormalized conditional probe state for outcomes (a, b) in the given basis; its
    /// squared norm is P(a, b).
    #[allow(clippy::needless_range_loop)]
    pub fn eve_conditional(&self, basis: Basis, a: usize, b: usize) -> [C64; EVE_DIM] {
        let states = basis.states();
        let ua = states[a].amplitudes();
        let vb = states[b].amplitudes();
        let mut out = [C64::zero(); EVE_DIM];
        for i in 0..2 {
            for j in 0..2 {
                let w = ua[i].conj() * vb[j].conj();
                if w.is_zero() {
                    continue;
                }
                for (e, slot) in out.iter_mut().enumerate() {
                    *slot += w * self.amplitudes[(2 * i + j) * EVE_DIM + e];
                }
            }
        }
        out
    }
}

/// Ψ_ABE = Σ_i √λ_i |Bell_i⟩_AB |e_i⟩_E with orthonormal Eve states.
pub fn attack_state(params: &AttackParams) -> TripartitePureState {
    let weights = attack_weights(params.disturbance()).expect("validated params");
    let mut amplitudes = [C64::zero(); 16];
    for (k, state) in BellState::ALL.iter().enumerate() {
        let amp = weights.get(*state).sqrt();
        let bell = state.state::<f64>();
        for (ab, c) in bell.amplitudes().iter().enumerate() {
            amplitudes[ab * EVE_DIM + k] += *c * amp;
        }
    }
    TripartitePureState::new(amplitudes).expect("attack state is normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::bell_diagonal;

    fn qber(state: &TripartitePureState, basis: Basis) -> f64 {
        let rho = state.reduced_ab();
        let s = basis.states();
        let p = rho.outcome_probabilities(&s, &s);
        p[0][1] + p[1][0]
    }

    #[test]
    fn no_attack_is_phi_plus() {
        let psi = attack_state(&AttackParams::new(0.0, EveMeasurement::default()).unwrap());
        let rho = psi.reduced_ab();
        assert!((rho.singlet_fidelity().unwrap() - 1.0).abs() < 1e-14);
        // |00⟩|e₀⟩ and |11⟩|e₀⟩
        assert!(psi.amplitudes()[0].re > 0.7 && psi.amplitudes()[12].re > 0.7);
    }

    #[test]
    fn half_disturbance_is_maximally_mixed() {
        let w = attack_weights(0.5).unwrap().weights();
        assert!(w.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        let rho = attack_state(&AttackParams::new(0.5, EveMeasurement::default()).unwrap()).reduced_ab();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) < 1e-14);
    }

    #[test]
    fn qber_in_both_bases() {
        let psi = attack_state(&AttackParams::new(0.2, EveMeasurement::default()).unwrap());
        assert!((qber(&psi, Basis::Z) - 0.2).abs() < 1e-12);
        assert!((qber(&psi, Basis::X) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn grid_invariants() {
        for k in 0..=100 {
            let d = 0.005 * k as f64;
            let psi = attack_state(&AttackParams::new(d, EveMeasurement::default()).unwrap());
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            let expected = bell_diagonal(&attack_weights(d).unwrap());
            assert!(psi.reduced_ab().matrix().max_abs_diff(expected.matrix()) < 1e-10);
        }
    }

    #[test]
    fn conditional_norms_are_joint_probabilities() {
        let psi = attack_state(&AttackParams::new(0.3, EveMeasurement::default()).unwrap());
        for basis in [Basis::Z, Basis::X] {
            let p00 = norm_sqr(&psi.eve_conditional(basis, 0, 0));
            let p01 = norm_sqr(&psi.eve_conditional(basis, 0, 1));
            assert!((p00 - 0.35).abs() < 1e-12);
            assert!((p01 - 0.15).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_disturbance() {
        assert!(AttackParams::new(0.6, EveMeasurement::default()).is_err());
        assert!(AttackParams::new(-0.1, EveMeasurement::default()).is_err());
        assert!("nope".parse::<EveMeasurement>().is_err());
    }
}
