//! Numerical workbench for three classical/quantum correspondences:
//!
//! * key distillation in entanglement-based QKD: classical advantage distillation on the
//!   measured distribution versus quantum entanglement distillation on the shared state,
//!   plus the CHSH-violation / one-way-key link ([`qkd`], [`distill`]);
//! * optimal cloning fidelity and its classical-amplifier counterpart ([`cloning`]);
//! * PMD/PDL telecom elements acting as weak measurements with post-selection, read out
//!   through the mean time of arrival of polarized pulses ([`weakmeas`]).
//!
//! The linear algebra in [`qcore`], the cloning formulas and the weak-measurement closed forms
//! are generic over the scalar type; the aliases below fix the double-precision instances used
//! by the protocol simulations.

// negated comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cloning;
pub mod distill;
pub mod qcore;
pub mod qkd;
pub mod rng;
pub mod scalar;
pub mod weakmeas;

pub use num_complex::Complex;
pub use scalar::Real;

/// Complex double.
pub type C64 = Complex<f64>;
/// Double-precision dense complex matrix.
pub type ComplexMatrix64 = qcore::ComplexMatrix<f64>;
/// Double-precision density matrix.
pub type DensityMatrix64 = qcore::DensityMatrix<f64>;
/// Double-precision pure state.
pub type PureState64 = qcore::PureState<f64>;
/// Double-precision Bell-basis weights.
pub type BellWeights64 = qcore::BellWeights<f64>;
/// Double-precision amplifier setting.
pub type AmplifierSetting64 = cloning::AmplifierSetting<f64>;
/// Double-precision Jones vector.
pub type Jones64 = weakmeas::Jones<f64>;
/// Exact rational scalar for the closed-form cloning identities.
pub type Rational = num_rational::Ratio<i64>;
