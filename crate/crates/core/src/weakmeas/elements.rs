use super::{Jones, JonesMatrix, WeakError};
use crate::Real;

/// Birefringent delay: slow axis (cos θ, sin θ) at +δτ/2, fast axis at −δτ/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmdElement<T> {
    pub delta_tau: T,
    pub axis: T,
}

impl<T: Real> PmdElement<T> {
    pub fn new(delta_tau: T, axis: T) -> Result<Self, WeakError> {
        if !(delta_tau >= T::zero()) || !delta_tau.is_finite() {
            return Err(WeakError::Element("PMD delay must be finite and non-negative"));
        }
        if !axis.is_finite() {
            return Err(WeakError::Element("PMD axis must be finite"));
        }
        Ok(Self { delta_tau, axis })
    }

    pub fn slow_axis(&self) -> Jones<T> {
        Jones::linear(self.axis)
    }

    pub fn fast_axis(&self) -> Jones<T> {
        Jones::linear(self.axis + T::FRAC_PI_2())
    }

    /// Pauli operator along the element's axes: +1 on the slow mode, −1 on the fast mode.
    pub fn sigma(&self) -> JonesMatrix<T> {
        JonesMatrix::in_basis(self.axis, T::one(), -T::one())
    }
}

/// Polarization-dependent loss: the axis (cos θ, sin θ) is transmitted, the orthogonal axis
/// attenuated by `gamma_db`; an infinite loss makes the element a polarizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdlElement<T> {
    pub gamma_db: T,
    pub axis: T,
}

impl<T: Real> PdlElement<T> {
    pub fn new(gamma_db: T, axis: T) -> Result<Self, WeakError> {
        if !(gamma_db >= T::zero()) {
            return Err(WeakError::Element("PDL must be non-negative"));
        }
        if !axis.is_finite() {
            return Err(WeakError::Element("PDL axis must be finite"));
        }
        Ok(Self { gamma_db, axis })
    }

    /// Amplitude transmission of the attenuated axis, 10^(−γ/20).
    pub fn weak_transmission(&self) -> T {
        if self.gamma_db.is_infinite() {
            T::zero()
        } else {
            T::lit(10.0).powf(-self.gamma_db / T::lit(20.0))
        }
    }

    pub fn matrix(&self) -> JonesMatrix<T> {
        if self.gamma_db.is_infinite() {
            return JonesMatrix::projector(&Jones::linear(self.axis));
        }
        JonesMatrix::in_basis(self.axis, T::one(), self.weak_transmission())
    }
}

/// What sits between the PMD element and the detector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PostSelection<T> {
    /// Detector integrates both polarizations.
    #[default]
    None,
    Pdl(PdlElement<T>),
    /// Projection onto a pure polarization state.
    Analyzer(Jones<T>),
}

impl<T: Real> PostSelection<T> {
    /// Post-selection operator K.
    pub fn operator(&self) -> JonesMatrix<T> {
        match self {
            PostSelection::None => JonesMatrix::identity(),
            PostSelection::Pdl(p) => p.matrix(),
            PostSelection::Analyzer(psi) => JonesMatrix::projector(psi),
        }
    }

    /// Π = K†K.
    pub fn effect(&self) -> JonesMatrix<T> {
        let k = self.operator();
        k.adjoint() * k
    }

    pub fn rotated(&self, angle: T) -> Self {
        match self {
            PostSelection::None => PostSelection::None,
            PostSelection::Pdl(p) => PostSelection::Pdl(PdlElement {
                gamma_db: p.gamma_db,
                axis: p.axis + angle,
            }),
            PostSelection::Analyzer(psi) => PostSelection::Analyzer(psi.rotated(angle)),
        }
    }

    pub fn into_element(self) -> Option<OpticalElement<T>> {
        match self {
            PostSelection::None => None,
            PostSelection::Pdl(p) => Some(OpticalElement::Pdl(p)),
            PostSelection::Analyzer(psi) => Some(OpticalElement::Analyzer(psi)),
        }
    }
}

/// One element of a propagation chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalElement<T> {
    Pmd(PmdElement<T>),
    Pdl(PdlElement<T>),
    Analyzer(Jones<T>),
}

impl<T: Real> OpticalElement<T> {
    /// Jones matrix of a lossy element; `None` for PMD, which acts in time.
    pub fn matrix(&self) -> Option<JonesMatrix<T>> {
        match self {
            OpticalElement::Pmd(_) => None,
            OpticalElement::Pdl(p) => Some(p.matrix()),
            OpticalElement::Analyzer(psi) => Some(JonesMatrix::projector(psi)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdl_matrix() {
        let p = PdlElement::new(20.0f64, 0.0).unwrap();
        assert!((p.weak_transmission() - 0.1).abs() < 1e-15);
        let m = p.matrix();
        assert!((m.m[1][1].re - 0.1).abs() < 1e-15 && (m.m[0][0].re - 1.0).abs() < 1e-15);
        let polarizer = PdlElement::new(f64::INFINITY, 0.0).unwrap();
        assert_eq!(polarizer.weak_transmission(), 0.0);
        assert!(polarizer.matrix().apply(&Jones::vertical()).norm_sqr() < 1e-30);
        assert!(PdlElement::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn pmd_axes_are_orthogonal() {
        let pmd = PmdElement::new(1.0f64, 0.37).unwrap();
        assert!(pmd.slow_axis().inner(&pmd.fast_axis()).norm() < 1e-15);
        let s = pmd.sigma();
        assert!((s.expectation(&pmd.slow_axis()).re - 1.0).abs() < 1e-15);
        assert!((s.expectation(&pmd.fast_axis()).re + 1.0).abs() < 1e-15);
        assert!(PmdElement::new(-1.0, 0.0).is_err());
        assert!(PmdElement::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn effect_of_post_selection() {
        let none = PostSelection::<f64>::None.effect();
        assert_eq!(none, JonesMatrix::identity());
        let a = PostSelection::Analyzer(Jones::<f64>::linear(0.2)).effect();
        assert!((a.expectation(&Jones::linear(0.2)).re - 1.0).abs() < 1e-15);
    }
}
