use rayon::prelude::*;
use statrs::function::erf::erfc;

use super::{
    propagate, simpson, Jones, OpticalElement, PmdElement, PolarizedPulse, PostSelection,
    TimeGrid, WeakError, BLOCKED_FRACTION, DIVERGENCE_FLOOR,
};
use crate::Real;

/// Mean arrival time after one PMD element and a post-selection stage, Gaussian envelope:
/// with a = K c_s ê_s and b = K c_f ê_f,
/// ⟨t⟩ = (δτ/2)(‖a‖² − ‖b‖²) / (‖a‖² + ‖b‖² + 2 e^{−δτ²/4t_c²} Re⟨a,b⟩).
pub fn mean_toa_closed<T: Real>(
    pulse: &PolarizedPulse<T>,
    pmd: &PmdElement<T>,
    post: &PostSelection<T>,
) -> Result<T, WeakError> {
    if !pulse.is_gaussian() {
        return Err(WeakError::NotGaussian);
    }
    let c = pulse.jones();
    let (slow, fast) = (pmd.slow_axis(), pmd.fast_axis());
    let k = post.operator();
    let a = k.apply(&slow.scale(slow.inner(c)));
    let b = k.apply(&fast.scale(fast.inner(c)));
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    let tc = pulse.t_c();
    let overlap = (-(pmd.delta_tau * pmd.delta_tau) / (T::lit(4.0) * tc * tc)).exp();
    let den = na + nb + T::lit(2.0) * overlap * a.inner(&b).re;
    if !(den > T::lit(BLOCKED_FRACTION) * c.norm_sqr()) {
        return Err(WeakError::ZeroEnergy);
    }
    Ok(pmd.delta_tau / T::lit(2.0) * (na - nb) / den)
}

/// Weak-coupling prediction (δτ/2) Re⟨ψ|Π σ|ψ⟩ / ⟨ψ|Π|ψ⟩ with σ the PMD-axis Pauli operator
/// and Π = K†K the post-selection effect.
pub fn weak_value<T: Real>(
    pre: &Jones<T>,
    pmd: &PmdElement<T>,
    post: &PostSelection<T>,
) -> Result<T, WeakError> {
    let psi = pre.normalized().ok_or(WeakError::Pulse("pre-selected state is zero"))?;
    let effect = post.effect();
    let p = effect.expectation(&psi).re;
    if !(p > T::lit(DIVERGENCE_FLOOR)) {
        return Err(WeakError::Divergent(p.to_f64().unwrap_or(f64::NAN)));
    }
    let num = psi.inner(&(effect * pmd.sigma()).apply(&psi)).re;
    Ok(pmd.delta_tau / T::lit(2.0) * num / p)
}

/// One point of the weak-to-strong transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRow<T> {
    pub delta_tau: T,
    pub t_c: T,
    /// δτ / t_c.
    pub ratio: T,
    pub toa_exact: T,
    pub toa_weak: T,
    pub abs_error: T,
    /// |exact − weak| in units of the eigenvalue spacing δτ/2.
    pub scaled_error: T,
    /// Probability that the sign of the arrival time misassigns an eigenmode.
    pub discrimination_error: f64,
}

/// Exact and weak predictions over a grid of delays at fixed pulse width.
pub fn toa_transition_sweep<T: Real>(
    pre: &Jones<T>,
    pmd_axis: T,
    post: &PostSelection<T>,
    delta_tau_grid: &[T],
    t_c: T,
) -> Result<Vec<TransitionRow<T>>, WeakError> {
    let pulse = PolarizedPulse::gaussian(t_c, *pre)?;
    delta_tau_grid
        .par_iter()
        .map(|&delta_tau| {
            let pmd = PmdElement::new(delta_tau, pmd_axis)?;
            let toa_exact = mean_toa_closed(&pulse, &pmd, post)?;
            let toa_weak = weak_value(pulse.jones(), &pmd, post)?;
            let abs_error = (toa_exact - toa_weak).abs();
            let half = delta_tau / T::lit(2.0);
            let ratio = delta_tau / t_c;
            Ok(TransitionRow {
                delta_tau,
                t_c,
                ratio,
                toa_exact,
                toa_weak,
                abs_error,
                scaled_error: if half > T::zero() { abs_error / half } else { T::zero() },
                discrimination_error: discrimination_error_closed(ratio.to_f64().unwrap_or(f64::NAN), 1.0),
            })
        })
        .collect()
}

/// ½ erfc(δτ / (2 t_c)): weight of an eigenmode's intensity exp(−(t ∓ δτ/2)²/t_c²) on the wrong
/// side of t = 0.
pub fn discrimination_error_closed(delta_tau: f64, t_c: f64) -> f64 {
    0.5 * erfc(delta_tau / (2.0 * t_c))
}

/// Same quantity from a sampled H eigenmode: Simpson over t ≤ 0 divided by the total.
pub fn discrimination_error_numeric(delta_tau: f64, t_c: f64) -> Result<f64, WeakError> {
    let pulse = PolarizedPulse::gaussian(t_c, Jones::horizontal())?;
    let out = propagate(&pulse, &[OpticalElement::Pmd(PmdElement::new(delta_tau, 0.0)?)]);
    let mut grid = out.default_grid();
    // an even half-width keeps the t ≤ 0 half at an odd sample count
    let half = (grid.points - 1) / 2;
    if half % 2 == 1 {
        grid = TimeGrid::symmetric(grid.step * (half + 1) as f64, grid.step);
    }
    let field = out.sample(&grid)?;
    let intensity = field.intensity();
    let total = simpson(&intensity, grid.step)?;
    let left = simpson(&intensity[..=(grid.points - 1) / 2], grid.step)?;
    Ok(left / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weakmeas::{mean_toa_numeric, PdlElement};
    use std::f64::consts::FRAC_PI_4;

    fn pulse(theta: f64, phi: f64) -> PolarizedPulse<f64> {
        PolarizedPulse::gaussian(1.0, Jones::from_angles(theta, phi)).unwrap()
    }

    #[test]
    fn eigenmode_and_no_delay() {
        let pmd = PmdElement::new(0.7, 0.0).unwrap();
        let toa = mean_toa_closed(&pulse(0.0, 0.0), &pmd, &PostSelection::None).unwrap();
        assert!((toa - 0.35).abs() < 1e-15);
        let none = PmdElement::new(0.0, 0.3).unwrap();
        assert_eq!(mean_toa_closed(&pulse(0.4, 0.9), &none, &PostSelection::None).unwrap(), 0.0);
    }

    #[test]
    fn aligned_pdl_has_no_cross_term() {
        let post = PostSelection::Pdl(PdlElement::new(6.0, 0.0).unwrap());
        let p = pulse(0.6, 0.2);
        let t = 10f64.powf(-6.0 / 20.0);
        let (na, nb) = (0.6f64.cos().powi(2), (0.6f64.sin() * t).powi(2));
        for dtau in [1e-3, 0.5, 3.0] {
            let pmd = PmdElement::new(dtau, 0.0).unwrap();
            let toa = mean_toa_closed(&p, &pmd, &post).unwrap();
            assert!((toa - dtau / 2.0 * (na - nb) / (na + nb)).abs() < 1e-14 * dtau);
        }
    }

    #[test]
    fn closed_form_matches_term_sum_and_samples() {
        let p = pulse(0.9, -0.7);
        let pmd = PmdElement::new(0.8, 0.25).unwrap();
        let post = PostSelection::Pdl(PdlElement::new(9.0, 1.1).unwrap());
        let closed = mean_toa_closed(&p, &pmd, &post).unwrap();
        let chain = [OpticalElement::Pmd(pmd), post.into_element().unwrap()];
        let out = propagate(&p, &chain);
        assert!((out.mean_toa_closed().unwrap() - closed).abs() < 1e-14);
        let field = out.sample(&out.default_grid()).unwrap();
        assert!((mean_toa_numeric(&field).unwrap() - closed).abs() < 1e-12);
    }

    #[test]
    fn weak_value_reference_cases() {
        let pre = Jones::<f64>::from_angles(0.5, 0.3);
        let pmd = PmdElement::new(0.2, 0.0).unwrap();
        let plain = 0.1 * (0.5f64.cos().powi(2) - 0.5f64.sin().powi(2));
        let none = weak_value(&pre, &pmd, &PostSelection::None).unwrap();
        assert!((none - plain).abs() < 1e-15);
        let zero_db = weak_value(&pre, &pmd, &PostSelection::Pdl(PdlElement::new(0.0, 0.8).unwrap())).unwrap();
        assert!((zero_db - plain).abs() < 1e-15);
        let same = weak_value(&pre, &pmd, &PostSelection::Analyzer(pre)).unwrap();
        assert!((same - plain).abs() < 1e-15);
    }

    #[test]
    fn amplification_beyond_eigenvalues() {
        let eps = 0.1;
        let pre = Jones::linear(FRAC_PI_4);
        let post = PostSelection::Analyzer(Jones::linear(-FRAC_PI_4 + eps));
        let pmd = PmdElement::new(0.01, 0.0).unwrap();
        let w = weak_value(&pre, &pmd, &post).unwrap();
        assert!((w - 0.005 / eps.tan()).abs() < 1e-15);
        assert!(w.abs() > 0.005);
        let orth = PostSelection::Analyzer(Jones::linear(-FRAC_PI_4));
        assert!(matches!(weak_value(&pre, &pmd, &orth), Err(WeakError::Divergent(_))));
    }

    #[test]
    fn blocked_pulse_is_an_error() {
        let pmd = PmdElement::new(0.3, 0.0).unwrap();
        let post = PostSelection::Pdl(PdlElement::new(f64::INFINITY, std::f64::consts::FRAC_PI_2).unwrap());
        assert!(matches!(
            mean_toa_closed(&pulse(0.0, 0.0), &pmd, &post),
            Err(WeakError::ZeroEnergy)
        ));
    }

    #[test]
    fn strong_regime_discrimination() {
        let closed = discrimination_error_closed(10.0, 1.0);
        assert!(closed < 1e-6 && closed > 0.0);
        let numeric = discrimination_error_numeric(10.0, 1.0).unwrap();
        assert!((numeric - closed).abs() < 1e-6 * closed + 1e-15, "{numeric} vs {closed}");
        let soft = discrimination_error_numeric(1.0, 1.0).unwrap();
        let d = (soft - discrimination_error_closed(1.0, 1.0)).abs();
        // cutting at t = 0 leaves an O(h⁴) Simpson endpoint error
        assert!(d < 1e-9, "{d:e}");
    }

    #[test]
    fn sweep_rows() {
        let rows = toa_transition_sweep(
            &Jones::linear(0.3),
            0.0,
            &PostSelection::Analyzer(Jones::linear(-0.9)),
            &[0.0f64, 0.01, 0.1, 1.0],
            1.0,
        )
        .unwrap();
        assert_eq!(rows[0].toa_exact, 0.0);
        assert_eq!(rows[0].toa_weak, 0.0);
        assert!(rows[1].scaled_error < rows[2].scaled_error);
        assert!((rows[3].ratio - 1.0).abs() < 1e-15);
    }
}
