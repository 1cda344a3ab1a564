use super::{fidelity_classical, fidelity_opt, AmplifierSetting, CloningError, CopyCounts};

pub const MAX_MIXTURE_INTENSITY: f64 = 50.0;
const TAIL: f64 = 1e-12;

/// Photon-number average of the optimal fidelity against the amplifier formula at Q = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonMixture {
    pub value: f64,
    /// `value − fidelity_classical(μ_in, G·μ_in, Q = 1)`.
    pub deviation: f64,
    /// Number of photon-number terms summed.
    pub terms: usize,
}

/// Σ_N Pois_μ(N) · F_opt(N, max(N, round(G·N))) over N ≥ 1, renormalized by P(N ≥ 1); the
/// vacuum term has no cloning fidelity. Summation stops once the Poisson mass reaches 1 − 1e−12.
pub fn poisson_mixture_fidelity(mu_in: f64, gain: f64) -> Result<PoissonMixture, CloningError> {
    if !(mu_in > 0.0 && mu_in <= MAX_MIXTURE_INTENSITY) || !(gain >= 1.0) || !gain.is_finite() {
        return Err(CloningError::Mixture { mu_in, gain });
    }
    let mut pmf = (-mu_in).exp();
    let mut mass = pmf;
    let mut acc = 0.0;
    let mut terms = 0;
    let mut n: u64 = 0;
    while mass < 1.0 - TAIL {
        n += 1;
        pmf *= mu_in / n as f64;
        mass += pmf;
        let m = ((gain * n as f64).round() as u64).max(n);
        acc += pmf * fidelity_opt::<f64>(CopyCounts::new(n, m)?);
        terms += 1;
    }
    let value = acc / (mass - (-mu_in).exp());
    let reference = fidelity_classical(&AmplifierSetting::new(mu_in, gain * mu_in, 1.0)?)?;
    Ok(PoissonMixture {
        value,
        deviation: value - reference,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_gain_is_perfect() {
        for mu in [0.1, 1.0, 5.0, 50.0] {
            assert!((poisson_mixture_fidelity(mu, 1.0).unwrap().value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bright_inputs_approach_one() {
        let low = poisson_mixture_fidelity(1.0, 10.0).unwrap().value;
        let high = poisson_mixture_fidelity(50.0, 10.0).unwrap().value;
        assert!(high > low && high > 0.97);
    }

    #[test]
    fn reported_case() {
        let r = poisson_mixture_fidelity(5.0, 10.0).unwrap();
        assert!(r.value > 0.5 && r.value <= 1.0);
        assert!(r.terms > 10);
        // independent sum with the pmf from factorials
        let mut acc = 0.0;
        let mut fact = 1.0;
        for n in 1..=60u64 {
            fact *= n as f64;
            let p = (-5.0f64).exp() * 5.0f64.powi(n as i32) / fact;
            let m = (10 * n) as f64;
            acc += p * (m * n as f64 + m + n as f64) / (m * (n as f64 + 2.0));
        }
        let oracle = acc / (1.0 - (-5.0f64).exp());
        assert!((r.value - oracle).abs() < 1e-11);
    }

    #[test]
    fn domain() {
        assert!(poisson_mixture_fidelity(0.0, 2.0).is_err());
        assert!(poisson_mixture_fidelity(51.0, 2.0).is_err());
        assert!(poisson_mixture_fidelity(1.0, 0.5).is_err());
    }
}
