use proptest::prelude::*;
use qclink::cloning::{
    birth_process_exact, birth_process_mc, fidelity_classical, fidelity_opt, fit_q, synthetic_dataset,
    AmplifierSetting, CopyCounts, SyntheticDesign,
};

fn cc(n: u64, m: u64) -> CopyCounts {
    CopyCounts::new(n, m).unwrap()
}

/// Independent closed form, written out in floating point.
fn opt_oracle(n: f64, m: f64) -> f64 {
    (m * n + m + n) / (m * (n + 2.0))
}

#[test]
fn amplifier_formula_equals_optimal_at_unit_quality() {
    let mut worst: f64 = 0.0;
    for n in 1..=50u64 {
        for m in n..=50 {
            let a = AmplifierSetting::new(n as f64, m as f64, 1.0).unwrap();
            worst = worst.max((fidelity_classical(&a).unwrap() - fidelity_opt::<f64>(cc(n, m))).abs());
        }
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn optimal_fidelity_monotonicity_and_bounds() {
    for n in 1..=40u64 {
        for m in n..=40 {
            let f = fidelity_opt::<f64>(cc(n, m));
            assert!((f - opt_oracle(n as f64, m as f64)).abs() < 1e-15);
            assert!(f > 0.5 && f <= 1.0);
            if m > n {
                assert!(fidelity_opt::<f64>(cc(n, m - 1)) >= f);
                assert!(fidelity_opt::<f64>(cc(n + 1, m)) >= f);
            }
        }
    }
}

#[test]
fn birth_process_enumeration_in_double_precision() {
    for n in 1..=20u64 {
        for m in n..=40 {
            assert!((birth_process_exact::<f64>(cc(n, m)) - opt_oracle(n as f64, m as f64)).abs() < 1e-12);
        }
    }
}

#[test]
fn birth_process_monte_carlo_grid() {
    for n in 1..=4u64 {
        for m in n..=8 {
            let mc = birth_process_mc(cc(n, m), 100_000, n * 100 + m).unwrap();
            let exact = fidelity_opt::<f64>(cc(n, m));
            assert!((mc.mean - exact).abs() <= 3.0 * mc.std_error, "({n},{m}): {mc:?} vs {exact}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn amplifier_fidelity_range(mu_in in 1e-3f64..100.0, ratio in 1.0f64..50.0, q in 0.0f64..=1.0) {
        let mu_out = mu_in * ratio;
        let f = fidelity_classical(&AmplifierSetting::new(mu_in, mu_out, q).unwrap()).unwrap();
        prop_assert!(f > 0.5 && f <= 1.0 + 1e-15);
        // the formula itself exceeds one once the input is brighter than the output
        if ratio > 1.0 + 1e-9 {
            let swapped = (q * mu_out * mu_in + mu_out + mu_in) / (q * mu_out * mu_in + 2.0 * mu_in);
            prop_assert!(swapped > 1.0);
            prop_assert!(AmplifierSetting::new(mu_out, mu_in, q).is_err());
        }
    }

    #[test]
    fn noiseless_fit_recovers_quality(q in 0.0f64..=1.0, gain in 2.0f64..20.0) {
        let design = SyntheticDesign { q, gain, noise_sigma: 0.0, points: 12, ..SyntheticDesign::default() };
        let fit = fit_q(&synthetic_dataset(&design, 0).unwrap()).unwrap();
        prop_assert!((fit.q - q).abs() < 1e-5, "{} vs {}", fit.q, q);
    }
}
