use proptest::prelude::*;
use qclink::qcore::{werner, BellWeights, ComplexMatrix, DensityMatrix, PureState, Subsystem};
use qclink::C64;

fn su2(a: f64, b: f64, c: f64) -> ComplexMatrix<f64> {
    // Rz(a) Ry(b) Rz(c)
    let rz = |t: f64| {
        ComplexMatrix::from_rows(2, 2, vec![C64::from_polar(1.0, -t / 2.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::from_polar(1.0, t / 2.0)])
            .unwrap()
    };
    let (s, co) = (b / 2.0).sin_cos();
    let ry = ComplexMatrix::from_real(2, 2, &[co, -s, s, co]).unwrap();
    &(&rz(a) * &ry) * &rz(c)
}

fn pure(re: &[f64], im: &[f64]) -> PureState<f64> {
    PureState::normalized(re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect()).unwrap()
}

/// Mixture of three random two-qubit pure states.
fn random_state(amps: &[f64], w: &[f64]) -> DensityMatrix<f64> {
    let total: f64 = w.iter().sum();
    let mut m = ComplexMatrix::zeros(4, 4);
    for k in 0..3 {
        let s = pure(&amps[8 * k..8 * k + 4], &amps[8 * k + 4..8 * k + 8]);
        m = &m + &s.projector().scale_real(w[k] / total);
    }
    DensityMatrix::new(m).unwrap()
}

fn random_qubit(amps: &[f64], w: f64) -> DensityMatrix<f64> {
    let s = pure(&amps[..2], &amps[2..4]);
    let m = &s.projector().scale_real(w) + &ComplexMatrix::identity(2).scale_real((1.0 - w) / 2.0);
    DensityMatrix::new(m).unwrap()
}

fn nonzero() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 24).prop_filter("non-degenerate", |v| {
        (0..3).all(|k| v[8 * k..8 * k + 8].iter().map(|x| x * x).sum::<f64>() > 1e-3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chsh_invariant_under_local_unitaries(
        amps in nonzero(),
        w in prop::collection::vec(0.05f64..1.0, 3),
        angles in prop::collection::vec(0.0f64..6.3, 6),
    ) {
        let rho = random_state(&amps, &w);
        let u = su2(angles[0], angles[1], angles[2]).kron(&su2(angles[3], angles[4], angles[5]));
        let moved = rho.conjugate(&u).unwrap();
        prop_assert!((rho.chsh_max().unwrap() - moved.chsh_max().unwrap()).abs() < 1e-8);
        prop_assert!((rho.min_pt_eigenvalue().unwrap() - moved.min_pt_eigenvalue().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn partial_trace_inverts_tensor(
        a in prop::collection::vec(-1.0f64..1.0, 4).prop_filter("nz", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3),
        b in prop::collection::vec(-1.0f64..1.0, 4).prop_filter("nz", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3),
        wa in 0.0f64..1.0,
        wb in 0.0f64..1.0,
    ) {
        let (ra, rb) = (random_qubit(&a, wa), random_qubit(&b, wb));
        let joint = ra.tensor(&rb).unwrap();
        prop_assert!(joint.partial_trace(Subsystem::A).unwrap().matrix().max_abs_diff(ra.matrix()) < 1e-12);
        prop_assert!(joint.partial_trace(Subsystem::B).unwrap().matrix().max_abs_diff(rb.matrix()) < 1e-12);
        // product states are never entangled
        prop_assert!(!joint.is_entangled().unwrap().0);
    }

    #[test]
    fn werner_ppt_and_chsh_closed_forms(p in 0.0f64..1.0) {
        let rho = werner(p).unwrap();
        // partial transpose spectrum {(1+p)/4 ×3, (1−3p)/4}
        let min_pt = rho.min_pt_eigenvalue().unwrap();
        prop_assert!((min_pt - (1.0 - 3.0 * p) / 4.0).abs() < 1e-12);
        prop_assert!((rho.chsh_max().unwrap() - 2.0 * 2f64.sqrt() * p).abs() < 1e-10);
        if (p - 1.0 / 3.0).abs() > 1e-9 {
            prop_assert_eq!(rho.is_entangled().unwrap().0, p > 1.0 / 3.0);
        }
    }

    #[test]
    fn bell_diagonal_states_are_valid(w in prop::collection::vec(0.0f64..1.0, 4)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-6);
        let weights = [w[0] / total, w[1] / total, w[2] / total, w[3] / total];
        let rho = BellWeights::new(weights).unwrap().to_density();
        prop_assert!((rho.singlet_fidelity().unwrap() - weights[0]).abs() < 1e-12);
        // Bell-diagonal PPT: entangled iff the largest weight exceeds 1/2
        let max = weights.iter().cloned().fold(0.0, f64::max);
        if (max - 0.5).abs() > 1e-9 {
            prop_assert_eq!(rho.is_entangled().unwrap().0, max > 0.5);
        }
    }
}

#[test]
fn werner_boundary() {
    let third = 1.0 / 3.0;
    assert!(!werner(third - 1e-3).unwrap().is_entangled().unwrap().0);
    assert!(werner(third + 1e-3).unwrap().is_entangled().unwrap().0);
}
