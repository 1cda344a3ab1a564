//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero if
//! any criterion fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;

use qclink::cloning::{
    birth_process_exact, birth_process_mc, fidelity_classical, fidelity_opt, fit_q, synthetic_dataset,
    AmplifierSetting, CopyCounts, SyntheticDesign,
};
use qclink::distill::{ad_threshold, equivalence_sweep, linear_grid, recurrence_step};
use qclink::qcore::werner;
use qclink::qkd::{threshold, EveMeasurement, ThresholdKind};
use qclink::rng::substream;
use qclink::weakmeas::{
    discrimination_error_closed, discrimination_error_numeric, mean_toa_closed, mean_toa_numeric,
    propagate, toa_transition_sweep, weak_value, Jones, OpticalElement, PdlElement, PmdElement,
    PolarizedPulse, PostSelection,
};
use qclink::Rational;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn copy_counts(n: u64, m: u64) -> CopyCounts {
    CopyCounts::new(n, m).unwrap()
}

fn classical_equals_optimal() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=50u64 {
        for m in n..=50 {
            let amp = AmplifierSetting::new(n as f64, m as f64, 1.0).unwrap();
            let diff = (fidelity_classical(&amp).unwrap() - fidelity_opt::<f64>(copy_counts(n, m))).abs();
            worst = worst.max(diff);
        }
    }
    outcome(worst <= 1e-12, format!("max |classical - optimal| = {worst:.3e} over 1275 pairs"))
}

fn cloning_oracle() -> Outcome {
    let mut worst_z = 0.0f64;
    let mut pairs = 0;
    for n in 1..=4u64 {
        for m in n..=8 {
            let c = copy_counts(n, m);
            let mc = birth_process_mc(c, 100_000, 1000 * n + m).unwrap();
            let expect: f64 = fidelity_opt(c);
            let z = if mc.std_error > 0.0 { (mc.mean - expect).abs() / mc.std_error } else if mc.mean == expect { 0.0 } else { f64::INFINITY };
            worst_z = worst_z.max(z);
            pairs += 1;
        }
    }
    let five_sixths = birth_process_exact::<Rational>(copy_counts(1, 2)) == Rational::new(5, 6);
    let seven_ninths = birth_process_exact::<Rational>(copy_counts(1, 3)) == Rational::new(7, 9);
    let float_gap = (birth_process_exact::<f64>(copy_counts(1, 2)) - 5.0 / 6.0)
        .abs()
        .max((birth_process_exact::<f64>(copy_counts(1, 3)) - 7.0 / 9.0).abs());
    outcome(
        worst_z <= 3.0 && five_sixths && seven_ninths && float_gap <= 1e-12,
        format!(
            "worst |z| = {worst_z:.2} over {pairs} pairs; exact (1,2) = 5/6: {five_sixths}, (1,3) = 7/9: {seven_ninths}; float gap {float_gap:.1e}"
        ),
    )
}

fn synthetic_fit() -> Outcome {
    let design = SyntheticDesign { q: 0.8, noise_sigma: 0.005, ..SyntheticDesign::default() };
    let qs: Vec<f64> = (0..100u64)
        .map(|seed| fit_q(&synthetic_dataset(&design, seed).unwrap()).unwrap().q)
        .collect();
    let hits = qs.iter().filter(|q| (*q - 0.8).abs() <= 0.02).count();
    let mean = qs.iter().sum::<f64>() / qs.len() as f64;
    outcome(hits >= 95, format!("{hits}/100 fits within 0.02 of 0.8 (mean {mean:.4})"))
}

fn threshold_trio() -> Outcome {
    let eve = EveMeasurement::HelstromBinary;
    let ent = threshold(ThresholdKind::Entanglement, eve, 1e-6).unwrap();
    let chsh = threshold(ThresholdKind::Chsh, eve, 1e-6).unwrap();
    let one_way = threshold(ThresholdKind::OneWay, eve, 1e-6).unwrap();
    let pass = (ent - 0.29289).abs() <= 1e-3 && (chsh - 0.14645).abs() <= 1e-3 && (one_way - chsh).abs() <= 2e-3;
    outcome(pass, format!("entanglement {ent:.6}, chsh {chsh:.6}, one_way {one_way:.6}"))
}

fn ad_equivalence() -> Outcome {
    let grid = linear_grid(0.0, 0.45, 46);
    let rows = equivalence_sweep(&grid, 30, EveMeasurement::HelstromBinary).unwrap();
    let present_low = rows.iter().filter(|r| r.disturbance <= 0.27 + 1e-9).all(|r| r.ad_min_block.is_some());
    let absent_high = rows.iter().filter(|r| r.disturbance >= 0.33 - 1e-9).all(|r| r.ad_min_block.is_none());
    let reference = 1.0 - 0.5f64.sqrt();
    let binary = ad_threshold(EveMeasurement::HelstromBinary, 30, 1e-6).unwrap();
    let four = ad_threshold(EveMeasurement::SquareRoot4, 30, 1e-6).unwrap();
    let close = (binary - reference).abs() <= 0.02 || (four - reference).abs() <= 0.02;
    outcome(
        present_low && absent_high && close,
        format!(
            "present for D <= 0.27: {present_low}; absent for D >= 0.33: {absent_high}; threshold helstrom_binary {binary:.5}, square_root_4 {four:.5} (reference {reference:.5})"
        ),
    )
}

/// Smallest p in [0, 1] at which `pred` switches on, assuming a single switch.
fn flip_point(pred: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn recurrence_protocol() -> Outcome {
    let half = (recurrence_step(0.5).unwrap().0 - 0.5).abs();
    let one = (recurrence_step(1.0).unwrap().0 - 1.0).abs();
    let increases = [0.55, 0.7, 0.85, 0.95].iter().all(|&f| recurrence_step(f).unwrap().0 > f);
    let fidelity = |p: f64| werner(p).unwrap().singlet_fidelity().unwrap();
    let flips = [
        flip_point(|p| werner(p).unwrap().is_entangled().unwrap().0),
        flip_point(|p| fidelity(p) > 0.5),
        flip_point(|p| {
            let f = fidelity(p);
            recurrence_step(f).unwrap().0 > f
        }),
    ];
    let joint = flips.iter().all(|p| (p - 1.0 / 3.0).abs() <= 1e-3);
    outcome(
        half <= 1e-12 && one <= 1e-12 && increases && joint,
        format!(
            "fixed-point gaps {half:.1e}, {one:.1e}; strict increase: {increases}; flips at p = {:.6}, {:.6}, {:.6}",
            flips[0], flips[1], flips[2]
        ),
    )
}

fn random_post(kind: u32, gamma: f64, axis: f64, phi: f64) -> PostSelection<f64> {
    match kind {
        0 => PostSelection::None,
        1 => PostSelection::Pdl(PdlElement::new(gamma, axis).unwrap()),
        _ => PostSelection::Analyzer(Jones::from_angles(axis, phi)),
    }
}

fn numeric_toa(pulse: &PolarizedPulse<f64>, pmd: PmdElement<f64>, post: PostSelection<f64>) -> f64 {
    let mut chain = vec![OpticalElement::Pmd(pmd)];
    chain.extend(post.into_element());
    let out = propagate(pulse, &chain);
    mean_toa_numeric(&out.sample(&out.default_grid()).unwrap()).unwrap()
}

fn slope(rows: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn weak_measurement() -> Outcome {
    let mut rng = substream(7, 0);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 100 {
        let t_c = rng.random_range(0.5..2.0);
        let ratio = 10f64.powf(rng.random_range(-3.0..1.0));
        let pre = Jones::from_angles(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
        let pulse = PolarizedPulse::gaussian(t_c, pre).unwrap();
        let pmd = PmdElement::new(ratio * t_c, rng.random_range(0.0..PI)).unwrap();
        let post = random_post(
            rng.random_range(0..3),
            rng.random_range(0.0..30.0),
            rng.random_range(0.0..PI),
            rng.random_range(0.0..2.0 * PI),
        );
        let Ok(closed) = mean_toa_closed(&pulse, &pmd, &post) else { continue };
        let numeric = numeric_toa(&pulse, pmd, post);
        worst = worst.max((numeric - closed).abs() / closed.abs().max(pmd.delta_tau / 2.0));
        checked += 1;
    }

    let grid: Vec<f64> = (0..21).map(|k| 10f64.powf(-3.0 + 0.1 * k as f64)).collect();
    let configs = [
        (Jones::from_angles(0.6, 0.3), PostSelection::Pdl(PdlElement::new(3.0, 0.4).unwrap())),
        (Jones::linear(FRAC_PI_4), PostSelection::Analyzer(Jones::linear(-FRAC_PI_4 + 0.1))),
    ];
    let slopes: Vec<f64> = configs
        .iter()
        .map(|(pre, post)| {
            let rows = toa_transition_sweep(pre, 0.0, post, &grid, 1.0).unwrap();
            slope(&rows.iter().map(|r| (r.ratio, r.scaled_error)).collect::<Vec<_>>())
        })
        .collect();
    let slope_ok = slopes.iter().all(|s| (s - 2.0).abs() <= 0.1);

    let strong = discrimination_error_closed(10.0, 1.0);
    let strong_numeric = discrimination_error_numeric(10.0, 1.0).unwrap();

    let (pre, post) = configs[1];
    let pulse = PolarizedPulse::gaussian(1.0, pre).unwrap();
    let dtau = 1e-4;
    let pmd = PmdElement::new(dtau, 0.0).unwrap();
    let closed = mean_toa_closed(&pulse, &pmd, &post).unwrap();
    let weak = weak_value(&pre, &pmd, &post).unwrap();
    let numeric = numeric_toa(&pulse, pmd, post);
    let weak_gap = (weak - closed).abs() / closed.abs();
    let numeric_gap = (numeric - closed).abs() / closed.abs();
    let amplified = closed.abs() > dtau / 2.0;

    let pass = worst <= 1e-9
        && slope_ok
        && strong < 1e-6
        && strong_numeric < 1e-6
        && amplified
        && weak_gap <= 1e-6
        && numeric_gap <= 1e-6;
    outcome(
        pass,
        format!(
            "numeric vs closed worst {worst:.1e} (100 configs); slopes {:.3}, {:.3}; strong-regime error {strong:.2e} (numeric {strong_numeric:.2e}); amplification <t>/(dtau/2) = {:.2}, weak gap {weak_gap:.1e}, numeric gap {numeric_gap:.1e}",
            slopes[0],
            slopes[1],
            closed / (dtau / 2.0)
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_qclink"))
        .args(args)
        .current_dir(dir)
        .env_remove("QCLINK_OUT_DIR")
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn determinism_and_exit_codes() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let runs: [(&[&str], &str); 3] = [
        (&["clone", "mc", "--n", "1", "--m", "3", "--trials", "50000", "--seed", "5"], "clone-mc-5.csv"),
        (&["distill", "classical", "--d", "0.25", "--n-max", "6", "--trials", "20000", "--seed", "5"], "distill-classical-5.csv"),
        (&["clone", "fit", "--repetitions", "5", "--seed", "5"], "clone-fit-5.csv"),
    ];
    let mut identical = true;
    for (args, file) in runs {
        let ok = run_cli(a.path(), args) == 0 && run_cli(b.path(), args) == 0;
        let same = ok && std::fs::read(a.path().join(file)).ok() == std::fs::read(b.path().join(file)).ok();
        identical &= same;
    }
    let success = run_cli(a.path(), &["clone", "fidelity", "--n", "1", "--m", "2"]);
    let usage = run_cli(a.path(), &["no-such-command"]);
    let validation = run_cli(a.path(), &["clone", "fit", "--input", "missing.csv"]);
    let numerical = run_cli(
        a.path(),
        &["weak", "toa", "--theta-pre", "0", "--pdl-db", "inf", "--pdl-axis", "1.5707963267948966"],
    );
    let codes_ok = success == 0 && usage == 1 && validation == 1 && numerical == 2;
    outcome(
        identical && codes_ok,
        format!(
            "byte-identical seeded CSVs: {identical}; exit codes success/usage/validation/numerical = {success}/{usage}/{validation}/{numerical}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("classical amplifier at Q = 1 equals optimal cloning", classical_equals_optimal),
        ("birth-process oracle for optimal cloning", cloning_oracle),
        ("amplifier quality recovered from synthetic data", synthetic_fit),
        ("entanglement, CHSH and one-way thresholds", threshold_trio),
        ("advantage distillation tracks entanglement", ad_equivalence),
        ("recurrence distillation fixed points and Werner chain", recurrence_protocol),
        ("weak-measurement oracle, scaling and amplification", weak_measurement),
        ("determinism and exit codes", determinism_and_exit_codes),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {name} [{secs:.2}s] {}", k + 1, result.detail);
        failures += usize::from(!result.pass);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
