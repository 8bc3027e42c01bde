mod common;

use common::*;
use proptest::prelude::*;
use vqe_step::config::ExperimentConfig;
use vqe_step::experiment::{
    builtin_h2_from_file, mean_std, resolve_step, run_trial, GradientMethod, RunConfig, StepSource, SweepAxis, CSV_HEADER,
};
use vqe_step::measurement::BackendKind;
use vqe_step::optimize::{OptimizerKind, ScheduleKind};
use vqe_step::tuner::optimal_step;
use vqe_step::{builtin_h2, builtin_hw_efficient, ground_energy, run_vqe, sweep, Error, Hamiltonian};

const TOY: &str = include_str!("../data/toy4_hw.ham");

fn h2(shots: u64, h: f64, iterations: usize) -> RunConfig {
    let (ham, a) = builtin_h2().unwrap();
    let mut cfg = RunConfig::new(ham, a, shots, h);
    cfg.iterations = iterations;
    cfg
}

fn toy(shots: u64, h: f64, iterations: usize) -> RunConfig {
    let ham = Hamiltonian::parse_text(TOY).unwrap();
    let mut cfg = RunConfig::new(ham, builtin_hw_efficient(4, 2, false, 0.0).unwrap(), shots, h);
    cfg.iterations = iterations;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_energies_respect_the_variational_bound(seed in any::<u64>(), h in 0.01f64..1.0, run in 0u64..100) {
        for mut cfg in [h2(90, h, 60), toy(450, h, 30)] {
            cfg.seed = seed;
            let ground = ground_energy(&cfg.hamiltonian).unwrap();
            let trace = run_trial(&cfg, h, run, Some(ground)).unwrap();
            prop_assert!(trace.records.iter().all(|r| r.exact_energy >= ground - 1e-9));
        }
    }

    #[test]
    fn shot_accounting_is_exact(shots in 3u64..500, iterations in 1usize..40, h in 0.01f64..1.0) {
        let trace = run_vqe(&h2(shots, h, iterations)).unwrap();
        prop_assert_eq!(trace.records.len(), iterations);
        prop_assert_eq!(trace.total_shots(), iterations as u64 * 2 * shots);
        prop_assert!(trace.records.windows(2).all(|w| w[1].cumulative_shots - w[0].cumulative_shots == 2 * shots));
    }

    #[test]
    fn h2_energy_is_a_sinusoid(coefs in proptest::collection::vec(-1.0f64..1.0, 6), theta in -3.0f64..3.0) {
        let labels = ["II", "ZI", "IZ", "ZZ", "YY", "XX"];
        let terms: Vec<(f64, &str)> = coefs.iter().copied().zip(labels).collect();
        let ham = Hamiltonian::from_labels(&terms).unwrap();
        let (_, a) = builtin_h2().unwrap();
        let e = |t: f64| a.exact_energy_at(&[t], &ham).unwrap();
        // a + b cos 2t + c sin 2t through t = 0, pi/4, pi/2
        let (e0, e1, e2) = (e(0.0), e(std::f64::consts::FRAC_PI_4), e(std::f64::consts::FRAC_PI_2));
        let (aa, b) = (0.5 * (e0 + e2), 0.5 * (e0 - e2));
        let cc = e1 - aa;
        prop_assert!((e(theta) - (aa + b * (2.0 * theta).cos() + cc * (2.0 * theta).sin())).abs() < 1e-12);
    }
}

#[test]
fn seeded_traces_are_bit_identical() {
    for cfg in [h2(360, 0.398, 50), toy(900, 0.2236, 20)] {
        let a = run_vqe(&cfg).unwrap().to_csv();
        let b = run_vqe(&cfg).unwrap().to_csv();
        assert_eq!(a, b);
        let mut other = cfg.clone();
        other.seed += 1;
        assert_ne!(run_vqe(&other).unwrap().to_csv(), a);
    }
}

#[test]
fn csv_layout() {
    let csv = run_vqe(&h2(36, 0.1, 3)).unwrap().to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 4);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[0], "0");
    assert_eq!(fields[5], "72");
    // at least 12 significant digits
    assert!(fields[1].split('e').next().unwrap().trim_start_matches('-').len() >= 13);
}

#[test]
fn sweep_statistics_recompute_from_traces() {
    let base = h2(90, 0.1, 40);
    let result = sweep(&base, &SweepAxis::StepSize(vec![0.05, 0.4]), 4).unwrap();
    for cell in &result.cells {
        assert_eq!(cell.traces.len(), 4);
        let profiles: Vec<f64> = cell.traces.iter().map(|t| t.exact_profile(20).unwrap()).collect();
        let (m, s) = mean_std(&profiles).unwrap();
        assert_eq!(cell.mean_profile, Some(m));
        assert_eq!(cell.std_profile, Some(s));
        for i in 0..40 {
            let col: Vec<f64> = cell.traces.iter().map(|t| t.records[i].exact_energy).collect();
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            assert!((cell.mean_curve[i] - mean).abs() < 1e-15);
            assert!((cell.std_curve[i] - sd).abs() < 1e-15);
        }
    }
}

#[test]
fn single_value_sweep_reproduces_run_vqe() {
    let base = h2(360, 0.398, 30);
    let result = sweep(&base, &SweepAxis::StepSize(vec![0.398]), 1).unwrap();
    assert_eq!(result.cells[0].traces[0], run_vqe(&base).unwrap());
}

#[test]
fn budget_sweep_changes_shots_only() {
    let base = h2(360, 0.01, 10);
    let result = sweep(&base, &SweepAxis::Budget(vec![36, 720]), 2).unwrap();
    assert_eq!(result.cells[0].step_size, 0.01);
    assert_eq!(result.cells[0].traces[0].total_shots(), 10 * 2 * 36);
    assert_eq!(result.cells[1].traces[1].total_shots(), 10 * 2 * 720);
}

/// Gradient descent on the dense Kronecker-product model with shift-rule
/// gradients, used as the reference for the noiseless run loop.
fn dense_hw_energy(h: &CMat, p: &[f64]) -> f64 {
    let mut psi = basis_vector(&[false; 4]);
    for layer in 0..2 {
        for q in 0..4 {
            psi = single_qubit(4, q, &ry_matrix(p[layer * 4 + q])) * psi;
        }
        for q in 0..3 {
            psi = cnot_matrix(4, q, q + 1) * psi;
        }
    }
    expectation(h, &psi)
}

#[test]
fn noiseless_run_matches_dense_gradient_descent() {
    let mut cfg = toy(100, 0.1, 60);
    cfg.backend = BackendKind::Exact;
    cfg.gradient = GradientMethod::ParameterShift;
    cfg.optimizer.kind = OptimizerKind::Gd;
    cfg.optimizer.gamma0 = 3.0;
    cfg.schedule = ScheduleKind::Cosine;
    cfg.ansatz = cfg.ansatz.clone().with_initial(vec![0.1, -0.2, 0.3, 0.05, -0.1, 0.2, 0.0, 0.15]).unwrap();
    let trace = run_vqe(&cfg).unwrap();

    let terms: Vec<(f64, String)> = cfg.hamiltonian.terms().iter().map(|t| (t.coefficient, t.string.to_string())).collect();
    let dense = dense_hamiltonian(&terms);
    let mut p = cfg.ansatz.initial_params().to_vec();
    for (t, record) in trace.records.iter().enumerate() {
        let e = dense_hw_energy(&dense, &p);
        assert!((record.exact_energy - e).abs() < 1e-8, "iteration {t}");
        assert!((record.noisy_energy - e).abs() < 1e-8);
        let rate = 3.0 * 0.5 * ((std::f64::consts::PI * t as f64 / 60.0).cos() + 1.0);
        let grad: Vec<f64> = (0..8)
            .map(|i| {
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus[i] += std::f64::consts::FRAC_PI_2;
                minus[i] -= std::f64::consts::FRAC_PI_2;
                0.5 * (dense_hw_energy(&dense, &plus) - dense_hw_energy(&dense, &minus))
            })
            .collect();
        for (x, g) in p.iter_mut().zip(&grad) {
            *x -= rate * g;
        }
    }
    let last = trace.records.last().unwrap().exact_energy;
    assert!(last < trace.records[0].exact_energy);
}

#[test]
fn divergence_returns_partial_trace() {
    let (_, a) = builtin_h2().unwrap();
    let ham = Hamiltonian::from_labels(&[(1e3, "YY"), (1e3, "ZI")]).unwrap();
    let mut cfg = RunConfig::new(ham, a, 30, 0.1);
    cfg.backend = BackendKind::Exact;
    cfg.optimizer.kind = OptimizerKind::Gd;
    cfg.optimizer.gamma0 = f64::MAX;
    cfg.ansatz = cfg.ansatz.clone().with_initial(vec![0.3]).unwrap();
    match run_vqe(&cfg) {
        Err(Error::Diverged { iteration, partial, .. }) => {
            assert_eq!(iteration, 0);
            assert_eq!(partial.records.len(), 1);
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn bound_optimal_step_uses_curvature_bound_and_initial_sigma() {
    let mut cfg = h2(360, 0.1, 5);
    cfg.step = StepSource::BoundOptimal { mu: None, sigma: None };
    let r = resolve_step(&cfg).unwrap();
    let want = optimal_step(cfg.hamiltonian.curvature_bound(), cfg.initial_sigma().unwrap(), 360).unwrap();
    assert_eq!(r.step_size, want);
    cfg.step = StepSource::BoundOptimal { mu: Some(2.0), sigma: Some(0.5) };
    assert_eq!(resolve_step(&cfg).unwrap().step_size, optimal_step(2.0, 0.5, 360).unwrap());
}

#[test]
fn mismatched_qubits_are_a_config_error() {
    let mut cfg = h2(360, 0.1, 5);
    cfg.ansatz = builtin_hw_efficient(3, 1, false, 0.0).unwrap();
    assert!(matches!(run_vqe(&cfg), Err(Error::Config(_))));
}

#[test]
fn coefficient_files_and_config_paths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h2.ham");
    std::fs::write(&path, "# test\n-0.5 II\n0.1 ZI\n0.2 IZ\n0.0 ZZ\n0.15 YY\n0.15 XX\n").unwrap();
    let (ham, a) = builtin_h2_from_file(&path).unwrap();
    assert_eq!(a.n_params(), 1);
    assert_eq!(ham.len(), 5);

    let cfg_path = dir.path().join("exp.json");
    std::fs::write(
        &cfg_path,
        r#"{"hamiltonian": {"builtin": "h2", "file": "h2.ham"},
            "ansatz": {"builtin": "h2_uccsd"},
            "optimizer": {"kind": "adam", "gamma0": 0.1},
            "shots": 90, "iterations": 5, "step_size": 0.2, "output_dir": "out"}"#,
    )
    .unwrap();
    let doc = ExperimentConfig::load(&cfg_path).unwrap();
    assert_eq!(doc.output_dir, dir.path().join("out"));
    let run = doc.to_run_config().unwrap();
    assert_eq!(run.hamiltonian.len(), 5);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"hamiltonian": {"builtin": "h2", "file": "missing.ham"}, "ansatz": {"builtin": "h2_uccsd"},
        "optimizer": {"kind": "adam", "gamma0": 0.1}, "shots": 90, "step_size": 0.2}"#).unwrap();
    let err = ExperimentConfig::load(&bad).unwrap().to_run_config().unwrap_err();
    assert!(matches!(&err, Error::Config(m) if m.contains("missing.ham")));
}
