//! VQE run loop, traces, sweeps and the built-in models.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gradient::{forward_diff, parameter_shift_grad, GradientEstimate};
use crate::measurement::{exact_sigma, BackendKind, EnergyEstimator, NoiseBackend, ShotBudget, ShotInterpretation};
use crate::optimize::{Hyperparams, OptimizerKind, OptimizerState, Schedule, ScheduleKind};
use crate::pauli::{Hamiltonian, PauliString};
use crate::simulator::{Ansatz, Gate};
use crate::tuner::{optimal_step, profile, scale_step, tune, TunerConfig, TunerResult, TunerSettings, DEFAULT_WINDOW};

const H2_DEFAULT: &str = include_str!("../data/h2_sto6g_1.75.ham");

/// File name of the shipped H2 coefficients.
pub const H2_COEFFICIENT_FILE: &str = "h2_sto6g_1.75.ham";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSpec {
    pub kind: OptimizerKind,
    pub gamma0: f64,
    #[serde(flatten)]
    pub hyper: Hyperparams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    #[default]
    ForwardDifference,
    /// Exact shift-rule gradient; a noiseless reference, not a budgeted estimator.
    ParameterShift,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepSource {
    Fixed(f64),
    Qugstep(TunerSettings),
    /// Closed-form step from curvature and noise bounds. `None` means the
    /// Hamiltonian's curvature bound and the exact sigma at the initial point.
    BoundOptimal { mu: Option<f64>, sigma: Option<f64> },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hamiltonian: Hamiltonian,
    pub ansatz: Ansatz,
    pub optimizer: OptimizerSpec,
    pub schedule: ScheduleKind,
    pub iterations: usize,
    pub shots: u64,
    pub shot_interpretation: ShotInterpretation,
    pub step: StepSource,
    pub gradient: GradientMethod,
    pub backend: BackendKind,
    pub seed: u64,
    pub window: usize,
}

impl RunConfig {
    /// A config with cosine Adam defaults around a fixed step.
    pub fn new(hamiltonian: Hamiltonian, ansatz: Ansatz, shots: u64, step: f64) -> Self {
        Self {
            hamiltonian,
            ansatz,
            optimizer: OptimizerSpec {
                kind: OptimizerKind::Adam,
                gamma0: 0.1,
                hyper: Hyperparams::default(),
            },
            schedule: ScheduleKind::Cosine,
            iterations: 200,
            shots,
            shot_interpretation: ShotInterpretation::TotalPerEvaluation,
            step: StepSource::Fixed(step),
            gradient: GradientMethod::ForwardDifference,
            backend: BackendKind::Sampled,
            seed: 0,
            window: DEFAULT_WINDOW,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.ansatz.n_qubits() != self.hamiltonian.n_qubits() {
            return Err(Error::Config(format!(
                "ansatz has {} qubits, Hamiltonian has {}",
                self.ansatz.n_qubits(),
                self.hamiltonian.n_qubits()
            )));
        }
        ShotBudget::new(self.shots, self.shot_interpretation)?;
        if self.window == 0 {
            return Err(Error::Config("profile window must be at least 1".into()));
        }
        if !(self.optimizer.gamma0 > 0.0) {
            return Err(Error::Config(format!("gamma0 must be positive, got {}", self.optimizer.gamma0)));
        }
        if let StepSource::Fixed(h) = self.step {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::Config(format!("step size must be positive, got {h}")));
            }
        }
        Ok(())
    }

    pub fn budget(&self) -> Result<ShotBudget> {
        ShotBudget::new(self.shots, self.shot_interpretation)
    }

    pub fn shots_per_evaluation(&self) -> Result<u64> {
        Ok(self.budget()?.per_evaluation(self.hamiltonian.group_qubitwise().len()))
    }

    fn backend(&self) -> NoiseBackend {
        NoiseBackend {
            kind: self.backend,
            seed: self.seed,
        }
    }

    /// Exact sigma at the ansatz's initial point for this config's budget.
    pub fn initial_sigma(&self) -> Result<f64> {
        exact_sigma(
            &self.ansatz,
            self.ansatz.initial_params(),
            &self.hamiltonian,
            &self.hamiltonian.group_qubitwise(),
            self.budget()?,
        )
    }

    pub fn tuner_config(&self, settings: TunerSettings) -> TunerConfig {
        TunerConfig {
            settings,
            recipe: self.clone(),
        }
    }
}

/// How the step of a run was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResolution {
    pub step_size: f64,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuner: Option<TunerResult>,
}

/// Resolves the configured step source at the config's own budget.
pub fn resolve_step(config: &RunConfig) -> Result<StepResolution> {
    match &config.step {
        StepSource::Fixed(h) => Ok(StepResolution {
            step_size: *h,
            source: "fixed".into(),
            mu: None,
            sigma: None,
            tuner: None,
        }),
        StepSource::Qugstep(settings) => {
            let mut settings = settings.clone();
            settings.target_shots = Some(config.shots);
            let result = tune(&config.tuner_config(settings))?;
            Ok(StepResolution {
                step_size: result.h_n,
                source: "qugstep".into(),
                mu: None,
                sigma: None,
                tuner: Some(result),
            })
        }
        StepSource::BoundOptimal { mu, sigma } => {
            let mu = mu.unwrap_or_else(|| config.hamiltonian.curvature_bound());
            let sigma = match sigma {
                Some(s) => *s,
                None => config.initial_sigma()?,
            };
            Ok(StepResolution {
                step_size: optimal_step(mu, sigma, config.shots)?,
                source: "bound_optimal".into(),
                mu: Some(mu),
                sigma: Some(sigma),
                tuner: None,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub noisy_energy: f64,
    pub exact_energy: f64,
    pub grad_inf_norm: f64,
    pub learning_rate: f64,
    pub cumulative_shots: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub step_size: f64,
    pub run_index: u64,
    pub window: usize,
    pub ground_energy: Option<f64>,
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub step_size: f64,
    pub run_index: u64,
    pub iterations: usize,
    pub total_shots: u64,
    pub window: usize,
    /// Profiles average the last `window` records (fewer if the run is shorter).
    pub noisy_profile: Option<f64>,
    pub exact_profile: Option<f64>,
    pub final_exact_energy: Option<f64>,
    pub ground_energy: Option<f64>,
    pub profile_error: Option<f64>,
}

pub const CSV_HEADER: &str = "iter,noisy_energy,exact_energy,grad_inf_norm,learning_rate,cumulative_shots";

impl RunTrace {
    pub fn noisy_energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.noisy_energy).collect()
    }

    pub fn exact_energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.exact_energy).collect()
    }

    pub fn total_shots(&self) -> u64 {
        self.records.last().map_or(0, |r| r.cumulative_shots)
    }

    /// Mean exact energy over the last `window` records.
    pub fn exact_profile(&self, window: usize) -> Result<f64> {
        profile(&self.exact_energies(), window)
    }

    pub fn summary(&self) -> TraceSummary {
        let w = self.window.min(self.records.len());
        let noisy_profile = profile(&self.noisy_energies(), w).ok();
        let exact_profile = profile(&self.exact_energies(), w).ok();
        TraceSummary {
            step_size: self.step_size,
            run_index: self.run_index,
            iterations: self.records.len(),
            total_shots: self.total_shots(),
            window: w,
            noisy_profile,
            exact_profile,
            final_exact_energy: self.records.last().map(|r| r.exact_energy),
            ground_energy: self.ground_energy,
            profile_error: exact_profile.zip(self.ground_energy).map(|(p, g)| p - g),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.iter, r.noisy_energy, r.exact_energy, r.grad_inf_norm, r.learning_rate, r.cumulative_shots
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Resolves the step, computes the ground energy, and performs run 0.
pub fn run_vqe(config: &RunConfig) -> Result<RunTrace> {
    config.validate()?;
    let step = resolve_step(config)?;
    let ground = ground_energy(&config.hamiltonian).ok();
    run_trial(config, step.step_size, 0, ground)
}

/// One optimization run at a fixed step on RNG stream `run_index`.
///
/// Iteration `t` spends evaluation keys `t (d + 1) ..= t (d + 1) + d`. A
/// non-finite gradient, energy or parameter aborts with [`Error::Diverged`]
/// carrying the records written so far.
pub fn run_trial(config: &RunConfig, step: f64, run_index: u64, ground: Option<f64>) -> Result<RunTrace> {
    config.validate()?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Argument(format!("step size must be positive, got {step}")));
    }
    let estimator = EnergyEstimator::new(
        &config.ansatz,
        &config.hamiltonian,
        config.budget()?,
        config.backend(),
        run_index,
    )?;
    let schedule = Schedule::new(config.schedule, config.optimizer.gamma0, config.iterations)?;
    let d = config.ansatz.n_params();
    let mut optimizer = OptimizerState::new(config.optimizer.kind, d, config.optimizer.hyper);
    let mut params = config.ansatz.initial_params().to_vec();
    let mut trace = RunTrace {
        step_size: step,
        run_index,
        window: config.window,
        ground_energy: ground,
        records: Vec::with_capacity(config.iterations),
    };
    let mut cumulative = 0u64;
    for t in 0..config.iterations {
        let diverged = |trace: &RunTrace, message: String| Error::Diverged {
            iteration: t,
            message,
            partial: Box::new(trace.clone()),
        };
        let rate = schedule.rate_at(t)?;
        let key_base = t as u64 * (d as u64 + 1);
        let grad = match config.gradient {
            GradientMethod::ForwardDifference => forward_diff(&estimator, &params, step, key_base),
            GradientMethod::ParameterShift => shift_rule_estimate(&estimator, config, &params, key_base),
        };
        let grad = match grad {
            Ok(g) => g,
            Err(Error::Numeric(m)) => return Err(diverged(&trace, m)),
            Err(e) => return Err(e),
        };
        let exact = estimator.exact(&params)?;
        if !grad.values.iter().all(|g| g.is_finite()) || !exact.is_finite() {
            return Err(diverged(&trace, "non-finite gradient or energy".into()));
        }
        cumulative += grad.shots_used;
        trace.records.push(TraceRecord {
            iter: t,
            noisy_energy: grad.baseline_energy,
            exact_energy: exact,
            grad_inf_norm: grad.inf_norm(),
            learning_rate: rate,
            cumulative_shots: cumulative,
        });
        params = optimizer.update(&params, &grad.values, rate)?;
        if let Some(i) = params.iter().position(|p| !p.is_finite()) {
            return Err(diverged(&trace, format!("parameter {i} became {}", params[i])));
        }
    }
    Ok(trace)
}

fn shift_rule_estimate(
    estimator: &EnergyEstimator<'_>,
    config: &RunConfig,
    params: &[f64],
    key: u64,
) -> Result<GradientEstimate> {
    let baseline = estimator.estimate(params, key)?;
    let values = parameter_shift_grad(&config.ansatz, params, &config.hamiltonian)?;
    Ok(GradientEstimate {
        values,
        evaluations_used: 1,
        shots_used: estimator.shots_per_evaluation(),
        baseline_energy: baseline,
    })
}

/// Resolves the step once and performs `repeats` runs on streams `0..repeats`.
pub fn run_repeats(config: &RunConfig, repeats: usize) -> Result<(StepResolution, Vec<Result<RunTrace>>)> {
    config.validate()?;
    let step = resolve_step(config)?;
    let ground = ground_energy(&config.hamiltonian).ok();
    let runs = (0..repeats as u64)
        .into_par_iter()
        .map(|r| run_trial(config, step.step_size, r, ground))
        .collect();
    Ok((step, runs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    StepSize(Vec<f64>),
    Budget(Vec<u64>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::StepSize(_) => "step_size",
            SweepAxis::Budget(_) => "budget",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepAxis::StepSize(v) => v.len(),
            SweepAxis::Budget(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parses `step_size=1,0.398` or `budget=360,9720`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, values) = text
            .split_once('=')
            .ok_or_else(|| Error::Argument(format!("axis {text:?} is not of the form name=v1,v2")))?;
        let items: Vec<&str> = values.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let bad = |v: &str| Error::Argument(format!("invalid {name} value {v:?}"));
        match name.trim() {
            "step_size" | "h" => items
                .iter()
                .map(|v| v.parse::<f64>().map_err(|_| bad(v)))
                .collect::<Result<_>>()
                .map(SweepAxis::StepSize),
            "budget" | "shots" => items
                .iter()
                .map(|v| v.parse::<u64>().map_err(|_| bad(v)))
                .collect::<Result<_>>()
                .map(SweepAxis::Budget),
            other => Err(Error::Argument(format!("unknown sweep axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub value: f64,
    pub step_size: f64,
    pub shots: u64,
    /// Mean and sample standard deviation of the exact-energy profiles.
    pub mean_profile: Option<f64>,
    pub std_profile: Option<f64>,
    /// Per-iteration mean and standard deviation of exact energies.
    pub mean_curve: Vec<f64>,
    pub std_curve: Vec<f64>,
    pub profiles: Vec<f64>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub traces: Vec<RunTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: String,
    pub repeats: usize,
    pub window: usize,
    pub ground_energy: Option<f64>,
    pub cells: Vec<SweepCell>,
}

/// Sample mean and (n - 1) standard deviation; the deviation is 0 for one value.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

/// Runs `repeats` seeded runs per axis value. Run `r` of every cell uses RNG
/// stream `r`. Failed runs are recorded and excluded from the statistics.
pub fn sweep(base: &RunConfig, axis: &SweepAxis, repeats: usize) -> Result<SweepResult> {
    base.validate()?;
    if axis.is_empty() {
        return Err(Error::Argument("sweep axis has no values".into()));
    }
    if repeats == 0 {
        return Err(Error::Argument("repeats must be at least 1".into()));
    }
    let cells_setup: Vec<(f64, RunConfig, f64)> = match axis {
        SweepAxis::StepSize(steps) => steps.iter().map(|&h| (h, base.clone(), h)).collect(),
        SweepAxis::Budget(budgets) => {
            let tuned = match &base.step {
                StepSource::Qugstep(_) => Some(resolve_step(base)?),
                _ => None,
            };
            budgets
                .iter()
                .map(|&n| {
                    let mut cfg = base.clone();
                    cfg.shots = n;
                    let h = match &tuned {
                        Some(res) => {
                            let t = res.tuner.as_ref().expect("qugstep resolution carries a result");
                            scale_step(t.h_hat, t.test_shots, n)?
                        }
                        None => resolve_step(&cfg)?.step_size,
                    };
                    Ok((n as f64, cfg, h))
                })
                .collect::<Result<_>>()?
        }
    };
    let ground = ground_energy(&base.hamiltonian).ok();
    let jobs: Vec<(usize, u64)> = (0..cells_setup.len())
        .flat_map(|c| (0..repeats as u64).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Result<RunTrace>> = jobs
        .par_iter()
        .map(|&(c, r)| {
            let (_, cfg, h) = &cells_setup[c];
            run_trial(cfg, *h, r, ground)
        })
        .collect();

    let mut cells = Vec::with_capacity(cells_setup.len());
    let mut outcomes = outcomes.into_iter();
    for (value, cfg, h) in cells_setup {
        let mut traces = Vec::new();
        let mut failures = Vec::new();
        for r in 0..repeats {
            match outcomes.next().expect("one outcome per job") {
                Ok(t) => traces.push(t),
                Err(e) => failures.push(format!("run {r}: {e}")),
            }
        }
        cells.push(summarize_cell(value, h, cfg.shots, base.window, traces, failures));
    }
    Ok(SweepResult {
        axis: axis.name().into(),
        repeats,
        window: base.window,
        ground_energy: ground,
        cells,
    })
}

/// Statistics of one sweep cell, computed from its stored traces.
pub fn summarize_cell(
    value: f64,
    step_size: f64,
    shots: u64,
    window: usize,
    traces: Vec<RunTrace>,
    failures: Vec<String>,
) -> SweepCell {
    let profiles: Vec<f64> = traces
        .iter()
        .filter_map(|t| t.exact_profile(window.min(t.records.len())).ok())
        .collect();
    let (mean_profile, std_profile) = mean_std(&profiles).unzip();
    let len = traces.iter().map(|t| t.records.len()).min().unwrap_or(0);
    let (mean_curve, std_curve) = (0..len)
        .map(|i| {
            let col: Vec<f64> = traces.iter().map(|t| t.records[i].exact_energy).collect();
            mean_std(&col).expect("at least one trace")
        })
        .unzip();
    SweepCell {
        value,
        step_size,
        shots,
        mean_profile,
        std_profile,
        mean_curve,
        std_curve,
        profiles,
        failures,
        traces,
    }
}

/// Minimum eigenvalue of the dense Hamiltonian.
pub fn ground_energy(h: &Hamiltonian) -> Result<f64> {
    let m = h.dense_matrix()?;
    let eig = SymmetricEigen::new(m);
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// The reduced two-qubit H2 model with the shipped coefficients.
///
/// The ansatz rotates the reference `01` by `exp(-i theta X0 Y1)`, which maps
/// it onto `cos(theta)|01> - sin(theta)|10>` and so spans the real ground state.
pub fn builtin_h2() -> Result<(Hamiltonian, Ansatz)> {
    let h = Hamiltonian::parse_text(H2_DEFAULT)?;
    Ok((h, h2_ansatz()?))
}

/// The H2 model with coefficients read from `path`.
pub fn builtin_h2_from_file(path: &Path) -> Result<(Hamiltonian, Ansatz)> {
    if !path.is_file() {
        return Err(Error::Config(format!(
            "H2 coefficient file {} not found (expected a file like {H2_COEFFICIENT_FILE})",
            path.display()
        )));
    }
    let h = Hamiltonian::from_file(path)?;
    let expected = ["II", "ZI", "IZ", "ZZ", "YY", "XX"];
    if h.n_qubits() != 2
        || h.terms()
            .iter()
            .any(|t| !expected.contains(&t.string.to_string().as_str()))
    {
        return Err(Error::Config(format!(
            "{} must hold two-qubit terms among II, ZI, IZ, ZZ, YY, XX",
            path.display()
        )));
    }
    Ok((h, h2_ansatz()?))
}

fn h2_ansatz() -> Result<Ansatz> {
    Ansatz::new(
        Ansatz::parse_reference("01")?,
        vec![Gate::PauliRotation {
            pauli: PauliString::parse("XY", 2)?,
            param: 0,
        }],
        1,
        vec![0.0],
    )
}

/// Layers of `RY` on every qubit (then `RZ` on every qubit when
/// `two_rotations`) followed by a linear CNOT chain, on reference `0...0`.
pub fn builtin_hw_efficient(n_qubits: usize, layers: usize, two_rotations: bool, init: f64) -> Result<Ansatz> {
    if n_qubits < 2 || layers == 0 {
        return Err(Error::Argument(format!(
            "hardware-efficient ansatz needs >= 2 qubits and >= 1 layer, got {n_qubits} and {layers}"
        )));
    }
    let per_layer = n_qubits * if two_rotations { 2 } else { 1 };
    let mut gates = Vec::new();
    for l in 0..layers {
        let base = l * per_layer;
        gates.extend((0..n_qubits).map(|q| Gate::RotY { qubit: q, param: base + q }));
        if two_rotations {
            gates.extend((0..n_qubits).map(|q| Gate::RotZ {
                qubit: q,
                param: base + n_qubits + q,
            }));
        }
        gates.extend((0..n_qubits - 1).map(|q| Gate::Cnot { control: q, target: q + 1 }));
    }
    let n_params = layers * per_layer;
    Ansatz::new(vec![false; n_qubits], gates, n_params, vec![init; n_params])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hw_efficient_counts() {
        assert_eq!(builtin_hw_efficient(4, 2, false, 0.0).unwrap().n_params(), 8);
        assert_eq!(builtin_hw_efficient(6, 3, true, 1.5).unwrap().n_params(), 36);
        let a = builtin_hw_efficient(2, 1, false, 0.0).unwrap();
        assert_eq!(a.n_params(), 2);
        assert_eq!(a.gates().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count(), 1);
        assert!(builtin_hw_efficient(1, 1, false, 0.0).is_err());
    }

    #[test]
    fn h2_builtin_structure() {
        let (h, a) = builtin_h2().unwrap();
        assert_eq!(a.n_params(), 1);
        let mut labels: Vec<String> = h.terms().iter().map(|t| t.string.to_string()).collect();
        labels.sort();
        assert_eq!(labels, ["II", "IZ", "XX", "YY", "ZI", "ZZ"]);
    }

    #[test]
    fn missing_coefficient_file_names_it() {
        let err = builtin_h2_from_file(Path::new("/nonexistent/h2.ham")).unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("/nonexistent/h2.ham")));
    }

    #[test]
    fn ground_energy_examples() {
        let z = Hamiltonian::from_labels(&[(1.0, "Z")]).unwrap();
        assert!((ground_energy(&z).unwrap() + 1.0).abs() < 1e-12);
        let iz = Hamiltonian::from_labels(&[(1.0, "I"), (1.0, "Z")]).unwrap();
        assert!(ground_energy(&iz).unwrap().abs() < 1e-12);
    }

    #[test]
    fn single_iteration_run() {
        let (h, a) = builtin_h2().unwrap();
        let mut cfg = RunConfig::new(h, a, 360, 0.4);
        cfg.iterations = 1;
        let trace = run_vqe(&cfg).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.total_shots(), 2 * 360);
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(SweepAxis::parse("step_size=1,0.5").unwrap(), SweepAxis::StepSize(vec![1.0, 0.5]));
        assert_eq!(SweepAxis::parse("budget=360, 9720").unwrap(), SweepAxis::Budget(vec![360, 9720]));
        assert!(SweepAxis::parse("foo=1").is_err());
        assert!(SweepAxis::parse("budget").is_err());
    }

    #[test]
    fn mean_std_sample() {
        assert_eq!(mean_std(&[]), None);
        assert_eq!(mean_std(&[2.0]), Some((2.0, 0.0)));
        let (m, s) = mean_std(&[1.0, 3.0]).unwrap();
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }
}
