use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use vqe_step::config::ExperimentConfig;
use vqe_step::experiment::{resolve_step, run_repeats, sweep, RunConfig, StepResolution, SweepAxis, SweepCell, TraceSummary};
use vqe_step::measurement::BackendKind;
use vqe_step::tuner::{bound_terms, error_bound, optimal_step};
use vqe_step::{ground_energy, Error, Hamiltonian, Result, StepSource};

#[derive(Parser)]
#[command(name = "vqe-step", version, about = "Shot-noise VQE simulation and finite-difference step selection")]
struct Cli {
    /// Overrides the config's master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config's output directory.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Overrides the noise backend: sampled, gaussian_surrogate or exact.
    #[arg(long, global = true, value_parser = parse_backend)]
    backend: Option<BackendKind>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run `repeats` optimizations and write one trace CSV per run.
    Run { config: PathBuf },
    /// Grid-search the step on cheap runs and rescale it to the target budget.
    Tune { config: PathBuf },
    /// Sweep step sizes or budgets, e.g. `--axis step_size=1,0.398,0.1`.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        axis: String,
    },
    /// Print the error-bound curve and its minimizer.
    Bound {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 1e-3)]
        h_min: f64,
        #[arg(long, default_value_t = 10.0)]
        h_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
    /// Print the ground energy of a Hamiltonian file.
    Ground { hamiltonian: PathBuf },
    /// Print the exact noise scale at the initial point of a config.
    Sigma { config: PathBuf },
}

fn parse_backend(s: &str) -> std::result::Result<BackendKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown backend {s:?}; expected sampled, gaussian_surrogate or exact"))
}

struct Loaded {
    run: RunConfig,
    repeats: usize,
    output_dir: PathBuf,
}

fn load(cli: &Cli, path: &Path) -> Result<Loaded> {
    let mut doc = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        doc.seed = seed;
    }
    if let Some(backend) = cli.backend {
        doc.noise_backend = backend;
    }
    if let Some(dir) = &cli.output_dir {
        doc.output_dir = dir.clone();
    }
    Ok(Loaded {
        run: doc.to_run_config()?,
        repeats: doc.repeats,
        output_dir: doc.output_dir,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, &text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(text)
}

#[derive(Serialize)]
struct RunEntry {
    run: usize,
    trace: Option<String>,
    summary: Option<TraceSummary>,
    error: Option<String>,
}

#[derive(Serialize)]
struct RunReport {
    step: StepResolution,
    shots_per_evaluation: u64,
    runs: Vec<RunEntry>,
}

fn cmd_run(cli: &Cli, path: &Path) -> Result<String> {
    let l = load(cli, path)?;
    ensure_dir(&l.output_dir)?;
    let (step, outcomes) = run_repeats(&l.run, l.repeats)?;
    let mut runs = Vec::with_capacity(outcomes.len());
    for (r, outcome) in outcomes.into_iter().enumerate() {
        let entry = match outcome {
            Ok(trace) => {
                let name = format!("run_{r:03}.csv");
                trace.write_csv(&l.output_dir.join(&name))?;
                RunEntry {
                    run: r,
                    trace: Some(name),
                    summary: Some(trace.summary()),
                    error: None,
                }
            }
            Err(Error::Diverged { iteration, message, partial }) => {
                let name = format!("run_{r:03}.partial.csv");
                partial.write_csv(&l.output_dir.join(&name))?;
                RunEntry {
                    run: r,
                    trace: Some(name),
                    summary: Some(partial.summary()),
                    error: Some(format!("diverged at iteration {iteration}: {message}")),
                }
            }
            Err(e) => RunEntry {
                run: r,
                trace: None,
                summary: None,
                error: Some(e.to_string()),
            },
        };
        runs.push(entry);
    }
    let report = RunReport {
        step,
        shots_per_evaluation: l.run.shots_per_evaluation()?,
        runs,
    };
    write_json(&l.output_dir.join("run_summary.json"), &report)
}

fn cmd_tune(cli: &Cli, path: &Path) -> Result<String> {
    let l = load(cli, path)?;
    if !matches!(l.run.step, StepSource::Qugstep(_)) {
        return Err(Error::Config(format!("{} has no qugstep block", path.display())));
    }
    let resolution = resolve_step(&l.run)?;
    let result = resolution.tuner.expect("qugstep resolution carries a tuner result");
    ensure_dir(&l.output_dir)?;
    write_json(&l.output_dir.join("tuner_result.json"), &result)
}

#[derive(Serialize)]
struct SweepCellReport<'a> {
    #[serde(flatten)]
    cell: &'a SweepCell,
    traces: Vec<String>,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    axis: &'a str,
    repeats: usize,
    window: usize,
    ground_energy: Option<f64>,
    cells: Vec<SweepCellReport<'a>>,
}

fn cmd_sweep(cli: &Cli, path: &Path, axis: &str) -> Result<String> {
    let l = load(cli, path)?;
    let axis = SweepAxis::parse(axis)?;
    let result = sweep(&l.run, &axis, l.repeats)?;
    ensure_dir(&l.output_dir)?;
    let mut cells = Vec::with_capacity(result.cells.len());
    for (i, cell) in result.cells.iter().enumerate() {
        let mut traces = Vec::with_capacity(cell.traces.len());
        for trace in &cell.traces {
            let name = format!("sweep_{}_{i:02}_run_{:03}.csv", result.axis, trace.run_index);
            trace.write_csv(&l.output_dir.join(&name))?;
            traces.push(name);
        }
        cells.push(SweepCellReport { cell, traces });
    }
    let report = SweepReport {
        axis: &result.axis,
        repeats: result.repeats,
        window: result.window,
        ground_energy: result.ground_energy,
        cells,
    };
    write_json(&l.output_dir.join(format!("sweep_{}_summary.json", result.axis)), &report)
}

#[derive(Serialize)]
struct BoundPoint {
    h: f64,
    bound: f64,
    truncation: f64,
    noise: f64,
}

#[derive(Serialize)]
struct BoundReport {
    mu: f64,
    sigma: f64,
    shots: u64,
    optimal_step: f64,
    bound_at_optimum: f64,
    curve: Vec<BoundPoint>,
}

fn cmd_bound(mu: f64, sigma: f64, shots: u64, h_min: f64, h_max: f64, points: usize) -> Result<String> {
    if !(h_min > 0.0 && h_max > h_min) || points < 2 {
        return Err(Error::Argument("need 0 < h_min < h_max and at least 2 points".into()));
    }
    let h_opt = optimal_step(mu, sigma, shots)?;
    let ratio = (h_max / h_min).ln() / (points - 1) as f64;
    let curve = (0..points)
        .map(|i| {
            let h = h_min * (ratio * i as f64).exp();
            let (truncation, noise) = bound_terms(mu, sigma, h, shots);
            Ok(BoundPoint {
                h,
                bound: error_bound(mu, sigma, h, shots)?,
                truncation,
                noise,
            })
        })
        .collect::<Result<_>>()?;
    let report = BoundReport {
        mu,
        sigma,
        shots,
        optimal_step: h_opt,
        bound_at_optimum: error_bound(mu, sigma, h_opt, shots)?,
        curve,
    };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

#[derive(Serialize)]
struct GroundReport {
    n_qubits: usize,
    n_terms: usize,
    n_groups: usize,
    ground_energy: f64,
    norm_bound: f64,
    curvature_bound: f64,
}

fn cmd_ground(path: &Path) -> Result<String> {
    let h = Hamiltonian::from_file(path)?;
    let report = GroundReport {
        n_qubits: h.n_qubits(),
        n_terms: h.len(),
        n_groups: h.group_qubitwise().len(),
        ground_energy: ground_energy(&h)?,
        norm_bound: h.norm_bound(),
        curvature_bound: h.curvature_bound(),
    };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

#[derive(Serialize)]
struct SigmaReport {
    shots: u64,
    shots_per_evaluation: u64,
    n_groups: usize,
    sigma: f64,
    estimator_std: f64,
    exact_energy: f64,
}

fn cmd_sigma(cli: &Cli, path: &Path) -> Result<String> {
    let l = load(cli, path)?;
    let cfg = &l.run;
    let sigma = cfg.initial_sigma()?;
    let report = SigmaReport {
        shots: cfg.shots,
        shots_per_evaluation: cfg.shots_per_evaluation()?,
        n_groups: cfg.hamiltonian.group_qubitwise().len(),
        sigma,
        estimator_std: sigma / (cfg.shots as f64).sqrt(),
        exact_energy: cfg.ansatz.exact_energy_at(cfg.ansatz.initial_params(), &cfg.hamiltonian)?,
    };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Run { config } => cmd_run(&cli, config),
        Command::Tune { config } => cmd_tune(&cli, config),
        Command::Sweep { config, axis } => cmd_sweep(&cli, config, axis),
        Command::Bound {
            mu,
            sigma,
            shots,
            h_min,
            h_max,
            points,
        } => cmd_bound(*mu, *sigma, *shots, *h_min, *h_max, *points),
        Command::Ground { hamiltonian } => cmd_ground(hamiltonian),
        Command::Sigma { config } => cmd_sigma(&cli, config),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
