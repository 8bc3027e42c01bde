//! Shot-budget-aware choice of the finite-difference step.
//!
//! For a forward difference against an estimator with variance `s^2 / N` and
//! curvature bounded by `mu`, the mean squared gradient error is at most
//! `mu^2 h^2 / 4 + 2 s^2 / (h^2 N)`. The bound is minimized at
//! `h_N = 8^{1/4} s^{1/2} / (mu^{1/2} N^{1/4})`, so optimal steps for two
//! budgets are related by `h_N = h_M / (N / M)^{1/4}`. [`tune`] exploits that
//! relation: it grid-searches a step on cheap runs with `M` shots and rescales
//! the winner to the target budget `N`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{run_trial, RunConfig, RunTrace};

/// Default number of trailing iterations averaged into a performance profile.
pub const DEFAULT_WINDOW: usize = 20;

/// Offset separating tuning-trial RNG streams from production-run streams.
const TUNING_STREAM_BASE: u64 = 1 << 32;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Upper bound on the expected squared forward-difference error.
pub fn error_bound(mu: f64, sigma: f64, h: f64, shots: u64) -> Result<f64> {
    check_positive("step size", h)?;
    if !(mu >= 0.0) || !(sigma >= 0.0) {
        return Err(Error::Argument(format!(
            "curvature and noise bounds must be non-negative, got mu={mu}, sigma={sigma}"
        )));
    }
    if shots == 0 {
        return Err(Error::Budget("shot budget must be at least 1".into()));
    }
    let (truncation, noise) = bound_terms(mu, sigma, h, shots);
    Ok(truncation + noise)
}

/// The truncation and shot-noise summands of [`error_bound`].
pub fn bound_terms(mu: f64, sigma: f64, h: f64, shots: u64) -> (f64, f64) {
    (0.25 * mu * mu * h * h, 2.0 * sigma * sigma / (h * h * shots as f64))
}

/// Closed-form minimizer of [`error_bound`] over `h > 0`.
pub fn optimal_step(mu: f64, sigma: f64, shots: u64) -> Result<f64> {
    check_positive("curvature bound mu", mu)?;
    check_positive("noise bound sigma", sigma)?;
    if shots == 0 {
        return Err(Error::Budget("shot budget must be at least 1".into()));
    }
    Ok(8f64.powf(0.25) * sigma.sqrt() / (mu.sqrt() * (shots as f64).powf(0.25)))
}

/// Rescales a step tuned at `test_shots` to `target_shots`.
pub fn scale_step(h_test: f64, test_shots: u64, target_shots: u64) -> Result<f64> {
    check_positive("test step", h_test)?;
    if test_shots == 0 || target_shots == 0 {
        return Err(Error::Argument("shot budgets must be at least 1".into()));
    }
    Ok(h_test * (test_shots as f64 / target_shots as f64).powf(0.25))
}

/// Fraction of shots saved when `used` shots replace `reference`.
pub fn measurement_reduction(used: u64, reference: u64) -> f64 {
    1.0 - used as f64 / reference as f64
}

/// Mean of the last `window` values.
pub fn profile(values: &[f64], window: usize) -> Result<f64> {
    if window == 0 || values.len() < window {
        return Err(Error::Argument(format!(
            "profile window {window} needs at least that many values, trace has {}",
            values.len()
        )));
    }
    let tail = &values[values.len() - window..];
    Ok(tail.iter().sum::<f64>() / window as f64)
}

/// Mean noisy energy over the last `window` iterations of a run.
pub fn performance_profile(trace: &RunTrace, window: usize) -> Result<f64> {
    profile(&trace.noisy_energies(), window)
}

/// Grid-search settings; `target_shots` defaults to the recipe's budget and
/// `test_iterations` to the recipe's iteration count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunerSettings {
    pub candidates: Vec<f64>,
    pub test_shots: u64,
    #[serde(default)]
    pub target_shots: Option<u64>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default)]
    pub test_iterations: Option<usize>,
}

fn default_runs() -> usize {
    5
}

fn default_window() -> usize {
    DEFAULT_WINDOW
}

#[derive(Debug, Clone)]
pub struct TunerConfig {
    pub settings: TunerSettings,
    /// Run recipe for every trial; its step source is ignored.
    pub recipe: RunConfig,
}

impl TunerConfig {
    pub fn target_shots(&self) -> u64 {
        self.settings.target_shots.unwrap_or(self.recipe.shots)
    }

    pub fn test_iterations(&self) -> usize {
        self.settings.test_iterations.unwrap_or(self.recipe.iterations)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.settings;
        if s.candidates.is_empty() {
            return Err(Error::Config("candidate set is empty".into()));
        }
        if let Some(h) = s.candidates.iter().find(|h| !(**h > 0.0) || !h.is_finite()) {
            return Err(Error::Config(format!("candidate step {h} is not positive")));
        }
        if s.test_shots == 0 {
            return Err(Error::Config("test budget must be at least 1 shot".into()));
        }
        if s.test_shots > self.target_shots() {
            return Err(Error::Config(format!(
                "test budget {} exceeds target budget {}",
                s.test_shots,
                self.target_shots()
            )));
        }
        if s.runs == 0 {
            return Err(Error::Config("runs per candidate must be at least 1".into()));
        }
        if s.window == 0 || s.window > self.test_iterations() {
            return Err(Error::Config(format!(
                "profile window {} must be within 1..={}",
                s.window,
                self.test_iterations()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub step: f64,
    /// Mean profile over trials; `None` when any trial failed.
    pub score: Option<f64>,
    pub trial_profiles: Vec<Option<f64>>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunerResult {
    pub h_hat: f64,
    pub h_n: f64,
    pub test_shots: u64,
    pub target_shots: u64,
    pub runs_per_candidate: usize,
    pub window: usize,
    pub test_iterations: usize,
    pub profiles: Vec<CandidateScore>,
    /// Every shot spent by the trial runs: |S| R T (d + 1) shots-per-evaluation.
    pub shots_spent_tuning: u64,
    /// Trial overhead counted once per objective evaluation: |S| R N_test.
    pub tuning_shots_per_evaluation: u64,
    /// `tuning_shots_per_evaluation` plus the target budget.
    pub combined_shots_per_evaluation: u64,
}

/// Grid search over the candidate steps followed by budget rescaling.
///
/// Trials are scored on their noisy energies. Candidates whose trials fail are
/// scored as +infinity; ties go to the larger step.
pub fn tune(config: &TunerConfig) -> Result<TunerResult> {
    config.validate()?;
    let s = &config.settings;
    let iterations = config.test_iterations();
    let mut recipe = config.recipe.clone();
    recipe.shots = s.test_shots;
    recipe.iterations = iterations;
    recipe.window = s.window;

    let jobs: Vec<(usize, usize)> = (0..s.candidates.len())
        .flat_map(|c| (0..s.runs).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Result<RunTrace>> = jobs
        .par_iter()
        .map(|&(c, r)| {
            let stream = TUNING_STREAM_BASE + (c * s.runs + r) as u64;
            run_trial(&recipe, s.candidates[c], stream, None)
        })
        .collect();

    let d = recipe.ansatz.n_params() as u64;
    let per_eval = recipe.shots_per_evaluation()?;
    let mut profiles = Vec::with_capacity(s.candidates.len());
    for (c, &step) in s.candidates.iter().enumerate() {
        let mut trial_profiles = Vec::with_capacity(s.runs);
        let mut failures = Vec::new();
        for r in 0..s.runs {
            match &outcomes[c * s.runs + r] {
                Ok(trace) => {
                    let p = performance_profile(trace, s.window)?;
                    if p.is_finite() {
                        trial_profiles.push(Some(p));
                    } else {
                        trial_profiles.push(None);
                        failures.push(format!("trial {r}: non-finite profile"));
                    }
                }
                Err(e) => {
                    trial_profiles.push(None);
                    failures.push(format!("trial {r}: {e}"));
                }
            }
        }
        let score = if failures.is_empty() {
            Some(trial_profiles.iter().flatten().sum::<f64>() / s.runs as f64)
        } else {
            None
        };
        profiles.push(CandidateScore {
            step,
            score,
            trial_profiles,
            failures,
        });
    }

    let key = |c: &CandidateScore| c.score.unwrap_or(f64::INFINITY);
    let best = profiles
        .iter()
        .reduce(|best, c| {
            let (a, b) = (key(best), key(c));
            if b < a || (b == a && c.step > best.step) {
                c
            } else {
                best
            }
        })
        .expect("candidate set checked non-empty");
    let h_hat = best.step;
    let target = config.target_shots();
    let n_candidates = s.candidates.len() as u64;
    let tuning_per_eval = n_candidates * s.runs as u64 * s.test_shots;
    Ok(TunerResult {
        h_hat,
        h_n: scale_step(h_hat, s.test_shots, target)?,
        test_shots: s.test_shots,
        target_shots: target,
        runs_per_candidate: s.runs,
        window: s.window,
        test_iterations: iterations,
        shots_spent_tuning: n_candidates * s.runs as u64 * iterations as u64 * (d + 1) * per_eval,
        tuning_shots_per_evaluation: tuning_per_eval,
        combined_shots_per_evaluation: tuning_per_eval + target,
        profiles,
    })
}
