//! Shot-sampled energy estimation and its exact variance.
//!
//! Random streams use ChaCha8 (`rand_chacha`). A stream is addressed by
//! `(seed, run, evaluation)`: the 64-bit seed is expanded into the ChaCha key
//! with `SeedableRng::seed_from_u64`, the run index selects the ChaCha stream
//! and the evaluation index selects a word offset of `evaluation << 32`. Each
//! evaluation therefore owns a disjoint block of 2^32 words, and estimates do
//! not depend on evaluation order or thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, MeasurementGrouping};
use crate::simulator::{exact_energy, Ansatz, StateVector};

/// RNG for one oracle evaluation of one run.
pub fn stream_rng(seed: u64, run: u64, evaluation: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng.set_word_pos((evaluation as u128) << 32);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotInterpretation {
    /// `shots` is the total for one energy evaluation, split across groups.
    #[default]
    TotalPerEvaluation,
    /// Every group receives `shots`.
    PerGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotBudget {
    pub shots: u64,
    pub interpretation: ShotInterpretation,
}

impl ShotBudget {
    pub fn new(shots: u64, interpretation: ShotInterpretation) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Budget("shot budget must be at least 1".into()));
        }
        Ok(Self { shots, interpretation })
    }

    pub fn total(shots: u64) -> Result<Self> {
        Self::new(shots, ShotInterpretation::TotalPerEvaluation)
    }

    /// Shots assigned to each of `n_groups` groups.
    pub fn allocation(&self, n_groups: usize) -> Result<Vec<u64>> {
        match self.interpretation {
            ShotInterpretation::TotalPerEvaluation => split_shots(self.shots, n_groups),
            ShotInterpretation::PerGroup => Ok(vec![self.shots; n_groups]),
        }
    }

    /// Shots consumed by a single energy evaluation.
    pub fn per_evaluation(&self, n_groups: usize) -> u64 {
        match self.interpretation {
            ShotInterpretation::TotalPerEvaluation => self.shots,
            ShotInterpretation::PerGroup => self.shots * n_groups as u64,
        }
    }
}

/// Even split with the remainder going one each to the leading groups.
pub fn split_shots(total: u64, n_groups: usize) -> Result<Vec<u64>> {
    if n_groups == 0 {
        return Err(Error::Budget("cannot split shots over zero groups".into()));
    }
    let g = n_groups as u64;
    if total < g {
        return Err(Error::Budget(format!(
            "{total} shots cannot cover {n_groups} measurement groups"
        )));
    }
    let base = total / g;
    let extra = (total % g) as usize;
    Ok((0..n_groups).map(|i| base + u64::from(i < extra)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Multinomial bitstring sampling per measurement group.
    #[default]
    Sampled,
    /// Exact energy plus a normal draw with the exact shot-noise variance.
    GaussianSurrogate,
    /// No shot noise at all.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseBackend {
    pub kind: BackendKind,
    pub seed: u64,
}

/// Per-group single-shot variances `<O_g^2> - <O_g>^2` of a normalized `state`.
pub fn group_variances(state: &StateVector, h: &Hamiltonian, grouping: &MeasurementGrouping) -> Result<Vec<f64>> {
    let dim = state.amplitudes().len();
    grouping
        .groups
        .iter()
        .map(|group| {
            let mut applied = vec![num_complex::Complex64::new(0.0, 0.0); dim];
            let mut has_terms = false;
            for &i in group {
                let term = &h.terms()[i];
                if term.string.is_identity() {
                    continue;
                }
                has_terms = true;
                let p = state.pauli_applied(&term.string)?;
                for (acc, a) in applied.iter_mut().zip(p.amplitudes()) {
                    *acc += a * term.coefficient;
                }
            }
            if !has_terms {
                return Ok(0.0);
            }
            let mean: f64 = state
                .amplitudes()
                .iter()
                .zip(&applied)
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            // ||(O - <O>) psi||^2, exactly zero on eigenstates
            Ok(state
                .amplitudes()
                .iter()
                .zip(&applied)
                .map(|(a, b)| (b - a * mean).norm_sqr())
                .sum())
        })
        .collect()
}

/// `sigma` with `Var[estimate] = sigma^2 / N` for the configured grouping and split.
pub fn exact_sigma(
    ansatz: &Ansatz,
    params: &[f64],
    h: &Hamiltonian,
    grouping: &MeasurementGrouping,
    budget: ShotBudget,
) -> Result<f64> {
    let state = ansatz.prepare(params)?;
    sigma_of_state(&state, h, grouping, budget)
}

pub fn sigma_of_state(
    state: &StateVector,
    h: &Hamiltonian,
    grouping: &MeasurementGrouping,
    budget: ShotBudget,
) -> Result<f64> {
    Ok((budget.shots as f64 * estimator_variance(state, h, grouping, budget)?).sqrt())
}

fn estimator_variance(
    state: &StateVector,
    h: &Hamiltonian,
    grouping: &MeasurementGrouping,
    budget: ShotBudget,
) -> Result<f64> {
    let variances = group_variances(state, h, grouping)?;
    let alloc = budget.allocation(grouping.len())?;
    Ok(variances
        .iter()
        .zip(&alloc)
        .map(|(v, &n)| v / n as f64)
        .sum())
}

/// Shot-budgeted noisy energy oracle for one run.
///
/// Evaluations are keyed: calling [`EnergyEstimator::estimate`] twice with the
/// same parameters and key returns the same value.
#[derive(Debug, Clone)]
pub struct EnergyEstimator<'a> {
    ansatz: &'a Ansatz,
    hamiltonian: &'a Hamiltonian,
    grouping: MeasurementGrouping,
    budget: ShotBudget,
    backend: NoiseBackend,
    run: u64,
    allocation: Vec<u64>,
    offset: f64,
    outcome_values: Vec<Vec<f64>>,
}

impl<'a> EnergyEstimator<'a> {
    pub fn new(
        ansatz: &'a Ansatz,
        hamiltonian: &'a Hamiltonian,
        budget: ShotBudget,
        backend: NoiseBackend,
        run: u64,
    ) -> Result<Self> {
        Self::with_grouping(ansatz, hamiltonian, hamiltonian.group_qubitwise(), budget, backend, run)
    }

    pub fn with_grouping(
        ansatz: &'a Ansatz,
        hamiltonian: &'a Hamiltonian,
        grouping: MeasurementGrouping,
        budget: ShotBudget,
        backend: NoiseBackend,
        run: u64,
    ) -> Result<Self> {
        if ansatz.n_qubits() != hamiltonian.n_qubits() {
            return Err(Error::Argument(format!(
                "ansatz has {} qubits, Hamiltonian has {}",
                ansatz.n_qubits(),
                hamiltonian.n_qubits()
            )));
        }
        let allocation = budget.allocation(grouping.len())?;
        if let Some(g) = allocation.iter().position(|&n| n == 0) {
            return Err(Error::Budget(format!("group {g} received zero shots")));
        }
        let n = hamiltonian.n_qubits();
        let dim = 1usize << n;
        let outcome_values = grouping
            .groups
            .iter()
            .map(|group| {
                let mut values = vec![0.0; dim];
                for &i in group {
                    let term = &hamiltonian.terms()[i];
                    if term.string.is_identity() {
                        continue;
                    }
                    // outcome bits on the term's support flip the sign
                    let mask = term.string.support().fold(0usize, |m, q| m | 1 << (n - 1 - q));
                    for (b, v) in values.iter_mut().enumerate() {
                        if (b & mask).count_ones() % 2 == 1 {
                            *v -= term.coefficient;
                        } else {
                            *v += term.coefficient;
                        }
                    }
                }
                values
            })
            .collect();
        Ok(Self {
            ansatz,
            hamiltonian,
            grouping,
            budget,
            backend,
            run,
            allocation,
            offset: hamiltonian.identity_offset(),
            outcome_values,
        })
    }

    pub fn grouping(&self) -> &MeasurementGrouping {
        &self.grouping
    }

    pub fn budget(&self) -> ShotBudget {
        self.budget
    }

    pub fn ansatz(&self) -> &Ansatz {
        self.ansatz
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        self.hamiltonian
    }

    /// Shots consumed by one call to [`EnergyEstimator::estimate`].
    pub fn shots_per_evaluation(&self) -> u64 {
        self.budget.per_evaluation(self.grouping.len())
    }

    pub fn exact(&self, params: &[f64]) -> Result<f64> {
        self.ansatz.exact_energy_at(params, self.hamiltonian)
    }

    pub fn sigma(&self, params: &[f64]) -> Result<f64> {
        exact_sigma(self.ansatz, params, self.hamiltonian, &self.grouping, self.budget)
    }

    /// Noisy energy estimate drawn from the stream of evaluation `key`.
    pub fn estimate(&self, params: &[f64], key: u64) -> Result<f64> {
        let state = self.ansatz.prepare(params)?;
        let value = match self.backend.kind {
            BackendKind::Exact => exact_energy(&state, self.hamiltonian)?,
            BackendKind::GaussianSurrogate => {
                let mut rng = stream_rng(self.backend.seed, self.run, key);
                let z: f64 = rng.sample(StandardNormal);
                let var = estimator_variance(&state, self.hamiltonian, &self.grouping, self.budget)?;
                exact_energy(&state, self.hamiltonian)? + z * var.sqrt()
            }
            BackendKind::Sampled => {
                let mut rng = stream_rng(self.backend.seed, self.run, key);
                self.sample(&state, &mut rng)?
            }
        };
        if !value.is_finite() {
            return Err(Error::Numeric(format!("energy estimate is {value}")));
        }
        Ok(value)
    }

    fn sample(&self, state: &StateVector, rng: &mut ChaCha8Rng) -> Result<f64> {
        let mut total = self.offset;
        let mut cdf = Vec::with_capacity(state.amplitudes().len());
        for ((basis, values), &shots) in self.grouping.bases.iter().zip(&self.outcome_values).zip(&self.allocation) {
            if values.iter().all(|&v| v == 0.0) {
                continue;
            }
            let mut rotated = state.clone();
            rotated.rotate_to_basis(basis)?;
            cdf.clear();
            let mut acc = 0.0;
            for p in rotated.probabilities() {
                acc += p;
                cdf.push(acc);
            }
            let last = cdf.len() - 1;
            let mut sum = 0.0;
            for _ in 0..shots {
                let u = rng.random::<f64>() * acc;
                let outcome = cdf.partition_point(|&c| c <= u).min(last);
                sum += values[outcome];
            }
            total += sum / shots as f64;
        }
        Ok(total)
    }
}

/// Stand-alone form of [`EnergyEstimator::estimate`] for a single evaluation.
pub fn sample_energy(
    ansatz: &Ansatz,
    params: &[f64],
    h: &Hamiltonian,
    grouping: &MeasurementGrouping,
    budget: ShotBudget,
    backend: NoiseBackend,
) -> Result<f64> {
    EnergyEstimator::with_grouping(ansatz, h, grouping.clone(), budget, backend, 0)?.estimate(params, 0)
}
