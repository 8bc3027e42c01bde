//! Statevector VQE simulation under shot noise, with forward-difference
//! gradients and a budget-aware choice of the finite-difference step.

pub mod config;
pub mod error;
pub mod experiment;
pub mod gradient;
pub mod measurement;
pub mod optimize;
pub mod pauli;
pub mod simulator;
pub mod tuner;

pub use error::{Error, Result};
pub use experiment::{builtin_h2, builtin_hw_efficient, ground_energy, run_vqe, sweep, RunConfig, RunTrace, StepSource, SweepAxis};
pub use measurement::{sample_energy, BackendKind, EnergyEstimator, NoiseBackend, ShotBudget, ShotInterpretation};
pub use pauli::{Hamiltonian, Pauli, PauliString};
pub use simulator::{Ansatz, Gate, StateVector};
pub use tuner::{error_bound, optimal_step, scale_step, tune, TunerConfig, TunerResult};
