//! Forward finite-difference gradients against a noisy objective, plus exact
//! derivative routines used as noiseless references.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::EnergyEstimator;
use crate::pauli::{Hamiltonian, PauliString};
use crate::simulator::{Ansatz, Gate, StateVector};

/// An objective evaluated with keyed randomness: each key names an
/// independent noise draw, so evaluations can run in any order.
pub trait NoisyObjective {
    fn evaluate(&self, params: &[f64], key: u64) -> Result<f64>;

    fn shots_per_evaluation(&self) -> u64 {
        0
    }
}

impl NoisyObjective for EnergyEstimator<'_> {
    fn evaluate(&self, params: &[f64], key: u64) -> Result<f64> {
        self.estimate(params, key)
    }

    fn shots_per_evaluation(&self) -> u64 {
        EnergyEstimator::shots_per_evaluation(self)
    }
}

/// Adapts a closure `f(params, key)` into an objective that spends no shots.
pub struct FnObjective<F>(pub F);

impl<F: Fn(&[f64], u64) -> Result<f64>> NoisyObjective for FnObjective<F> {
    fn evaluate(&self, params: &[f64], key: u64) -> Result<f64> {
        (self.0)(params, key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub values: Vec<f64>,
    pub evaluations_used: usize,
    pub shots_used: u64,
    /// The shared noisy value at the unperturbed point.
    pub baseline_energy: f64,
}

impl GradientEstimate {
    pub fn inf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `(f(theta + h e_i) - f(theta)) / h` for every component, with one shared
/// baseline evaluation: `d + 1` calls in total. The baseline uses key
/// `key_base`, component `i` uses `key_base + 1 + i`.
pub fn forward_diff<O: NoisyObjective + ?Sized>(
    objective: &O,
    params: &[f64],
    h: f64,
    key_base: u64,
) -> Result<GradientEstimate> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Argument(format!("step size must be positive and finite, got {h}")));
    }
    if let Some(i) = params.iter().position(|p| !p.is_finite()) {
        return Err(Error::Numeric(format!("parameter {i} is {}", params[i])));
    }
    let check = |v: f64, what: &str| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("objective returned {v} at {what}")))
        }
    };
    let baseline = check(objective.evaluate(params, key_base)?, "the baseline point")?;
    let mut shifted = params.to_vec();
    let mut values = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        shifted[i] = params[i] + h;
        let e = check(
            objective.evaluate(&shifted, key_base + 1 + i as u64)?,
            &format!("component {i}"),
        )?;
        shifted[i] = params[i];
        values.push((e - baseline) / h);
    }
    let evaluations_used = params.len() + 1;
    Ok(GradientEstimate {
        values,
        evaluations_used,
        shots_used: evaluations_used as u64 * objective.shots_per_evaluation(),
        baseline_energy: baseline,
    })
}

/// Exact gradient by the two-term shift rule applied per gate occurrence:
/// a gate `exp(-i theta G)` with generator eigenvalues `+-r` contributes
/// `r [E(theta + pi/(4r)) - E(theta - pi/(4r))]`.
pub fn parameter_shift_grad(ansatz: &Ansatz, params: &[f64], h: &Hamiltonian) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; ansatz.n_params()];
    for (gi, gate) in ansatz.gates().iter().enumerate() {
        let Some(p) = gate.param() else { continue };
        let r = gate
            .generator_radius()
            .ok_or_else(|| Error::Capability(format!("gate {gi} has no two-eigenvalue generator")))?;
        let shift = std::f64::consts::PI / (4.0 * r);
        let plus = crate::simulator::exact_energy(&ansatz.prepare_shifted(params, Some((gi, shift)))?, h)?;
        let minus = crate::simulator::exact_energy(&ansatz.prepare_shifted(params, Some((gi, -shift)))?, h)?;
        grad[p] += r * (plus - minus);
    }
    Ok(grad)
}

/// Dense pieces of a one-parameter `exp(-i theta P)` circuit: the state just
/// before the rotation, the generator `P`, and `H` conjugated by every gate
/// applied after the rotation.
struct SingleRotation {
    before: DVector<Complex64>,
    generator: DMatrix<Complex64>,
    effective_h: DMatrix<Complex64>,
}

fn single_rotation(ansatz: &Ansatz, h: &Hamiltonian) -> Result<SingleRotation> {
    let rotations: Vec<usize> = ansatz
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.param().is_some())
        .map(|(i, _)| i)
        .collect();
    let [index] = rotations[..] else {
        return Err(Error::Capability(format!(
            "commutator derivatives need exactly one parameterized gate, found {}",
            rotations.len()
        )));
    };
    let Gate::PauliRotation { pauli, .. } = &ansatz.gates()[index] else {
        return Err(Error::Capability("the parameterized gate must be a Pauli rotation".into()));
    };
    let mut state = StateVector::basis(ansatz.reference())?;
    for g in &ansatz.gates()[..index] {
        g.apply(&mut state, 0.0)?;
    }
    let before = DVector::from_column_slice(state.amplitudes());
    let generator = pauli_matrix(pauli)?;
    let dim = 1usize << ansatz.n_qubits();
    let mut post = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[col] = Complex64::new(1.0, 0.0);
        let mut basis = StateVector::from_amplitudes(amps)?;
        for g in &ansatz.gates()[index + 1..] {
            g.apply(&mut basis, 0.0)?;
        }
        post.set_column(col, &DVector::from_column_slice(basis.amplitudes()));
    }
    let hm = h.dense_matrix()?;
    let effective_h = post.adjoint() * hm * &post;
    Ok(SingleRotation {
        before,
        generator,
        effective_h,
    })
}

fn pauli_matrix(p: &PauliString) -> Result<DMatrix<Complex64>> {
    Hamiltonian::new(p.n_qubits(), vec![(1.0, p.clone())])?.dense_matrix()
}

impl SingleRotation {
    fn state_at(&self, theta: f64) -> DVector<Complex64> {
        let (s, c) = theta.sin_cos();
        &self.before * Complex64::new(c, 0.0) - (&self.generator * &self.before) * Complex64::new(0.0, s)
    }

    fn expectation(&self, op: &DMatrix<Complex64>, theta: f64) -> Complex64 {
        let psi = self.state_at(theta);
        (psi.adjoint() * op * &psi)[(0, 0)]
    }
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// `dE/dtheta = i <psi(theta)| [P, H] |psi(theta)>` for a single `exp(-i theta P)`.
pub fn first_derivative_exact(ansatz: &Ansatz, theta: f64, h: &Hamiltonian) -> Result<f64> {
    let parts = single_rotation(ansatz, h)?;
    let c = commutator(&parts.generator, &parts.effective_h);
    Ok((Complex64::new(0.0, 1.0) * parts.expectation(&c, theta)).re)
}

/// `d^2E/dtheta^2 = -<psi(theta)| [P, [P, H]] |psi(theta)>` for a single `exp(-i theta P)`.
pub fn second_derivative_exact(ansatz: &Ansatz, theta: f64, h: &Hamiltonian) -> Result<f64> {
    let parts = single_rotation(ansatz, h)?;
    let inner = commutator(&parts.generator, &parts.effective_h);
    let nested = commutator(&parts.generator, &inner);
    Ok(-parts.expectation(&nested, theta).re)
}
