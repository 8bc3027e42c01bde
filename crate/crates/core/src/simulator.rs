//! Dense statevector simulation of parameterized circuits.
//!
//! Rotation conventions:
//! - `PauliRotation(P, theta)` applies the full-angle exponential
//!   `exp(-i theta P) = cos(theta) I - i sin(theta) P` (valid since `P^2 = I`).
//! - `RotY(q, theta)` and `RotZ(q, theta)` use the half-angle convention
//!   `exp(-i theta Y/2)` and `exp(-i theta Z/2)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, Pauli, PauliString, DEFAULT_QUBIT_CAP};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state; `bits[q]` is the value of qubit `q`.
    pub fn basis(bits: &[bool]) -> Result<Self> {
        let n = bits.len();
        if n == 0 || n > DEFAULT_QUBIT_CAP {
            return Err(Error::Size {
                n_qubits: n,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two. No normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Argument(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::Argument(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Applies a 2x2 unitary (row-major) to one qubit.
    pub fn apply_single(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = self.bit(qubit);
        for k in 0..self.amplitudes.len() {
            if k & mask == 0 {
                let a0 = self.amplitudes[k];
                let a1 = self.amplitudes[k | mask];
                self.amplitudes[k] = u[0][0] * a0 + u[0][1] * a1;
                self.amplitudes[k | mask] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_ry(&mut self, qubit: usize, theta: f64) -> Result<()> {
        let (s, c) = (theta / 2.0).sin_cos();
        let c = Complex64::new(c, 0.0);
        let s = Complex64::new(s, 0.0);
        self.apply_single(qubit, [[c, -s], [s, c]])
    }

    pub fn apply_rz(&mut self, qubit: usize, theta: f64) -> Result<()> {
        let e = Complex64::from_polar(1.0, -theta / 2.0);
        self.apply_single(qubit, [[e, ZERO], [ZERO, e.conj()]])
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::Argument("CNOT control equals target".into()));
        }
        let cm = self.bit(control);
        let tm = self.bit(target);
        for k in 0..self.amplitudes.len() {
            if k & cm != 0 && k & tm == 0 {
                self.amplitudes.swap(k, k | tm);
            }
        }
        Ok(())
    }

    fn check_string(&self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Argument(format!(
                "Pauli string {p} does not match {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Returns `P|psi>` as a new state.
    pub fn pauli_applied(&self, p: &PauliString) -> Result<StateVector> {
        self.check_string(p)?;
        let mut out = vec![ZERO; self.amplitudes.len()];
        p.action().apply(&self.amplitudes, &mut out);
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }

    /// `exp(-i theta P)|psi> = cos(theta)|psi> - i sin(theta) P|psi>`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        self.check_string(p)?;
        let act = p.action();
        let (s, c) = theta.sin_cos();
        let minus_i_s = Complex64::new(0.0, -s);
        let old = self.amplitudes.clone();
        for (k, &a) in old.iter().enumerate() {
            let j = k ^ act.x_mask;
            // (P psi)[j] = phase(k) * psi[k]
            self.amplitudes[j] = c * old[j] + minus_i_s * act.phase(k) * a;
        }
        Ok(())
    }

    /// `<psi|P|psi>`, real because `P` is Hermitian.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        self.check_string(p)?;
        let act = p.action();
        let v: Complex64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, &a)| self.amplitudes[k ^ act.x_mask].conj() * act.phase(k) * a)
            .sum();
        Ok(v.re)
    }

    /// Changes basis so that a computational-basis measurement of qubit `q`
    /// measures `basis[q]` (H for X, S-dagger then H for Y).
    pub fn rotate_to_basis(&mut self, basis: &[Pauli]) -> Result<()> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = [
            [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
            [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
        ];
        // H * S^dagger
        let hs = [
            [Complex64::new(r, 0.0), Complex64::new(0.0, -r)],
            [Complex64::new(r, 0.0), Complex64::new(0.0, r)],
        ];
        for (q, &b) in basis.iter().enumerate() {
            match b {
                Pauli::X => self.apply_single(q, h)?,
                Pauli::Y => self.apply_single(q, hs)?,
                Pauli::Z | Pauli::I => {}
            }
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `<psi|H|psi>` accumulated term by term.
pub fn exact_energy(state: &StateVector, h: &Hamiltonian) -> Result<f64> {
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::Argument(format!(
            "state has {} qubits, Hamiltonian has {}",
            state.n_qubits(),
            h.n_qubits()
        )));
    }
    h.terms().iter().try_fold(0.0, |acc, t| {
        Ok(acc + t.coefficient * state.pauli_expectation(&t.string)?)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    PauliRotation { pauli: PauliString, param: usize },
    RotY { qubit: usize, param: usize },
    RotZ { qubit: usize, param: usize },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn param(&self) -> Option<usize> {
        match *self {
            Gate::PauliRotation { param, .. } | Gate::RotY { param, .. } | Gate::RotZ { param, .. } => {
                Some(param)
            }
            Gate::Cnot { .. } => None,
        }
    }

    /// Half-spread `r` of the generator spectrum: the gate is `exp(-i theta G)`
    /// with eigenvalues of `G` equal to `+-r`.
    pub fn generator_radius(&self) -> Option<f64> {
        match self {
            Gate::PauliRotation { .. } => Some(1.0),
            Gate::RotY { .. } | Gate::RotZ { .. } => Some(0.5),
            Gate::Cnot { .. } => None,
        }
    }

    pub fn apply(&self, state: &mut StateVector, angle: f64) -> Result<()> {
        match self {
            Gate::PauliRotation { pauli, .. } => state.apply_pauli_rotation(pauli, angle),
            Gate::RotY { qubit, .. } => state.apply_ry(*qubit, angle),
            Gate::RotZ { qubit, .. } => state.apply_rz(*qubit, angle),
            Gate::Cnot { control, target } => state.apply_cnot(*control, *target),
        }
    }
}

/// Parameterized circuit applied to a computational-basis reference state.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    reference: Vec<bool>,
    gates: Vec<Gate>,
    n_params: usize,
    initial: Vec<f64>,
}

impl Ansatz {
    /// Validates parameter and qubit indices. `initial` becomes the default
    /// starting point of optimization runs.
    pub fn new(reference: Vec<bool>, gates: Vec<Gate>, n_params: usize, initial: Vec<f64>) -> Result<Self> {
        let n_qubits = reference.len();
        if n_qubits == 0 || n_qubits > DEFAULT_QUBIT_CAP {
            return Err(Error::Size {
                n_qubits,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        if initial.len() != n_params {
            return Err(Error::Argument(format!(
                "{} initial values for {n_params} parameters",
                initial.len()
            )));
        }
        let mut used = vec![false; n_params];
        for (i, g) in gates.iter().enumerate() {
            let bad_qubit = match g {
                Gate::PauliRotation { pauli, .. } => (pauli.n_qubits() != n_qubits).then_some(pauli.n_qubits()),
                Gate::RotY { qubit, .. } | Gate::RotZ { qubit, .. } => (*qubit >= n_qubits).then_some(*qubit),
                Gate::Cnot { control, target } => {
                    if control == target {
                        return Err(Error::Argument(format!("gate {i}: CNOT control equals target")));
                    }
                    (*control.max(target) >= n_qubits).then_some(*control.max(target))
                }
            };
            if let Some(q) = bad_qubit {
                return Err(Error::Argument(format!(
                    "gate {i} refers to qubit {q} (or size {q}) on a {n_qubits}-qubit register"
                )));
            }
            if let Some(p) = g.param() {
                if p >= n_params {
                    return Err(Error::Argument(format!(
                        "gate {i} uses parameter {p}, only {n_params} declared"
                    )));
                }
                used[p] = true;
            }
        }
        if let Some(p) = used.iter().position(|&u| !u) {
            return Err(Error::Argument(format!("parameter {p} is not used by any gate")));
        }
        Ok(Self {
            n_qubits,
            reference,
            gates,
            n_params,
            initial,
        })
    }

    /// Reference given as a bit label such as `"01"` (leftmost = qubit 0).
    pub fn parse_reference(label: &str) -> Result<Vec<bool>> {
        label
            .chars()
            .enumerate()
            .map(|(pos, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse {
                    position: pos,
                    message: format!("invalid reference bit {c:?}"),
                }),
            })
            .collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn reference(&self) -> &[bool] {
        &self.reference
    }

    pub fn initial_params(&self) -> &[f64] {
        &self.initial
    }

    pub fn with_initial(mut self, initial: Vec<f64>) -> Result<Self> {
        if initial.len() != self.n_params {
            return Err(Error::Argument(format!(
                "{} initial values for {} parameters",
                initial.len(),
                self.n_params
            )));
        }
        self.initial = initial;
        Ok(self)
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::Argument(format!(
                "expected {} parameters, got {}",
                self.n_params,
                params.len()
            )));
        }
        Ok(())
    }

    /// `U(params)|reference>`.
    pub fn prepare(&self, params: &[f64]) -> Result<StateVector> {
        self.prepare_shifted(params, None)
    }

    /// Like [`Ansatz::prepare`] but adds `shift` to the angle of gate
    /// `gate_index` only (other gates sharing its parameter are untouched).
    pub fn prepare_shifted(&self, params: &[f64], shift: Option<(usize, f64)>) -> Result<StateVector> {
        self.check_params(params)?;
        let mut state = StateVector::basis(&self.reference)?;
        for (i, g) in self.gates.iter().enumerate() {
            let mut angle = g.param().map_or(0.0, |p| params[p]);
            if let Some((gi, s)) = shift {
                if gi == i {
                    angle += s;
                }
            }
            g.apply(&mut state, angle)?;
        }
        Ok(state)
    }

    pub fn exact_energy_at(&self, params: &[f64], h: &Hamiltonian) -> Result<f64> {
        exact_energy(&self.prepare(params)?, h)
    }
}
