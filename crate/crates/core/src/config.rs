//! JSON experiment documents.
//!
//! ```json
//! {
//!   "hamiltonian": {"builtin": "h2"},
//!   "ansatz": {"builtin": "h2_uccsd"},
//!   "optimizer": {"kind": "adam", "gamma0": 0.1},
//!   "schedule": {"kind": "cosine"},
//!   "iterations": 200,
//!   "shots": 360,
//!   "step_size": 0.398,
//!   "noise_backend": "sampled",
//!   "seed": 7,
//!   "repeats": 30,
//!   "output_dir": "out/h2"
//! }
//! ```
//!
//! `step_size` may also be `"qugstep"` (settings from the `qugstep` block) or
//! `{"bound_optimal": {"mu": 1.2, "sigma": 0.5}}` with either bound omitted to use
//! the curvature bound and the exact initial sigma. Relative file paths are
//! resolved against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{builtin_h2, builtin_h2_from_file, builtin_hw_efficient, GradientMethod, OptimizerSpec, RunConfig, StepSource};
use crate::measurement::{BackendKind, ShotInterpretation};
use crate::pauli::{Hamiltonian, PauliString};
use crate::simulator::{Ansatz, Gate};
use crate::optimize::ScheduleKind;
use crate::tuner::{TunerSettings, DEFAULT_WINDOW};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSource {
    /// `"h2"`, optionally with a coefficient file overriding the shipped one.
    Builtin {
        builtin: String,
        #[serde(default)]
        file: Option<PathBuf>,
    },
    File { file: PathBuf },
    Terms { terms: Vec<(f64, String)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitSpec {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Default for InitSpec {
    fn default() -> Self {
        InitSpec::Scalar(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case")]
pub enum BuiltinAnsatz {
    H2Uccsd {
        #[serde(default)]
        init: InitSpec,
    },
    HwEfficient {
        #[serde(default)]
        qubits: Option<usize>,
        layers: usize,
        #[serde(default)]
        two_rotations: bool,
        #[serde(default)]
        init: InitSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnsatzSpec {
    Builtin(BuiltinAnsatz),
    Explicit {
        reference: String,
        n_params: usize,
        gates: Vec<Gate>,
        #[serde(default)]
        init: InitSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScheduleSpec {
    #[serde(default)]
    pub kind: ScheduleKind,
    #[serde(default)]
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundOptimalSpec {
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepSpec {
    Fixed(f64),
    Keyword(String),
    BoundOptimal { bound_optimal: BoundOptimalSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub hamiltonian: HamiltonianSource,
    pub ansatz: AnsatzSpec,
    pub optimizer: OptimizerSpec,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    #[serde(default)]
    pub iterations: Option<usize>,
    pub shots: u64,
    #[serde(default)]
    pub shot_interpretation: ShotInterpretation,
    #[serde(default)]
    pub step_size: Option<StepSpec>,
    #[serde(default)]
    pub qugstep: Option<TunerSettings>,
    #[serde(default)]
    pub noise_backend: BackendKind,
    #[serde(default)]
    pub gradient: GradientMethod,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn default_repeats() -> usize {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_window() -> usize {
    DEFAULT_WINDOW
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn init_vector(init: &InitSpec, n: usize) -> Result<Vec<f64>> {
    match init {
        InitSpec::Scalar(v) => Ok(vec![*v; n]),
        InitSpec::Vector(v) if v.len() == n => Ok(v.clone()),
        InitSpec::Vector(v) => Err(Error::Config(format!("init has {} values for {n} parameters", v.len()))),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid experiment config: {e}")))
    }

    /// Reads a config and resolves its relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        match &mut cfg.hamiltonian {
            HamiltonianSource::Builtin { file: Some(f), .. } | HamiltonianSource::File { file: f } => {
                *f = resolve(base, f);
            }
            _ => {}
        }
        cfg.output_dir = resolve(base, &cfg.output_dir);
        Ok(cfg)
    }

    pub fn build_hamiltonian(&self) -> Result<Hamiltonian> {
        match &self.hamiltonian {
            HamiltonianSource::Builtin { builtin, file } => match (builtin.as_str(), file) {
                ("h2", None) => Ok(builtin_h2()?.0),
                ("h2", Some(f)) => Ok(builtin_h2_from_file(f)?.0),
                (other, _) => Err(Error::Config(format!("unknown builtin Hamiltonian {other:?}"))),
            },
            HamiltonianSource::File { file } => Hamiltonian::from_file(file),
            HamiltonianSource::Terms { terms } => {
                let n = terms
                    .first()
                    .map(|(_, l)| l.chars().count())
                    .ok_or_else(|| Error::Config("empty term list".into()))?;
                let parsed = terms
                    .iter()
                    .map(|(c, l)| Ok((*c, PauliString::parse(l, n)?)))
                    .collect::<Result<Vec<_>>>()?;
                Hamiltonian::new(n, parsed)
            }
        }
    }

    pub fn build_ansatz(&self, n_qubits: usize) -> Result<Ansatz> {
        match &self.ansatz {
            AnsatzSpec::Builtin(BuiltinAnsatz::H2Uccsd { init }) => {
                let (_, a) = builtin_h2()?;
                let v = init_vector(init, a.n_params())?;
                a.with_initial(v)
            }
            AnsatzSpec::Builtin(BuiltinAnsatz::HwEfficient {
                qubits,
                layers,
                two_rotations,
                init,
            }) => {
                let n = qubits.unwrap_or(n_qubits);
                let a = builtin_hw_efficient(n, *layers, *two_rotations, 0.0)?;
                let v = init_vector(init, a.n_params())?;
                a.with_initial(v)
            }
            AnsatzSpec::Explicit {
                reference,
                n_params,
                gates,
                init,
            } => Ansatz::new(
                Ansatz::parse_reference(reference)?,
                gates.clone(),
                *n_params,
                init_vector(init, *n_params)?,
            ),
        }
    }

    pub fn iterations(&self) -> Result<usize> {
        match (self.iterations, self.schedule.iterations) {
            (Some(a), Some(b)) if a != b => Err(Error::Config(format!(
                "iterations {a} disagrees with schedule.iterations {b}"
            ))),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Ok(200),
        }
    }

    pub fn step_source(&self) -> Result<StepSource> {
        match (&self.step_size, &self.qugstep) {
            (Some(StepSpec::Fixed(h)), None) => Ok(StepSource::Fixed(*h)),
            (Some(StepSpec::BoundOptimal { bound_optimal }), None) => Ok(StepSource::BoundOptimal {
                mu: bound_optimal.mu,
                sigma: bound_optimal.sigma,
            }),
            (None, Some(s)) => Ok(StepSource::Qugstep(s.clone())),
            (Some(StepSpec::Keyword(k)), Some(s)) if k == "qugstep" => Ok(StepSource::Qugstep(s.clone())),
            (Some(StepSpec::Keyword(k)), _) if k != "qugstep" => {
                Err(Error::Config(format!("unknown step_size keyword {k:?}")))
            }
            (Some(StepSpec::Keyword(_)), None) => Err(Error::Config("step_size \"qugstep\" needs a qugstep block".into())),
            (None, None) => Err(Error::Config("one of step_size or qugstep is required".into())),
            _ => Err(Error::Config(
                "step_size and qugstep are both set; keep exactly one step source".into(),
            )),
        }
    }

    pub fn to_run_config(&self) -> Result<RunConfig> {
        let hamiltonian = self.build_hamiltonian()?;
        let ansatz = self.build_ansatz(hamiltonian.n_qubits())?;
        let cfg = RunConfig {
            ansatz,
            hamiltonian,
            optimizer: self.optimizer,
            schedule: self.schedule.kind,
            iterations: self.iterations()?,
            shots: self.shots,
            shot_interpretation: self.shot_interpretation,
            step: self.step_source()?,
            gradient: self.gradient,
            backend: self.noise_backend,
            seed: self.seed,
            window: self.window,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const H2: &str = r#"{
        "hamiltonian": {"builtin": "h2"},
        "ansatz": {"builtin": "h2_uccsd"},
        "optimizer": {"kind": "adam", "gamma0": 0.1},
        "schedule": {"kind": "cosine"},
        "iterations": 200,
        "shots": 360,
        "step_size": 0.398,
        "seed": 3
    }"#;

    #[test]
    fn h2_document() {
        let c = ExperimentConfig::from_json(H2).unwrap();
        let r = c.to_run_config().unwrap();
        assert_eq!(r.iterations, 200);
        assert_eq!(r.step, StepSource::Fixed(0.398));
        assert_eq!(r.ansatz.n_params(), 1);
        assert_eq!(r.optimizer.hyper.beta2, 0.999);
        assert_eq!(c.repeats, 1);
    }

    #[test]
    fn step_sources() {
        let with = |extra: &str| {
            let base = H2.replace("\"step_size\": 0.398,", extra);
            ExperimentConfig::from_json(&base).unwrap().step_source()
        };
        assert!(matches!(
            with(r#""qugstep": {"candidates": [0.1, 1], "test_shots": 9},"#),
            Ok(StepSource::Qugstep(_))
        ));
        assert!(matches!(
            with(r#""step_size": "qugstep", "qugstep": {"candidates": [1], "test_shots": 9},"#),
            Ok(StepSource::Qugstep(_))
        ));
        assert!(matches!(
            with(r#""step_size": {"bound_optimal": {"mu": 2.0}},"#),
            Ok(StepSource::BoundOptimal { mu: Some(_), sigma: None })
        ));
        assert!(matches!(with(""), Err(Error::Config(_))));
        assert!(matches!(
            with(r#""step_size": 0.1, "qugstep": {"candidates": [1], "test_shots": 9},"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = H2.replace("\"seed\": 3", "\"seed\": 3, \"sed\": 4");
        assert!(matches!(ExperimentConfig::from_json(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn explicit_terms_and_hw_ansatz() {
        let doc = r#"{
            "hamiltonian": {"terms": [[1.0, "ZI"], [0.5, "XX"]]},
            "ansatz": {"builtin": "hw_efficient", "layers": 1},
            "optimizer": {"kind": "gd", "gamma0": 0.1},
            "shots": 100,
            "step_size": 0.2
        }"#;
        let r = ExperimentConfig::from_json(doc).unwrap().to_run_config().unwrap();
        assert_eq!(r.ansatz.n_params(), 2);
        assert_eq!(r.iterations, 200);
    }
}
