//! First-order optimizers and learning-rate schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Gd,
    Mgd,
    Adagrad,
    Rmsprop,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    /// Momentum coefficient for `mgd`.
    pub momentum: f64,
    /// Decay of the squared-gradient average for `rmsprop`.
    pub rho: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            momentum: 0.9,
            rho: 0.9,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    kind: OptimizerKind,
    hyper: Hyperparams,
    dim: usize,
    step: u64,
    first: Vec<f64>,
    second: Vec<f64>,
}

impl OptimizerState {
    pub fn new(kind: OptimizerKind, dim: usize, hyper: Hyperparams) -> Self {
        let first = match kind {
            OptimizerKind::Mgd | OptimizerKind::Adam => vec![0.0; dim],
            _ => Vec::new(),
        };
        let second = match kind {
            OptimizerKind::Adagrad | OptimizerKind::Rmsprop | OptimizerKind::Adam => vec![0.0; dim],
            _ => Vec::new(),
        };
        Self {
            kind,
            hyper,
            dim,
            step: 0,
            first,
            second,
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// First-moment (velocity) accumulator; empty for kinds that keep none.
    pub fn first_moment(&self) -> &[f64] {
        &self.first
    }

    pub fn second_moment(&self) -> &[f64] {
        &self.second
    }

    /// Applies one update in place and returns the new parameters.
    pub fn update(&mut self, params: &[f64], grad: &[f64], rate: f64) -> Result<Vec<f64>> {
        if params.len() != grad.len() {
            return Err(Error::Argument(format!(
                "{} parameters but {} gradient components",
                params.len(),
                grad.len()
            )));
        }
        if params.len() != self.dim {
            return Err(Error::Argument(format!(
                "optimizer state has dimension {}, update has {}",
                self.dim,
                params.len()
            )));
        }
        if !(rate >= 0.0) {
            return Err(Error::Argument(format!("learning rate must be >= 0, got {rate}")));
        }
        self.step += 1;
        let hp = self.hyper;
        let mut out = params.to_vec();
        match self.kind {
            OptimizerKind::Gd => {
                for (p, g) in out.iter_mut().zip(grad) {
                    *p -= rate * g;
                }
            }
            OptimizerKind::Mgd => {
                for ((p, g), v) in out.iter_mut().zip(grad).zip(&mut self.first) {
                    *v = hp.momentum * *v + g;
                    *p -= rate * *v;
                }
            }
            OptimizerKind::Adagrad => {
                for ((p, g), a) in out.iter_mut().zip(grad).zip(&mut self.second) {
                    *a += g * g;
                    *p -= rate * g / (a.sqrt() + hp.epsilon);
                }
            }
            OptimizerKind::Rmsprop => {
                for ((p, g), a) in out.iter_mut().zip(grad).zip(&mut self.second) {
                    *a = hp.rho * *a + (1.0 - hp.rho) * g * g;
                    *p -= rate * g / (a.sqrt() + hp.epsilon);
                }
            }
            OptimizerKind::Adam => {
                let t = self.step as i32;
                let c1 = 1.0 - hp.beta1.powi(t);
                let c2 = 1.0 - hp.beta2.powi(t);
                for (((p, g), m), v) in out.iter_mut().zip(grad).zip(&mut self.first).zip(&mut self.second) {
                    *m = hp.beta1 * *m + (1.0 - hp.beta1) * g;
                    *v = hp.beta2 * *v + (1.0 - hp.beta2) * g * g;
                    let m_hat = *m / c1;
                    let v_hat = *v / c2;
                    *p -= rate * m_hat / (v_hat.sqrt() + hp.epsilon);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Constant,
    #[default]
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub base_rate: f64,
    pub total_iterations: usize,
}

impl Schedule {
    pub fn new(kind: ScheduleKind, base_rate: f64, total_iterations: usize) -> Result<Self> {
        if !(base_rate > 0.0) || !base_rate.is_finite() {
            return Err(Error::Argument(format!("base learning rate must be positive, got {base_rate}")));
        }
        if total_iterations == 0 {
            return Err(Error::Argument("schedule needs at least one iteration".into()));
        }
        Ok(Self {
            kind,
            base_rate,
            total_iterations,
        })
    }

    /// Cosine decay `base * 0.5 (cos(pi t / T) + 1)`, defined for `0 <= t <= T`.
    pub fn rate_at(&self, t: usize) -> Result<f64> {
        if t > self.total_iterations {
            return Err(Error::Argument(format!(
                "iteration {t} is past the schedule end {}",
                self.total_iterations
            )));
        }
        Ok(match self.kind {
            ScheduleKind::Constant => self.base_rate,
            ScheduleKind::Cosine => {
                let frac = t as f64 / self.total_iterations as f64;
                self.base_rate * 0.5 * ((std::f64::consts::PI * frac).cos() + 1.0)
            }
        })
    }
}
