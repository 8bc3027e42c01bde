//! Pauli strings, weighted-Pauli Hamiltonians and qubit-wise commuting groups.
//!
//! Qubit convention: character `i` of a label acts on qubit `i`, so the
//! leftmost letter is qubit 0. In a state vector, qubit `q` of an `n`-qubit
//! register is bit `n - 1 - q` of the basis index, which makes the binary
//! spelling of an index read in the same order as a label (`|01>` is index 1).

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register handled by dense-matrix routines unless a caller raises it.
pub const DEFAULT_QUBIT_CAP: usize = 12;

/// Coefficients below this magnitude are dropped after merging duplicates.
const DROP_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// 2x2 matrix in the computational basis, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A tensor product of single-qubit Paulis, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Argument("a Pauli string needs at least one qubit".into()));
        }
        Ok(Self { letters })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            letters: vec![Pauli::I; n_qubits.max(1)],
        }
    }

    /// Parses a label such as `"XIZY"`; the label length must equal `n_qubits`.
    pub fn parse(label: &str, n_qubits: usize) -> Result<Self> {
        let mut letters = Vec::with_capacity(n_qubits);
        for (pos, c) in label.chars().enumerate() {
            if pos >= n_qubits {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("label {label:?} is longer than {n_qubits} qubits"),
                });
            }
            let p = Pauli::from_char(c).ok_or_else(|| Error::Parse {
                position: pos,
                message: format!("invalid Pauli letter {c:?}"),
            })?;
            letters.push(p);
        }
        if letters.len() != n_qubits {
            return Err(Error::Parse {
                position: letters.len(),
                message: format!("label {label:?} has {} letters, expected {n_qubits}", letters.len()),
            });
        }
        Self::new(letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.letters.len() - 1 - qubit)
    }

    /// Basis-index bits flipped by the string (X or Y letters).
    pub fn x_mask(&self) -> usize {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |m, (q, _)| m | self.bit(q))
    }

    /// Basis-index bits that contribute a sign (Z or Y letters).
    pub fn z_mask(&self) -> usize {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| matches!(p, Pauli::Z | Pauli::Y))
            .fold(0, |m, (q, _)| m | self.bit(q))
    }

    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&p| p == Pauli::Y).count()
    }

    /// Bit-level form of the string: `P|k> = i^{#Y} (-1)^{|k & z_mask|} |k ^ x_mask>`.
    pub(crate) fn action(&self) -> PauliAction {
        let global = match self.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliAction {
            x_mask: self.x_mask(),
            z_mask: self.z_mask(),
            global,
        }
    }

    /// Letters agree or at least one is the identity on every qubit.
    pub fn qubitwise_commutes(&self, other: &PauliString) -> bool {
        self.letters
            .iter()
            .zip(&other.letters)
            .all(|(&a, &b)| a == Pauli::I || b == Pauli::I || a == b)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s, s.chars().count())
    }
}

impl TryFrom<String> for PauliString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.to_string()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub x_mask: usize,
    pub z_mask: usize,
    pub global: Complex64,
}

impl PauliAction {
    #[inline]
    pub fn phase(&self, index: usize) -> Complex64 {
        if (index & self.z_mask).count_ones() % 2 == 1 {
            -self.global
        } else {
            self.global
        }
    }

    /// Writes `P * input` into `out`.
    pub fn apply(&self, input: &[Complex64], out: &mut [Complex64]) {
        for (k, &a) in input.iter().enumerate() {
            out[k ^ self.x_mask] = self.phase(k) * a;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

/// Real-weighted sum of Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    /// Builds a Hamiltonian, merging repeated strings (first occurrence keeps
    /// its position) and dropping terms whose merged weight is negligible.
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Argument("Hamiltonian needs at least one qubit".into()));
        }
        let mut order: Vec<PauliString> = Vec::new();
        let mut weights: HashMap<PauliString, f64> = HashMap::new();
        for (c, s) in terms {
            if s.n_qubits() != n_qubits {
                return Err(Error::Argument(format!(
                    "term {s} acts on {} qubits, Hamiltonian has {n_qubits}",
                    s.n_qubits()
                )));
            }
            if !c.is_finite() {
                return Err(Error::Numeric(format!("coefficient of {s} is {c}")));
            }
            match weights.get_mut(&s) {
                Some(w) => *w += c,
                None => {
                    weights.insert(s.clone(), c);
                    order.push(s);
                }
            }
        }
        let terms = order
            .into_iter()
            .filter_map(|s| {
                let c = weights[&s];
                (c.abs() >= DROP_TOLERANCE).then_some(PauliTerm {
                    coefficient: c,
                    string: s,
                })
            })
            .collect();
        Ok(Self { n_qubits, terms })
    }

    pub fn from_labels(terms: &[(f64, &str)]) -> Result<Self> {
        let n = terms
            .first()
            .map(|(_, l)| l.chars().count())
            .ok_or_else(|| Error::Argument("no terms given".into()))?;
        let parsed = terms
            .iter()
            .map(|&(c, l)| Ok((c, PauliString::parse(l, n)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parsed)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the identity coefficients (at most one term after merging).
    pub fn identity_offset(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.string.is_identity())
            .map(|t| t.coefficient)
            .sum()
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.n_qubits,
            self.terms
                .iter()
                .map(|t| (t.coefficient * factor, t.string.clone()))
                .collect(),
        )
    }

    /// Sum of absolute coefficients, an upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Bound on |E''(theta)| for any parameter entering through a single
    /// Pauli exponential `exp(-i theta P)`: `4 * norm_bound`.
    pub fn curvature_bound(&self) -> f64 {
        4.0 * self.norm_bound()
    }

    /// Greedy first-fit partition into qubit-wise commuting groups, in term order.
    pub fn group_qubitwise(&self) -> MeasurementGrouping {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut bases: Vec<Vec<Pauli>> = Vec::new();
        for (idx, term) in self.terms.iter().enumerate() {
            let letters = term.string.letters();
            let slot = bases.iter().position(|basis| {
                basis
                    .iter()
                    .zip(letters)
                    .all(|(&b, &p)| p == Pauli::I || b == Pauli::I || b == p)
            });
            match slot {
                Some(g) => {
                    groups[g].push(idx);
                    for (b, &p) in bases[g].iter_mut().zip(letters) {
                        if p != Pauli::I {
                            *b = p;
                        }
                    }
                }
                None => {
                    groups.push(vec![idx]);
                    bases.push(letters.to_vec());
                }
            }
        }
        for basis in &mut bases {
            for b in basis.iter_mut() {
                if *b == Pauli::I {
                    *b = Pauli::Z;
                }
            }
        }
        MeasurementGrouping { groups, bases }
    }

    /// Dense `2^n x 2^n` matrix of the operator.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.dense_matrix_with_cap(DEFAULT_QUBIT_CAP)
    }

    pub fn dense_matrix_with_cap(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > cap {
            return Err(Error::Size {
                n_qubits: self.n_qubits,
                cap,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for term in &self.terms {
            let act = term.string.action();
            for col in 0..dim {
                m[(col ^ act.x_mask, col)] += act.phase(col) * term.coefficient;
            }
        }
        Ok(m)
    }

    /// Parses the whitespace-separated `<coefficient> <label>` text format.
    /// `#` starts a comment line and blank lines are skipped. Errors report
    /// the 1-based line number as their position.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                position: lineno + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(coef), Some(label), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(err(format!("expected `<coefficient> <label>`, got {line:?}")));
            };
            let c: f64 = coef
                .parse()
                .map_err(|_| err(format!("invalid coefficient {coef:?}")))?;
            let n = *n_qubits.get_or_insert(label.chars().count());
            let s = PauliString::parse(label, n)
                .map_err(|e| err(format!("label {label:?}: {e}")))?;
            terms.push((c, s));
        }
        let n = n_qubits.ok_or_else(|| Error::Parse {
            position: 0,
            message: "no terms found".into(),
        })?;
        Self::new(n, terms)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_text(&text).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position,
                message: format!("{}: line {position}: {message}", path.display()),
            },
            other => other,
        })
    }

    /// Text form accepted by [`Hamiltonian::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{:e} {}\n", t.coefficient, t.string));
        }
        out
    }
}

/// Partition of term indices into simultaneously measurable groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementGrouping {
    /// Term indices of each group, in term order.
    pub groups: Vec<Vec<usize>>,
    /// Measurement basis letter per qubit for each group (never `I`).
    pub bases: Vec<Vec<Pauli>>,
}

impl MeasurementGrouping {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}
