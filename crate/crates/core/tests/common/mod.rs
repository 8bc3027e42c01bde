//! Dense reference implementations built from Kronecker products, independent
//! of the bit-twiddling kernels in the library.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(ch: char) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    match ch {
        'I' => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => CMat::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        'Z' => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad Pauli letter {ch}"),
    }
}

/// Kronecker product with the first factor acting on the most significant bit.
pub fn kron_all(factors: &[CMat]) -> CMat {
    let mut out = CMat::from_element(1, 1, c(1.0, 0.0));
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

pub fn string_matrix(label: &str) -> CMat {
    kron_all(&label.chars().map(pauli_2x2).collect::<Vec<_>>())
}

pub fn dense_hamiltonian(terms: &[(f64, String)]) -> CMat {
    let n = terms[0].1.len();
    let mut m = CMat::zeros(1 << n, 1 << n);
    for (coef, label) in terms {
        m += string_matrix(label) * c(*coef, 0.0);
    }
    m
}

pub fn single_qubit(n: usize, q: usize, u: &CMat) -> CMat {
    let factors: Vec<CMat> = (0..n).map(|i| if i == q { u.clone() } else { pauli_2x2('I') }).collect();
    kron_all(&factors)
}

pub fn ry_matrix(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

pub fn rz_matrix(theta: f64) -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
    )
}

/// `|0><0| x I + |1><1| x X` placed on (control, target).
pub fn cnot_matrix(n: usize, control: usize, target: usize) -> CMat {
    let p0 = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let p1 = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let a: Vec<CMat> = (0..n).map(|i| if i == control { p0.clone() } else { pauli_2x2('I') }).collect();
    let b: Vec<CMat> = (0..n)
        .map(|i| {
            if i == control {
                p1.clone()
            } else if i == target {
                pauli_2x2('X')
            } else {
                pauli_2x2('I')
            }
        })
        .collect();
    kron_all(&a) + kron_all(&b)
}

/// `exp(-i theta P)` by eigen-decomposition of the Hermitian generator.
pub fn expm_hermitian(generator: &CMat, theta: f64) -> CMat {
    let eig = generator.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -theta * l)));
    v * d * v.adjoint()
}

pub fn basis_vector(bits: &[bool]) -> CVec {
    let n = bits.len();
    let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let mut v = CVec::zeros(1 << n);
    v[idx] = c(1.0, 0.0);
    v
}

pub fn expectation(m: &CMat, psi: &CVec) -> f64 {
    (psi.adjoint() * m * psi)[(0, 0)].re
}

pub fn pauli_label(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop::sample::select(vec!['I', 'X', 'Y', 'Z']), n).prop_map(|v| v.into_iter().collect())
}

pub fn non_identity_label(n: usize) -> impl Strategy<Value = String> {
    pauli_label(n).prop_filter("non-identity", |s| s.chars().any(|ch| ch != 'I'))
}

/// Random Hamiltonians on 1..=max_qubits qubits with 1..=max_terms terms.
pub fn hamiltonian_terms(max_qubits: usize, max_terms: usize) -> impl Strategy<Value = Vec<(f64, String)>> {
    (1..=max_qubits).prop_flat_map(move |n| proptest::collection::vec((-2.0f64..2.0, pauli_label(n)), 1..=max_terms))
}

pub fn to_hamiltonian(terms: &[(f64, String)]) -> vqe_step::Hamiltonian {
    let refs: Vec<(f64, &str)> = terms.iter().map(|(c, l)| (*c, l.as_str())).collect();
    vqe_step::Hamiltonian::from_labels(&refs).unwrap()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}
