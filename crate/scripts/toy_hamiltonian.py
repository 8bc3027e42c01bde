"""Generate the 4-qubit toy Hamiltonian used by the optimizer comparison.

A diagonal Hamiltonian with ground state |0000> is conjugated by the
two-layer RY + CNOT-chain circuit evaluated at a point whose angles are
multiples of pi/2. The circuit is Clifford there, so the term count does not
grow, and the ground state is exactly the circuit's output at that point.

    python3 scripts/toy_hamiltonian.py > crates/core/data/toy4_hw.ham
"""

import itertools

import numpy as np

N = 4
LAYERS = 2
SEED = 1
SCALE = 0.025
OFFSET = -1.0

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]),
}


def kron(factors):
    out = np.array([[1.0]])
    for f in factors:
        out = np.kron(out, f)
    return out


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]])


def on_qubit(q, u):
    return kron([u if i == q else np.eye(2) for i in range(N)])


def cnot(control, target):
    dim = 2**N
    m = np.zeros((dim, dim))
    cb, tb = 1 << (N - 1 - control), 1 << (N - 1 - target)
    for k in range(dim):
        m[k ^ tb if k & cb else k, k] = 1
    return m


def circuit(theta):
    u = np.eye(2**N)
    i = 0
    for _ in range(LAYERS):
        for q in range(N):
            u = on_qubit(q, ry(theta[i])) @ u
            i += 1
        for q in range(N - 1):
            u = cnot(q, q + 1) @ u
    return u


def main():
    rng = np.random.default_rng(SEED)
    z_strings = [
        "".join("Z" if i in s else "I" for i in range(N))
        for k in range(1, N + 1)
        for s in itertools.combinations(range(N), k)
    ]
    # the second draw from this seed gives a well-conditioned landscape
    for _ in range(2):
        target = rng.choice([0.0, np.pi / 2, -np.pi / 2], size=N * LAYERS)
        coefficients = {}
        for label in z_strings:
            weight = label.count("Z")
            coefficients[label] = -rng.uniform(0.3, 1.0) if weight == 1 else rng.normal(0, 0.15 / weight)
    h0 = OFFSET * np.eye(2**N)
    for label, c in coefficients.items():
        h0 = h0 + SCALE * c * kron([PAULI[a] for a in label])
    u = circuit(target)
    h = u @ h0 @ u.T

    print(f"# 4-qubit toy model, ground energy {np.linalg.eigvalsh(h)[0]:.10f}")
    print("# ground state = RY/CNOT circuit (2 layers) at angles (units of pi/2): "
          + " ".join(str(int(round(t / (np.pi / 2)))) for t in target))
    for label in itertools.product("IXYZ", repeat=N):
        c = np.trace(kron([PAULI[a] for a in label]) @ h).real / 2**N
        if abs(c) > 1e-10:
            print(f"{c:.12f} {''.join(label)}")


if __name__ == "__main__":
    main()
