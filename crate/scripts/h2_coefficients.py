#!/usr/bin/env python3
"""Two-qubit H2 model coefficients from minimal-basis (STO-6G) integrals.

Computes the one- and two-electron integrals over two hydrogen 1s
contracted Gaussians, forms the symmetry-adapted sigma_g / sigma_u
orbitals, and maps the four two-electron Sz=0 configurations onto two
qubits (qubit 0 is the leftmost label character):

    |01> closed-shell sigma_g^2 (Hartree-Fock reference)
    |10> closed-shell sigma_u^2 (double excitation)
    |00> open-shell singlet
    |11> open-shell triplet (Ms = 0)

The double-excitation coupling K_gu is split evenly over X0X1 and Y0Y1.
Energies include nuclear repulsion. Output is the Hamiltonian text format.
"""
import math
import sys

import numpy as np
from scipy.special import erf

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

# STO-6G hydrogen 1s (exponent, contraction coefficient)
STO6G_H = [
    (35.52322122, 0.00916359628),
    (6.513143725, 0.04936149294),
    (1.822142904, 0.16853830490),
    (0.625955266, 0.37056279970),
    (0.243076747, 0.41649152980),
    (0.100112428, 0.13033408410),
]


def boys0(t):
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * erf(math.sqrt(t))


def norm(a):
    return (2.0 * a / math.pi) ** 0.75


def prim_overlap(a, b, rab2):
    p = a + b
    return (math.pi / p) ** 1.5 * math.exp(-a * b / p * rab2)


def prim_kinetic(a, b, rab2):
    p = a + b
    mu = a * b / p
    return mu * (3.0 - 2.0 * mu * rab2) * prim_overlap(a, b, rab2)


def prim_nuclear(a, b, ra, rb, rc):
    p = a + b
    rp = (a * ra + b * rb) / p
    rab2 = float(np.sum((ra - rb) ** 2))
    rpc2 = float(np.sum((rp - rc) ** 2))
    return -2.0 * math.pi / p * math.exp(-a * b / p * rab2) * boys0(p * rpc2)


def prim_eri(a, b, c, d, ra, rb, rc, rd):
    p = a + b
    q = c + d
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    rab2 = float(np.sum((ra - rb) ** 2))
    rcd2 = float(np.sum((rc - rd) ** 2))
    rpq2 = float(np.sum((rp - rq) ** 2))
    pre = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
    return pre * math.exp(-a * b / p * rab2 - c * d / q * rcd2) * boys0(p * q / (p + q) * rpq2)


def contracted(fn, centers):
    total = 0.0
    prims = [[(a, c * norm(a)) for a, c in STO6G_H] for _ in centers]
    import itertools
    for combo in itertools.product(*prims):
        coef = 1.0
        exps = []
        for a, c in combo:
            coef *= c
            exps.append(a)
        total += coef * fn(*exps)
    return total


def main():
    bond = float(sys.argv[1]) if len(sys.argv) > 1 else 1.75
    r = bond * ANGSTROM_TO_BOHR
    centers = [np.zeros(3), np.array([0.0, 0.0, r])]
    n = 2
    S = np.zeros((n, n))
    Hc = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ri, rj = centers[i], centers[j]
            rij2 = float(np.sum((ri - rj) ** 2))
            S[i, j] = contracted(lambda a, b: prim_overlap(a, b, rij2), [0, 1])
            t = contracted(lambda a, b: prim_kinetic(a, b, rij2), [0, 1])
            v = sum(
                contracted(lambda a, b, rc=rc: prim_nuclear(a, b, ri, rj, rc), [0, 1])
                for rc in centers
            )
            Hc[i, j] = t + v
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    eri[i, j, k, l] = contracted(
                        lambda a, b, c, d: prim_eri(
                            a, b, c, d, centers[i], centers[j], centers[k], centers[l]
                        ),
                        [0, 1, 2, 3],
                    )
    s = S[0, 1]
    C = np.array(
        [
            [1.0 / math.sqrt(2 * (1 + s)), 1.0 / math.sqrt(2 * (1 - s))],
            [1.0 / math.sqrt(2 * (1 + s)), -1.0 / math.sqrt(2 * (1 - s))],
        ]
    )
    h = C.T @ Hc @ C
    mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", C, C, C, C, eri)
    enuc = 1.0 / r
    hgg, huu = h[0, 0], h[1, 1]
    jgg, juu, jgu, kgu = mo[0, 0, 0, 0], mo[1, 1, 1, 1], mo[0, 0, 1, 1], mo[0, 1, 1, 0]
    e_hf = 2 * hgg + jgg + enuc
    e_d = 2 * huu + juu + enuc
    e_singlet = hgg + huu + jgu + kgu + enuc
    e_triplet = hgg + huu + jgu - kgu + enuc
    d00, d01, d10, d11 = e_singlet, e_hf, e_d, e_triplet
    g0 = (d00 + d01 + d10 + d11) / 4
    g1 = (d00 + d01 - d10 - d11) / 4
    g2 = (d00 - d01 + d10 - d11) / 4
    g3 = (d00 - d01 - d10 + d11) / 4
    g4 = g5 = kgu / 2
    print(f"# H2 two-qubit model, STO-6G, bond length {bond} angstrom")
    print(f"# Hartree-Fock {e_hf:.10f}  full CI {0.5*(e_hf+e_d) - math.hypot(0.5*(e_hf-e_d), kgu):.10f}")
    print("# generated by scripts/h2_coefficients.py")
    for c, label in [(g0, "II"), (g1, "ZI"), (g2, "IZ"), (g3, "ZZ"), (g4, "YY"), (g5, "XX")]:
        print(f"{c:.12f} {label}")


if __name__ == "__main__":
    main()
