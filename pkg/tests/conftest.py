"""Shared fixtures and independent oracles.

The oracles here build Pauli matrices from Kronecker products and stabilizer
states from Clifford-group orbits, so they share no code path with the
matrix-free routines under test.
"""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from stabtest.weyl import QuantumState

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)


def kron_weyl(x: int, n: int) -> np.ndarray:
    """i^{a.b} X^a Z^b as a Kronecker product; qubit j is bit j of the index."""
    a, b = x & ((1 << n) - 1), x >> n
    out = np.eye(1, dtype=complex)
    for j in reversed(range(n)):
        factor = (X2 if a >> j & 1 else I2) @ (Z2 if b >> j & 1 else I2)
        out = np.kron(out, factor)
    return (1j ** (bin(a & b).count("1") % 4)) * out


def random_state(n: int, rng: np.random.Generator) -> QuantumState:
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState.from_amplitudes(z, normalize=True)


def _normalize_phase(v: np.ndarray) -> tuple:
    k = int(np.flatnonzero(np.abs(v) > 1e-9)[0])
    v = v * np.exp(-1j * np.angle(v[k]))
    return tuple(np.round(v, 9).tolist())


def clifford_orbit_states(n: int) -> list[np.ndarray]:
    """All n-qubit stabilizer states as the orbit of |0...0> under H, S, CNOT."""
    H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    S = np.diag([1, 1j])
    gates = []
    for j in range(n):
        for g in (H, S):
            op = np.eye(1, dtype=complex)
            for q in reversed(range(n)):
                op = np.kron(op, g if q == j else I2)
            gates.append(op)
    dim = 1 << n
    for c, t in product(range(n), repeat=2):
        if c != t:
            P = np.zeros((dim, dim))
            for e in range(dim):
                P[e ^ (1 << t) if e >> c & 1 else e, e] = 1
            gates.append(P)
    start = np.zeros(dim, dtype=complex)
    start[0] = 1
    seen = {_normalize_phase(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gates:
                w = g @ v
                key = _normalize_phase(w)
                if key not in seen:
                    seen[key] = w
                    nxt.append(w)
        frontier = nxt
    return list(seen.values())


SINGLE_QUBIT_STABILIZERS = [
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
    np.array([1, -1], dtype=complex) / np.sqrt(2),
    np.array([1, 1j], dtype=complex) / np.sqrt(2),
    np.array([1, -1j], dtype=complex) / np.sqrt(2),
]


def brute_force_fidelity(psi: np.ndarray, stabilizers) -> float:
    return max(abs(np.vdot(phi, psi)) ** 2 for phi in stabilizers)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


# -- acceptance report --------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
