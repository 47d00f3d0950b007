"""Weyl operators W_x = i^{a.b} X^a Z^b acting on dense statevectors.

Amplitude index e has bit j equal to the computational value of qubit j,
matching the packed layout of :mod:`stabtest.f2`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .caps import check_cap
from .errors import ConfigurationError, DimensionError, NumericalIntegrityError
from .f2 import PauliIndex, unpack

NORM_TOL = 1e-10
EXPECTATION_TOL = 1e-10

_I_POW = np.array([1, 1j, -1, -1j])


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A normalized pure state on n qubits; ``amplitudes`` is read-only."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).ravel()
        if amps.size != 1 << self.n:
            raise DimensionError(f"expected {1 << self.n} amplitudes, got {amps.size}")
        check_cap("state", self.n, "QuantumState")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or abs(norm - 1.0) > NORM_TOL:
            raise NumericalIntegrityError(f"state norm {norm!r} differs from 1 by more than {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> QuantumState:
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        size = amps.size
        if size == 0 or size & (size - 1):
            raise DimensionError(f"amplitude count {size} is not a power of two")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0 or not np.isfinite(norm):
                raise NumericalIntegrityError("cannot normalize a zero or non-finite vector")
            amps = amps / norm
        return cls(size.bit_length() - 1, amps)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> QuantumState:
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    def tensor(self, other: QuantumState) -> QuantumState:
        """``self`` on the low qubits, ``other`` on the following ones."""
        return QuantumState(self.n + other.n, np.kron(other.amplitudes, self.amplitudes))

    def overlap(self, other: QuantumState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantumState):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


def t_state() -> QuantumState:
    return QuantumState(1, np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2))


def _check_n(s: QuantumState, x: PauliIndex) -> None:
    if s.n != x.n:
        raise DimensionError(f"state has {s.n} qubits, Pauli has {x.n}")


def apply_weyl_array(psi: np.ndarray, x: int, n: int) -> np.ndarray:
    """(W_x psi)(e ^ a) = i^{a.b} (-1)^{b.e} psi(e) for packed x = (a, b)."""
    a, b = unpack(x, n)
    e = np.arange(1 << n)
    signs = 1 - 2 * (np.bitwise_count(e & b).astype(np.int64) & 1)
    out = np.empty_like(psi)
    out[e ^ a] = _I_POW[(a & b).bit_count() % 4] * signs * psi
    return out


def apply_weyl(s: QuantumState, x: PauliIndex) -> QuantumState:
    _check_n(s, x)
    return QuantumState(s.n, apply_weyl_array(s.amplitudes, x.bits, s.n))


def expectation_bits(psi: np.ndarray, x: int, n: int) -> float:
    val = np.vdot(psi, apply_weyl_array(psi, x, n))
    if abs(val.imag) > EXPECTATION_TOL:
        raise NumericalIntegrityError(f"<W_x> has imaginary part {val.imag:.3e}")
    return float(val.real)


def weyl_expectation(s: QuantumState, x: PauliIndex) -> float:
    """<s|W_x|s>, real and in [-1, 1]."""
    _check_n(s, x)
    return expectation_bits(s.amplitudes, x.bits, s.n)


def product_phase(x, y, n: int):
    """t with W_x W_y = i^t W_{x^y}; works elementwise on int arrays."""
    mask = (1 << n) - 1
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    a, b = x & mask, x >> n
    a2, b2 = y & mask, y >> n
    def pc(v):
        return np.bitwise_count(v).astype(np.int64)

    t = pc(a & b) + pc(a2 & b2) + 2 * pc(b & a2) - pc((a ^ a2) & (b ^ b2))
    return np.mod(t, 4).astype(np.int64)


def weyl_product_phase(x: PauliIndex, y: PauliIndex) -> int:
    if x.n != y.n:
        raise DimensionError(f"qubit counts differ: {x.n} vs {y.n}")
    return int(product_phase(x.bits, y.bits, x.n))


def weyl_matrix(x: PauliIndex) -> np.ndarray:
    """Dense 2^n x 2^n matrix of W_x, built column by column from :func:`apply_weyl_array`."""
    dim = 1 << x.n
    if x.n > 10:
        raise ConfigurationError("dense Weyl matrices are limited to n <= 10")
    return np.stack([apply_weyl_array(np.eye(dim, dtype=np.complex128)[:, c], x.bits, x.n) for c in range(dim)], axis=1)


def project_stabilizer(psi: np.ndarray, generators, signs, n: int) -> np.ndarray:
    """Apply prod_i (I + (-1)^{s_i} W_{g_i}) / 2 to ``psi`` (unnormalized result)."""
    out = np.array(psi, dtype=np.complex128)
    for g, s in zip(generators, signs):
        out = 0.5 * (out + (-1) ** int(s) * apply_weyl_array(out, int(g), n))
    return out


def stabilizer_state(generators, signs, n: int) -> QuantumState:
    """The joint eigenstate of commuting, independent W_{g_i} with eigenvalues (-1)^{s_i}."""
    generators = list(generators)
    if len(generators) != n:
        raise ConfigurationError(f"need n={n} generators, got {len(generators)}")
    for index in range(1 << n):
        v = project_stabilizer(np.eye(1 << n, dtype=np.complex128)[index], generators, signs, n)
        norm = np.linalg.norm(v)
        # nonzero overlaps of a stabilizer state with basis states have |.|^2 >= 2^-n
        if norm**2 > 0.5 / (1 << n):
            return QuantumState(n, v / norm)
    raise NumericalIntegrityError("generators do not define a stabilizer state")
