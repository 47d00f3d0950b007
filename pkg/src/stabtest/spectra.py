"""Whole-spectrum analysis: Weyl expectations, p and q, Gowers norms, and
exhaustive stabilizer-fidelity oracles."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from itertools import islice
from typing import Iterator, NamedTuple

import numpy as np

from .caps import cap, check_cap
from .errors import ConfigurationError, DimensionError, NumericalIntegrityError
from .f2 import F2Subspace, lagrangian_generators, pauli_string, rref_basis
from .weyl import EXPECTATION_TOL, QuantumState, product_phase
from .wht import fwht, xor_self_convolve

AGGREGATE_TOL = 1e-9
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeylSpectrum:
    """All 4^n expectations alpha_x, indexed by packed Pauli bits."""

    n: int
    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        if alpha.shape != (1 << (2 * self.n),):
            raise DimensionError(f"expected {1 << (2 * self.n)} expectations, got {alpha.shape}")
        if abs(alpha[0] - 1.0) > EXPECTATION_TOL:
            raise NumericalIntegrityError(f"alpha[I] = {alpha[0]!r}, expected 1")
        if np.max(np.abs(alpha)) > 1.0 + EXPECTATION_TOL:
            raise NumericalIntegrityError("an expectation lies outside [-1, 1]")
        total = float(np.sum(alpha**2)) / (1 << self.n)
        if abs(total - 1.0) > AGGREGATE_TOL:
            raise NumericalIntegrityError(f"sum of p is {total!r}; the state is not pure/normalized")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @property
    def p(self) -> np.ndarray:
        """Characteristic distribution p(x) = 2^-n alpha_x^2."""
        return self.alpha**2 / (1 << self.n)

    @property
    def weights(self) -> np.ndarray:
        """2^n p(x) = alpha_x^2."""
        return self.alpha**2


@dataclass(frozen=True, eq=False)
class WeylDistribution:
    n: int
    q: np.ndarray


@dataclass(frozen=True)
class StabilizerWitness:
    """A stabilizer state given by a Lagrangian and one sign bit per basis row.

    ``generator_signs[i] == 1`` means the state has eigenvalue -1 for the
    Weyl operator of ``group.basis[i]``.
    """

    group: F2Subspace
    generator_signs: tuple[int, ...]
    fidelity: float


def weyl_spectrum(s: QuantumState) -> WeylSpectrum:
    """All alpha_x = <s|W_x|s> via one Walsh-Hadamard transform per X-part."""
    n = s.n
    check_cap("spectrum", n, "weyl_spectrum")
    N = 1 << n
    psi = s.amplitudes
    e = np.arange(N)
    a = e[:, None]
    # G[a, e] = conj(psi[e ^ a]) psi[e]; transforming over e gives sum_e (-1)^{b.e} G[a, e]
    G = np.conj(psi[e[None, :] ^ a]) * psi[None, :]
    H = fwht(G, axis=1)
    phase = np.array([1, 1j, -1, -1j])[np.bitwise_count(a & e[None, :]).astype(np.int64) % 4]
    R = phase * H
    if np.max(np.abs(R.imag), initial=0.0) > EXPECTATION_TOL:
        raise NumericalIntegrityError("Weyl expectations have non-negligible imaginary parts")
    # packed index a | b << n  ->  row-major over (b, a)
    return WeylSpectrum(n, np.ascontiguousarray(R.real.T).ravel())


def weyl_distribution(spec: WeylSpectrum) -> WeylDistribution:
    """q = p * p under XOR convolution, via the fast transform."""
    q = xor_self_convolve(spec.p)
    q = np.where(np.abs(q) < 1e-15, 0.0, q)
    if np.min(q) < -AGGREGATE_TOL or abs(q.sum() - 1.0) > AGGREGATE_TOL:
        raise NumericalIntegrityError("Weyl distribution is not a probability vector")
    return WeylDistribution(spec.n, np.clip(q, 0.0, None))


def naive_xor_convolution(p: np.ndarray) -> np.ndarray:
    """O(N^2) reference: q(x) = sum_a p(a) p(x ^ a)."""
    N = len(p)
    idx = np.arange(N)
    return np.array([np.dot(p, p[idx ^ x]) for x in range(N)])


def weyl_uniformity(spec: WeylSpectrum, q: WeylDistribution) -> float:
    """eta = E_{x ~ q}[alpha_x^2]."""
    if spec.n != q.n:
        raise DimensionError("spectrum and distribution come from different qubit counts")
    return float(np.dot(q.q, spec.weights))


def gowers_norm_pow(s: QuantumState, k: int = 3) -> float:
    """||psi||_{U^k}^{2^k} by enumerating every tuple (x, h_1, ..., h_k).

    Each tuple contributes prod_omega C^{|omega|} f(x ^ omega.h). Products
    over the omega_k = 0 half are tabulated once, so the omega_k = 1 half is
    the conjugate of the same table read at x ^ h_k.
    """
    if k not in (2, 3):
        raise ConfigurationError("only k = 2 and k = 3 are supported")
    n = s.n
    if k == 3:
        check_cap("gowers", n, "gowers_norm_pow")
    elif n > 2 * cap("gowers"):
        check_cap("gowers", n // 2, "gowers_norm_pow")
    N = 1 << n
    xs = np.arange(N)
    # table[x, h_1, ..., h_j] for the cube of dimension j
    table = s.amplitudes.copy()
    for _ in range(k - 1):
        table = table[:, None, ...] * np.conj(table[xs[:, None] ^ xs[None, :]])
    total = 0.0 + 0.0j
    for h in range(N):
        total += np.vdot(table[xs ^ h], table)
    value = total * (1 << (n * (1 << (k - 1)))) / float(N) ** (k + 1)
    if abs(value.imag) > AGGREGATE_TOL:
        raise NumericalIntegrityError(f"Gowers norm has imaginary residue {value.imag:.3e}")
    if not -AGGREGATE_TOL <= value.real <= 1.0 + AGGREGATE_TOL:
        raise NumericalIntegrityError(f"Gowers norm {value.real!r} outside [0, 1]")
    return float(value.real)


# ---------------------------------------------------------------------------
# Lagrangian tables


class LagrangianBlock(NamedTuple):
    generators: np.ndarray  # (L, n) packed generators
    elements: np.ndarray  # (L, 2^n): element c is the XOR of generators set in c
    signs: np.ndarray  # (L, 2^n): prod_i W_{g_i}^{c_i} = signs * W_{elements}


def _build_block(gens: np.ndarray, n: int) -> LagrangianBlock:
    L = gens.shape[0]
    elems = np.zeros((L, 1), dtype=np.int64)
    phase = np.zeros((L, 1), dtype=np.int64)
    for i in range(n):
        g = gens[:, i : i + 1]
        elems, phase = (
            np.concatenate([elems, elems ^ g], axis=1),
            np.concatenate([phase, phase + product_phase(g, elems, n)], axis=1),
        )
    phase %= 4
    if np.any(phase % 2):
        raise NumericalIntegrityError("non-commuting generators in a Lagrangian")
    return LagrangianBlock(gens, elems, (1 - phase).astype(np.int8))


def _iter_blocks(n: int, block: int = 16384) -> Iterator[LagrangianBlock]:
    it = lagrangian_generators(n)
    while True:
        chunk = list(islice(it, block))
        if not chunk:
            return
        yield _build_block(np.array(chunk, dtype=np.int64).reshape(len(chunk), n), n)


@lru_cache(maxsize=None)
def _cached_blocks(n: int) -> tuple[LagrangianBlock, ...]:
    return tuple(_iter_blocks(n))


def lagrangian_blocks(n: int) -> Iterator[LagrangianBlock]:
    """Lagrangian tables in enumeration order; memoized for n <= 5."""
    if n <= 5:
        return iter(_cached_blocks(n))
    return _iter_blocks(n)


class _ArgMax:
    """Running maximum that keeps every candidate within TIE_TOL of it."""

    def __init__(self):
        self.best = -np.inf
        self.tied: list = []

    def offer(self, values: np.ndarray, payload) -> None:
        top = float(values.max())
        if top > self.best + TIE_TOL:
            self.best = top
            self.tied = []
        if top >= self.best - TIE_TOL:
            self.best = max(self.best, top)
            for i in np.flatnonzero(values >= self.best - TIE_TOL):
                self.tied.append(payload(int(i)))
            self.tied = [t for t in self.tied if t[0] >= self.best - TIE_TOL]


def fact1_certificate(spec: WeylSpectrum) -> tuple[float, F2Subspace]:
    """The Lagrangian T maximizing sum_{x in T} p(x), with that mass."""
    n = spec.n
    check_cap("enum", n, "fact1_certificate")
    p = spec.p
    best = _ArgMax()
    for blk in lagrangian_blocks(n):
        mass = p[blk.elements].sum(axis=1)
        best.offer(mass, lambda i, blk=blk, mass=mass: (float(mass[i]), tuple(blk.generators[i])))
    value, gens = min(best.tied, key=lambda t: rref_basis(t[1], n).basis)
    return value, rref_basis(gens, n)


def stabilizer_fidelity_exact(s: QuantumState) -> StabilizerWitness:
    """max over stabilizer states |<phi|psi>|^2, by exhaustion over Lagrangians.

    For a Lagrangian with generators g_i and sign vector s the projector is
    2^-n sum_c (-1)^{s.c} prod_i W_{g_i}^{c_i}, so the fidelities of all
    2^n sign choices are one Walsh-Hadamard transform of E(c).
    """
    n = s.n
    check_cap("fidelity", n, "stabilizer_fidelity_exact")
    alpha = weyl_spectrum(s).alpha
    N = 1 << n
    best = _ArgMax()
    for blk in lagrangian_blocks(n):
        E = blk.signs * alpha[blk.elements]
        F = fwht(E, axis=1) / N
        rowmax = F.max(axis=1)
        best.offer(
            rowmax,
            lambda i, blk=blk, F=F: (float(F[i].max()), i, blk, int(np.flatnonzero(F[i] >= F[i].max() - TIE_TOL)[0])),
        )
    fid, i, blk, svec = min(best.tied, key=lambda t: (rref_basis(t[2].generators[t[1]], n).basis, t[3]))
    group = rref_basis(blk.generators[i], n)
    elems = blk.elements[i]
    cvec = np.arange(N)
    # eigenvalue of W_{elements[c]} on the witness state
    eig = (1 - 2 * (np.bitwise_count(cvec & svec).astype(np.int64) & 1)) * blk.signs[i]
    lookup = dict(zip(elems.tolist(), eig.tolist()))
    signs = tuple(int(lookup[g] < 0) for g in group.basis)
    return StabilizerWitness(group, signs, min(fid, 1.0))


# ---------------------------------------------------------------------------
# Export


def spectrum_rows(spec: WeylSpectrum, q: WeylDistribution | None = None) -> list[dict]:
    if q is None:
        q = weyl_distribution(spec)
    p = spec.p
    return [
        {"pauli": pauli_string(x, spec.n), "alpha": float(spec.alpha[x]), "p": float(p[x]), "q": float(q.q[x])}
        for x in range(len(spec.alpha))
    ]


def spectrum_csv(spec: WeylSpectrum, q: WeylDistribution | None = None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["pauli", "alpha", "p", "q"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(spectrum_rows(spec, q))
    return buf.getvalue()
