"""Canonical forms of subgroups of F_2^{2n} and their stabilizer-group covers.

Any subgroup V is symplectically equivalent to
<Z_1, X_1, ..., Z_k, X_k, Z_{k+1}, ..., Z_{k+m}>, and that normal form
exhibits V inside a union of 4^k Lagrangians: one per Pauli tau on the
first k qubits, each containing tau and the residual Z's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DimensionError, InternalConsistencyError
from .f2 import (
    F2Subspace,
    PauliIndex,
    SymplecticMap,
    complete_to_lagrangian,
    pauli_string,
    rref_basis,
    symplectic_gram_schmidt,
    zero_subspace,
)
from .spectra import TIE_TOL, WeylSpectrum, weyl_spectrum
from .weyl import QuantumState

EXHAUSTIVE_CAP = 1 << 20
SAMPLED_CHECKS = 10_000


def canonical_span(n: int, k: int, m: int) -> F2Subspace:
    """<Z_0, X_0, ..., Z_{k-1}, X_{k-1}, Z_k, ..., Z_{k+m-1}> (0-based qubits)."""
    gens = [1 << t for t in range(k)] + [1 << (n + t) for t in range(k + m)]
    return rref_basis(gens, n)


@dataclass(frozen=True)
class CanonicalForm:
    V: F2Subspace
    k: int
    m: int
    U: SymplecticMap
    pairs: tuple[tuple[int, int], ...]
    residual: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.V.n

    def verify(self) -> None:
        n = self.n
        if self.k + self.m > n:
            raise InternalConsistencyError(f"k + m = {self.k + self.m} exceeds n = {n}")
        if self.V.dim != 2 * self.k + self.m:
            raise InternalConsistencyError("dim V != 2k + m")
        if not self.U.is_symplectic():
            raise InternalConsistencyError("U does not preserve the symplectic form")
        if self.U.image(self.V) != canonical_span(n, self.k, self.m):
            raise InternalConsistencyError("U V is not the canonical span")


def canonical_form(V: F2Subspace) -> CanonicalForm:
    pairs, residual, U = symplectic_gram_schmidt(V)
    cf = CanonicalForm(V, len(pairs), len(residual), U, tuple(pairs), tuple(residual))
    cf.verify()
    return cf


@dataclass(frozen=True)
class StabilizerCover:
    groups: tuple[F2Subspace, ...]
    form: CanonicalForm

    @property
    def k(self) -> int:
        return self.form.k

    @property
    def m(self) -> int:
        return self.form.m

    def to_dict(self) -> dict:
        return {
            "n": self.form.n,
            "k": self.k,
            "m": self.m,
            "U": self.form.U.rows(),
            "groups": [g.pauli_strings() for g in self.groups],
        }


def _tau(a: int, k: int, n: int) -> int:
    """The a-th Pauli on the first k qubits, embedded in n qubits."""
    mask = (1 << k) - 1
    return (a & mask) | ((a >> k) << n)


def _first_k_label(images: np.ndarray, k: int, n: int) -> np.ndarray:
    mask = (1 << k) - 1
    return (images & mask) | (((images >> n) & mask) << k)


def stabilizer_cover(
    V: F2Subspace,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
    samples: int = SAMPLED_CHECKS,
    seed: int = 0,
) -> StabilizerCover:
    """4^k Lagrangians whose union contains V.

    Group a is U^-1 applied to a Lagrangian completion of
    <tau_a, Z_k, ..., Z_{k+m-1}>. Duplicates are kept, so the count is
    always exactly 4^k.
    """
    cf = canonical_form(V)
    n, k, m = V.n, cf.k, cf.m
    Uinv = cf.U.inverse()
    residual_z = [1 << (n + k + j) for j in range(m)]
    groups = []
    for a in range(4**k):
        partial = rref_basis([_tau(a, k, n)] + residual_z, n)
        groups.append(Uinv.image(complete_to_lagrangian(partial)))
    cover = StabilizerCover(tuple(groups), cf)
    _verify_cover(cover, exhaustive_cap, samples, seed)
    return cover


def _verify_cover(cover: StabilizerCover, exhaustive_cap: int, samples: int, seed: int) -> None:
    cf = cover.form
    n, k = cf.n, cf.k
    if len(cover.groups) != 4**k:
        raise InternalConsistencyError(f"cover has {len(cover.groups)} groups, expected {4**k}")
    for g in cover.groups:
        if not g.is_lagrangian():
            raise InternalConsistencyError(f"cover group {g} is not Lagrangian")
    V = cf.V
    if V.size <= exhaustive_cap:
        members = V.elements()
    else:
        rng = np.random.default_rng(seed)
        coeffs = rng.integers(0, 2, size=(samples, V.dim))
        sampled = np.zeros(samples, dtype=np.int64)
        for j, g in enumerate(V.basis):
            sampled ^= np.where(coeffs[:, j] == 1, g, 0)
        members = np.concatenate([np.array(V.basis, dtype=np.int64), sampled])
    # an element whose image under U reads tau_a on the first k qubits lies in group a
    labels = _first_k_label(cf.U.apply_array(members), k, n)
    for a in np.unique(labels):
        chunk = members[labels == a]
        if not cover.groups[int(a)].contains_array(chunk).all():
            raise InternalConsistencyError("an element of V is not covered")


class PurityBound(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def _spectrum_of(s) -> WeylSpectrum:
    return s if isinstance(s, WeylSpectrum) else weyl_spectrum(s)


def purity_bound_check(s: QuantumState | WeylSpectrum, V: F2Subspace) -> PurityBound:
    """sum_{x in V} alpha_x^2 against 2^{k+m} from the canonical form of V."""
    spec = _spectrum_of(s)
    if spec.n != V.n:
        raise DimensionError("state and subgroup have different qubit counts")
    cf = canonical_form(V)
    lhs = float(spec.weights[V.elements()].sum())
    rhs = float(2 ** (cf.k + cf.m))
    return PurityBound(lhs, rhs, lhs <= rhs + 1e-9)


def mean_weight(spec: WeylSpectrum, V: F2Subspace) -> float:
    """E_{y in V}[2^n p(y)]."""
    return float(spec.weights[V.elements()].mean())


def heavy_indices(spec: WeylSpectrum, gamma: float) -> np.ndarray:
    if not 0 < gamma <= 1:
        raise ConfigurationError(f"gamma must lie in (0, 1], got {gamma}")
    return np.flatnonzero(spec.weights >= gamma / 4)


def heavy_set(spec: WeylSpectrum, gamma: float) -> set[PauliIndex]:
    """{x : 2^n p(x) >= gamma / 4}."""
    return {PauliIndex.from_bits(int(x), spec.n) for x in heavy_indices(spec, gamma)}


def greedy_subgroup(spec: WeylSpectrum, gamma: float, retention: float = 0.5) -> F2Subspace:
    """Heuristic search for a subgroup with large mean weight.

    Heavy elements are tried in decreasing weight order (ties by index).
    Each is accepted if the closure keeps at least ``retention`` times the
    current mean weight. Returns the accepted closure with the best mean
    weight, preferring larger groups on ties; the zero subgroup if nothing
    was accepted.
    """
    n = spec.n
    w = spec.weights
    heavy = heavy_indices(spec, gamma)
    order = heavy[np.lexsort((heavy, -w[heavy]))]
    V = zero_subspace(n)
    current = 1.0
    best, best_mean = V, -np.inf
    for x in order:
        if V.contains(int(x)):
            continue
        trial = rref_basis(V.basis + (int(x),), n)
        mw = mean_weight(spec, trial)
        if mw < retention * current:
            continue
        V, current = trial, mw
        if mw > best_mean + TIE_TOL or (abs(mw - best_mean) <= TIE_TOL and V.dim > best.dim):
            best, best_mean = V, mw
    return best


def fidelity_from_subgroup(s: QuantumState | WeylSpectrum, V: F2Subspace) -> tuple[float, F2Subspace]:
    """Best cover group of V by p-mass; the mass lower-bounds the stabilizer fidelity."""
    spec = _spectrum_of(s)
    if spec.n != V.n:
        raise DimensionError("state and subgroup have different qubit counts")
    p = spec.p
    cover = stabilizer_cover(V)
    masses = [float(p[g.elements()].sum()) for g in cover.groups]
    top = max(masses)
    tied = [g for g, mass in zip(cover.groups, masses) if mass >= top - TIE_TOL]
    group = min(tied, key=lambda g: g.basis)
    return masses[cover.groups.index(group)], group


def doubling_constant(points) -> float:
    """|S + S| / |S| for a small set of packed vectors."""
    pts = np.unique(np.asarray(list(points), dtype=np.int64))
    if pts.size == 0:
        raise ConfigurationError("empty set")
    sums = np.unique(pts[:, None] ^ pts[None, :])
    return sums.size / pts.size


def subgroup_strings(V: F2Subspace) -> list[str]:
    return [pauli_string(g, V.n) for g in V.basis]
