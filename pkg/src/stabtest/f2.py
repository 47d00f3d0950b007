"""Linear algebra over F_2^{2n} with the symplectic form.

A point x = (a, b) of F_2^{2n} is packed into a Python int: the X-part a sits
in the low n bits and the Z-part b in the high n bits, so bit j is X on qubit
j and bit n + j is Z on qubit j. All routines here work on these ints;
``PauliIndex`` is the typed wrapper used at module boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .caps import check_cap
from .errors import ConfigurationError, DimensionError, InternalConsistencyError, PreconditionError

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_FROM_LETTER = {v: k for k, v in _LETTERS.items()}


def pack(a: int, b: int, n: int) -> int:
    return a | (b << n)


def unpack(x: int, n: int) -> tuple[int, int]:
    mask = (1 << n) - 1
    return x & mask, (x >> n) & mask


def swap_halves(x: int, n: int) -> int:
    a, b = unpack(x, n)
    return b | (a << n)


def form_bits(x: int, y: int, n: int) -> int:
    """Symplectic form a.b' + a'.b (mod 2) on packed vectors."""
    return (x & swap_halves(y, n)).bit_count() & 1


@dataclass(frozen=True)
class PauliIndex:
    """A Weyl label x = (a, b); ``a`` and ``b`` are n-bit ints (bit j = qubit j)."""

    n: int
    a: int
    b: int

    def __post_init__(self):
        if self.n < 0:
            raise ConfigurationError("n must be non-negative")
        if self.a >> self.n or self.b >> self.n or self.a < 0 or self.b < 0:
            raise ConfigurationError(f"a, b must fit in n={self.n} bits")

    @property
    def bits(self) -> int:
        return pack(self.a, self.b, self.n)

    @classmethod
    def from_bits(cls, x: int, n: int) -> PauliIndex:
        if x < 0 or x >> (2 * n):
            raise ConfigurationError(f"{x} is not a {2 * n}-bit vector")
        a, b = unpack(x, n)
        return cls(n, a, b)

    @classmethod
    def identity(cls, n: int) -> PauliIndex:
        return cls(n, 0, 0)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> PauliIndex:
        """Parse letter form ``"XZIY"`` or binary form ``"(10|01)"``."""
        x, width = parse_pauli(text)
        if n is not None and width != n:
            raise DimensionError(f"{text!r} has {width} qubits, expected {n}")
        return cls.from_bits(x, width)

    def to_binary(self) -> str:
        bits_a = "".join(str((self.a >> j) & 1) for j in range(self.n))
        bits_b = "".join(str((self.b >> j) & 1) for j in range(self.n))
        return f"({bits_a}|{bits_b})"

    def __str__(self) -> str:
        return pauli_string(self.bits, self.n)

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0


def pauli_string(x: int, n: int) -> str:
    a, b = unpack(x, n)
    return "".join(_LETTERS[(a >> j) & 1, (b >> j) & 1] for j in range(n))


_BINARY = re.compile(r"^\(([01]*)\|([01]*)\)$")


def parse_pauli(text: str) -> tuple[int, int]:
    """Return ``(packed bits, n)`` for a letter or binary Pauli string."""
    text = text.strip()
    m = _BINARY.match(text)
    if m:
        sa, sb = m.groups()
        if len(sa) != len(sb):
            raise ConfigurationError(f"unequal halves in {text!r}")
        n = len(sa)
        a = sum(1 << j for j, c in enumerate(sa) if c == "1")
        b = sum(1 << j for j, c in enumerate(sb) if c == "1")
        return pack(a, b, n), n
    a = b = 0
    for j, c in enumerate(text.upper()):
        if c not in _FROM_LETTER:
            raise ConfigurationError(f"bad Pauli letter {c!r} in {text!r}")
        ba, bb = _FROM_LETTER[c]
        a |= ba << j
        b |= bb << j
    return pack(a, b, len(text)), len(text)


def symplectic_form(x: PauliIndex, y: PauliIndex) -> int:
    """0 if W_x and W_y commute, 1 if they anticommute."""
    if x.n != y.n:
        raise DimensionError(f"qubit counts differ: {x.n} vs {y.n}")
    return form_bits(x.bits, y.bits, x.n)


def form_matrix(n: int) -> np.ndarray:
    """The 2n x 2n matrix J with form(x, y) = x^T J y under the packed layout."""
    eye = np.eye(n, dtype=np.uint8)
    zero = np.zeros((n, n), dtype=np.uint8)
    return np.block([[zero, eye], [eye, zero]])


def bits_to_vector(x: int, size: int) -> np.ndarray:
    return np.array([(x >> j) & 1 for j in range(size)], dtype=np.uint8)


# ---------------------------------------------------------------------------
# Subspaces


def _insert(rows: list[int], v: int) -> bool:
    """Add ``v`` to a reduced basis in place; return False if already spanned.

    ``rows`` is kept in reduced row echelon form with the pivot of each row
    at its highest set bit, sorted by decreasing pivot.
    """
    for r in rows:
        if v >> (r.bit_length() - 1) & 1:
            v ^= r
    if not v:
        return False
    p = v.bit_length() - 1
    for i, r in enumerate(rows):
        if r >> p & 1:
            rows[i] = r ^ v
    rows.append(v)
    rows.sort(reverse=True)
    return True


def _reduce(rows: Sequence[int], v: int) -> int:
    for r in rows:
        if v >> (r.bit_length() - 1) & 1:
            v ^= r
    return v


@dataclass(frozen=True)
class F2Subspace:
    """A subspace of F_2^{2n} held in canonical reduced row echelon form.

    Two equal subspaces have identical ``basis`` tuples, so ``==`` and hashing
    are subspace equality.
    """

    n: int
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    def contains(self, x: int | PauliIndex) -> bool:
        if isinstance(x, PauliIndex):
            if x.n != self.n:
                raise DimensionError(f"qubit counts differ: {x.n} vs {self.n}")
            x = x.bits
        return _reduce(self.basis, x) == 0

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains_array(self, xs: np.ndarray) -> np.ndarray:
        return reduce_array(self.basis, xs) == 0

    def elements(self) -> np.ndarray:
        """All 2^dim members as an int64 array; index c lists the XOR of basis rows set in c."""
        out = np.zeros(1, dtype=np.int64)
        for g in reversed(self.basis):
            out = np.concatenate([out, out ^ g])
        return out

    def is_isotropic(self) -> bool:
        return all(form_bits(u, v, self.n) == 0 for u, v in combinations(self.basis, 2))

    def is_lagrangian(self) -> bool:
        return self.dim == self.n and self.is_isotropic()

    def issubset(self, other: F2Subspace) -> bool:
        return all(other.contains(g) for g in self.basis)

    def pauli_strings(self) -> list[str]:
        return [pauli_string(g, self.n) for g in self.basis]

    @classmethod
    def from_strings(cls, strings: Iterable[str], n: int | None = None) -> F2Subspace:
        vecs = []
        for s in strings:
            x, width = parse_pauli(s)
            if n is None:
                n = width
            elif width != n:
                raise DimensionError(f"{s!r} has {width} qubits, expected {n}")
            vecs.append(x)
        if n is None:
            raise ConfigurationError("cannot infer n from an empty generator list")
        return rref_basis(vecs, n)

    def __str__(self) -> str:
        return "<" + ", ".join(self.pauli_strings()) + ">"


def rref_basis(vectors: Iterable[int | PauliIndex], n: int) -> F2Subspace:
    rows: list[int] = []
    limit = 1 << (2 * n)
    for v in vectors:
        if isinstance(v, PauliIndex):
            if v.n != n:
                raise DimensionError(f"qubit counts differ: {v.n} vs {n}")
            v = v.bits
        v = int(v)
        if v < 0 or v >= limit:
            raise ConfigurationError(f"{v} is not a {2 * n}-bit vector")
        _insert(rows, v)
    return F2Subspace(n, tuple(rows))


def zero_subspace(n: int) -> F2Subspace:
    return F2Subspace(n, ())


def full_space(n: int) -> F2Subspace:
    return rref_basis((1 << j for j in range(2 * n)), n)


# ---------------------------------------------------------------------------
# Symplectic maps


def _invert_columns(columns: Sequence[int], size: int) -> tuple[int, ...]:
    rows = [c | (1 << (size + j)) for j, c in enumerate(columns)]
    low = (1 << size) - 1
    for col in range(size):
        piv = next((i for i in range(col, size) if rows[i] >> col & 1), None)
        if piv is None:
            raise PreconditionError("matrix is singular over F_2")
        rows[col], rows[piv] = rows[piv], rows[col]
        for i in range(size):
            if i != col and rows[i] >> col & 1:
                rows[i] ^= rows[col]
    # row `col` now reads e_col | (y << size) with M y = e_col
    assert all(rows[i] & low == 1 << i for i in range(size))
    return tuple(r >> size for r in rows)


@dataclass(frozen=True)
class SymplecticMap:
    """Linear map on packed vectors; ``columns[j]`` is the image of bit j."""

    n: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != 2 * self.n:
            raise DimensionError("a symplectic map on n qubits has 2n columns")

    @classmethod
    def identity(cls, n: int) -> SymplecticMap:
        return cls(n, tuple(1 << j for j in range(2 * n)))

    def apply(self, x: int) -> int:
        out = 0
        j = 0
        while x:
            if x & 1:
                out ^= self.columns[j]
            x >>= 1
            j += 1
        return out

    __call__ = apply

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros_like(xs)
        for j, c in enumerate(self.columns):
            out ^= np.where((xs >> j) & 1, c, 0)
        return out

    def image(self, V: F2Subspace) -> F2Subspace:
        return rref_basis((self.apply(g) for g in V.basis), self.n)

    def inverse(self) -> SymplecticMap:
        return SymplecticMap(self.n, _invert_columns(self.columns, 2 * self.n))

    def compose(self, other: SymplecticMap) -> SymplecticMap:
        """``self`` after ``other``."""
        return SymplecticMap(self.n, tuple(self.apply(c) for c in other.columns))

    @property
    def matrix(self) -> np.ndarray:
        size = 2 * self.n
        return np.stack([bits_to_vector(c, size) for c in self.columns], axis=1) if size else np.zeros((0, 0), np.uint8)

    def is_symplectic(self) -> bool:
        M = self.matrix.astype(np.int64)
        J = form_matrix(self.n).astype(np.int64)
        return bool(np.array_equal((M.T @ J @ M) % 2, J))

    def rows(self) -> list[list[int]]:
        return self.matrix.astype(int).tolist()


def _candidates(n: int) -> Iterator[int]:
    """Nonzero vectors with Z-type vectors first: X-part major, Z-part minor."""
    for a in range(1 << n):
        for b in range(1 << n):
            if a or b:
                yield pack(a, b, n)


def _solve_form(constraints: Sequence[int], targets: Sequence[int], n: int) -> int:
    """Some g with form(g, c_t) = targets[t]; free variables set to zero."""
    size = 2 * n
    rows: list[int] = []
    for c, t in zip(constraints, targets):
        v = swap_halves(c, n) | (t << size)
        for r in rows:
            p = (r & ((1 << size) - 1)).bit_length() - 1
            if v >> p & 1:
                v ^= r
        low = v & ((1 << size) - 1)
        if not low:
            if v:
                raise PreconditionError("inconsistent symplectic constraints")
            continue
        p = low.bit_length() - 1
        rows = [r ^ v if r >> p & 1 else r for r in rows]
        rows.append(v)
    g = 0
    for r in rows:
        if r >> size & 1:
            g |= 1 << ((r & ((1 << size) - 1)).bit_length() - 1)
    return g


class GramSchmidtResult(NamedTuple):
    pairs: list[tuple[int, int]]
    residual: list[int]
    U: SymplecticMap


def symplectic_gram_schmidt(V: F2Subspace) -> GramSchmidtResult:
    """Split V into hyperbolic pairs and a commuting residual.

    Returns pairs (e_i, f_i) with form(e_i, f_i) = 1, residual vectors r_j,
    and a symplectic U sending e_i -> Z_i, f_i -> X_i and r_j -> Z_{k+j}
    (0-based qubits: pairs on qubits 0..k-1, residual on k..k+m-1).
    """
    n = V.n
    work = sorted(V.basis, key=lambda v: swap_halves(v, n))
    pairs: list[tuple[int, int]] = []
    residual: list[int] = []
    while work:
        e = work.pop(0)
        j = next((i for i, v in enumerate(work) if form_bits(e, v, n)), None)
        if j is None:
            residual.append(e)
            continue
        f = work.pop(j)
        pairs.append((e, f))
        work = [v ^ (e if form_bits(v, f, n) else 0) ^ (f if form_bits(v, e, n) else 0) for v in work]
        work = [v for v in work if v]

    # Partners for the residual vectors: g_j with form(g_j, r_l) = delta_jl,
    # orthogonal to every pair and to earlier partners.
    frame = [v for p in pairs for v in p]
    partners: list[int] = []
    for j in range(len(residual)):
        cons = frame + residual + partners
        tgts = [0] * len(frame) + [int(l == j) for l in range(len(residual))] + [0] * len(partners)
        partners.append(_solve_form(cons, tgts, n))
    full_pairs = pairs + list(zip(residual, partners))

    def project(v: int) -> int:
        for e, f in full_pairs:
            if form_bits(v, f, n):
                v ^= e
            if form_bits(v, e, n):
                v ^= f
        return v

    while len(full_pairs) < n:
        e = next(p for p in map(project, _candidates(n)) if p)
        f = next(project(c) for c in _candidates(n) if form_bits(e, c, n))
        full_pairs.append((e, f))

    cols = [0] * (2 * n)
    for t, (e, f) in enumerate(full_pairs):
        cols[t] = f
        cols[n + t] = e
    B = SymplecticMap(n, tuple(cols))
    if not B.is_symplectic():
        raise InternalConsistencyError("symplectic basis completion failed")
    return GramSchmidtResult(pairs, residual, B.inverse())


@lru_cache(maxsize=16)
def _candidate_array(n: int) -> np.ndarray:
    out = np.fromiter(_candidates(n), dtype=np.int64, count=(1 << (2 * n)) - 1)
    out.setflags(write=False)
    return out


def _forms_with(xs: np.ndarray, y: int, n: int) -> np.ndarray:
    return np.bitwise_count(xs & swap_halves(y, n)).astype(np.int64) & 1


def reduce_array(basis: Sequence[int], xs: np.ndarray) -> np.ndarray:
    """Vectorized reduction of each entry of ``xs`` against an RREF basis."""
    xs = np.array(xs, dtype=np.int64, copy=True)
    for r in basis:
        p = r.bit_length() - 1
        xs ^= np.where((xs >> p) & 1, r, 0)
    return xs


def complete_to_lagrangian(S: F2Subspace) -> F2Subspace:
    """Smallest-first extension of an isotropic S to a Lagrangian superspace.

    Candidates are scanned Z-type first (X-part as the major key), so the
    zero subspace completes to <Z_1, ..., Z_n>.
    """
    n = S.n
    if not S.is_isotropic():
        raise PreconditionError(f"{S} is not isotropic")
    rows = list(S.basis)
    if len(rows) < n:
        cands = _candidate_array(n)
        ok = np.ones(len(cands), dtype=bool)
        for g in rows:
            ok &= _forms_with(cands, g, n) == 0
        while len(rows) < n:
            idx = np.flatnonzero(ok)
            fresh = idx[reduce_array(rows, cands[idx]) != 0]
            c = int(cands[fresh[0]])
            _insert(rows, c)
            ok &= _forms_with(cands, c, n) == 0
    out = F2Subspace(n, tuple(rows))
    if not out.is_lagrangian():
        raise InternalConsistencyError("completion did not produce a Lagrangian")
    return out


# ---------------------------------------------------------------------------
# Lagrangian enumeration


def lagrangian_count(n: int) -> int:
    out = 1
    for k in range(1, n + 1):
        out *= (1 << k) + 1
    return out


def _subspaces(n: int, r: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """RREF bases of the r-dimensional subspaces of F_2^n, with their pivots."""
    for pivots in combinations(range(n - 1, -1, -1), r):
        pivset = set(pivots)
        # free positions of row i: non-pivot columns below its pivot
        free = [[c for c in range(p) if c not in pivset] for p in pivots]
        slots = [(i, c) for i, cols in enumerate(free) for c in cols]
        for fill in product((0, 1), repeat=len(slots)):
            rows = [1 << p for p in pivots]
            for (i, c), bit in zip(slots, fill):
                if bit:
                    rows[i] |= 1 << c
            yield tuple(rows), pivots


def lagrangian_generators(n: int) -> Iterator[tuple[int, ...]]:
    """Generators of every Lagrangian, one tuple per subspace.

    Each Lagrangian L is determined by K = its projection onto the X-part
    and a symmetric bilinear form Q on K: L is spanned by (k_i, sum_j
    Q_ij e_{p_j}) for the RREF basis k_i of K with pivots p_i, together
    with (0, c) for c in K^perp.
    """
    for r in range(n + 1):
        tri = [(i, j) for i in range(r) for j in range(i, r)]
        for ks, pivots in _subspaces(n, r):
            nonpiv = [u for u in range(n) if u not in pivots]
            perp = []
            for u in nonpiv:
                c = 1 << u
                for k, p in zip(ks, pivots):
                    if k >> u & 1:
                        c |= 1 << p
                perp.append(c << n)
            for fill in product((0, 1), repeat=len(tri)):
                beta = [0] * r
                for (i, j), bit in zip(tri, fill):
                    if bit:
                        beta[i] |= 1 << pivots[j]
                        if i != j:
                            beta[j] |= 1 << pivots[i]
                yield tuple(k | (b << n) for k, b in zip(ks, beta)) + tuple(perp)


def enumerate_lagrangians(n: int) -> Iterator[F2Subspace]:
    """Every Lagrangian subspace of F_2^{2n} exactly once, in a fixed order."""
    check_cap("enum", n, "enumerate_lagrangians")
    count = 0
    for gens in lagrangian_generators(n):
        count += 1
        yield rref_basis(gens, n)
    if count != lagrangian_count(n):
        raise InternalConsistencyError(f"enumerated {count} Lagrangians, expected {lagrangian_count(n)}")
