"""Simulated copy access to an unknown state and the tolerant stabilizer tester.

Bell difference sampling is simulated at the distribution level: two
independent draws from p XORed together are distributed as q = p * p.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError
from .f2 import PauliIndex
from .spectra import WeylSpectrum, weyl_spectrum
from .weyl import QuantumState

COPIES_PER_BELL_DIFFERENCE = 4
COPIES_PER_PAULI_SQUARED = 2
COPIES_PER_ROUND = COPIES_PER_BELL_DIFFERENCE + COPIES_PER_PAULI_SQUARED

_BLOCK = 1 << 16


class SampleChannel:
    """Copies of a hidden state, consumed by sampling calls.

    Not thread-safe: the RNG and the copy counter are mutated by every call.
    """

    def __init__(self, state: QuantumState | WeylSpectrum, seed: int | None = None):
        spec = state if isinstance(state, WeylSpectrum) else weyl_spectrum(state)
        self.n = spec.n
        self.seed = seed
        self.copies_consumed = 0
        self._alpha = spec.alpha
        cdf = np.cumsum(spec.p)
        self._cdf = cdf / cdf[-1]
        self._rng = np.random.default_rng(seed)

    def _draw_p(self, size: int) -> np.ndarray:
        u = self._rng.random(size)
        idx = np.searchsorted(self._cdf, u, side="right")
        return np.minimum(idx, len(self._cdf) - 1).astype(np.int64)

    def bell_difference_batch(self, size: int) -> np.ndarray:
        """``size`` packed labels drawn from q; 4 copies each."""
        out = self._draw_p(size) ^ self._draw_p(size)
        self.copies_consumed += COPIES_PER_BELL_DIFFERENCE * size
        return out

    def pauli_squared_batch(self, xs: np.ndarray) -> np.ndarray:
        """Product of two independent W_x measurements per entry; 2 copies each."""
        xs = np.asarray(xs, dtype=np.int64)
        plus = np.clip((1.0 + self._alpha[xs]) / 2.0, 0.0, 1.0)
        first = np.where(self._rng.random(xs.shape) < plus, 1, -1)
        second = np.where(self._rng.random(xs.shape) < plus, 1, -1)
        self.copies_consumed += COPIES_PER_PAULI_SQUARED * xs.size
        return (first * second).astype(np.int8)


def bell_difference_sample(ch: SampleChannel) -> PauliIndex:
    return PauliIndex.from_bits(int(ch.bell_difference_batch(1)[0]), ch.n)


def pauli_squared_sample(ch: SampleChannel, x: PauliIndex) -> int:
    """+-1 with mean alpha_x^2."""
    if x.n != ch.n:
        raise DimensionError(f"channel has {ch.n} qubits, Pauli has {x.n}")
    return int(ch.pauli_squared_batch(np.array([x.bits]))[0])


def estimate_uniformity(ch: SampleChannel, m: int) -> float:
    """Mean of m rounds of (Bell difference sample, then W_x^2 sample at it).

    Unbiased for E_{x~q}[alpha_x^2]; consumes 6m copies.
    """
    if m < 1:
        raise ConfigurationError(f"m must be >= 1, got {m}")
    total = 0
    done = 0
    while done < m:
        size = min(_BLOCK, m - done)
        total += int(ch.pauli_squared_batch(ch.bell_difference_batch(size)).sum(dtype=np.int64))
        done += size
    return total / m


def hoeffding_rounds(margin: float, fail_prob: float) -> int:
    """Rounds so a mean of +-1 variables is within ``margin`` w.p. >= 1 - fail_prob."""
    return math.ceil(2.0 * math.log(2.0 / fail_prob) / margin**2)


@dataclass(frozen=True)
class TesterVerdict:
    decision: str
    eta_hat: float
    m: int
    copies: int
    threshold: float
    margin: float
    eps1: float
    eps2: float
    fail_prob: float
    seed: int | None

    @property
    def accepted(self) -> bool:
        return self.decision == "Accept"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def resolve_tester_parameters(eps1: float, eps2: float, fail_prob: float, threshold=None, margin=None) -> tuple[float, float, int]:
    """(threshold, margin, rounds); defaults eps1^6 / 2 and eps1^6 / 4."""
    if not 0 < eps2 < eps1 <= 1:
        raise ConfigurationError(f"need 0 < eps2 < eps1 <= 1, got eps1={eps1}, eps2={eps2}")
    if not 0 < fail_prob < 1:
        raise ConfigurationError(f"fail_prob must lie in (0, 1), got {fail_prob}")
    yes_bound = eps1**6
    threshold = yes_bound / 2 if threshold is None else threshold
    margin = yes_bound / 4 if margin is None else margin
    if not 0 < threshold <= 1 or not 0 < margin:
        raise ConfigurationError("threshold must lie in (0, 1] and margin must be positive")
    return threshold, margin, hoeffding_rounds(margin, fail_prob)


def tolerant_test(
    ch: SampleChannel,
    eps1: float,
    eps2: float,
    fail_prob: float,
    threshold: float | None = None,
    margin: float | None = None,
) -> TesterVerdict:
    """Accept iff the estimated uniformity clears ``threshold``.

    Stabilizer fidelity >= eps1 forces uniformity >= eps1^6, so the default
    threshold eps1^6 / 2 sits a margin eps1^6 / 4 below it. The round count
    depends only on (eps1, fail_prob, margin), never on n.
    """
    threshold, margin, m = resolve_tester_parameters(eps1, eps2, fail_prob, threshold, margin)
    before = ch.copies_consumed
    eta_hat = estimate_uniformity(ch, m)
    return TesterVerdict(
        decision="Accept" if eta_hat >= threshold else "Reject",
        eta_hat=eta_hat,
        m=m,
        copies=ch.copies_consumed - before,
        threshold=threshold,
        margin=margin,
        eps1=eps1,
        eps2=eps2,
        fail_prob=fail_prob,
        seed=ch.seed,
    )
