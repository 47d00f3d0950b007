"""State ensembles, state files, and reproducible sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .caps import cap, check_cap
from .cover import canonical_form, fidelity_from_subgroup, greedy_subgroup
from .errors import ConfigurationError, DimensionError
from .sampler import SampleChannel, tolerant_test
from .spectra import (
    fact1_certificate,
    gowers_norm_pow,
    lagrangian_blocks,
    stabilizer_fidelity_exact,
    weyl_distribution,
    weyl_spectrum,
    weyl_uniformity,
)
from .weyl import QuantumState, stabilizer_state, t_state

KINDS = ("random-haar", "random-stabilizer", "t-tensor", "noisy-stabilizer", "file")

CSV_FIELDS = [
    "kind",
    "n",
    "seed",
    "noise",
    "gowers3_pow8",
    "eta",
    "fact1",
    "exact_fidelity",
    "cover_bound",
    "k",
    "m",
    "verdict",
]


@dataclass(frozen=True)
class StateSpec:
    kind: str
    n: int = 1
    seed: int = 0
    noise: float = 0.0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown state kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.kind != "file" and self.n < 1:
            raise ConfigurationError("n must be >= 1")
        if not 0.0 <= self.noise <= 1.0:
            raise ConfigurationError(f"noise must lie in [0, 1], got {self.noise}")
        if self.kind == "file" and not self.path:
            raise ConfigurationError("kind 'file' needs a path")


def haar_state(n: int, rng: np.random.Generator) -> QuantumState:
    z = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return QuantumState.from_amplitudes(z, normalize=True)


def random_stabilizer(n: int, rng: np.random.Generator) -> QuantumState:
    """Uniform Lagrangian, uniform signs (not uniform over stabilizer states)."""
    check_cap("fidelity", n, "random-stabilizer")
    blocks = list(lagrangian_blocks(n))
    index = int(rng.integers(sum(len(b.generators) for b in blocks)))
    for blk in blocks:
        if index < len(blk.generators):
            gens = blk.generators[index]
            break
        index -= len(blk.generators)
    signs = rng.integers(0, 2, size=n)
    return stabilizer_state(gens.tolist(), signs.tolist(), n)


def t_tensor(n: int) -> QuantumState:
    out = t_state()
    for _ in range(n - 1):
        out = out.tensor(t_state())
    return out


def generate_state(spec: StateSpec) -> QuantumState:
    if spec.kind == "file":
        return read_state(spec.path)
    check_cap("state", spec.n, "generate_state")
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "random-haar":
        return haar_state(spec.n, rng)
    if spec.kind == "random-stabilizer":
        return random_stabilizer(spec.n, rng)
    if spec.kind == "t-tensor":
        return t_tensor(spec.n)
    phi = random_stabilizer(spec.n, rng)
    g = haar_state(spec.n, rng)
    mix = (1.0 - spec.noise) * phi.amplitudes + spec.noise * g.amplitudes
    return QuantumState.from_amplitudes(mix, normalize=True)


# ---------------------------------------------------------------------------
# State files


def state_to_dict(s: QuantumState) -> dict:
    return {"n": s.n, "amplitudes": [[float(z.real), float(z.imag)] for z in s.amplitudes]}


def state_from_dict(data: dict) -> QuantumState:
    try:
        n = int(data["n"])
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed state file: {exc}") from exc
    if amps.size != 1 << n:
        raise DimensionError(f"state file declares n={n} but holds {amps.size} amplitudes")
    return QuantumState(n, amps)


def write_state(s: QuantumState, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(s)) + "\n")


def read_state(path) -> QuantumState:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read state file {path}: {exc}") from exc
    return state_from_dict(data)


# ---------------------------------------------------------------------------
# Sweeps


@dataclass
class SweepConfig:
    ensembles: list[StateSpec]
    tester: dict[str, float] | None = None
    gamma: float = 0.5
    retention: float = 0.5

    @classmethod
    def from_dict(cls, data: dict) -> SweepConfig:
        if not isinstance(data, dict) or "ensembles" not in data:
            raise ConfigurationError("sweep config needs an 'ensembles' list")
        base_seed = int(data.get("seed", 0))
        specs = []
        for ens in data["ensembles"]:
            count = int(ens.get("count", 1))
            seed = int(ens.get("seed", base_seed))
            for i in range(count):
                specs.append(
                    StateSpec(
                        kind=ens["kind"],
                        n=int(ens.get("n", 1)),
                        seed=seed + i,
                        noise=float(ens.get("noise", 0.0)),
                        path=ens.get("path"),
                    )
                )
        tester = data.get("tester")
        if tester is not None:
            tester = {
                "eps1": float(tester["eps1"]),
                "eps2": float(tester["eps2"]),
                "fail_prob": float(tester.get("fail_prob", 0.05)),
            }
        return cls(specs, tester, float(data.get("gamma", 0.5)), float(data.get("retention", 0.5)))

    @classmethod
    def load(cls, path) -> SweepConfig:
        try:
            data = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigurationError(f"cannot read sweep config {path}: {exc}") from exc
        return cls.from_dict(data)


@dataclass
class SweepRecord:
    kind: str
    n: int
    seed: int
    noise: float
    gowers3_pow8: float | None = None
    eta: float | None = None
    fact1: float | None = None
    exact_fidelity: float | None = None
    cover_bound: float | None = None
    k: int | None = None
    m: int | None = None
    verdict: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def row(self) -> dict:
        return {f: ("" if getattr(self, f) is None else getattr(self, f)) for f in CSV_FIELDS}


def _channel_seed(seed: int) -> int:
    return int(np.random.SeedSequence([seed, 1]).generate_state(1)[0])


def analyze_state(spec: StateSpec, config: SweepConfig) -> SweepRecord:
    rec = SweepRecord(spec.kind, spec.n, spec.seed, spec.noise)
    try:
        s = generate_state(spec)
        rec.n = s.n
        wspec = weyl_spectrum(s)
        rec.eta = weyl_uniformity(wspec, weyl_distribution(wspec))
        if s.n <= cap("gowers"):
            rec.gowers3_pow8 = gowers_norm_pow(s, 3)
        if s.n <= cap("fidelity"):
            rec.fact1 = fact1_certificate(wspec)[0]
            rec.exact_fidelity = stabilizer_fidelity_exact(s).fidelity
        V = greedy_subgroup(wspec, config.gamma, config.retention)
        cf = canonical_form(V)
        rec.k, rec.m = cf.k, cf.m
        rec.cover_bound = fidelity_from_subgroup(wspec, V)[0]
        if config.tester:
            ch = SampleChannel(wspec, seed=_channel_seed(spec.seed))
            rec.verdict = tolerant_test(ch, **config.tester).decision
    except Exception as exc:  # one bad row must not abort the sweep
        rec.verdict = f"error: {type(exc).__name__}: {exc}"
    return rec


def run_sweep(config: SweepConfig) -> tuple[list[SweepRecord], dict]:
    records = [analyze_state(spec, config) for spec in config.ensembles]
    return records, summarize(records)


def _exponents(records, key: str) -> dict:
    ratios = []
    for r in records:
        gamma, fid = getattr(r, key), r.exact_fidelity
        if gamma is None or fid is None or not 0 < gamma < 1 - 1e-12 or fid <= 0:
            continue
        ratios.append(math.log(fid) / math.log(gamma))
    if not ratios:
        return {"count": 0, "min": None, "max": None}
    return {"count": len(ratios), "min": min(ratios), "max": max(ratios)}


def summarize(records: list[SweepRecord]) -> dict:
    """Empirical exponents log F_S / log(eta) and log F_S / log(gowers3_pow8).

    ``max`` is the smallest C with F_S >= eta^C on every row.
    """
    return {
        "rows": len(records),
        "errors": sum(r.verdict.startswith("error") for r in records),
        "exponent_eta": _exponents(records, "eta"),
        "exponent_gowers": _exponents(records, "gowers3_pow8"),
    }


def records_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()
