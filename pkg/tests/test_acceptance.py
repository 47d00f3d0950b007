"""Exit criteria, one test each. Every test records a PASS/FAIL line that is
printed in the pytest terminal summary."""

import math
import time

import numpy as np
import pytest

from conftest import (
    ACCEPTANCE_LINES,
    SINGLE_QUBIT_STABILIZERS,
    brute_force_fidelity,
    clifford_orbit_states,
    random_state,
)
from stabtest.cover import (
    canonical_form,
    canonical_span,
    fidelity_from_subgroup,
    greedy_subgroup,
    purity_bound_check,
    stabilizer_cover,
)
from stabtest.f2 import enumerate_lagrangians, form_matrix, rref_basis
from stabtest.harness import StateSpec, generate_state, haar_state, random_stabilizer, t_tensor
from stabtest.sampler import SampleChannel, estimate_uniformity, tolerant_test
from stabtest.spectra import (
    fact1_certificate,
    gowers_norm_pow,
    naive_xor_convolution,
    stabilizer_fidelity_exact,
    weyl_distribution,
    weyl_spectrum,
    weyl_uniformity,
)
from stabtest.weyl import QuantumState, t_state


def record(label: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def four_quantities(s):
    spec = weyl_spectrum(s)
    return (
        gowers_norm_pow(s, 3),
        weyl_uniformity(spec, weyl_distribution(spec)),
        stabilizer_fidelity_exact(s).fidelity,
        fact1_certificate(spec)[0],
    )


def random_subgroup(n, rng):
    d = int(rng.integers(0, 2 * n + 1))
    return rref_basis(rng.integers(0, 1 << (2 * n), size=d).tolist(), n)


def test_1_exact_values():
    start = time.perf_counter()
    expected_t = (0.75, 0.625, math.cos(math.pi / 8) ** 2, 0.75)
    got_t = four_quantities(t_state())
    err_t = max(abs(g - e) for g, e in zip(got_t, expected_t))

    rng = np.random.default_rng(1)
    stab_states = [QuantumState.basis(n) for n in range(1, 6)]
    stab_states += [random_stabilizer(1 + i % 5, rng) for i in range(100)]
    err_s = max(abs(v - 1.0) for s in stab_states for v in four_quantities(s))
    elapsed = time.perf_counter() - start

    ok = err_t <= 1e-12 and err_s <= 1e-9 and elapsed < 60
    record(
        "1 exact values",
        ok,
        f"|T> max err {err_t:.1e} (tol 1e-12); 105 stabilizer states max err {err_s:.1e} (tol 1e-9); {elapsed:.1f}s",
    )
    assert ok


def test_2_inequalities():
    start = time.perf_counter()
    slack = 1e-9
    rng = np.random.default_rng(2)
    states = []
    for i in range(200):
        n = 1 + i % 5
        states.append(("random-haar", haar_state(n, rng)))
        states.append(("random-stabilizer", random_stabilizer(n, rng)))
        noise = float(rng.random())
        states.append(("noisy-stabilizer", generate_state(StateSpec("noisy-stabilizer", n, seed=i, noise=noise))))
    states += [("t-tensor", t_tensor(n)) for n in range(1, 6)]

    violations = {"fact1": 0, "cover": 0, "eta": 0, "purity": 0}
    checked = 0
    for _, s in states:
        spec = weyl_spectrum(s)
        fid = stabilizer_fidelity_exact(s).fidelity
        eta = weyl_uniformity(spec, weyl_distribution(spec))
        violations["fact1"] += fact1_certificate(spec)[0] > fid + slack
        violations["eta"] += eta < fid**6 - slack
        for V in (greedy_subgroup(spec, 0.5), random_subgroup(s.n, rng)):
            violations["cover"] += fidelity_from_subgroup(spec, V)[0] > fid + slack
            violations["purity"] += not purity_bound_check(spec, V).ok
        checked += 1
    elapsed = time.perf_counter() - start
    ok = sum(violations.values()) == 0 and elapsed < 600
    record("2 inequalities", ok, f"{checked} states, violations {violations}, {elapsed:.1f}s")
    assert ok


def test_3_cover_construction():
    rng = np.random.default_rng(3)
    failures = []
    total = 0
    for n in range(2, 7):
        J = form_matrix(n).astype(np.int64)
        for trial in range(100):
            V = random_subgroup(n, rng)
            cf = canonical_form(V)
            M = cf.U.matrix.astype(np.int64)
            if not np.array_equal((M.T @ J @ M) % 2, J):
                failures.append((n, trial, "symplectic"))
            if cf.U.image(V) != canonical_span(n, cf.k, cf.m):
                failures.append((n, trial, "image"))
            cover = stabilizer_cover(V)
            if len(cover.groups) != 4**cf.k:
                failures.append((n, trial, "count"))
            if not all(g.is_lagrangian() for g in cover.groups):
                failures.append((n, trial, "lagrangian"))
            members = V.elements()
            covered = np.zeros(members.size, dtype=bool)
            for g in cover.groups:
                covered |= g.contains_array(members)
            if not covered.all():
                failures.append((n, trial, "membership"))
            total += 1
    ok = not failures
    record("3 cover construction", ok, f"{total} subgroups (n=2..6), failures {failures[:5]}")
    assert ok


def test_4_lagrangian_counts():
    counts = [sum(1 for _ in enumerate_lagrangians(n)) for n in range(1, 5)]
    ok = counts == [3, 15, 135, 2295]
    record("4 Lagrangian counts", ok, f"{counts}")
    assert ok


def test_5_sampler():
    rng = np.random.default_rng(5)
    s = random_state(3, rng)
    q = weyl_distribution(weyl_spectrum(s)).q
    freq = np.bincount(SampleChannel(s, seed=50).bell_difference_batch(100_000), minlength=64) / 100_000
    tv = 0.5 * float(np.abs(freq - q).sum())

    delta = 0.05
    m = math.ceil(2 * math.log(6) / delta**2)
    spec = weyl_spectrum(s)
    eta = weyl_uniformity(spec, weyl_distribution(spec))
    hits = sum(abs(estimate_uniformity(SampleChannel(s, seed=1000 + t), m) - eta) <= delta for t in range(300))

    ok = tv <= 0.02 and hits >= 200
    record("5 sampler", ok, f"TV {tv:.4f} (<= 0.02); estimator within delta in {hits}/300 trials at m={m} (>= 200)")
    assert ok


def test_6_tester_operating_characteristics():
    start = time.perf_counter()
    eps1, eps2, fail = 0.9, 0.3, 0.05

    yes_states = []
    seed = 0
    while len(yes_states) < 200:
        s = generate_state(StateSpec("noisy-stabilizer", 4, seed=seed, noise=0.15))
        seed += 1
        if stabilizer_fidelity_exact(s).fidelity >= 0.9:
            yes_states.append(s)
    accepts = sum(tolerant_test(SampleChannel(s, seed=i), eps1, eps2, fail).accepted for i, s in enumerate(yes_states))

    t8 = weyl_spectrum(t_tensor(8))
    rejects_t = sum(not tolerant_test(SampleChannel(t8, seed=i), eps1, eps2, fail).accepted for i in range(200))
    rng = np.random.default_rng(6)
    rejects_h = sum(
        not tolerant_test(SampleChannel(haar_state(8, rng), seed=i), eps1, eps2, fail).accepted for i in range(200)
    )

    v4 = tolerant_test(SampleChannel(t_tensor(4), seed=1), eps1, eps2, fail)
    v8 = tolerant_test(SampleChannel(t8, seed=1), eps1, eps2, fail)
    same_m = v4.m == v8.m and v4.copies == 6 * v4.m and v8.copies == 6 * v8.m
    elapsed = time.perf_counter() - start

    ok = accepts >= 190 and rejects_t >= 190 and rejects_h >= 190 and same_m and elapsed < 300
    record(
        "6 tester",
        ok,
        f"accept {accepts}/200 (F_S>=0.9, {seed} seeds scanned), reject T^8 {rejects_t}/200, "
        f"reject Haar n=8 {rejects_h}/200, m={v4.m} at n=4 and {v8.m} at n=8, copies {v8.copies}; {elapsed:.1f}s",
    )
    assert ok


def test_7_oracle_equivalence():
    rng = np.random.default_rng(7)
    conv_err = 0.0
    for n in (1, 2, 3):
        for _ in range(10):
            spec = weyl_spectrum(random_state(n, rng))
            conv_err = max(conv_err, float(np.max(np.abs(weyl_distribution(spec).q - naive_xor_convolution(spec.p)))))
    fid1 = max(
        abs(stabilizer_fidelity_exact(s).fidelity - brute_force_fidelity(s.amplitudes, SINGLE_QUBIT_STABILIZERS))
        for s in [random_state(1, rng) for _ in range(100)] + [t_state()]
    )
    orbit = clifford_orbit_states(2)
    fid2 = max(
        abs(stabilizer_fidelity_exact(s).fidelity - brute_force_fidelity(s.amplitudes, orbit))
        for s in [random_state(2, rng) for _ in range(100)]
    )
    ok = conv_err <= 1e-12 and fid1 <= 1e-12 and fid2 <= 1e-12 and len(orbit) == 60
    record(
        "7 oracle equivalence",
        ok,
        f"convolution {conv_err:.1e}; fidelity vs 6-state {fid1:.1e}; vs {len(orbit)}-state orbit {fid2:.1e} (tol 1e-12)",
    )
    assert ok
