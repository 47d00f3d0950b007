from itertools import product

import numpy as np
import pytest

from conftest import kron_weyl, random_state
from stabtest.errors import DimensionError, NumericalIntegrityError
from stabtest.f2 import PauliIndex, form_bits
from stabtest.weyl import (
    QuantumState,
    apply_weyl,
    product_phase,
    project_stabilizer,
    stabilizer_state,
    t_state,
    weyl_expectation,
    weyl_matrix,
    weyl_product_phase,
)

P = PauliIndex.parse


def test_z_on_one():
    out = apply_weyl(QuantumState.basis(1, 1), P("Z"))
    np.testing.assert_allclose(out.amplitudes, [0, -1])


def test_y_on_zero():
    out = apply_weyl(QuantumState.basis(1, 0), P("Y"))
    np.testing.assert_allclose(out.amplitudes, [0, 1j])


def test_involution(rng):
    for n in (1, 3, 5):
        s = random_state(n, rng)
        for x in rng.integers(0, 1 << (2 * n), size=10):
            x = PauliIndex.from_bits(int(x), n)
            np.testing.assert_allclose(apply_weyl(apply_weyl(s, x), x).amplitudes, s.amplitudes, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matrix_matches_kronecker_oracle(n):
    for x in range(1 << (2 * n)):
        W = weyl_matrix(PauliIndex.from_bits(x, n))
        np.testing.assert_allclose(W, kron_weyl(x, n), atol=1e-14)
        np.testing.assert_allclose(W, W.conj().T, atol=1e-14)
        np.testing.assert_allclose(W @ W, np.eye(1 << n), atol=1e-14)


@pytest.mark.parametrize("n", [1, 2])
def test_orthogonality_and_commutation(n):
    mats = [weyl_matrix(PauliIndex.from_bits(x, n)) for x in range(1 << (2 * n))]
    for x, y in product(range(len(mats)), repeat=2):
        tr = np.trace(mats[x] @ mats[y])
        assert abs(tr - (1 << n) * (x == y)) < 1e-12
        sign = (-1) ** form_bits(x, y, n)
        np.testing.assert_allclose(mats[x] @ mats[y], sign * mats[y] @ mats[x], atol=1e-14)


def test_product_phase_examples():
    assert weyl_product_phase(P("X"), P("Z")) == 3
    assert weyl_product_phase(P("Z"), P("X")) == 1
    for s in ("X", "Y", "Z", "XY", "ZZ"):
        assert weyl_product_phase(P(s), P(s)) == 0


@pytest.mark.parametrize("n", [1, 2])
def test_product_phase_exhaustive(n):
    for x, y in product(range(1 << (2 * n)), repeat=2):
        t = int(product_phase(x, y, n))
        np.testing.assert_allclose(kron_weyl(x, n) @ kron_weyl(y, n), 1j**t * kron_weyl(x ^ y, n), atol=1e-14)
        t_rev = int(product_phase(y, x, n))
        # W_y W_x is the adjoint of W_x W_y, and they differ by (-1)^form
        assert (t + t_rev) % 4 == 0
        assert (t - t_rev) % 4 == 2 * form_bits(x, y, n)


def test_expectation_examples(rng):
    assert weyl_expectation(QuantumState.basis(1), P("Z")) == pytest.approx(1.0)
    assert weyl_expectation(t_state(), P("X")) == pytest.approx(1 / np.sqrt(2), abs=1e-15)
    s = random_state(4, rng)
    assert weyl_expectation(s, PauliIndex.identity(4)) == pytest.approx(1.0, abs=1e-12)


def test_expectation_matches_dense(rng):
    n = 3
    s = random_state(n, rng)
    for x in range(1 << (2 * n)):
        dense = np.vdot(s.amplitudes, kron_weyl(x, n) @ s.amplitudes).real
        assert weyl_expectation(s, PauliIndex.from_bits(x, n)) == pytest.approx(dense, abs=1e-12)


def test_dimension_checks():
    with pytest.raises(DimensionError):
        apply_weyl(QuantumState.basis(2), P("X"))
    with pytest.raises(DimensionError):
        weyl_product_phase(P("X"), P("XX"))


def test_state_validation():
    with pytest.raises(NumericalIntegrityError):
        QuantumState(1, np.array([1.0, 1.0]))
    with pytest.raises(DimensionError):
        QuantumState.from_amplitudes([1, 0, 0])
    s = QuantumState.from_amplitudes([3, 4j], normalize=True)
    assert s.n == 1
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


def test_tensor_order():
    # |1> on qubit 0, |0> on qubit 1 -> index 1
    s = QuantumState.basis(1, 1).tensor(QuantumState.basis(1, 0))
    assert s.amplitudes[1] == 1


def test_stabilizer_state_is_eigenstate(rng):
    n = 2
    gens = [P("XX").bits, P("ZZ").bits]
    for signs in product((0, 1), repeat=2):
        s = stabilizer_state(gens, signs, n)
        for g, sg in zip(gens, signs):
            val = weyl_expectation(s, PauliIndex.from_bits(g, n))
            assert val == pytest.approx((-1) ** sg)
        proj = project_stabilizer(s.amplitudes, gens, signs, n)
        np.testing.assert_allclose(proj, s.amplitudes, atol=1e-12)
