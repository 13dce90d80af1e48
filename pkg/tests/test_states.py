import numpy as np
import pytest

from qcohere import (
    DensityMatrixError,
    NormalizationError,
    ParameterError,
    ResourceLimitError,
    canonicalize,
    check_density,
    pure_density,
    pure_state,
    sorted_desc,
    squared_amplitudes,
    support_size,
    tensor_power,
)
from randgen import random_pure_state

INV2 = 1.0 / np.sqrt(2.0)


def test_pure_state_validation():
    psi = pure_state([INV2, INV2 * 1j])
    assert psi.dtype == np.complex128
    with pytest.raises(NormalizationError):
        pure_state([1.0, 0.1])


def test_squared_amplitudes():
    np.testing.assert_allclose(
        squared_amplitudes([INV2, -INV2 * 1j]), [0.5, 0.5], atol=1e-15
    )


def test_canonicalize_phase_only():
    c = canonicalize([1j * INV2, -INV2])
    np.testing.assert_allclose(c.state, [INV2, INV2], atol=1e-15)
    np.testing.assert_array_equal(c.permutation, [0, 1])  # stable on ties
    np.testing.assert_allclose(c.phases, [-1j, -1.0], atol=1e-15)


def test_canonicalize_swap():
    c = canonicalize([0.0, 1.0])
    np.testing.assert_allclose(c.state, [1.0, 0.0], atol=1e-15)
    np.testing.assert_array_equal(c.permutation, [1, 0])


def test_canonicalize_mixed():
    c = canonicalize([0.3, 0.5j, np.sqrt(0.66)])
    np.testing.assert_allclose(c.state, [np.sqrt(0.66), 0.5, 0.3], atol=1e-15)
    np.testing.assert_array_equal(c.permutation, [2, 1, 0])
    np.testing.assert_allclose(c.phases, [1.0, -1j, 1.0], atol=1e-15)


def test_canonicalize_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        psi = random_pure_state(rng, d)
        c = canonicalize(psi)
        assert np.all(np.diff(c.state) <= 1e-15)
        assert np.all(c.state >= 0.0)
        assert np.abs(np.abs(c.phases) - 1.0).max() <= 1e-12
        m = c.matrix()
        assert np.abs(m @ psi - c.state).max() <= 1e-12
        assert np.abs(c.inverse_matrix() @ c.state - psi).max() <= 1e-12
        # the frame change is unitary and incoherent
        assert np.abs(m @ m.conj().T - np.eye(d)).max() <= 1e-12
        assert all(np.count_nonzero(np.abs(m[:, k]) > 1e-12) == 1 for k in range(d))
        np.testing.assert_allclose(
            squared_amplitudes(c.state.astype(complex)),
            sorted_desc(squared_amplitudes(psi)),
            atol=1e-12,
        )


def test_tensor_power_pair():
    psi = pure_state([INV2, INV2])
    out = tensor_power(psi, 2)
    np.testing.assert_allclose(out, np.full(4, 0.5), atol=1e-15)
    np.testing.assert_array_equal(tensor_power(psi, 1), psi)


def test_tensor_power_embedded_zero():
    psi = pure_state([INV2, INV2, 0.0])
    out = tensor_power(psi, 2)
    assert out.size == 9
    expected = np.zeros(9)
    expected[[0, 1, 3, 4]] = 0.5
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_tensor_power_norm():
    rng = np.random.default_rng(9)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 4))
        out = tensor_power(random_pure_state(rng, d), n)
        assert out.size == d**n
        assert abs((np.abs(out) ** 2).sum() - 1.0) <= 1e-9


def test_tensor_power_limits():
    psi = pure_state(np.full(10, np.sqrt(0.1)))
    with pytest.raises(ResourceLimitError):
        tensor_power(psi, 7)
    with pytest.raises(ParameterError):
        tensor_power(psi, 0)


def test_support_size():
    assert support_size([INV2, INV2, 0.0]) == 2
    assert support_size(np.full(3, 1 / np.sqrt(3))) == 3
    assert support_size(tensor_power(pure_state([INV2, INV2, 0.0]), 2)) == 4
    # amplitudes at or below the threshold do not count
    assert support_size([np.sqrt(1 - 1e-20), 1e-10]) == 1


def test_check_density():
    rho = check_density(np.diag([0.5, 0.5]).astype(complex))
    assert rho.shape == (2, 2)
    with pytest.raises(DensityMatrixError):
        check_density(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(DensityMatrixError):
        check_density(np.diag([0.7, 0.7]))
    with pytest.raises(DensityMatrixError):
        check_density(np.diag([1.5, -0.5]))


def test_pure_density():
    rho = pure_density([INV2, INV2 * 1j])
    assert abs(rho.trace() - 1.0) < 1e-12
    np.testing.assert_allclose(rho @ rho, rho, atol=1e-12)
