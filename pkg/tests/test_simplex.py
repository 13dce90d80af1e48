import numpy as np
import pytest

from qcohere import (
    DimensionMismatchError,
    MajorizationError,
    NormalizationError,
    TTransform,
    apply_chain,
    majorizes,
    prob_vector,
    sorted_desc,
    tail_sum,
    ttransform_chain,
)
from randgen import random_majorized_pair, random_prob_vector


def test_prob_vector_accepts_and_clamps():
    x = prob_vector([0.5, 0.5])
    assert x.dtype == np.float64
    x = prob_vector([1.0, -5e-13, 5e-13])
    assert x[1] == 0.0


def test_prob_vector_rejects():
    with pytest.raises(NormalizationError):
        prob_vector([0.6, 0.5])
    with pytest.raises(NormalizationError):
        prob_vector([1.1, -0.1])


def test_sorted_desc():
    np.testing.assert_array_equal(sorted_desc([0.1, 0.7, 0.2]), [0.7, 0.2, 0.1])
    np.testing.assert_array_equal(sorted_desc([0.5, 0.5]), [0.5, 0.5])


def test_tail_sum_values():
    assert abs(tail_sum([0.8, 0.1, 0.1], 2) - 0.2) < 1e-12
    assert abs(tail_sum([0.1, 0.8, 0.1], 2) - 0.2) < 1e-12
    assert tail_sum([0.8, 0.1, 0.1], 1) == 1.0
    assert tail_sum([1.0, 0.0, 0.0], 2) == 0.0


def test_tail_sum_range():
    with pytest.raises(IndexError):
        tail_sum([0.5, 0.5], 0)
    with pytest.raises(IndexError):
        tail_sum([0.5, 0.5], 3)


def test_majorizes_basics():
    assert majorizes([0.7, 0.3], [0.5, 0.5])
    assert not majorizes([0.5, 0.5], [0.7, 0.3])
    assert majorizes([0.5, 0.3, 0.2], [0.5, 0.3, 0.2])
    # the comparison sorts internally
    assert majorizes([0.3, 0.7], [0.5, 0.5])
    with pytest.raises(DimensionMismatchError):
        majorizes([1.0], [0.5, 0.5])


def test_majorizes_extremes():
    rng = np.random.default_rng(11)
    for _ in range(100):
        d = int(rng.integers(2, 9))
        x = random_prob_vector(rng, d)
        basis = np.zeros(d)
        basis[0] = 1.0
        assert majorizes(x, x)
        assert majorizes(basis, x)
        assert majorizes(x, np.full(d, 1.0 / d))


def test_chain_trivial():
    x = np.array([0.6, 0.4])
    assert ttransform_chain(x, x) == []


def test_chain_single_pair():
    chain = ttransform_chain(np.array([0.5, 0.5]), np.array([0.7, 0.3]))
    assert len(chain) == 1
    tr = chain[0]
    assert (tr.i, tr.j) == (1, 2)
    assert abs(tr.t - 0.5) < 1e-12
    np.testing.assert_allclose(apply_chain(chain, [0.7, 0.3]), [0.5, 0.5], atol=1e-12)


def test_chain_worked_triple():
    x = np.full(3, 1.0 / 3.0)
    y = np.array([0.5, 0.3, 0.2])
    chain = ttransform_chain(x, y)
    assert len(chain) <= 2
    np.testing.assert_allclose(apply_chain(chain, y), x, atol=1e-12)


def test_chain_interleaved_excess():
    # donors and recipients alternate; greedy pairing from the wrong end
    # loses majorization on this input
    x = np.array([0.4, 0.3, 0.2, 0.1])
    y = np.array([0.45, 0.25, 0.25, 0.05])
    chain = ttransform_chain(x, y)
    assert len(chain) <= 3
    np.testing.assert_allclose(apply_chain(chain, y), x, atol=1e-12)


def test_chain_requires_majorization():
    with pytest.raises(MajorizationError):
        ttransform_chain(np.array([0.7, 0.3]), np.array([0.5, 0.5]))


def test_chain_requires_sorted():
    with pytest.raises(ValueError):
        ttransform_chain(np.array([0.3, 0.7]), np.array([0.8, 0.2]))


def test_chain_random_pairs():
    rng = np.random.default_rng(42)
    for _ in range(500):
        d = int(rng.integers(2, 9))
        x, y = random_majorized_pair(rng, d)
        chain = ttransform_chain(x, y)
        assert len(chain) <= d - 1
        for tr in chain:
            assert 0.0 <= tr.t <= 1.0
            assert 1 <= tr.i < tr.j <= d
        out = apply_chain(chain, y)
        assert np.abs(out - x).max() <= 1e-9
        assert abs(out.sum() - 1.0) <= 1e-12


def test_ttransform_validation():
    with pytest.raises(ValueError):
        TTransform(1, 1, 0.5)
    with pytest.raises(ValueError):
        TTransform(1, 2, 1.5)
