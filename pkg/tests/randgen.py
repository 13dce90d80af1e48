"""Seeded generators shared across test modules."""

import numpy as np

from qcohere import TTransform, kraus_set, prob_vector, pure_state, sorted_desc


def random_prob_vector(rng, d):
    return prob_vector(rng.dirichlet(np.ones(d)))


def random_pure_state(rng, d, phases=True):
    v = rng.random(d)
    v = v / v.sum()
    amps = np.sqrt(v).astype(complex)
    if phases:
        amps = amps * np.exp(2j * np.pi * rng.random(d))
    return pure_state(amps)


def random_majorized_pair(rng, d):
    """(x, y) sorted descending with x majorized by y."""
    y = sorted_desc(rng.dirichlet(np.ones(d)))
    x = y.copy()
    for _ in range(rng.integers(1, d + 1)):
        i, j = sorted(rng.choice(d, size=2, replace=False))
        x = TTransform(int(i) + 1, int(j) + 1, float(rng.random())).apply(x)
    return prob_vector(sorted_desc(x)), prob_vector(y)


def _merge_pair(d, i, j):
    """Two operators folding coordinate j onto i; complete and incoherent."""
    a = np.zeros((d, d), dtype=complex)
    b = np.zeros((d, d), dtype=complex)
    for m in range(d):
        if m not in (i, j):
            a[m, m] = 1.0 / np.sqrt(2.0)
            b[m, m] = 1.0 / np.sqrt(2.0)
    a[i, i] = 1.0 / np.sqrt(2.0)
    b[i, i] = 1.0 / np.sqrt(2.0)
    a[i, j] = 1.0 / np.sqrt(2.0)
    b[i, j] = -1.0 / np.sqrt(2.0)
    return a, b


def random_incoherent_kraus(rng, d, max_ops=4):
    """Random complete incoherent Kraus set with at most max_ops operators.

    Each base operator permutes coordinates and scales columns; column
    weights across operators sum to one. Half the time (when room allows)
    a two-operator merge is composed in, exercising non-injective maps.
    """
    n_ops = int(rng.integers(1, max_ops + 1))
    merge = d >= 2 and n_ops <= max_ops // 2 and rng.random() < 0.5
    weights = rng.dirichlet(np.ones(n_ops), size=d).T
    ops = []
    for n in range(n_ops):
        perm = rng.permutation(d)
        phase = np.exp(2j * np.pi * rng.random(d))
        k = np.zeros((d, d), dtype=complex)
        k[perm, np.arange(d)] = np.sqrt(weights[n]) * phase
        ops.append(k)
    base = kraus_set(ops)
    if not merge:
        return base
    i, j = rng.choice(d, size=2, replace=False)
    a, b = _merge_pair(d, int(i), int(j))
    return kraus_set([a @ k for k in base.operators] + [b @ k for k in base.operators])
