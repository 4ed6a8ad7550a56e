"""Shared fixtures and random-state helpers for the test suite."""

import numpy as np
import pytest

from superpos.optimize import OptimizerConfig
from superpos.states import DensityMatrix, PureState


def random_pure(rng, dims):
    n = int(np.prod(dims))
    amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(tuple(dims), amps / np.linalg.norm(amps))


def random_product_pure(rng, dims):
    amps = np.ones(1, dtype=complex)
    for d in dims:
        factor = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        amps = np.kron(amps, factor / np.linalg.norm(factor))
    return PureState(tuple(dims), amps)


def random_density(rng, dims, rank):
    n = int(np.prod(dims))
    probs = rng.dirichlet(np.ones(rank))
    mat = np.zeros((n, n), dtype=complex)
    for p in probs:
        psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi /= np.linalg.norm(psi)
        mat += p * np.outer(psi, psi.conj())
    return DensityMatrix(tuple(dims), mat)


def random_unitary_from(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_cq_state(rng, d_side=2, d_other=2):
    """Random classical-quantum state: block diagonal in a random side basis."""
    u = random_unitary_from(rng, d_side)
    probs = rng.dirichlet(np.ones(d_side))
    mat = np.zeros((d_side * d_other,) * 2, dtype=complex)
    for i, p in enumerate(probs):
        proj = np.outer(u[:, i], u[:, i].conj())
        mat += p * np.kron(proj, random_density(rng, (d_other,), rank=d_other).mat)
    return DensityMatrix((d_side, d_other), mat)


def random_separable(rng, terms=3):
    mat = np.zeros((4, 4), dtype=complex)
    probs = rng.dirichlet(np.ones(terms))
    for p in probs:
        mat += p * np.kron(
            random_density(rng, (2,), rank=rng.integers(1, 3)).mat,
            random_density(rng, (2,), rank=rng.integers(1, 3)).mat,
        )
    return DensityMatrix((2, 2), mat)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def light_cfg():
    """Small optimizer budget for unit tests; warm starts carry the accuracy."""
    return OptimizerConfig(seed=11, restarts=3, max_iters=700)
