"""Shared fixtures.

The heavy objects (bases, analytic states, ground states) are memoized
per session so the acceptance tests and the unit tests can share work.
"""

from functools import lru_cache

import numpy as np
import pytest

from critchains.analytic import build_state
from critchains.basis import SectorBasis
from critchains.eigensolve import lowest_k
from critchains.hamiltonian import ModelSpec, build


@lru_cache(maxsize=None)
def _basis(n_sites, q):
    return SectorBasis.for_model(n_sites, q)


@lru_cache(maxsize=None)
def _analytic(n_sites, q):
    return build_state(n_sites, q, _basis(n_sites, q))


@lru_cache(maxsize=None)
def _ground(q, n_sites, kind, u=1.0, k=1):
    spec = ModelSpec(q=q, n_sites=n_sites, kind=kind, u=u)
    h = build(spec, _basis(n_sites, q))
    return lowest_k(h, k=k, seed=spec.default_seed())


@pytest.fixture(scope="session")
def basis_of():
    return _basis


@pytest.fixture(scope="session")
def analytic_of():
    return _analytic


@pytest.fixture(scope="session")
def ground_of():
    return _ground


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
