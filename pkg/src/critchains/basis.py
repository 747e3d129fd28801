"""Occupation-number basis of a fixed particle-number sector.

A configuration is an int64 bitmask: bit p set means site p+1 holds a
particle.  The sector with M = N/q particles on N sites has dimension
C(N, M); its configurations are kept sorted ascending as integers, and
that ordering is the canonical one used everywhere (vectors, CSV output,
cache files).

Ranking uses the combinatorial number system: the rank of a configuration
with occupied 0-based positions p_1 < p_2 < ... < p_M equals
sum_k C(p_k, k).  This is an independent path to the same ordering that
Gosper enumeration produces, and the test suite checks they agree.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from ._bits import fill_configs
from .errors import InvalidModelError, OutOfSectorError

__all__ = ["SectorBasis", "sector_dimension", "n_particles"]

# int64 leaves 62 usable bits below the sign bit with headroom for shifts.
MAX_SITES = 62


def n_particles(n_sites, q):
    """Particle count M = N/q of the sector; q must divide N."""
    q = int(q)
    n = int(n_sites)
    if q < 2:
        raise InvalidModelError("q must be at least 2")
    if n < 2 or n > MAX_SITES:
        raise InvalidModelError(f"n_sites must lie in 2..{MAX_SITES}")
    if n % q != 0:
        raise InvalidModelError(f"q={q} does not divide n_sites={n}")
    return n // q


def sector_dimension(n_sites, q):
    """Dimension C(N, N/q) of the fixed-number sector."""
    return comb(int(n_sites), n_particles(n_sites, q))


@dataclass(frozen=True)
class SectorBasis:
    """All configurations of m particles on n sites, sorted ascending."""

    n_sites: int
    m: int
    dimension: int = field(init=False)
    configs: np.ndarray = field(init=False, repr=False, compare=False)
    _binom: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.n_sites)
        m = int(self.m)
        if n < 2 or n > MAX_SITES:
            raise InvalidModelError(f"n_sites must lie in 2..{MAX_SITES}")
        if not 0 <= m <= n:
            raise InvalidModelError("particle count must lie in 0..n_sites")
        dim = comb(n, m)
        configs = np.empty(dim, dtype=np.int64)
        fill_configs(n, m, configs)
        # C(p, k) table for ranking; C(62, 31) still fits in int64.
        binom = np.zeros((n + 1, m + 2), dtype=np.int64)
        binom[:, 0] = 1
        for p in range(1, n + 1):
            for k in range(1, min(p, m + 1) + 1):
                binom[p, k] = binom[p - 1, k - 1] + binom[p - 1, k]
        object.__setattr__(self, "dimension", dim)
        object.__setattr__(self, "configs", configs)
        object.__setattr__(self, "_binom", binom)

    @classmethod
    def for_model(cls, n_sites, q):
        """Sector basis of the q-model on n_sites sites (M = N/q particles)."""
        return cls(n_sites=int(n_sites), m=n_particles(n_sites, q))

    def _check_config(self, config):
        c = int(config)
        if c < 0 or c >> self.n_sites:
            raise OutOfSectorError(
                f"config {c:#x} uses sites outside 1..{self.n_sites}")
        if c.bit_count() != self.m:
            raise OutOfSectorError(
                f"config {c:#x} has {c.bit_count()} particles, expected {self.m}")
        return c

    def rank(self, config):
        """Position of a configuration in the canonical ordering."""
        c = self._check_config(config)
        r = 0
        k = 0
        p = 0
        while c:
            if c & 1:
                k += 1
                r += self._binom[p, k]
            c >>= 1
            p += 1
        return r

    def unrank(self, index):
        """Configuration at a given position (inverse of rank)."""
        idx = int(index)
        if not 0 <= idx < self.dimension:
            raise IndexError(f"rank {idx} outside 0..{self.dimension - 1}")
        return int(self.configs[idx])

    def occupations(self, config):
        """0/1 occupation array of length n_sites (entry p is site p+1)."""
        c = self._check_config(config)
        bits = (c >> np.arange(self.n_sites)) & 1
        return bits.astype(np.int8)

    def index_of(self, configs):
        """Vectorized rank lookup by binary search in the sorted table."""
        return np.searchsorted(self.configs, configs)

    def __len__(self):
        return self.dimension
