"""Ring geometry and coupling coefficients.

Sites live on the unit circle, z_j = exp(2*pi*i*j/N) for j = 1..N.  Every
coupling between two sites is a function of the chord ratio

    w(i, j) = (z_i + z_j) / (z_i - z_j) = -i * cot(pi * (i - j) / N),

which is purely imaginary and antisymmetric in i <-> j.  The two-body
coefficients of the ring Hamiltonian follow from it:

    hopping(i, j) = (q - 2) * w - w**2        (complex in general)
    density(i, j) = -(q**2 - q) / 2 * w**2    (real, >= 0 since w**2 <= 0)

For q = 2 the hopping reduces to the real value cot(pi*d/N)**2.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticeGeometry",
    "CouplingPair",
    "site_positions",
    "chord_ratio",
    "coupling_pair",
    "coupling_table",
    "ring_distance",
]


def site_positions(n_sites):
    """Complex positions z_j = exp(2*pi*i*j/N), j = 1..N (index 0 is site 1)."""
    if n_sites < 2:
        raise ValueError("need at least two sites")
    j = np.arange(1, n_sites + 1)
    return np.exp(2j * np.pi * j / n_sites)


def ring_distance(i, j, n_sites):
    """Shorter arc separation between sites i and j (0..N//2)."""
    d = (i - j) % n_sites
    return min(d, n_sites - d)


@dataclass(frozen=True)
class LatticeGeometry:
    """A ring of n_sites equispaced points on the unit circle."""

    n_sites: int
    positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("need at least two sites")
        object.__setattr__(self, "positions", site_positions(self.n_sites))


def chord_ratio(i, j, n_sites):
    """(z_i + z_j)/(z_i - z_j) for distinct sites i, j in 1..N.

    Evaluated as -i * cot(pi * d / N) with d reduced to (-N/2, N/2] so the
    tangent argument stays well conditioned.  Antisymmetric under i <-> j
    and exactly zero for antipodal sites.
    """
    n = int(n_sites)
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"sites must lie in 1..{n}")
    d = (i - j) % n
    if d == 0:
        raise ValueError("chord ratio requires distinct sites")
    if 2 * d == n:
        return complex(0.0)
    if 2 * d > n:
        d -= n
    return complex(0.0, -1.0 / math.tan(math.pi * d / n))


@dataclass(frozen=True)
class CouplingPair:
    """Hopping and density-density coefficients for one ordered site pair."""

    hopping: complex
    density: float


def coupling_pair(q, i, j, n_sites):
    """Coefficients of the two-body terms between sites i and j.

    The density coefficient is real and non-negative for q >= 2; the
    hopping coefficient picks up an imaginary part only for q != 2.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    w = chord_ratio(i, j, n_sites)
    w2 = (w * w).real
    hopping = (q - 2) * w - w2
    density = -0.5 * (q * q - q) * w2
    return CouplingPair(hopping=hopping, density=density)


def coupling_table(q, n_sites):
    """Coefficients for all separations, indexed by d = (i - j) mod N.

    Returns (hopping, density): hopping is complex of shape (N,), density
    float of shape (N,); entry d holds the coefficients of any ordered
    pair with separation d.  Entry 0 is unused and set to zero.  Both
    arrays depend on (i - j) only, which is what makes the model
    translation invariant around the ring.
    """
    n = int(n_sites)
    hopping = np.zeros(n, dtype=np.complex128)
    density = np.zeros(n, dtype=np.float64)
    for d in range(1, n):
        pair = coupling_pair(q, 1 + d, 1, n)
        hopping[d] = pair.hopping
        density[d] = pair.density
    return hopping, density
