"""Closed-form ground state of the exact (untruncated) ring models.

For a configuration with occupied positions z_a on the unit circle the
unnormalized amplitude is

    amp(n) = sign(n) * prod_{a<b occupied} (z_a - z_b)^(q - 2)
                     * prod_{a occupied, b not} (z_a - z_b)^(-1) ...

written compactly over all site pairs i < j as (z_i - z_j) raised to
q*n_i*n_j - n_i - n_j, times the alternating sign (-1)^(sum_j (j-1) n_j).
Only configurations with exactly N/q particles have nonzero amplitude.

Amplitudes span many orders of magnitude, so everything is carried as
log magnitude plus phase and exponentiated only after the global maximum
is known.  The normalized vector is returned in the canonical basis
ordering with the first component rotated to be real positive, which
pins the overall phase (for q = 2 the result is then real).

The exact-kind ground-state energy has the closed form
E0 = -(q - 1)/(6 q) * N * (3 N + q - 8).
"""

import cmath
import math

import numpy as np

from .basis import SectorBasis, n_particles
from .errors import OutOfSectorError
from .lattice import site_positions

__all__ = [
    "LogAmplitude", "log_amplitude", "build_state",
    "exact_ground_energy", "parity_sign",
]


class LogAmplitude:
    """Amplitude stored as log|amp| and a phase in (-pi, pi]."""

    __slots__ = ("log_magnitude", "phase")

    def __init__(self, log_magnitude, phase):
        self.log_magnitude = float(log_magnitude)
        p = (float(phase) + math.pi) % (2.0 * math.pi) - math.pi
        # wrap to (-pi, pi]
        self.phase = math.pi if p == -math.pi else p

    def value(self):
        return math.exp(self.log_magnitude) * cmath.exp(1j * self.phase)

    def __repr__(self):
        return f"LogAmplitude(log_magnitude={self.log_magnitude!r}, phase={self.phase!r})"


def parity_sign(config):
    """(-1)**(sum of (j - 1) over occupied sites j), the alternating factor."""
    c = int(config)
    total = 0
    p = 0
    while c:
        if c & 1:
            total += p
        c >>= 1
        p += 1
    return -1 if total & 1 else 1


def exact_ground_energy(q, n_sites):
    """Closed-form ground-state energy of the exact kind."""
    n_particles(n_sites, q)  # validate the sector exists
    n = float(n_sites)
    return -(q - 1.0) / (6.0 * q) * n * (3.0 * n + q - 8.0)


def log_amplitude(config, n_sites, q):
    """Log amplitude of one configuration (must have N/q particles)."""
    m = n_particles(n_sites, q)
    c = int(config)
    if c < 0 or c >> n_sites:
        raise OutOfSectorError(f"config {c:#x} uses sites outside 1..{n_sites}")
    if c.bit_count() != m:
        raise OutOfSectorError(
            f"config {c:#x} has {c.bit_count()} particles, expected {m}")
    z = site_positions(n_sites)
    occ = [(c >> p) & 1 for p in range(n_sites)]
    log_mag = 0.0
    phase = 0.0
    for i in range(n_sites):
        for j in range(i + 1, n_sites):
            e = q * occ[i] * occ[j] - occ[i] - occ[j]
            if e:
                lz = cmath.log(z[i] - z[j])
                log_mag += e * lz.real
                phase += e * lz.imag
    if parity_sign(c) < 0:
        phase += math.pi
    return LogAmplitude(log_mag, phase)


def build_state(n_sites, q, basis=None, chunk=131072):
    """Normalized analytic ground state over a sector basis.

    Vectorized: for the occupation row x of each configuration the pair
    sum is q/2 * x L x^T - x (L 1) with L[i, j] = log(z_i - z_j) made
    symmetric (diagonal zero); the alternating sign enters as a phase
    pi * (x . positions).
    """
    if basis is None:
        basis = SectorBasis.for_model(n_sites, q)
    m = n_particles(n_sites, q)
    if basis.n_sites != n_sites or basis.m != m:
        raise OutOfSectorError("basis does not match the requested sector")
    n = int(n_sites)
    z = site_positions(n)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)  # excluded by x_i * x_j below
    # keep the i < j branch of the log on both triangles: the pair term
    # is log(z_i - z_j) with i < j, and averaging in the transpose would
    # shift every pair by half a branch cut
    upper = np.triu(np.log(diff), k=1)
    logdiff = upper + upper.T
    row_sum = logdiff.sum(axis=1)
    positions = np.arange(n, dtype=np.float64)

    dim = basis.dimension
    log_mag = np.empty(dim, dtype=np.float64)
    phase = np.empty(dim, dtype=np.float64)
    for lo in range(0, dim, chunk):
        hi = min(lo + chunk, dim)
        x = ((basis.configs[lo:hi, None] >> np.arange(n)) & 1).astype(np.float64)
        quad = 0.5 * np.einsum("ki,ij,kj->k", x, logdiff, x, optimize=True)
        lin = x @ row_sum
        val = q * quad - lin
        log_mag[lo:hi] = val.real
        phase[lo:hi] = val.imag + math.pi * (x @ positions)

    log_mag -= log_mag.max()
    state = np.exp(log_mag) * np.exp(1j * phase)
    state /= np.linalg.norm(state)
    first = state[0]
    state *= abs(first) / first
    if q == 2:
        # phases are all 0 or pi once the gauge is fixed
        state = state.real.astype(np.complex128)
    return state
