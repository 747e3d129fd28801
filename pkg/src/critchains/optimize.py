"""Scan the free density coupling U of the -opt kinds for best overlap.

The figure of merit is the squared overlap between the truncated model's
ground state and the analytic state of the exact kind at the same (q, N).
A coarse grid locates the best region first (the landscape can have
level crossings where the ground state switches branch and the overlap
jumps); golden-section refinement then polishes the peak inside one
grid cell.  Every Hamiltonian solve along the way reuses one basis and
one analytic state.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import build_state
from .basis import SectorBasis
from .eigensolve import lowest_k
from .errors import InvalidModelError
from .hamiltonian import OPT_KINDS, ModelSpec, build
from .observables import overlap

__all__ = ["ScanResult", "optimize_u"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# overlap jump between neighbouring grid points flagged as a crossing
_JUMP = 0.1


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a U scan."""

    best_u: float
    best_delta: float
    bracket: tuple
    samples: list = field(repr=False)   # (u, delta) in evaluation order
    on_boundary: bool = False
    crossings: list = field(default_factory=list)


def _golden_max(f, lo, hi, tol, samples):
    """Golden-section maximization on [lo, hi] to interval width tol."""
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = f(c)
    fd = f(d)
    samples.append((c, fc))
    samples.append((d, fd))
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
            samples.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
            samples.append((d, fd))
    return (c, fc) if fc >= fd else (d, fd)


def optimize_u(q, n_sites, kind, bracket=(0.1, 8.0), coarse_step=0.1,
               tol=1e-3, solver_tol=1e-10, seed=None):
    """Best U for a truncated kind by coarse grid plus golden section.

    Returns a ScanResult whose best_delta is the maximum over every
    evaluation made (grid and refinement), with on_boundary set when the
    grid optimum sits at an end of the bracket and crossings listing
    grid points where the overlap jumps by more than 0.1.
    """
    if kind not in OPT_KINDS:
        raise InvalidModelError(
            f"kind {kind!r} has no free coupling; expected one of {OPT_KINDS}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0 < lo < hi):
        raise ValueError("bracket must satisfy 0 < lo < hi")
    basis = SectorBasis.for_model(n_sites, q)
    target = build_state(n_sites, q, basis)
    samples = []

    def delta_at(u):
        spec = ModelSpec(q=q, n_sites=n_sites, kind=kind, u=float(u))
        h = build(spec, basis)
        use_seed = spec.default_seed() if seed is None else seed
        res = lowest_k(h, k=1, tol=solver_tol, seed=use_seed)
        return overlap(res.vectors[:, 0], target, n_sites).delta

    n_grid = int(round((hi - lo) / coarse_step)) + 1
    grid = np.linspace(lo, hi, n_grid)
    values = []
    for u in grid:
        d = delta_at(u)
        values.append(d)
        samples.append((float(u), d))
    values = np.asarray(values)
    crossings = [float(grid[i]) for i in range(1, n_grid)
                 if abs(values[i] - values[i - 1]) > _JUMP]
    top = int(np.argmax(values))
    on_boundary = top in (0, n_grid - 1)

    ref_lo = max(lo, grid[top] - coarse_step)
    ref_hi = min(hi, grid[top] + coarse_step)
    _golden_max(delta_at, ref_lo, ref_hi, tol, samples)

    best_u, best_delta = max(samples, key=lambda s: s[1])
    return ScanResult(best_u=float(best_u), best_delta=float(best_delta),
                      bracket=(lo, hi), samples=samples,
                      on_boundary=on_boundary, crossings=crossings)
