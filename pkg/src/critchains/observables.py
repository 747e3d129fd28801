"""State comparisons and measurements on sector vectors.

All vectors live in the canonical sector ordering of a SectorBasis.
Overlaps are reported as the gauge-free squared modulus together with
its per-site root, which is the size-insensitive figure of merit for
comparing truncated models across chain lengths.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ._bits import fill_configs
from .basis import SectorBasis

__all__ = [
    "OverlapReport", "overlap", "site_densities",
    "EntropyCurve", "block_entropy", "entropy_curve",
    "CorrelationCurve", "g2_curve",
    "SpectrumReport", "normalized_spectrum", "match_excited",
]


@dataclass(frozen=True)
class OverlapReport:
    """Squared overlap and its per-site root."""

    delta: float
    delta_per_site: float


def overlap(a, b, n_sites):
    """Squared overlap |<a|b>|^2 of two normalized vectors.

    Symmetric in its arguments down to the last bit (the two inner
    products are exact complex conjugates).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"vector shapes differ: {a.shape} vs {b.shape}")
    delta = float(abs(np.vdot(a, b)) ** 2)
    return OverlapReport(delta=delta, delta_per_site=delta ** (1.0 / n_sites))


_CHUNK = 131072


def _occupation_rows(configs, n):
    return ((configs[:, None] >> np.arange(n)) & 1).astype(np.float64)


def site_densities(v, basis):
    """Expectation <n_p> per site (length n_sites)."""
    v = np.asarray(v)
    if v.shape != (basis.dimension,):
        raise ValueError("vector does not match the basis")
    w = np.abs(v) ** 2
    dens = np.zeros(basis.n_sites, dtype=np.float64)
    for lo in range(0, basis.dimension, _CHUNK):
        hi = min(lo + _CHUNK, basis.dimension)
        dens += w[lo:hi] @ _occupation_rows(basis.configs[lo:hi], basis.n_sites)
    return dens


@dataclass(frozen=True)
class EntropyCurve:
    """Von Neumann entropies of contiguous blocks of every length."""

    lengths: np.ndarray
    entropies: np.ndarray
    n_sites: int


def _words(n_bits, n_set):
    from math import comb
    out = np.empty(comb(n_bits, n_set), dtype=np.int64)
    fill_configs(n_bits, n_set, out)
    return out


def block_entropy(v, basis, block_len):
    """Von Neumann entropy of the first block_len sites (natural log).

    The reduced density matrix is block diagonal in the particle number
    of the block, so the Schmidt values come from one SVD per number
    block of the reshaped amplitude matrix.
    """
    v = np.asarray(v)
    if v.shape != (basis.dimension,):
        raise ValueError("vector does not match the basis")
    n = basis.n_sites
    m = basis.m
    ell = int(block_len)
    if not 0 <= ell <= n:
        raise ValueError(f"block length must lie in 0..{n}")
    if ell == 0 or ell == n:
        return 0.0
    left = basis.configs & ((np.int64(1) << ell) - 1)
    right = basis.configs >> ell
    n_left = np.bitwise_count(left.astype(np.uint64)).astype(np.int64)
    entropy = 0.0
    for na in range(max(0, m - (n - ell)), min(ell, m) + 1):
        pick = n_left == na
        if not pick.any():
            continue
        lwords = _words(ell, na)
        rwords = _words(n - ell, m - na)
        rows = np.searchsorted(lwords, left[pick])
        cols = np.searchsorted(rwords, right[pick])
        block = np.zeros((lwords.size, rwords.size), dtype=v.dtype)
        block[rows, cols] = v[pick]
        sing = np.linalg.svd(block, compute_uv=False)
        p = sing ** 2
        p = p[p > 1e-300]
        entropy -= float(np.sum(p * np.log(p)))
    return entropy


def entropy_curve(v, basis, full=False):
    """Block entropies of the leading-block lengths.

    By default lengths run 1..ceil(N/2); the other half is fixed by the
    complement symmetry S(L) = S(N - L).  full=True covers 0..N.
    """
    n = basis.n_sites
    lengths = np.arange(n + 1) if full else np.arange(1, (n + 1) // 2 + 1)
    ent = np.array([block_entropy(v, basis, ell) for ell in lengths])
    return EntropyCurve(lengths=lengths, entropies=ent, n_sites=n)


@dataclass(frozen=True)
class CorrelationCurve:
    """Translation-averaged connected density correlations by distance."""

    distances: np.ndarray
    values: np.ndarray


def g2_curve(v, basis, max_distance=None):
    """Connected density-density correlations g2(d).

    g2(d) = mean_i [ <n_i n_{i+d}> - <n_i> <n_{i+d}> ], distances up to
    N // 2 by default (the ring is reflection symmetric).
    """
    v = np.asarray(v)
    if v.shape != (basis.dimension,):
        raise ValueError("vector does not match the basis")
    n = basis.n_sites
    w = np.abs(v) ** 2
    dens = np.zeros(n, dtype=np.float64)
    corr = np.zeros((n, n), dtype=np.float64)  # <n_i n_j>
    for lo in range(0, basis.dimension, _CHUNK):
        hi = min(lo + _CHUNK, basis.dimension)
        x = _occupation_rows(basis.configs[lo:hi], n)
        ww = w[lo:hi]
        dens += ww @ x
        corr += (x * ww[:, None]).T @ x
    conn = corr - np.outer(dens, dens)
    if max_distance is None:
        max_distance = n // 2
    dists = np.arange(max_distance + 1)
    vals = np.empty(dists.size, dtype=np.float64)
    idx = np.arange(n)
    for d in dists:
        vals[d] = conn[idx, (idx + d) % n].mean()
    return CorrelationCurve(distances=dists, values=vals)


@dataclass(frozen=True)
class SpectrumReport:
    """Raw energies and the affinely rescaled spectrum."""

    energies: np.ndarray
    normalized: np.ndarray


def normalized_spectrum(energies, deg_tol=1e-7):
    """Affine rescale (E - E0) / (E1 - E0).

    E1 is the first energy strictly above the ground level, where
    "strictly above" means by more than deg_tol times the total spread,
    so a degenerate ground multiplet does not produce a zero scale.
    """
    e = np.sort(np.asarray(energies, dtype=np.float64))
    if e.size < 2:
        raise ValueError("need at least two energies")
    spread = float(e[-1] - e[0])
    if spread <= 0:
        raise ValueError("all energies are equal; nothing to normalize")
    above = e > e[0] + deg_tol * spread
    first = int(np.argmax(above))
    scale = float(e[first] - e[0])
    return SpectrumReport(energies=e, normalized=(e - e[0]) / scale)


def _multiplets(energies, deg_tol):
    e = np.asarray(energies, dtype=np.float64)
    spread = max(float(e[-1] - e[0]), 1e-300)
    groups = [[0]]
    for i in range(1, e.size):
        if e[i] - e[i - 1] <= deg_tol * spread:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def match_excited(local, exact, n_sites, deg_tol=1e-7):
    """Per-state overlaps between two low-energy spectra.

    Both spectra are grouped into degenerate multiplets (consecutive gap
    below deg_tol times the spread).  Each local multiplet is paired
    with the exact multiplet carrying the largest total squared overlap
    with it, since level orders may cross between the two models, and
    every state of the local multiplet reports the multiplet-mean
    overlap.  Both steps only use sums of |<a|b>|^2 over whole
    multiplets, so the numbers are invariant under unitary remixing
    inside any degenerate subspace.

    Compute a few states beyond the last one of interest on both sides,
    otherwise a multiplet cut off at the end of a spectrum matches with
    only part of its weight.
    """
    le, lv = np.asarray(local.energies), np.asarray(local.vectors)
    ee, ev = np.asarray(exact.energies), np.asarray(exact.vectors)
    if lv.shape[0] != ev.shape[0]:
        raise ValueError("vector dimensions differ between the two results")
    lg = _multiplets(le, deg_tol)
    eg = _multiplets(ee, deg_tol)
    cross = np.abs(lv.conj().T @ ev) ** 2
    deltas = np.zeros(le.size, dtype=np.float64)
    crossed = mismatched = False
    for gi, gl in enumerate(lg):
        masses = [cross[np.ix_(gl, ge)].sum() for ge in eg]
        bi = int(np.argmax(masses))
        crossed |= bi != gi
        mismatched |= len(eg[bi]) != len(gl)
        val = float(masses[bi]) / len(gl)
        for idx in gl:
            deltas[idx] = val
    if crossed:
        warnings.warn(
            "level order differs between the spectra; multiplets were "
            "matched by overlap, not by position", stacklevel=2)
    if mismatched:
        warnings.warn(
            "matched multiplets have different degeneracies; their states "
            "report the local-multiplet mean", stacklevel=2)
    return [OverlapReport(delta=float(d), delta_per_site=float(d) ** (1.0 / n_sites))
            for d in deltas]
