"""Lowest eigenpairs of sector Hamiltonians.

`lowest_k` drives ARPACK (scipy.sparse.linalg.eigsh) in shift-free
Lanczos mode with a deterministic start vector drawn from a seeded RNG,
then verifies every returned pair against the requested residual
tolerance; nothing is trusted on ARPACK's word alone.  Very small
problems are diagonalized densely instead, where ARPACK's k < ncv <= D
window would leave no room to iterate.  `dense_all` is the full-spectrum
reference path used for cross-checks.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import ConvergenceError

__all__ = ["EigenResult", "lowest_k", "dense_all", "DENSE_ALL_MAX"]

DENSE_ALL_MAX = 4000

# below this dimension lowest_k switches to the dense path
_SMALL = 32


@dataclass(frozen=True)
class EigenResult:
    """Eigenpairs sorted ascending; vectors are columns."""

    energies: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    iterations: int

    @property
    def ground_energy(self):
        return float(self.energies[0])

    @property
    def gap(self):
        if self.energies.size < 2:
            raise ValueError("need at least two states for a gap")
        return float(self.energies[1] - self.energies[0])


class _CountingOperator(LinearOperator):
    """Wraps an operator and counts applications."""

    def __init__(self, h):
        super().__init__(dtype=h.dtype, shape=h.shape)
        self._h = h
        self.count = 0

    def _matvec(self, v):
        self.count += 1
        return self._h @ v


def _to_dense(h):
    if sp.issparse(h):
        return h.toarray()
    if isinstance(h, LinearOperator):
        return h @ np.eye(h.shape[0], dtype=h.dtype)
    return np.asarray(h)


def _residuals(h, energies, vectors):
    res = np.empty(energies.size, dtype=np.float64)
    for m in range(energies.size):
        v = vectors[:, m]
        res[m] = np.linalg.norm(h @ v - energies[m] * v)
    return res


def lowest_k(h, k=1, tol=1e-10, seed=0, ncv=None, maxiter=None):
    """k lowest eigenpairs of a Hermitian operator.

    Deterministic for a fixed seed (the ARPACK start vector is the only
    randomness).  Raises ConvergenceError when any verified residual
    ||H v - E v|| exceeds tol; partial results ride along on the
    exception.
    """
    dim = h.shape[0]
    if h.shape[0] != h.shape[1]:
        raise ValueError("operator must be square")
    if not 1 <= k < dim:
        raise ValueError(f"k must lie in 1..{dim - 1}")
    if dim <= _SMALL:
        energies, vectors = np.linalg.eigh(_to_dense(h))
        energies = energies[:k].copy()
        vectors = vectors[:, :k].copy()
        res = _residuals(h, energies, vectors)
        return EigenResult(energies, vectors, res, iterations=0)

    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    if np.issubdtype(h.dtype, np.complexfloating):
        v0 = v0 + 1j * rng.standard_normal(dim)
    op = _CountingOperator(h)
    if ncv is None:
        ncv = min(dim, max(2 * k + 10, 28))
    try:
        # ARPACK tol=0 means machine precision; the explicit residual
        # check below enforces the caller's tolerance
        energies, vectors = eigsh(op, k=k, which="SA", v0=v0, ncv=ncv,
                                  maxiter=maxiter, tol=0)
    except ArpackNoConvergence as exc:
        part_e = np.asarray(exc.eigenvalues)
        part_v = np.asarray(exc.eigenvectors)
        res = _residuals(h, part_e, part_v) if part_e.size else None
        raise ConvergenceError(
            f"ARPACK converged only {part_e.size} of {k} pairs",
            energies=part_e, residuals=res) from exc
    order = np.argsort(energies)
    energies = energies[order]
    vectors = vectors[:, order]
    res = _residuals(h, energies, vectors)
    if np.any(res > tol):
        raise ConvergenceError(
            f"residuals {res.max():.3e} exceed tol {tol:.3e}",
            energies=energies, residuals=res)
    return EigenResult(energies, vectors, res, iterations=op.count)


def dense_all(h):
    """Full spectrum by dense diagonalization (reference path).

    Returns (energies, vectors) with eigenvectors as columns; limited to
    dimension DENSE_ALL_MAX.
    """
    dim = h.shape[0]
    if dim > DENSE_ALL_MAX:
        raise ValueError(
            f"dense_all limited to dimension {DENSE_ALL_MAX}, got {dim}")
    return np.linalg.eigh(_to_dense(h))
