"""Sector Hamiltonians of the ring models and their truncations.

A model is labelled by (q, N, kind, U).  The full model couples every
ordered pair of sites; the truncated kinds keep only short separations:

    exact      all separations, U fixed to 1
    nn         ring distance 1, U fixed to 1
    nnn        ring distances 1 and 2, U fixed to 1
    nn-opt     ring distance 1, density part scaled by a free U > 0
    nnn-opt    ring distances 1 and 2, density part scaled by U

Matrix elements: for every ordered pair (i, j) of coupled sites the
Hamiltonian contains hopping(i, j) * (move a particle from j to i) plus
density(i, j) * n_i * n_j.  For odd q the hop carries a string sign,
the parity of the occupied sites strictly between i and j in site order;
for even q there is no sign.  Both hop directions appear explicitly, so
density pairs are counted twice, matching the normalization of the
closed-form ground-state energy -(q-1)/(6q) * N * (3N + q - 8) of the
exact kind.

Two independent constructions are provided: `build` assembles the sector
matrix directly from bitmask hops, while `build_dense` multiplies string
operators in the full 2^N space and is used as a cross-check.
"""

import hashlib
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from . import _bits
from .basis import SectorBasis, sector_dimension, n_particles
from .errors import InvalidModelError, ResourceError
from .lattice import coupling_table, ring_distance

__all__ = [
    "KINDS", "OPT_KINDS", "ModelSpec", "build", "build_dense",
    "project_to_sector", "hop_sign", "matvec", "storage_estimate",
    "RingOperator", "DENSE_MAX_SITES",
]

KINDS = ("exact", "nn", "nnn", "nn-opt", "nnn-opt")
OPT_KINDS = ("nn-opt", "nnn-opt")

# ring-distance cutoff per kind; None means every separation
_CUTOFF = {"exact": None, "nn": 1, "nnn": 2, "nn-opt": 1, "nnn-opt": 2}

DENSE_MAX_SITES = 14

# stored-CSR budget before `build` falls back to the matrix-free operator
DEFAULT_MAX_BYTES = 2 << 30


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of one model instance."""

    q: int
    n_sites: int
    kind: str = "exact"
    u: float = 1.0

    def __post_init__(self):
        n_particles(self.n_sites, self.q)  # validates q and divisibility
        if self.kind not in KINDS:
            raise InvalidModelError(
                f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if not (self.u > 0):
            raise InvalidModelError("u must be positive")
        if self.kind not in OPT_KINDS and self.u != 1.0:
            raise InvalidModelError(
                f"kind {self.kind!r} has no free coupling; u must stay 1")

    @property
    def m(self):
        return self.n_sites // self.q

    @property
    def dimension(self):
        return sector_dimension(self.n_sites, self.q)

    @property
    def is_real(self):
        # hopping coefficients are real exactly when q = 2
        return self.q == 2

    def label(self):
        return f"q={self.q} n={self.n_sites} kind={self.kind} u={self.u:.12g}"

    def default_seed(self):
        """Deterministic seed derived from the canonical label."""
        digest = hashlib.sha256(self.label().encode()).digest()
        return int.from_bytes(digest[:4], "little")


def _allowed_distances(spec):
    cutoff = _CUTOFF[spec.kind]
    ds = []
    for d in range(1, spec.n_sites):
        if cutoff is None or ring_distance(1 + d, 1, spec.n_sites) <= cutoff:
            ds.append(d)
    return ds


def _between_mask(i0, j0, n, origin):
    """Bitmask of sites strictly between i0 and j0 in string order.

    The string order ranks site p by (p - origin) mod n; origin 0 is the
    plain site order.  Endpoints are never part of the mask.
    """
    li = (i0 - origin) % n
    lj = (j0 - origin) % n
    lo, hi = (li, lj) if li < lj else (lj, li)
    mask = 0
    for label in range(lo + 1, hi):
        mask |= 1 << ((label + origin) % n)
    return mask


@dataclass(frozen=True)
class PairArrays:
    """Flat per-ordered-pair coefficient arrays consumed by the kernels."""

    isite: np.ndarray     # 0-based site a particle hops onto
    jsite: np.ndarray     # 0-based site it leaves
    hop: np.ndarray       # hopping coefficient of (isite, jsite)
    dens: np.ndarray      # density coefficient, already scaled by U
    between: np.ndarray   # string masks
    use_sign: bool


def pair_arrays(spec, string_origin=0):
    """All ordered coupled pairs of the model as flat arrays."""
    n = spec.n_sites
    hop_d, dens_d = coupling_table(spec.q, n)
    ds = _allowed_distances(spec)
    isite = []
    jsite = []
    hop = []
    dens = []
    between = []
    for i0 in range(n):
        for d in ds:
            j0 = (i0 - d) % n
            isite.append(i0)
            jsite.append(j0)
            hop.append(hop_d[d])
            dens.append(spec.u * dens_d[d])
            between.append(_between_mask(i0, j0, n, string_origin))
    hop = np.asarray(hop, dtype=np.complex128)
    if spec.is_real:
        hop = np.ascontiguousarray(hop.real)
    return PairArrays(
        isite=np.asarray(isite, dtype=np.int64),
        jsite=np.asarray(jsite, dtype=np.int64),
        hop=hop,
        dens=np.asarray(dens, dtype=np.float64),
        between=np.asarray(between, dtype=np.int64),
        use_sign=spec.q % 2 == 1,
    )


def storage_estimate(spec):
    """Exact stored-CSR size: every pair contributes C(N-2, M-1) hops."""
    from math import comb
    n, m = spec.n_sites, spec.m
    n_pairs = len(_allowed_distances(spec)) * n
    nnz = spec.dimension + n_pairs * comb(n - 2, m - 1)
    itemsize = 8 if spec.is_real else 16
    return {
        "dimension": spec.dimension,
        "pairs": n_pairs,
        "stored_entries": nnz,
        "stored_bytes": nnz * (itemsize + 4) + 8 * (spec.dimension + 1),
    }


class RingOperator(LinearOperator):
    """Matrix-free sector Hamiltonian; applies hops on the fly."""

    def __init__(self, spec, basis, pairs):
        dtype = np.float64 if spec.is_real else np.complex128
        super().__init__(dtype=dtype, shape=(basis.dimension, basis.dimension))
        self.spec = spec
        self.basis = basis
        self._pairs = pairs
        diag = np.empty(basis.dimension, dtype=np.float64)
        _bits.diag_values(basis.configs, pairs.isite, pairs.jsite,
                          pairs.dens, diag)
        self.diag = diag if spec.is_real else diag.astype(np.complex128)

    def _matvec(self, v):
        v = np.ascontiguousarray(v.reshape(-1), dtype=self.dtype)
        out = np.empty_like(v)
        p = self._pairs
        _bits.apply_pairs(self.basis.configs, self.diag, p.isite, p.jsite,
                          p.hop, p.between, p.use_sign, v, out)
        return out

    def _adjoint(self):
        return self  # Hermitian

    def diagonal(self):
        return self.diag.copy()


def build(spec, basis=None, mode="auto", max_bytes=None, string_origin=0):
    """Assemble the sector Hamiltonian.

    mode "stored" forces a CSR matrix, "matrix-free" a RingOperator, and
    "auto" picks CSR while the stored size fits in max_bytes (default
    2 GiB).  Raises ResourceError when a stored matrix is forced past
    the budget.
    """
    if basis is None:
        basis = SectorBasis.for_model(spec.n_sites, spec.q)
    if basis.n_sites != spec.n_sites or basis.m != spec.m:
        raise InvalidModelError("basis does not match the model sector")
    if mode not in ("auto", "stored", "matrix-free"):
        raise ValueError(f"unknown mode {mode!r}")
    budget = DEFAULT_MAX_BYTES if max_bytes is None else int(max_bytes)
    pairs = pair_arrays(spec, string_origin)
    est = storage_estimate(spec)
    if mode == "auto":
        mode = "stored" if est["stored_bytes"] <= budget else "matrix-free"
    if mode == "matrix-free":
        return RingOperator(spec, basis, pairs)

    if est["stored_bytes"] > budget:
        raise ResourceError(
            f"stored Hamiltonian needs {est['stored_bytes'] / 2**30:.2f} GiB "
            f"({est['stored_entries']} entries), budget is "
            f"{budget / 2**30:.2f} GiB; use mode='matrix-free'")
    if est["stored_entries"] >= 2**31 or spec.dimension >= 2**31:
        raise ResourceError("stored Hamiltonian exceeds 32-bit index range")

    configs = basis.configs
    dim = basis.dimension
    counts = np.empty(dim, dtype=np.int64)
    _bits.count_offdiag(configs, pairs.isite, pairs.jsite, counts)
    indptr = np.zeros(dim + 1, dtype=np.int32)
    indptr[1:] = np.cumsum(counts)
    nnz = int(indptr[-1])
    indices = np.empty(nnz, dtype=np.int32)
    data = np.empty(nnz, dtype=np.float64 if spec.is_real else np.complex128)
    _bits.fill_csr(configs, pairs.isite, pairs.jsite, pairs.hop, pairs.dens,
                   pairs.between, pairs.use_sign, indptr, indices, data)
    h = sp.csr_matrix((data, indices, indptr), shape=(dim, dim))
    h.sort_indices()
    return h


def matvec(h, v):
    """Apply a stored or matrix-free Hamiltonian to a vector."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != h.shape[1]:
        raise ValueError(f"vector length {v.shape} does not match {h.shape}")
    return h @ v


def hop_sign(config, i, j, q, n_sites=None):
    """Sign of a hop that moves a particle from site j to site i (1-based).

    `config` is the configuration before the hop: site j occupied, site i
    empty.  Even q gives +1; odd q gives the parity of the occupied sites
    strictly between i and j in site order.
    """
    c = int(config)
    if i == j:
        raise ValueError("hop endpoints must differ")
    if n_sites is not None and not (1 <= i <= n_sites and 1 <= j <= n_sites):
        raise ValueError(f"sites must lie in 1..{n_sites}")
    if not (c >> (j - 1)) & 1:
        raise ValueError(f"site {j} is empty; nothing to move")
    if (c >> (i - 1)) & 1:
        raise ValueError(f"site {i} is already occupied")
    if q % 2 == 0:
        return 1
    lo, hi = (i, j) if i < j else (j, i)
    mask = ((1 << (hi - 1)) - 1) & ~((1 << lo) - 1)
    return 1 - 2 * (int(c & mask).bit_count() & 1)


def _local_ops():
    annihilate = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    number = sp.csr_matrix(np.diag([0.0, 1.0]))
    flip = sp.csr_matrix(np.diag([1.0, -1.0]))
    ident = sp.identity(2, format="csr")
    return annihilate, number, flip, ident


def _site_operator(local, site0, n):
    """Embed a 2x2 operator at one site of the full 2^N space.

    Dense index convention matches the bitmask one: bit p of the index is
    the occupation of site p+1, so site 1 is the least significant factor.
    """
    op = sp.identity(1, format="csr")
    for p in range(n):
        factor = local if p == site0 else sp.identity(2, format="csr")
        op = sp.kron(factor, op, format="csr")
    return op


def build_dense(spec, string_origin=0):
    """Full 2^N Hamiltonian from explicit string operators (cross-check).

    Slow by design; restricted to N <= DENSE_MAX_SITES.  The row/column
    index is the configuration integer, so `project_to_sector` can slice
    the fixed-number block directly.
    """
    n = spec.n_sites
    if n > DENSE_MAX_SITES:
        raise InvalidModelError(
            f"dense construction limited to {DENSE_MAX_SITES} sites")
    annihilate, number, flip, _ = _local_ops()
    fermionic = spec.q % 2 == 1

    # annihilation dressed with the sign string on all later sites
    lowering = []
    for site0 in range(n):
        op = _site_operator(annihilate, site0, n)
        if fermionic:
            label = (site0 - string_origin) % n
            for other in range(n):
                if (other - string_origin) % n > label:
                    op = op @ _site_operator(flip, other, n)
        lowering.append(op)
    counts = [_site_operator(number, site0, n) for site0 in range(n)]

    hop_d, dens_d = coupling_table(spec.q, n)
    dim = 1 << n
    h = sp.csr_matrix((dim, dim), dtype=np.complex128)
    for i0 in range(n):
        for d in _allowed_distances(spec):
            j0 = (i0 - d) % n
            h = h + hop_d[d] * (lowering[i0].conj().T @ lowering[j0])
            h = h + (spec.u * dens_d[d]) * (counts[i0] @ counts[j0])
    return h.toarray()


def project_to_sector(h_full, basis):
    """Restrict a full-space matrix to the rows/columns of a sector."""
    idx = basis.configs
    if h_full.shape != (1 << basis.n_sites,) * 2:
        raise ValueError("matrix shape does not match the site count")
    return np.asarray(h_full)[np.ix_(idx, idx)]
