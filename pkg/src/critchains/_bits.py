"""Bit-twiddling kernels for basis enumeration and sparse assembly.

Configurations are int64 bitmasks: bit p set means site p+1 is occupied.
All kernels are compiled with numba; rows of the Hamiltonian are mutually
independent, so the fill and matvec kernels parallelize over rows with a
fixed per-row summation order (results do not depend on the thread count).

Pair conventions: a hop term moves one particle from site ``jsite`` to
site ``isite`` with amplitude ``hop``.  A row config therefore has isite
occupied and jsite empty; the column config is the same word with the
particle moved back.  The string sign is the parity of the occupied
sites strictly between the two endpoints, which the hop itself does not
touch, so it can be read off either config.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def popcount(x):
    # Kernighan loop; configs hold at most a few dozen set bits.
    n = 0
    while x:
        x &= x - np.int64(1)
        n += 1
    return n


@njit(cache=True)
def fill_configs(n_bits, n_set, out):
    """Fill ``out`` with all n_bits-words of popcount n_set, ascending.

    Gosper's hack: from word c, the next word with the same popcount is
    v | (((v ^ c) / u) >> 2) with u = c & -c, v = c + u.
    """
    if n_set == 0:
        out[0] = 0
        return
    c = np.int64((1 << n_set) - 1)
    last = out.size - 1
    for k in range(out.size):
        out[k] = c
        if k == last:
            break
        u = c & (-c)
        v = c + u
        c = v | (((v ^ c) // u) >> 2)


@njit(cache=True, inline="always")
def find_index(configs, c):
    # Binary search in the sorted config array.
    lo = 0
    hi = configs.size
    while lo < hi:
        mid = (lo + hi) >> 1
        if configs[mid] < c:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, parallel=True)
def count_offdiag(configs, isite, jsite, counts):
    """counts[a] = 1 + number of hop entries in row a."""
    n_pairs = isite.size
    for a in prange(configs.size):
        c = configs[a]
        n = 1
        for p in range(n_pairs):
            if (c >> isite[p]) & 1 and not (c >> jsite[p]) & 1:
                n += 1
        counts[a] = n


@njit(cache=True, parallel=True)
def fill_csr(configs, isite, jsite, hop, dens, between, use_sign,
             indptr, indices, data):
    """Second pass: write one CSR row per configuration.

    Each row holds its diagonal entry first, then hop entries in pair
    order; column indices are sorted afterwards by the caller.  ``hop``
    and ``data`` are float64 or complex128 (two compiled variants).
    """
    n_pairs = isite.size
    for a in prange(configs.size):
        c = configs[a]
        k = indptr[a]
        diag = 0.0
        kd = k
        k += 1
        for p in range(n_pairs):
            occ_i = (c >> isite[p]) & 1
            occ_j = (c >> jsite[p]) & 1
            if occ_i and occ_j:
                diag += dens[p]
            elif occ_i and not occ_j:
                moved = c ^ (np.int64(1) << isite[p]) ^ (np.int64(1) << jsite[p])
                b = find_index(configs, moved)
                val = hop[p]
                if use_sign and (popcount(c & between[p]) & 1):
                    val = -val
                indices[k] = b
                data[k] = val
                k += 1
        indices[kd] = a
        data[kd] = diag


@njit(cache=True, parallel=True)
def diag_values(configs, isite, jsite, dens, out):
    n_pairs = isite.size
    for a in prange(configs.size):
        c = configs[a]
        diag = 0.0
        for p in range(n_pairs):
            if (c >> isite[p]) & 1 and (c >> jsite[p]) & 1:
                diag += dens[p]
        out[a] = diag


@njit(cache=True, parallel=True)
def apply_pairs(configs, diag, isite, jsite, hop, between, use_sign, v, out):
    """out = H @ v without storing H; one private accumulator per row.

    Row a collects hop[p] * v[b] over exactly the entries fill_csr would
    have stored in that row, so both code paths produce the same matrix.
    """
    n_pairs = isite.size
    for a in prange(configs.size):
        c = configs[a]
        acc = diag[a] * v[a]
        for p in range(n_pairs):
            if (c >> isite[p]) & 1 and not (c >> jsite[p]) & 1:
                moved = c ^ (np.int64(1) << isite[p]) ^ (np.int64(1) << jsite[p])
                b = find_index(configs, moved)
                val = hop[p]
                if use_sign and (popcount(c & between[p]) & 1):
                    val = -val
                acc += val * v[b]
        out[a] = acc


@njit(cache=True)
def fnv1a64(buf):
    """FNV-1a over a uint8 buffer, 64-bit."""
    h = np.uint64(0xCBF29CE484222325)
    prime = np.uint64(0x100000001B3)
    for i in range(buf.size):
        h = (h ^ np.uint64(buf[i])) * prime
    return h
