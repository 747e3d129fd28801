"""Binary cache files for sector vectors.

Layout (little endian), 44-byte header followed by the payload:

    offset  size  field
    0       4     magic b"CCH1"
    4       4     q          (uint32)
    8       4     n_sites    (uint32)
    12      8     kind tag   (ascii, NUL padded)
    20      8     u          (float64)
    28      8     dimension  (uint64)
    36      8     FNV-1a-64 checksum of the payload bytes
    44      ...   dimension complex amplitudes as interleaved
                  (real, imag) float64 pairs, canonical basis order

Round trips are bit exact.  Loading verifies magic, checksum and that
the stored vector is normalized to 1e-10; an optional expected spec is
checked against the header.
"""

import struct

import numpy as np

from . import _bits
from .errors import CorruptStateError
from .hamiltonian import ModelSpec

__all__ = ["MAGIC", "HEADER", "save_state", "load_state"]

MAGIC = b"CCH1"
HEADER = struct.Struct("<4sII8sdQQ")


def _checksum(payload):
    return int(_bits.fnv1a64(np.frombuffer(payload, dtype=np.uint8)))


def save_state(path, vector, spec):
    """Write a sector vector for a model spec; returns the byte count."""
    v = np.ascontiguousarray(np.asarray(vector, dtype=np.complex128))
    if v.ndim != 1:
        raise ValueError("expected a 1-D vector")
    if v.shape[0] != spec.dimension:
        raise ValueError(
            f"vector length {v.shape[0]} does not match sector "
            f"dimension {spec.dimension}")
    payload = v.view(np.float64).tobytes()
    kind_tag = spec.kind.encode("ascii").ljust(8, b"\0")
    header = HEADER.pack(MAGIC, spec.q, spec.n_sites, kind_tag, spec.u,
                         v.shape[0], _checksum(payload))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    return HEADER.size + len(payload)


def load_state(path, expected=None, norm_tol=1e-10):
    """Read a cached vector; returns (vector, spec).

    Raises CorruptStateError on any validation failure and never returns
    a vector that is unnormalized or mislabeled.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < HEADER.size:
        raise CorruptStateError(f"{path}: truncated header")
    magic, q, n, kind_tag, u, dim, stored_sum = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptStateError(f"{path}: bad magic {magic!r}")
    payload = raw[HEADER.size:]
    if len(payload) != 16 * dim:
        raise CorruptStateError(
            f"{path}: payload holds {len(payload)} bytes, expected {16 * dim}")
    if _checksum(payload) != stored_sum:
        raise CorruptStateError(f"{path}: checksum mismatch")
    kind = kind_tag.rstrip(b"\0").decode("ascii")
    try:
        spec = ModelSpec(q=int(q), n_sites=int(n), kind=kind, u=float(u))
    except Exception as exc:
        raise CorruptStateError(f"{path}: invalid header fields: {exc}") from exc
    if dim != spec.dimension:
        raise CorruptStateError(
            f"{path}: header dimension {dim} does not match {spec.label()}")
    vector = np.frombuffer(payload, dtype=np.complex128).copy()
    norm = np.linalg.norm(vector)
    if abs(norm - 1.0) > norm_tol:
        raise CorruptStateError(f"{path}: vector norm {norm} is not 1")
    if expected is not None and spec != expected:
        raise CorruptStateError(
            f"{path}: holds {spec.label()}, expected {expected.label()}")
    return vector, spec
