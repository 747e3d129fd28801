"""Exact diagonalization of critical ring lattice models.

A family of one-dimensional critical models labelled by an integer q
(odd: fermions, even: hardcore bosons) lives on a ring of N sites with
N/q particles.  The untruncated member has long-range couplings and a
closed-form Jastrow ground state; nearest-neighbor and next-nearest-
neighbor truncations, optionally with a rescaled density coupling,
approximate it locally.  This package assembles the sector Hamiltonians,
evaluates the analytic state, solves for low-lying eigenpairs and
measures overlaps, entanglement entropies, density correlations and
normalized spectra, plus a scan for the optimal density coupling.
"""

from .analytic import (LogAmplitude, build_state, exact_ground_energy,
                       log_amplitude, parity_sign)
from .basis import SectorBasis, sector_dimension
from .cache import load_state, save_state
from .eigensolve import EigenResult, dense_all, lowest_k
from .errors import (ConvergenceError, CorruptStateError, InvalidModelError,
                     OutOfSectorError, ResourceError)
from .hamiltonian import (KINDS, OPT_KINDS, ModelSpec, build, build_dense,
                          hop_sign, matvec, project_to_sector,
                          storage_estimate)
from .lattice import (CouplingPair, LatticeGeometry, chord_ratio,
                      coupling_pair, coupling_table, site_positions)
from .observables import (CorrelationCurve, EntropyCurve, OverlapReport,
                          SpectrumReport, block_entropy, entropy_curve,
                          g2_curve, match_excited, normalized_spectrum,
                          overlap, site_densities)
from .optimize import ScanResult, optimize_u

__version__ = "0.1.0"

__all__ = [
    "LogAmplitude", "build_state", "exact_ground_energy", "log_amplitude",
    "parity_sign", "SectorBasis", "sector_dimension", "load_state",
    "save_state", "EigenResult", "dense_all", "lowest_k",
    "ConvergenceError", "CorruptStateError", "InvalidModelError",
    "OutOfSectorError", "ResourceError", "KINDS", "OPT_KINDS", "ModelSpec",
    "build", "build_dense", "hop_sign", "matvec", "project_to_sector",
    "storage_estimate", "CouplingPair", "LatticeGeometry", "chord_ratio",
    "coupling_pair", "coupling_table", "site_positions", "CorrelationCurve",
    "EntropyCurve", "OverlapReport", "SpectrumReport", "block_entropy",
    "entropy_curve", "g2_curve", "match_excited", "normalized_spectrum",
    "overlap", "site_densities", "ScanResult", "optimize_u",
]
