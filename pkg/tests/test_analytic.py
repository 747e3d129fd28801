import numpy as np
import pytest

from critchains.analytic import (
    LogAmplitude,
    build_state,
    exact_ground_energy,
    log_amplitude,
    parity_sign,
)
from critchains.basis import SectorBasis
from critchains.hamiltonian import ModelSpec, build
from critchains.observables import site_densities


def test_ground_energy_closed_form():
    assert exact_ground_energy(2, 16) == pytest.approx(-56.0)
    assert exact_ground_energy(3, 15) == pytest.approx(-200.0 / 3.0)
    assert exact_ground_energy(4, 12) == pytest.approx(-48.0)
    assert exact_ground_energy(2, 4) == pytest.approx(-2.0)


def test_parity_sign_hand_values():
    # weight of a configuration: sum of (site - 1) over occupied sites
    assert parity_sign(0b0101) == 1    # 0 + 2
    assert parity_sign(0b0011) == -1   # 0 + 1
    assert parity_sign(0b1111) == 1    # 0 + 1 + 2 + 3


def test_amplitude_hand_values_square_lattice():
    # four sites, two particles, q=2; worked out by hand from the pair
    # product over all site pairs
    a = log_amplitude(0b0011, 4, 2)
    assert a.value() == pytest.approx(0.125, abs=1e-13)
    b = log_amplitude(0b0101, 4, 2)
    assert b.value() == pytest.approx(-0.25, abs=1e-13)


def test_log_amplitude_phase_is_wrapped():
    for config in (0b0011, 0b1010, 0b1100):
        a = log_amplitude(config, 4, 2)
        assert -np.pi < a.phase <= np.pi
        assert isinstance(a, LogAmplitude)


def test_state_is_normalized_with_positive_gauge():
    for q, n in ((2, 8), (3, 9), (4, 8)):
        v = build_state(n, q)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        first = v[np.flatnonzero(np.abs(v) > 1e-14)[0]]
        assert first.imag == pytest.approx(0.0, abs=1e-12)
        assert first.real > 0


def test_half_filling_state_is_real():
    v = build_state(8, 2)
    assert np.max(np.abs(v.imag)) == 0.0


def test_state_matches_scalar_amplitudes():
    q, n = 3, 6
    basis = SectorBasis.for_model(n, q)
    v = build_state(n, q, basis)
    raw = np.array([log_amplitude(int(c), n, q).value()
                    for c in basis.configs])
    raw /= np.linalg.norm(raw)
    # same ray; fix the gauge by the first component and compare
    raw *= v[0] / raw[0]
    assert np.max(np.abs(raw - v)) < 1e-12


def test_state_density_is_uniform():
    for q, n in ((2, 8), (3, 12), (4, 12)):
        basis = SectorBasis.for_model(n, q)
        v = build_state(n, q, basis)
        dens = site_densities(v, basis)
        assert np.max(np.abs(dens - 1.0 / q)) < 1e-12


def test_chunked_evaluation_is_exact():
    q, n = 3, 9
    basis = SectorBasis.for_model(n, q)
    assert np.allclose(build_state(n, q, basis, chunk=7),
                       build_state(n, q, basis), atol=1e-15)


def test_state_is_eigenstate_of_full_model():
    # the residual pins couplings, signs and amplitudes simultaneously
    for q, n in ((2, 8), (3, 9), (4, 8)):
        basis = SectorBasis.for_model(n, q)
        v = build_state(n, q, basis)
        h = build(ModelSpec(q=q, n_sites=n), basis)
        res = np.linalg.norm(h @ v - exact_ground_energy(q, n) * v)
        assert res < 1e-10, (q, n, res)
