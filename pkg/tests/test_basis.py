import numpy as np
import pytest

from critchains.basis import MAX_SITES, SectorBasis, n_particles, sector_dimension
from critchains.errors import InvalidModelError, OutOfSectorError


def test_particle_count():
    assert n_particles(12, 3) == 4
    assert n_particles(16, 2) == 8
    assert n_particles(32, 4) == 8


def test_particle_count_rejects_bad_models():
    with pytest.raises(InvalidModelError):
        n_particles(10, 3)        # filling must divide the size
    with pytest.raises(InvalidModelError):
        n_particles(12, 1)
    with pytest.raises(InvalidModelError):
        n_particles(MAX_SITES + 2, 2)
    with pytest.raises(InvalidModelError):
        n_particles(0, 2)


def test_sector_dimensions():
    assert sector_dimension(12, 3) == 495
    assert sector_dimension(15, 3) == 3003
    assert sector_dimension(20, 2) == 184756
    assert sector_dimension(30, 3) == 30045015
    assert sector_dimension(32, 4) == 10518300


def test_configs_are_sorted_with_correct_weight():
    basis = SectorBasis.for_model(12, 3)
    assert basis.dimension == 495
    assert len(basis) == 495
    c = basis.configs
    assert np.all(np.diff(c) > 0)
    assert np.all(np.bitwise_count(c.astype(np.uint64)) == 4)
    assert c[0] == 0b1111
    assert c[-1] == 0b1111 << 8


def test_rank_unrank_roundtrip():
    basis = SectorBasis.for_model(12, 3)
    for idx in range(basis.dimension):
        config = basis.unrank(idx)
        assert basis.rank(config) == idx


def test_rank_endpoints():
    basis = SectorBasis.for_model(12, 3)
    assert basis.rank(0b1111) == 0
    assert basis.rank(0b1111 << 8) == 494


def test_index_of_vectorized_lookup():
    basis = SectorBasis.for_model(10, 2)
    idx = basis.index_of(basis.configs)
    assert np.array_equal(idx, np.arange(basis.dimension))


def test_unrank_bounds():
    basis = SectorBasis.for_model(8, 2)
    with pytest.raises(IndexError):
        basis.unrank(basis.dimension)
    with pytest.raises(IndexError):
        basis.unrank(-1)


def test_occupations_pattern():
    basis = SectorBasis.for_model(12, 4)
    occ = basis.occupations(0b000010011)
    assert occ.tolist() == [1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]
    assert occ.sum() == basis.m


def test_rank_rejects_foreign_configs():
    basis = SectorBasis.for_model(8, 2)
    with pytest.raises(OutOfSectorError):
        basis.rank(0b0111)            # wrong particle count
    with pytest.raises(OutOfSectorError):
        basis.rank(0b1111 << 6)       # uses sites past the ring
    with pytest.raises(OutOfSectorError):
        basis.rank(-1)


def test_largest_ring_is_countable():
    # only the counting side; the table must not overflow int64
    assert sector_dimension(62, 2) == 465428353255261088
    with pytest.raises(InvalidModelError):
        n_particles(64, 2)
