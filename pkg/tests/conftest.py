import sys
from pathlib import Path

import pytest
from hypothesis import settings

from transfer_lattice import (enumerate_hom_closed, enumerate_transfer_systems, make_cyclic,
                              make_quaternion, make_symmetric, subgroup_lattice)

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# Σ3 lattice indices: e, three ⟨τ⟩ conjugates, ⟨σ⟩, Σ3
E, T1, T2, T3, SIGMA, S3 = range(6)


@pytest.fixture(scope="session")
def s3():
    return make_symmetric(3)


@pytest.fixture(scope="session")
def s3_lat(s3):
    return subgroup_lattice(s3)


@pytest.fixture(scope="session")
def s3_poset(s3_lat):
    return enumerate_transfer_systems(s3_lat)


@pytest.fixture(scope="session")
def s3_hc(s3_lat, s3_poset):
    return enumerate_hom_closed(s3_lat, s3_poset)


@pytest.fixture(scope="session")
def q8():
    return make_quaternion()


@pytest.fixture(scope="session")
def q8_poset(q8):
    return enumerate_transfer_systems(subgroup_lattice(q8))


@pytest.fixture(scope="session")
def c8_poset():
    return enumerate_transfer_systems(subgroup_lattice(make_cyclic(8)))
