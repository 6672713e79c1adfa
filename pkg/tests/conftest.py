import pytest
from maschke_octic.ffield import build_ext
from maschke_octic.fixtures import load_tables

@pytest.fixture(scope="module")
def F7():
    return build_ext(7)

@pytest.fixture(scope="module")
def F11():
    return build_ext(11)

@pytest.fixture(scope="module")
def F49():
    return build_ext(7, 2)

@pytest.fixture(scope="module")
def tables():
    return load_tables()

@pytest.fixture(scope="module")
def group():
    from maschke_octic.grouprep import generate_group, maschke_generators
    return generate_group(maschke_generators())

@pytest.fixture(scope="module")
def classes(group):
    from maschke_octic.grouprep import conjugacy_classes
    return conjugacy_classes(group)
