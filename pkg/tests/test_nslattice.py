import pytest
from maschke_octic.ffield import build_ext
from maschke_octic.lefschetz import L_S_MULTIPLICITIES
from maschke_octic.nslattice import (
    EXPECTED_LINES,
    EXPECTED_ORBITS,
    L_S_RANK,
    all_lines,
    enumerate_lines,
    frobenius_trace_on_lines,
    galois_multiplicities,
    gram_and_rank,
    incidence,
    line_through,
    lines_field,
    on_surface,
    permutation_order,
    plucker_relation,
    seed_lines,
    signature_class,
    signature_primes,
    span_trace
)

@pytest.fixture(scope="module")
def F61():
    return build_ext(61)

def test_canonical_lines(F7):
    line = line_through((1, 0, 0, 0), (0, 1, 0, 0), F7)
    assert line == line_through((1, 1, 0, 0), (0, 3, 0, 0), F7)
    assert line.rows == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert plucker_relation(line, F7) == 0
    assert plucker_relation(line_through((1, 2, 3, 4), (0, 1, 5, 6), F7), F7) == 0

    with pytest.raises(ValueError,match=r"do not span a line"):
        line_through((1, 2, 3, 4), (2, 4, 6, 1), F7)

def test_incidence(F7):
    a = line_through((1, 0, 0, 0), (0, 1, 0, 0), F7)
    b = line_through((1, 0, 0, 0), (0, 0, 1, 0), F7)
    c = line_through((0, 0, 1, 0), (0, 0, 0, 1), F7)
    meets = incidence([a, b, c], F7)
    assert meets.tolist() == [[False, True, False], [True, False, True], [False, True, False]]

    with pytest.raises(ValueError,match=r"duplicates"):
        incidence([a, a], F7)

def test_signature_classes():
    assert signature_class(7) == (1, 0, 1)
    assert signature_class(61) == (0, 0, 0)
    primes = signature_primes()
    assert len(primes) == 8
    assert len({signature_class(p) for p in primes}) == 8
    assert permutation_order([1, 2, 0]) == 3
    assert permutation_order([0, 1]) == 1
    assert permutation_order([1, 0, 3, 4, 2]) == 6

def test_lines_field():
    assert lines_field(61).k == 1
    assert lines_field(7).k == 2
    assert lines_field(13).k == 2

def test_seed_lines(F61):
    seeds = seed_lines(F61)
    assert set(seeds) == set(EXPECTED_ORBITS)
    assert all(on_surface(line, F61) for line in seeds.values())
    assert not on_surface(line_through((1, 0, 0, 0), (0, 1, 0, 0), F61), F61)

def test_brute_force_limit():
    with pytest.raises(ValueError,match=r"limited"):
        enumerate_lines(build_ext(131))

@pytest.mark.slow
def test_all_lines(F61):
    line_set = all_lines(F61)
    assert len(line_set.lines) == EXPECTED_LINES
    assert {name: len(members) for name, members in line_set.orbits.items()} == EXPECTED_ORBITS
    gram, rank = gram_and_rank(line_set.lines, F61)
    assert rank == L_S_RANK
    assert (gram.diagonal() == -6).all()
    assert span_trace(gram, list(range(len(line_set.lines))), 1000003) == L_S_RANK

@pytest.mark.slow
def test_brute_force_agrees(F61):
    assert set(enumerate_lines(F61)) == set(all_lines(F61).lines)

@pytest.mark.slow
def test_frobenius_trace():
    assert frobenius_trace_on_lines(61) == (L_S_RANK, 1)

@pytest.mark.slow
def test_galois_multiplicities():
    decomposition = galois_multiplicities()
    assert decomposition.multiplicities == L_S_MULTIPLICITIES
