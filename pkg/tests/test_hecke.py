import pytest
from maschke_octic.counting import count_points
from maschke_octic.exceptions import BadReductionError
from maschke_octic.ffield import build_ext
from maschke_octic.hecke import (
    QuadRingElem,
    hecke_ap,
    hecke_generator,
    hecke_prime_power,
    hecke_row,
    norm_solutions,
    normalise,
    split_type
)
from maschke_octic.lefschetz import extract_trace

def test_quadratic_ring():
    alpha = QuadRingElem(0, 1)
    assert alpha*alpha == QuadRingElem(-4, 1)
    assert alpha.norm() == 4
    assert alpha.trace() == 1
    beta = QuadRingElem(11, -8)
    assert beta.norm() == 289
    assert (beta*beta.conjugate()) == QuadRingElem(289, 0)
    assert beta**2 == beta*beta
    assert all(s.norm() == 289 for s in norm_solutions(289))

def test_normalise():
    assert normalise(QuadRingElem(11, -8)) == QuadRingElem(11, -8)
    assert normalise(QuadRingElem(-11, 8)) == QuadRingElem(11, -8)
    with pytest.raises(ValueError,match=r"prime above 3"):
        normalise(QuadRingElem(3, 0))

def test_split_type():
    assert split_type(7) == 'inert'
    assert split_type(11) == 'inert'
    assert split_type(17) == 'split'
    assert split_type(19) == 'split'

    with pytest.raises(BadReductionError,match=r"bad reduction"):
        split_type(5)

    with pytest.raises(ValueError,match=r"not a prime"):
        split_type(9)

def test_hecke_character():
    assert hecke_generator(17) == QuadRingElem(11, -8)
    assert hecke_ap(17) == 14
    assert hecke_ap(19) == -22
    assert hecke_generator(7) is None
    assert hecke_ap(7) == 0
    assert hecke_row(17) == (17, 'split', 11, -8, 14)
    assert hecke_row(13) == (13, 'inert', None, None, 0)

def test_hecke_prime_square():
    assert hecke_prime_power(7) == 98
    assert hecke_prime_power(17) == 14*14 - 2*17*17
    with pytest.raises(ValueError,match=r"k = 2"):
        hecke_prime_power(7, 3)

def test_matches_printed_table(tables):
    printed = tables['heckeW']
    for p in printed:
        assert hecke_ap(p) == printed[p]

def test_inert_prime_squares():
    for p in (7, 11, 29):
        assert hecke_prime_power(p) == 2*p*p
    assert extract_trace('a_q', 121, {'W': 15852}).value == 242

@pytest.mark.slow
def test_inert_prime_square_against_count():
    count = count_points('W', build_ext(11, 2)).count
    assert count == 15852
    assert extract_trace('a_q', 121, {'W': count}).value == hecke_prime_power(11)
