import pytest
import numpy as np
from sympy import ZZ
from sympy.polys.rings import ring
from maschke_octic.exceptions import BadReductionError
from maschke_octic.ffield import PolyEvaluator, build_ext, low_degree_roots, quad_char

def test_prime_field(F7):
    assert F7.q == 7
    assert F7.chi(3) == -1
    assert F7.chi(2) == 1
    assert F7.chi(0) == 0
    assert F7.sqrt(2) in (3, 4)
    assert F7.sqrt(3) is None
    assert F7.inv(3) == 5

    a = F7.element(3)
    assert a*5 == 1
    assert a/a == 1
    assert a - 4 == 6
    assert quad_char(a) == -1
    assert quad_char(F7.element(4)) == 1

def test_extension_field(F49):
    assert F49.q == 49
    assert F49.has_tables
    elements = F49.elements()
    nonzero = elements[1:]
    assert all(a*a.inverse() == 1 for a in nonzero)
    assert all(a**49 == a for a in elements)
    assert all(a.frobenius()**7 == a for a in elements)
    assert sum(F49.chi(a.code) for a in nonzero) == 0
    # every element of F_7 is a square in F_49
    assert all(F49.chi(c) == 1 for c in range(1, 7))
    for a in nonzero:
        root = a.sqrt()
        assert root is None or root*root == a

def test_table_free_arithmetic(F49):
    slow = build_ext(7, 2, table_limit=10)
    assert not slow.has_tables
    assert slow.modulus == F49.modulus
    for a in (1, 8, 23, 48):
        for b in (2, 9, 40):
            assert slow.mul(a, b) == F49.mul(a, b)
            assert slow.add(a, b) == F49.add(a, b)
        assert slow.inv(a) == F49.inv(a)
        assert slow.chi(a) == F49.chi(a)
    with pytest.raises(ValueError,match=r"table limit"):
        slow.vmul(np.array([1]), np.array([2]))

def test_vector_arithmetic(F49):
    a = np.arange(49)
    b = (7*a + 3) % 49
    assert F49.vmul(a, b).tolist() == [F49.mul(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F49.vadd(a, b).tolist() == [F49.add(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F49.vsub(a, a).tolist() == [0]*49
    assert F49.vpow(a, 3).tolist() == [F49.pow(x, 3) for x in a.tolist()]

def test_build_ext_errors():
    with pytest.raises(BadReductionError,match=r"bad reduction") as err:
        build_ext(5)
    assert err.value.status_code == 2
    assert build_ext(5, check_reduction=False).q == 5

    with pytest.raises(ValueError,match=r"not an odd prime"):
        build_ext(9)

    with pytest.raises(ValueError,match=r"not an odd prime"):
        build_ext(2, check_reduction=False)

    with pytest.raises(ValueError,match=r"between 1 and 4"):
        build_ext(7, 5)

def test_build_ext_deterministic():
    assert build_ext(11, 2).modulus == build_ext(11, 2).modulus
    assert build_ext(7, 2).modulus[0] == 1
    assert len(build_ext(7, 3).modulus) == 4

def test_low_degree_roots(F7, F49):
    assert low_degree_roots([-1, 0, 1], F7) == [(1, 1), (6, 1)]
    assert low_degree_roots([1, 2, 1], F7) == [(6, 2)]
    assert low_degree_roots([1, 0, 1], F7) == []
    assert low_degree_roots([0, 0, 0, 0, 1], F7) == [(0, 4)]
    assert len(low_degree_roots([1, 0, 1], F49)) == 2

    with pytest.raises(ValueError,match=r"above 4"):
        low_degree_roots([1, 0, 0, 0, 0, 1], F7)

    with pytest.raises(ValueError,match=r"zero polynomial"):
        low_degree_roots([0, 0], F7)

def test_poly_evaluator(F7):
    _, x, y = ring("x,y", ZZ)
    evaluate = PolyEvaluator(x**2 + 3*y - 7, F7)
    xs = np.arange(7)
    ys = np.ones(7, dtype=np.int64)
    assert evaluate(xs, ys).tolist() == [(v*v + 3) % 7 for v in range(7)]

    with pytest.raises(ValueError,match=r"coordinate arrays"):
        evaluate(xs)
