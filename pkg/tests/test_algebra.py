import pytest
import numpy as np
from sympy import QQ, ZZ, isprime
from maschke_octic.algebra import (
    QuotRing,
    int_rank,
    modular_rank,
    modular_solve,
    poly_divrem,
    poly_ring,
    poly_substitute,
    rank_primes
)

def test_poly_substitute():
    _, a, b = poly_ring("a,b", ZZ)
    S, x, y, z = poly_ring("x,y,z", QQ)

    f = a**2 + 3*b
    assert poly_substitute(f, {a: x + y, b: z}) == x**2 + 2*x*y + y**2 + 3*z
    assert poly_substitute(f, {"a": x, "b": 2}) == x**2 + 6
    assert poly_substitute(f, {0: 1, 1: 1}, target=S) == S(4)

    with pytest.raises(ValueError,match=r"missing"):
        poly_substitute(f, {a: x})

    with pytest.raises(ValueError,match=r"not a variable"):
        poly_substitute(f, {a: x, b: y, "c": z})

    with pytest.raises(ValueError,match=r"target ring"):
        poly_substitute(f, {a: 1, b: 2})

def test_poly_divrem():
    _, x = poly_ring("x", QQ)
    q, r = poly_divrem(x**3 - 1, x - 1)
    assert q == x**2 + x + 1
    assert r == 0

    q, r = poly_divrem(x**3 + 2, x**2)
    assert q == x
    assert r == 2

    with pytest.raises(ZeroDivisionError):
        poly_divrem(x, x - x)

    _, t = poly_ring("t", ZZ)
    with pytest.raises(ValueError,match=r"not invertible"):
        poly_divrem(t**2, 2*t + 1)

    _, u = poly_ring("u", QQ)
    with pytest.raises(ValueError,match=r"same ring"):
        poly_divrem(x, u)

def test_quotient_ring():
    _, x = poly_ring("x", ZZ)
    K = QuotRing(x**2 + 1)
    i = K.gen
    assert K.degree == 2
    assert i*i == -1
    assert i**4 == 1
    assert (1 + i)*(1 + i).inverse() == 1
    assert (1 + i).inverse() == (1 - i)/2
    assert i**-1 == -i
    assert i.coeffs() == [0, 1]
    assert i.matrix() == [[0, -1], [1, 0]]
    assert K(x**3) == -i

    L = QuotRing(2*x**2 - 2)
    assert L.modulus == L.ring.gens[0]**2 - 1
    with pytest.raises(ZeroDivisionError,match=r"not invertible"):
        (L.gen - 1).inverse()

    _, t = poly_ring("t", QQ)
    R = QuotRing(t**2 - 2)
    assert R.ring.domain == QQ
    assert R.gen**2 == 2
    assert R.gen.inverse() == R.gen/2

    with pytest.raises(ValueError,match=r"positive degree"):
        QuotRing(x - x + 3)

def test_modular_linear_algebra():
    assert modular_rank([[1, 2], [2, 4]], 7) == 1
    assert modular_rank([[2, 4]], 2) == 0
    assert modular_rank([[1, 0], [0, 1]], 7) == 2

    solution = modular_solve([[2, 0], [0, 3]], [[4], [9]], 7)
    assert solution.tolist() == [[2], [3]]

    with pytest.raises(ZeroDivisionError,match=r"singular"):
        modular_solve([[1, 2], [2, 4]], [[1], [1]], 7)

def test_rank_primes():
    primes = rank_primes()
    assert len(primes) == 3
    assert all(isprime(p) and 1 << 29 < p < 1 << 30 for p in primes)
    assert primes == sorted(set(primes), reverse=True)

    small = rank_primes(4, bits=8)
    assert len(set(small)) == 4
    assert all(128 < p < 256 for p in small)

def test_int_rank():
    assert int_rank([]) == 0
    assert int_rank([[1, 2], [2, 4]]) == 1
    assert int_rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2
    assert int_rank(np.eye(5, dtype=int).tolist()) == 5
    assert int_rank([[3, 6], [1, 2]], exact=False) == 1
    # rank 2 over Q even with entries far above the modular primes
    big = 1 << 40
    assert int_rank([[big, 1], [1, big]]) == 2
