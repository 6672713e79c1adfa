import pytest
from maschke_octic.traceformula import MultSpec, chenevert_cover, chenevert_hypersurface, euler_and_primitive

@pytest.mark.parametrize("d,n,chi,primitive", [
    (3, 1, 0, 2),
    (4, 2, 24, 21),
    (5, 3, -200, 204),
    (8, 2, 304, 301),
])
def test_euler_and_primitive(d, n, chi, primitive):
    assert euler_and_primitive(d, n) == (chi, primitive)

def test_identity_trace_is_primitive_betti_number():
    for d in range(2, 11):
        for n in range(1, 5):
            identity = MultSpec(d, n, mults={0: n + 2})
            assert chenevert_hypersurface(identity) == euler_and_primitive(d, n)[1]

def test_full_cover_matches_extended_hypersurface():
    eigen = MultSpec(8, 2, mults={0: 2, 2: 2})
    assert chenevert_hypersurface(eigen) == 13
    assert chenevert_cover(eigen.with_cover(8)) == 36
    assert chenevert_hypersurface(eigen.with_trivial_eigenvalue()) == 36

    extended = eigen.with_trivial_eigenvalue()
    assert extended.n == 3
    assert extended.mults == {0: 3, 2: 2}
    assert eigen.mults == {0: 2, 2: 2}

def test_multiplicity_lookup():
    eigen = MultSpec(8, 2, mults={2: 4})
    assert eigen.multiplicity(2) == 4
    assert eigen.multiplicity(10) == 4
    assert eigen.multiplicity(0) == 0

def test_invalid_multiplicities():
    with pytest.raises(ValueError, match=r"does not divide"):
        MultSpec(8, 2, r=3)
    with pytest.raises(ValueError, match=r"Bad multiplicity"):
        MultSpec(8, 2, mults={9: 1})
    with pytest.raises(ValueError, match=r"Need d >= 2"):
        MultSpec(1, 2)
    with pytest.raises(ValueError, match=r"Need d >= 2"):
        euler_and_primitive(8, 0)

def test_reflection_on_double_cover():
    reflection = MultSpec(8, 2, 2, {0: 3, 4: 1})
    assert chenevert_cover(reflection) == -44
    assert chenevert_hypersurface(reflection) == -43
