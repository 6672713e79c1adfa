import pytest
from sympy import QQ
from maschke_octic.exceptions import ClosureBoundError, IntegralityError
from maschke_octic.grouprep import (
    ClassFunction,
    GroupElement,
    class_inner,
    conjugacy_classes,
    eig_mults,
    epsilon_character,
    generate_group,
    h_isotypic_dims,
    heisenberg_commutator_check,
    heisenberg_elements,
    heisenberg_generators,
    maschke_generators,
    trace_class_functions
)
from maschke_octic.traceformula import chenevert_cover, chenevert_hypersurface

@pytest.fixture(scope="module")
def heisenberg():
    return conjugacy_classes(generate_group(list(heisenberg_generators().values())))

def test_group_element_arithmetic():
    g1, g2 = maschke_generators()
    one = GroupElement.identity()
    assert g1.order() == 4
    assert g2*g2.inverse() == one
    assert g2.conjugate_transpose() == g2.inverse()
    assert g1**4 == one
    assert g1**-1 == g1**3
    assert GroupElement.scalar(0, 1)**2 == GroupElement.scalar(-1)
    # (2*Id)/2 is normalised to the identity
    assert GroupElement.from_rows([[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]], shift=1) == one

    with pytest.raises(ValueError,match=r"columns"):
        GroupElement.from_rows([[1,0,0]])

    with pytest.raises(ValueError,match=r"unitary"):
        GroupElement.scalar(2).inverse()

def test_heisenberg_group(heisenberg):
    assert heisenberg.table.order == 64
    assert len(heisenberg) == 34
    assert len(heisenberg.center()) == 4
    assert sorted(set(heisenberg.sizes())) == [1, 2]
    assert len(heisenberg_elements()) == 64
    assert {element for _, _, element in heisenberg_elements()} == set(heisenberg.table)
    assert heisenberg_commutator_check()

def test_closure_bound():
    with pytest.raises(ClosureBoundError,match=r"exceeds 10") as err:
        generate_group(list(heisenberg_generators().values()), bound=10)
    assert err.value.status_code == 1

def test_eigenvalue_multiplicities():
    g1, _ = maschke_generators()
    identity = eig_mults(GroupElement.identity(), 8)
    assert identity.mults == {0: 4}
    assert eig_mults(g1, 8).mults == {0: 2, 2: 2}
    assert eig_mults(GroupElement.scalar(0, 1), 8).mults == {2: 4}

    assert chenevert_hypersurface(identity) == 301
    assert chenevert_cover(identity.with_cover(2)) == 300
    assert chenevert_hypersurface(eig_mults(g1, 8)) == 13

def test_class_functions(heisenberg):
    one = ClassFunction.constant(heisenberg)
    assert class_inner(one, one) == 1
    assert (one + one).as_ints() == [2]*34
    assert (one - one).is_integral()

    half = ClassFunction.constant(heisenberg, QQ(1, 2))
    assert not half.is_integral()
    with pytest.raises(IntegralityError,match=r"non-integral"):
        half.as_ints()

    with pytest.raises(ValueError,match=r"Expected 34 values"):
        ClassFunction(heisenberg, [1, 2, 3])

@pytest.mark.slow
def test_maschke_group(group, classes):
    assert group.order == 46080
    assert len(classes) == 59
    assert len(classes.center()) == 4
    scalars = {GroupElement.scalar(1), GroupElement.scalar(-1), GroupElement.scalar(0, 1), GroupElement.scalar(0, -1)}
    assert set(classes.center()) == scalars
    assert all(element in group for _, _, element in heisenberg_elements())

@pytest.mark.slow
def test_trace_class_functions(classes):
    t_s, t_x = trace_class_functions(classes)
    assert t_s.is_integral() and t_x.is_integral()
    assert t_s[0] == 301
    assert t_x[0] == 300
    for c, cls in enumerate(classes):
        for member in cls.members[-3:]:
            eigen = eig_mults(classes.table.elements[member], 8)
            assert chenevert_hypersurface(eigen) == t_s[c]
            assert chenevert_cover(eigen.with_cover(2)) == t_x[c]

    one = ClassFunction.constant(classes)
    epsilon, _ = epsilon_character(classes)
    assert class_inner(epsilon, epsilon) == 1
    assert class_inner(epsilon, one) == 0
    assert class_inner(t_x, one) == 0
    assert class_inner(t_x, epsilon) == 2
    assert class_inner(t_s, t_s) == 29
    assert class_inner(t_x, t_x) == 28

    dims = h_isotypic_dims(t_x)
    assert len(dims) == 16
    assert set(dims.values()) == {18, 30}
    assert sum(dims.values()) == 300
