import pytest
from maschke_octic.config import CHECK_IDS
from maschke_octic.tangent import (
    SymbolicCheck,
    curve_invariants,
    run_check,
    run_checks
)

@pytest.mark.parametrize("check_id", CHECK_IDS)
def test_symbolic_check_passes(check_id):
    result = run_check(check_id)
    assert result.id == check_id
    assert result.passed, result.witness

def test_fixed_order():
    results = run_checks(['DELTA', 'ABC'])
    assert [r.id for r in results] == ['ABC', 'DELTA']

def test_unknown_check():
    with pytest.raises(ValueError,match=r"Unknown check NOPE"):
        run_check('NOPE')

def test_check_record():
    failed = SymbolicCheck('ABC', 'fail', "F(x,1,ty,t) = A t^8 + B t^4 + C: x")
    assert not failed.passed
    assert len(failed.digest) == 16
    assert failed.as_dict() == {
        'id': 'ABC',
        'verdict': 'fail',
        'witness': failed.witness,
        'digest': failed.digest,
    }
    assert run_check('DELTA').digest == run_check('DELTA').digest

def test_genera():
    report = curve_invariants()
    assert (report.c_plus, report.c_tilde, report.c3, report.cbar) == (9, 33, 3, 3)
    assert report.c7 == 7
    assert report.branch_points == 32
    assert all(report.certificates.values())
