import pytest
from maschke_octic.config import VARIETY_IDS
from maschke_octic.counting import (
    VARIETIES,
    CountRecord,
    count_ambient,
    count_curve_pair,
    count_points,
    count_range,
    get_variety,
    projective_size,
    shard_bounds,
    structured_kernel_S
)
from maschke_octic.exceptions import BadReductionError
from maschke_octic.ffield import build_ext

def test_varieties_registered():
    assert tuple(VARIETIES) == VARIETY_IDS
    assert get_variety('Utilde').resolves == 'U'
    assert get_variety('S').kernels == ('naive', 'structured')

    with pytest.raises(ValueError,match=r"Unknown variety Q"):
        get_variety('Q')

def test_ambient_walk(F7, F49):
    assert projective_size(3, 7) == 400
    assert count_ambient(3, F7) == 400
    assert count_ambient(4, F7) == projective_size(4, 7)
    assert count_ambient(2, F49) == 1 + 49 + 49**2

def test_known_counts(F7):
    assert count_points('S', F7, 'naive').count == 64
    assert count_points('Sbar', F7).count == 64
    assert count_points('X', F7, 'naive').count == 400
    assert count_points('U', F7, 'naive').count == 190
    assert count_points('Y', F7, 'naive').count == 400
    assert count_points('C3', F7).count == 8

def test_resolved_counts(F7):
    record = count_points('Utilde', F7)
    assert record.count == 190 + 30*7
    assert record.variety == 'Utilde'
    assert count_points('Wtilde', build_ext(17)).count == 304

def test_count_record(F7):
    record = structured_kernel_S(F7)
    assert record.count == 64
    assert record.kernel == 'structured'
    assert (record.p, record.k, record.q) == (7, 1, 7)
    row = record.as_row()
    assert tuple(row) == CountRecord.FIELDS
    assert row['count'] == 64

def test_hecke_counts():
    assert count_points('W', build_ext(17)).count == 304
    assert count_points('X', build_ext(11)).count == 1680

@pytest.mark.parametrize("variety", ['S', 'X', 'Y', 'Z', 'U', 'Cplus', 'Cminus', 'Ctilde'])
@pytest.mark.parametrize("p", [7, 11, 13])
def test_kernels_agree(variety, p):
    ctx = build_ext(p)
    naive = count_points(variety, ctx, 'naive').count
    assert count_points(variety, ctx, 'structured').count == naive

@pytest.mark.slow
def test_kernels_agree_over_extension(F49):
    assert count_points('S', F49, 'structured').count == count_points('S', F49, 'naive').count
    assert count_points('X', F49, 'structured').count == count_points('X', F49, 'naive').count

@pytest.mark.slow
def test_square_field_count(F49):
    assert count_points('W', F49).count == 2892

def test_shards_sum_to_total(F7):
    total = projective_size(3, 7)
    bounds = shard_bounds(total, 5)
    assert bounds[0][0] == 0 and bounds[-1][1] == total
    assert sum(count_range(F7, 'S', 'naive', lo, hi, block_size=37) for lo, hi in bounds) == 64

def test_parallel_count(F7):
    assert count_points('S', F7, 'naive', workers=2, block_size=50).count == 64

def test_curve_pair():
    for p, difference in ((11, 0), (13, 0), (19, -32)):
        plus, tilde = count_curve_pair(p)
        assert plus - tilde == difference

def test_count_errors(F7):
    with pytest.raises(BadReductionError,match=r"bad reduction") as err:
        count_points('S', build_ext(5, check_reduction=False))
    assert err.value.status_code == 2

    with pytest.raises(ValueError,match=r"no structured kernel"):
        count_points('W', F7, 'structured')

    with pytest.raises(ValueError,match=r"Unknown variety"):
        count_points('V', F7)

    with pytest.raises(ValueError,match=r"k <= 2"):
        structured_kernel_S(build_ext(7, 3))
