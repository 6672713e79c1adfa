import json
import pytest
from maschke_octic.exceptions import CheckpointError, FixtureError, VerificationError
from maschke_octic.workbench import Checkpoint, Workbench
from maschke_octic.workbench_config import WorkbenchConfig

def test_defaults_from_config():
    bench = Workbench()
    assert bench.prime_range == WorkbenchConfig._primes
    assert not bench.parallel
    assert bench._pool_size == 1
    assert bench.checkpoint.path is None
    assert Workbench.primes(7, 31) == [7, 11, 13, 17, 19, 23, 29, 31]
    assert Workbench.primes(8, 10) == []

def test_checkpoint_resume(tmp_path):
    path = tmp_path / "counts.json"
    first = Workbench(checkpoint=str(path))
    records = first.sweep(['S', 'Sbar'], [7, 11])
    assert [(r.variety, r.p) for r in records] == [('S', 7), ('Sbar', 7), ('S', 11), ('Sbar', 11)]
    assert records[0].count == 64

    data = json.loads(path.read_text())
    assert data['version'] == 1
    assert data['counts']['S:7'] == 64
    assert set(data['counts']) == {'S:7', 'Sbar:7', 'S:11', 'Sbar:11'}

    second = Workbench(checkpoint=str(path))
    resumed = second.sweep(['S'], [7])
    assert resumed[0].kernel == 'checkpoint'
    assert resumed[0].count == 64
    assert second.count('Sbar', 11) == records[3].count

def test_bad_checkpoint(tmp_path):
    path = tmp_path / "counts.json"
    path.write_text("{not json")
    with pytest.raises(CheckpointError,match=r"unreadable checkpoint") as err:
        Workbench(checkpoint=str(path))
    assert err.value.status_code == 2

    path.write_text(json.dumps({'version': 9, 'counts': {}}))
    with pytest.raises(CheckpointError,match=r"version 9"):
        Checkpoint(str(path))

def test_checkpoint_without_file():
    checkpoint = Checkpoint()
    checkpoint.put('S', 7, 64)
    assert checkpoint.get('S', 7) == 64
    assert checkpoint.get('S', 11) is None

def test_traces():
    bench = Workbench()
    records = bench.traces(['W', 'S'], [17])
    assert [(r.target, r.q, r.value) for r in records][0] == ('a_q', 17, 14)
    assert records[1].target == 'b_q'
    assert records[1].value == 5

    x_traces = bench.traces(['X'], [7])
    assert [(r.target, r.value) for r in x_traces] == [('trX', 0), ('trXc', 0)]

def test_missing_fixtures(tmp_path):
    bench = Workbench(fixture_dir=str(tmp_path / "none"))
    with pytest.raises(FixtureError):
        bench.tables

def test_report():
    report = Workbench().report([7])
    assert report['tool'] == 'maschke-octic'
    assert report['config'] == {'primes': [7, 7], 'all': False}
    assert report['passed'] is True
    identities = {row['identity']: row['passed'] for row in report['sections']['identities']}
    assert identities['i'] is True
    assert identities['hecke'] is True
    assert identities['W7'] is True
    assert identities['v'] is None

def test_report_failed_sections(monkeypatch):
    bench = Workbench()

    def broken_lines(p):
        raise ValueError("i is not in F_{}".format(p))

    def broken_tangent():
        raise VerificationError(status_code=1, message="GM check failed")

    monkeypatch.setattr(bench, 'arithmetic_section', lambda primes: {'passed': True})
    monkeypatch.setattr(bench, 'hecke_section', lambda primes: {'passed': True})
    monkeypatch.setattr(bench, 'group_section', lambda: {'passed': True})
    monkeypatch.setattr(bench, 'tangent_section', broken_tangent)
    monkeypatch.setattr(bench, 'lines_section', broken_lines)

    report = bench.report([7], run_all=True)
    assert report['passed'] is False
    assert report['config'] == {'primes': [7, 7], 'all': True}
    sections = report['sections']
    assert sections['lines'] == {'passed': False, 'error': "i is not in F_7"}
    assert sections['tangent'] == {'passed': False, 'error': "GM check failed"}
    assert sections['group']['passed'] is True

@pytest.mark.slow
def test_full_report():
    report = Workbench().report([7, 11, 13], run_all=True)
    sections = report['sections']
    assert set(sections) == {'identities', 'arithmetic', 'hecke', 'tangent', 'group', 'lines'}
    assert all(sections[name]['passed'] for name in sections if name != 'identities')
    assert sections['arithmetic']['sextic'][13]['split'] == [-2, -2, 6]
    assert report['passed'] is True

def test_hecke_section():
    section = Workbench().hecke_section([7, 11, 13, 17, 19])
    assert section['table_mismatches'] == []
    assert section['rows'][3] == [17, 'split', 11, -8, 14]
    assert section['passed']

@pytest.mark.slow
def test_arithmetic_section():
    section = Workbench().arithmetic_section([7, 11, 13])
    assert set(section['epsilon']) == {7, 11, 13}
    # a single CM witness gives no verdict
    assert 'cm' not in section
    assert all(entry['agrees'] for entry in section['epsilon'].values())
    assert section['sextic'][13]['split'] == [-2, -2, 6]
    assert section['passed']
