import json
import pytest
from maschke_octic import __version__
from maschke_octic.cli import environment_settings, run
from maschke_octic.workbench_config import WorkbenchConfig

@pytest.fixture(autouse=True)
def reset_config():
    yield
    WorkbenchConfig.load_config(lambda: [])

def test_count_csv(capsys):
    assert run(['count', '--variety', 'S', '--primes', '7..7']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "variety,p,k,q,count,kernel,ms"
    assert lines[1].startswith("S,7,1,7,64,structured,")

def test_count_json_to_file(tmp_path):
    output = tmp_path / "counts.json"
    status = run(['count', '--variety', 'S', '--variety', 'Sbar', '--primes', '7', '--format', 'json', '--output', str(output)])
    assert status == 0
    rows = json.loads(output.read_text())
    assert [(r['variety'], r['count']) for r in rows] == [('S', 64), ('Sbar', 64)]

def test_checkpoint_resume(tmp_path, capsys):
    checkpoint = str(tmp_path / "counts.json")
    assert run(['count', '--primes', '7..11', '--checkpoint', checkpoint]) == 0
    capsys.readouterr()
    assert run(['count', '--primes', '7..11', '--checkpoint', checkpoint]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert len(rows) == 2
    assert all(",checkpoint," in row for row in rows)

def test_traces(capsys):
    assert run(['traces', '--variety', 'W', '--primes', '17']) == 0
    assert capsys.readouterr().out.splitlines() == ["target,q,value", "a_q,17,14"]

def test_hecke(capsys):
    assert run(['hecke', '--primes', '7..19']) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "p,split,a,b,a_p"
    assert "17,split,11,-8,14" in out
    assert "7,inert,,,0" in out

def test_tangent(capsys):
    assert run(['tangent', '--check', 'ABC', '--check', 'DELTA']) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "id,verdict,witness,digest"
    assert [line.split(',')[:2] for line in out[1:]] == [['ABC', 'pass'], ['DELTA', 'pass']]

def test_environment(monkeypatch, capsys):
    monkeypatch.setenv('WORKBENCH_FORMAT', 'json')
    monkeypatch.setenv('WORKBENCH_WORKERS', '1')
    assert ('WORKBENCH_WORKERS', 1) in environment_settings()
    assert run(['count', '--primes', '7']) == 0
    assert json.loads(capsys.readouterr().out)[0]['count'] == 64

def test_environment_single_prime(monkeypatch, capsys):
    monkeypatch.setenv('WORKBENCH_PRIMES', '11')
    monkeypatch.setenv('WORKBENCH_TABLE_LIMIT', '500')
    settings = dict(environment_settings())
    assert settings['WORKBENCH_PRIMES'] == '11'
    assert settings['WORKBENCH_TABLE_LIMIT'] == 500

    assert run(['hecke']) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "p,split,a,b,a_p"
    assert out[1:] == ["11,inert,,,0"]
    assert WorkbenchConfig._primes == (11, 11)

def test_usage_errors(capsys):
    assert run([]) == 2
    assert run(['bogus']) == 2
    assert run(['count', '--primes', '5..7']) == 2
    assert run(['count', '--primes', '13..11']) == 2
    assert run(['count', '--primes', 'seven']) == 2
    assert run(['count', '--primes', '8..10']) == 2
    assert run(['count', '--variety', 'Q']) == 2
    assert run(['count', '--k', '5', '--primes', '7']) == 2
    assert run(['tangent', '--check', 'NOPE']) == 2
    err = capsys.readouterr().err
    assert "No primes in 8..10" in err

def test_bad_environment(monkeypatch):
    monkeypatch.setenv('WORKBENCH_FORMAT', 'xml')
    assert run(['count', '--primes', '7']) == 2

def test_version(capsys):
    assert run(['--version']) == 0
    assert __version__ in capsys.readouterr().out

def test_fixture_and_checkpoint_errors(tmp_path, capsys):
    assert run(['hecke', '--primes', '17', '--fixtures', str(tmp_path)]) == 2
    assert "missing fixture table" in capsys.readouterr().err

    checkpoint = tmp_path / "counts.json"
    checkpoint.write_text("[1, 2")
    assert run(['count', '--primes', '7', '--checkpoint', str(checkpoint)]) == 2
    assert "unreadable checkpoint" in capsys.readouterr().err
