import pytest
from pydantic import BaseModel, ValidationError
from typing import Optional
from maschke_octic.config import RunConfig, parse_prime_range
from maschke_octic.workbench_config import WorkbenchConfig

@pytest.fixture(autouse=True)
def reset_config():
    yield
    WorkbenchConfig.load_config(lambda: [])

def test_default_config():
    assert WorkbenchConfig._primes == (7, 97)
    assert WorkbenchConfig._workers == 1
    assert WorkbenchConfig._fixture_dir is None
    assert WorkbenchConfig._checkpoint is None
    assert WorkbenchConfig._format == "csv"
    assert WorkbenchConfig._group_bound == 10**6
    assert WorkbenchConfig._table_limit == 2500
    assert WorkbenchConfig._block_size == 1 << 18
    assert WorkbenchConfig._log_level == "WARNING"

def test_load_settings_model():
    class Settings(BaseModel):
        workbench_primes: str = "11..53"
        workbench_workers: int = 4
        workbench_fixture_dir: Optional[str] = "/tmp/tables"
        workbench_checkpoint: Optional[str] = "/tmp/counts.json"
        workbench_format: str = "JSON"
        workbench_group_bound: int = 50000
        workbench_table_limit: int = 400
        workbench_block_size: int = 4096
        workbench_log_level: str = "debug"

    @WorkbenchConfig.load_config
    def get_valid_settings():
        return Settings()

    assert WorkbenchConfig._primes == (11, 53)
    assert WorkbenchConfig._workers == 4
    assert WorkbenchConfig._fixture_dir == "/tmp/tables"
    assert WorkbenchConfig._checkpoint == "/tmp/counts.json"
    assert WorkbenchConfig._format == "json"
    assert WorkbenchConfig._group_bound == 50000
    assert WorkbenchConfig._table_limit == 400
    assert WorkbenchConfig._block_size == 4096
    assert WorkbenchConfig._log_level == "DEBUG"

def test_load_settings_tuples():
    WorkbenchConfig.load_config(lambda: [("WORKBENCH_PRIMES", "13"), ("WORKBENCH_WORKERS", 2)])
    assert WorkbenchConfig._primes == (13, 13)
    assert WorkbenchConfig._workers == 2
    assert WorkbenchConfig._format == "csv"

def test_invalid_settings():
    with pytest.raises(TypeError,match=r"Config"):
        @WorkbenchConfig.load_config
        def invalid_data():
            return "test"

    with pytest.raises(ValidationError,match=r"workbench_primes"):
        WorkbenchConfig.load_config(lambda: [("workbench_primes", "5..11")])

    with pytest.raises(ValidationError,match=r"workbench_primes"):
        WorkbenchConfig.load_config(lambda: [("workbench_primes", "11..7")])

    with pytest.raises(ValidationError,match=r"workbench_primes"):
        WorkbenchConfig.load_config(lambda: [("workbench_primes", 7)])

    with pytest.raises(ValidationError,match=r"workbench_workers"):
        WorkbenchConfig.load_config(lambda: [("workbench_workers", 0)])

    with pytest.raises(ValidationError,match=r"workbench_workers"):
        WorkbenchConfig.load_config(lambda: [("workbench_workers", "2")])

    with pytest.raises(ValidationError,match=r"workbench_format"):
        WorkbenchConfig.load_config(lambda: [("workbench_format", "xml")])

    with pytest.raises(ValidationError,match=r"workbench_fixture_dir"):
        WorkbenchConfig.load_config(lambda: [("workbench_fixture_dir", "")])

    with pytest.raises(ValidationError,match=r"workbench_table_limit"):
        WorkbenchConfig.load_config(lambda: [("workbench_table_limit", -1)])

    with pytest.raises(ValidationError,match=r"workbench_log_level"):
        WorkbenchConfig.load_config(lambda: [("workbench_log_level", "loud")])

    # failed loads leave the previous values in place
    assert WorkbenchConfig._primes == (7, 97)

def test_parse_prime_range():
    assert parse_prime_range("7..97") == (7, 97)
    assert parse_prime_range(" 11 .. 13 ") == (11, 13)
    assert parse_prime_range("29") == (29, 29)

    with pytest.raises(ValueError,match=r"lo\.\.hi"):
        parse_prime_range("7-97")

    with pytest.raises(ValueError,match=r"lo\.\.hi"):
        parse_prime_range("..97")

def test_run_config():
    config = RunConfig(command='count', lo=7, hi=13, varieties=['S','X'], format='JSON')
    assert config.format == 'json'
    assert config.k == 1
    assert config.checks == []

    with pytest.raises(ValidationError,match=r"Unknown variety"):
        RunConfig(command='count', varieties=['Q'])

    with pytest.raises(ValidationError,match=r"Unknown check"):
        RunConfig(command='tangent', checks=['NOPE'])

    with pytest.raises(ValidationError,match=r"between 1 and 4"):
        RunConfig(command='count', k=5)

    with pytest.raises(ValidationError,match=r"worker count"):
        RunConfig(command='count', workers=0)

    with pytest.raises(ValidationError,match=r"above 5"):
        RunConfig(command='count', lo=5, hi=11)

    with pytest.raises(ValidationError,match=r"hi >= lo"):
        RunConfig(command='count', lo=13, hi=11)
