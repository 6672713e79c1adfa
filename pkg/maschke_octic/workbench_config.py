from maschke_octic.config import LoadConfig, parse_prime_range
from pydantic import ValidationError
from typing import Callable, List, Tuple

class WorkbenchConfig:
    _primes = (7, 97)
    _workers = 1
    _fixture_dir = None
    _checkpoint = None
    _format = "csv"
    _group_bound = 10**6
    _table_limit = 2500
    _block_size = 1 << 18
    _log_level = "WARNING"

    @property
    def prime_range(self) -> Tuple[int,int]:
        return self._primes

    @property
    def parallel(self) -> bool:
        return self._workers > 1

    @classmethod
    def load_config(cls, settings: Callable[...,List[tuple]]) -> "WorkbenchConfig":
        try:
            config = LoadConfig(**{key.lower():value for key,value in settings()})

            cls._primes = parse_prime_range(config.workbench_primes)
            cls._workers = config.workbench_workers
            cls._fixture_dir = config.workbench_fixture_dir
            cls._checkpoint = config.workbench_checkpoint
            cls._format = config.workbench_format
            cls._group_bound = config.workbench_group_bound
            cls._table_limit = config.workbench_table_limit
            cls._block_size = config.workbench_block_size
            cls._log_level = config.workbench_log_level
        except ValidationError:
            raise
        except Exception:
            raise TypeError("Config must be pydantic model or list of tuple")
