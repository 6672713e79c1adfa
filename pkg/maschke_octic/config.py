import re
from typing import Optional, List, Tuple
from pydantic import (
    BaseModel,
    ConfigDict,
    field_validator,
    model_validator,
    StrictBool,
    StrictInt,
    StrictStr
)

VARIETY_IDS = (
    'S','Sbar','X','U','Utilde','W','Wtilde','Z','Y',
    'Cplus','Cminus','Ctilde','C3','Cbar','C7'
)
CHECK_IDS = ('ABC','DELTA','TWIST','IGUSA','GM','WQUARTIC','WLINES','LINES32','GINVAR','AJ','QUOT')
LOG_LEVELS = ('DEBUG','INFO','WARNING','ERROR')

_RANGE = re.compile(r"^(\d+)\s*\.\.\s*(\d+)$")

def parse_prime_range(text: str) -> Tuple[int,int]:
    """
    Parse a prime range written as ``lo..hi`` (a single number means ``lo..lo``)

    :param text: the range as given on the command line or in settings
    :return: the pair (lo, hi), not yet validated
    """
    text = text.strip()
    if text.isdigit():
        return int(text), int(text)
    match = _RANGE.match(text)
    if not match:
        raise ValueError("The prime range must look like 'lo..hi', got '{}'".format(text))
    return int(match.group(1)), int(match.group(2))

def _check_range(lo: int, hi: int) -> None:
    if lo <= 5:
        raise ValueError("The prime range must start above 5 (bad reduction at 2, 3, 5)")
    if hi < lo:
        raise ValueError("The prime range must satisfy hi >= lo")

class LoadConfig(BaseModel):
    model_config = ConfigDict(str_min_length=1, str_strip_whitespace=True)

    workbench_primes: Optional[StrictStr] = "7..97"
    workbench_workers: Optional[StrictInt] = 1
    workbench_fixture_dir: Optional[StrictStr] = None
    workbench_checkpoint: Optional[StrictStr] = None
    workbench_format: Optional[StrictStr] = "csv"
    workbench_group_bound: Optional[StrictInt] = 10**6
    # largest q for which F_q addition/multiplication tables are built
    workbench_table_limit: Optional[StrictInt] = 2500
    workbench_block_size: Optional[StrictInt] = 1 << 18
    workbench_log_level: Optional[StrictStr] = "WARNING"

    @field_validator('workbench_primes')
    @classmethod
    def validate_primes(cls, v):
        _check_range(*parse_prime_range(v))
        return v

    @field_validator('workbench_workers')
    @classmethod
    def validate_workers(cls, v):
        if v < 1:
            raise ValueError("The 'workbench_workers' must be at least 1")
        return v

    @field_validator('workbench_format')
    @classmethod
    def validate_format(cls, v):
        if v.lower() not in ['csv','json']:
            raise ValueError("The 'workbench_format' must be between 'csv' or 'json'")
        return v.lower()

    @field_validator('workbench_group_bound','workbench_table_limit','workbench_block_size')
    @classmethod
    def validate_positive(cls, v, info):
        if v < 1:
            raise ValueError("The '{}' must be a positive integer".format(info.field_name))
        return v

    @field_validator('workbench_log_level')
    @classmethod
    def validate_log_level(cls, v):
        if v.upper() not in LOG_LEVELS:
            raise ValueError("The 'workbench_log_level' must be between {}".format(", ".join(LOG_LEVELS)))
        return v.upper()

class RunConfig(BaseModel):
    """
    One validated command line invocation
    """
    model_config = ConfigDict(str_min_length=1, str_strip_whitespace=True)

    command: StrictStr
    lo: StrictInt = 7
    hi: StrictInt = 97
    varieties: List[StrictStr] = []
    k: StrictInt = 1
    workers: StrictInt = 1
    checkpoint: Optional[StrictStr] = None
    fixture_dir: Optional[StrictStr] = None
    format: StrictStr = "csv"
    run_all: StrictBool = False
    checks: List[StrictStr] = []

    @field_validator('varieties')
    @classmethod
    def validate_varieties(cls, v):
        for item in v:
            if item not in VARIETY_IDS:
                raise ValueError("Unknown variety '{}', expected one of {}".format(item, ", ".join(VARIETY_IDS)))
        return v

    @field_validator('checks')
    @classmethod
    def validate_checks(cls, v):
        for item in v:
            if item not in CHECK_IDS:
                raise ValueError("Unknown check '{}', expected one of {}".format(item, ", ".join(CHECK_IDS)))
        return v

    @field_validator('k')
    @classmethod
    def validate_degree(cls, v):
        if not 1 <= v <= 4:
            raise ValueError("The extension degree must be between 1 and 4")
        return v

    @field_validator('workers')
    @classmethod
    def validate_workers(cls, v):
        if v < 1:
            raise ValueError("The worker count must be at least 1")
        return v

    @field_validator('format')
    @classmethod
    def validate_format(cls, v):
        if v.lower() not in ['csv','json']:
            raise ValueError("The output format must be between 'csv' or 'json'")
        return v.lower()

    @model_validator(mode='after')
    def validate_range(self):
        _check_range(self.lo, self.hi)
        return self
