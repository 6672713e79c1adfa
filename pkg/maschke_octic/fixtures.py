"""
Coefficient tables shipped as ``fixtures/<label>.csv``: a ``#`` comment line
stating where the numbers come from, a ``p,coeff`` (or ``q,coeff``) header
and one integer row per prime. Only printed values are shipped, tables are
never extended by computation.
"""
import csv
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, Optional, Sequence, Union
from maschke_octic.exceptions import FixtureError

logger = logging.getLogger(__name__)

PACKAGED = Path(__file__).parent / 'fixtures'

# label -> weight of the form (or of the cohomology piece) the coefficients belong to
FORMS: Dict[str,int] = {
    'f120': 4,
    'f24B': 2,
    'f120E': 2,
    'f15C': 2,
    'f210': 2,
    'f840': 2,
    'f1680': 2,
    'heckeW': 3,
    'W7': 3,
    'Yhat': 4,
}

@dataclass
class CoefficientTable(Mapping):
    label: str
    weight: int
    values: Dict[int,int] = field(default_factory=dict)
    provenance: str = ''

    def __getitem__(self, p: int) -> int:
        return self.values[p]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.values))

    def __len__(self) -> int:
        return len(self.values)

def _parse_int(text: str, path: Path, row: int, column: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise FixtureError(status_code=2, message="{}, row {}: {} '{}' is not an integer".format(path, row, column, text))

def read_table(path: Union[str,Path], label: Optional[str] = None) -> CoefficientTable:
    """
    Read one fixture CSV.

    :param path: the CSV file
    :param label: table label, defaults to the file stem
    :return: the table with its provenance comment
    """
    path = Path(path)
    label = label or path.stem
    try:
        text = path.read_text()
    except OSError as err:
        raise FixtureError(status_code=2, message="{}: cannot read fixture table ({})".format(path, err.strerror))

    table = CoefficientTable(label, FORMS.get(label, 2))
    header_seen = False
    for row, fields in enumerate(csv.reader(text.splitlines()), start=1):
        if not fields or not ''.join(fields).strip():
            continue
        if fields[0].lstrip().startswith('#'):
            table.provenance = table.provenance or ','.join(fields).lstrip('# ').strip()
            continue
        if not header_seen:
            if [f.strip() for f in fields] not in (['p','coeff'], ['q','coeff']):
                raise FixtureError(status_code=2, message="{}, row {}: expected header 'p,coeff', got '{}'".format(path, row, ','.join(fields)))
            header_seen = True
            continue
        if len(fields) != 2:
            raise FixtureError(status_code=2, message="{}, row {}: expected 2 fields, got {}".format(path, row, len(fields)))
        p = _parse_int(fields[0], path, row, 'prime')
        if p in table.values:
            raise FixtureError(status_code=2, message="{}, row {}: duplicate entry for {}".format(path, row, p))
        table.values[p] = _parse_int(fields[1], path, row, 'coefficient')

    if not header_seen:
        raise FixtureError(status_code=2, message="{}: empty fixture table".format(path))
    logger.debug("Loaded %s with %d rows", label, len(table))
    return table

def load_tables(directory: Optional[Union[str,Path]] = None, labels: Optional[Sequence[str]] = None) -> Dict[str,CoefficientTable]:
    """
    Load the coefficient tables of a fixture directory (the packaged one by default).
    Every label in ``labels`` (all known labels by default) must be present.
    """
    directory = Path(directory) if directory else PACKAGED
    if not directory.is_dir():
        raise FixtureError(status_code=2, message="{}: fixture directory does not exist".format(directory))
    tables = {}
    for label in labels or FORMS:
        path = directory / "{}.csv".format(label)
        if not path.exists():
            raise FixtureError(status_code=2, message="{}: missing fixture table {}".format(path, label))
        tables[label] = read_table(path, label)
    logger.info("Loaded %d fixture tables from %s", len(tables), directory)
    return tables
