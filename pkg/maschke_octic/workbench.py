"""
Orchestration behind the command line: cached counts, the derived traces,
and the consolidated verification report.
"""
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
from sympy import primerange
from maschke_octic import __version__
from maschke_octic.counting import CountRecord, count_points
from maschke_octic.exceptions import CheckpointError, SplitError, VerificationError, WorkbenchException
from maschke_octic.ffield import build_ext
from maschke_octic.fixtures import CoefficientTable, load_tables
from maschke_octic.hecke import hecke_prime_power, hecke_row
from maschke_octic.workbench_config import WorkbenchConfig
from maschke_octic import grouprep, lefschetz, nslattice, tangent

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1

# counts the per-prime identities read, in the order they are computed
REPORT_VARIETIES = ('S', 'W', 'X', 'Y', 'Cplus', 'Ctilde', 'C3')

# trace targets derivable from each counted variety
TRACE_TARGETS: Dict[str,Tuple[Tuple[str,Tuple[str, ...]], ...]] = {
    'S': (('b_q', ('S',)),),
    'Sbar': (('a_q', ('Sbar',)),),
    'U': (('a_q', ('U',)),),
    'W': (('a_q', ('W',)),),
    'X': (('trX', ('X',)), ('trXc', ('X', 'Y'))),
    'Y': (('trYhat', ('Y',)),),
    'Cplus': (('trCplus', ('Cplus',)),),
    'Cminus': (('trCminus', ('Cminus',)),),
    'Ctilde': (('trPrym', ('Cplus', 'Ctilde')),),
    'C3': (('trC3', ('C3',)),),
    'Cbar': (('trCbar', ('Cbar',)),),
    'C7': (('trC7', ('C7',)),),
}

# epsilon_p is confirmed through b_{p^2} at these primes
EPSILON_PRIMES = (7, 11, 13)
# the sextic split needs X and Y over F_{p^2}; p^2 <= 841 keeps that affordable
SEXTIC_PRIMES = (13, 17, 29)
CM_PRIMES = (13, 17, 29)
SQUARE_TRACES = (49, 361)
EPSILON_SIGNATURE = lefschetz.DirichletSignature.from_label('101')

def _count_task(task: Tuple[str,int,int], table_limit: int, block_size: int) -> CountRecord:
    variety, p, k = task
    return count_points(variety, build_ext(p, k, table_limit=table_limit), block_size=block_size)

class Checkpoint:
    """
    Counts already computed, keyed ``<variety>:<q>``, kept in a JSON file
    that is rewritten after every new count.
    """
    def __init__(self, path: Optional[str] = None):
        self.path = Path(path) if path else None
        self.counts: Dict[str,int] = {}
        if self.path and self.path.exists():
            self.counts = self._read()

    def _read(self) -> Dict[str,int]:
        try:
            data = json.loads(self.path.read_text())
            if data.get('version') != CHECKPOINT_VERSION:
                raise ValueError("version {}".format(data.get('version')))
            return {str(key): int(value) for key, value in data['counts'].items()}
        except (OSError, ValueError, KeyError, TypeError, AttributeError) as err:
            raise CheckpointError(status_code=2, message="{}: unreadable checkpoint ({})".format(self.path, err))

    @staticmethod
    def key(variety: str, q: int) -> str:
        return "{}:{}".format(variety, q)

    def get(self, variety: str, q: int) -> Optional[int]:
        return self.counts.get(self.key(variety, q))

    def put(self, variety: str, q: int, count: int) -> None:
        self.counts[self.key(variety, q)] = count
        self.save()

    def save(self) -> None:
        if not self.path:
            return
        payload = json.dumps({'version': CHECKPOINT_VERSION, 'counts': self.counts}, indent=2, sort_keys=True)
        tmp = self.path.with_name(self.path.name + '.tmp')
        tmp.write_text(payload + "\n")
        os.replace(tmp, self.path)

class Workbench(WorkbenchConfig):
    def __init__(
        self,
        checkpoint: Optional[str] = None,
        fixture_dir: Optional[str] = None,
        workers: Optional[int] = None
    ):
        """
        Run arguments override the loaded configuration.

        :param checkpoint: JSON file to resume counts from and write them to
        :param fixture_dir: directory of coefficient tables, the packaged ones by default
        :param workers: processes for counting sweeps and group traces
        """
        self._checkpoint_path = checkpoint or self._checkpoint
        self._fixtures = fixture_dir or self._fixture_dir
        self._pool_size = workers or self._workers
        self.checkpoint = Checkpoint(self._checkpoint_path)
        self._tables: Optional[Dict[str,CoefficientTable]] = None

    @property
    def tables(self) -> Dict[str,CoefficientTable]:
        if self._tables is None:
            self._tables = load_tables(self._fixtures)
        return self._tables

    @staticmethod
    def primes(lo: int, hi: int) -> List[int]:
        return list(primerange(lo, hi + 1))

    # -- counting -------------------------------------------------------------

    def sweep(self, varieties: Sequence[str], primes: Iterable[int], k: int = 1) -> List[CountRecord]:
        """
        Counts for every (variety, p), in prime-major order. Cached counts
        are reused; new ones are checkpointed as they arrive.
        """
        tasks = [(v, p, k) for p in primes for v in varieties]
        records: Dict[Tuple[str,int,int],CountRecord] = {}
        todo = []
        for task in tasks:
            variety, p, _ = task
            cached = self.checkpoint.get(variety, p**k)
            if cached is None:
                todo.append(task)
            else:
                records[task] = CountRecord(variety, p, k, p**k, cached, 'checkpoint')

        if self._pool_size > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=self._pool_size) as pool:
                for task, record in zip(todo, pool.map(partial(_count_task, table_limit=self._table_limit, block_size=self._block_size), todo)):
                    self.checkpoint.put(record.variety, record.q, record.count)
                    records[task] = record
        else:
            for task in todo:
                record = _count_task(task, self._table_limit, self._block_size)
                self.checkpoint.put(record.variety, record.q, record.count)
                records[task] = record
        return [records[task] for task in tasks]

    def count(self, variety: str, p: int, k: int = 1) -> int:
        return self.sweep([variety], [p], k)[0].count

    def count_table(self, records: Iterable[CountRecord]) -> Dict[Tuple[str,int],int]:
        return {(r.variety, r.q): r.count for r in records}

    # -- traces ---------------------------------------------------------------

    def traces(self, varieties: Sequence[str], primes: Sequence[int], k: int = 1) -> List[lefschetz.TraceRecord]:
        needed = sorted({n for v in varieties for _, names in TRACE_TARGETS.get(v, ()) for n in names})
        counts = self.count_table(self.sweep(needed, primes, k))
        out = []
        for p in primes:
            q = p**k
            available = {name: counts[(name, q)] for name in needed}
            for variety in varieties:
                for target, names in TRACE_TARGETS.get(variety, ()):
                    out.append(lefschetz.extract_trace(target, q, {n: available[n] for n in names}, source=variety))
        return out

    # -- sections of the report -----------------------------------------------

    def group_section(self) -> Dict:
        table = grouprep.generate_group(grouprep.maschke_generators(), self._group_bound)
        classes = grouprep.conjugacy_classes(table)
        t_s, t_x = grouprep.trace_class_functions(classes, self._pool_size)
        trivial = grouprep.ClassFunction.constant(classes)
        epsilon, construction = grouprep.epsilon_character(classes)
        inner = {
            't_S,1': grouprep.class_inner(t_s, trivial),
            't_S,eps': grouprep.class_inner(t_s, epsilon),
            't_X,1': grouprep.class_inner(t_x, trivial),
            't_X,eps': grouprep.class_inner(t_x, epsilon),
            't_S,t_S': grouprep.class_inner(t_s, t_s),
            't_X,t_X': grouprep.class_inner(t_x, t_x),
        }
        dims = grouprep.h_isotypic_dims(t_x)
        passed = (
            table.order == 46080
            and inner['t_X,1'] == 0
            and inner['t_X,eps'] == 2
            and inner['t_S,t_S'] == 29
            and inner['t_X,t_X'] == 28
            and sorted(set(dims.values())) == [18, 30]
            and grouprep.heisenberg_commutator_check()
        )
        return {
            'order': table.order,
            'classes': len(classes),
            'class_sizes': classes.sizes(),
            'center': len(classes.center()),
            't_S': [str(v) for v in t_s.values],
            't_X': [str(v) for v in t_x.values],
            'inner_products': {name: str(value) for name, value in inner.items()},
            'epsilon': construction,
            'h_isotypic': {''.join(map(str, u)): d for u, d in sorted(dims.items())},
            'passed': passed,
        }

    def lines_section(self, p: int) -> Dict:
        ctx = nslattice.lines_field(p)
        line_set = nslattice.all_lines(ctx)
        _, rank = nslattice.gram_and_rank(line_set.lines, ctx)
        orbit_ranks = {
            name: nslattice.gram_and_rank([line_set.lines[j] for j in members], ctx)[1]
            for name, members in line_set.orbits.items()
        }
        galois = nslattice.galois_multiplicities()
        passed = (
            len(line_set.lines) == nslattice.EXPECTED_LINES
            and rank == nslattice.L_S_RANK
            and galois.multiplicities == lefschetz.L_S_MULTIPLICITIES
        )
        return {
            'p': p,
            'q': ctx.q,
            'lines': len(line_set.lines),
            'orbits': {name: len(members) for name, members in line_set.orbits.items()},
            'rank': rank,
            'orbit_ranks': orbit_ranks,
            'frobenius_traces': galois.traces,
            'frobenius_orders': galois.orders,
            'multiplicities': galois.multiplicities,
            'passed': passed,
        }

    def hecke_section(self, primes: Sequence[int]) -> Dict:
        rows = [hecke_row(p) for p in primes]
        printed = self.tables.get('heckeW', {})
        mismatches = [row[0] for row in rows if row[0] in printed and printed[row[0]] != row[4]]
        # inert squares against W over F_49
        a_49 = lefschetz.extract_trace('a_q', 49, {'W': self.count('W', 7, 2)}, source='W').value
        return {
            'rows': [list(row) for row in rows],
            'table_mismatches': mismatches,
            'a_49': {'count': a_49, 'hecke': hecke_prime_power(7)},
            'passed': not mismatches and a_49 == hecke_prime_power(7),
        }

    def tangent_section(self, checks: Optional[Sequence[str]] = None) -> Dict:
        results = tangent.run_checks(checks, self._pool_size)
        genera = tangent.curve_invariants()
        genus_ok = (genera.c_plus, genera.c_tilde, genera.c3, genera.cbar, genera.c7) == (9, 33, 3, 3, 7)
        return {
            'checks': [r.as_dict() for r in results],
            'genera': {'Cplus': genera.c_plus, 'Ctilde': genera.c_tilde, 'C3': genera.c3, 'Cbar': genera.cbar, 'C7': genera.c7},
            'passed': all(r.passed for r in results) and genus_ok,
        }

    def _x_trace_sum(self, p: int, k: int) -> int:
        """b_q + c_q + d_q read off tr(F_q | H^3_c), q = p^k = 1 mod 4."""
        q = p**k
        counts = {'X': self.count('X', p, k), 'Y': self.count('Y', p, k)}
        trace = lefschetz.extract_trace('trXc', q, counts).value
        if trace % (45*q):
            raise VerificationError(status_code=1, message="tr(F_{} | H^3_c) = {} is not divisible by 45 q".format(q, trace))
        return trace // (45*q)

    def arithmetic_section(self, primes: Sequence[int]) -> Dict:
        """epsilon_p through b_{p^2}, CM exclusion, sextic splits and the Yhat traces at squares."""
        section: Dict = {'epsilon': {}, 'sextic': {}, 'yhat_squares': {}}
        passed = True
        witnesses = []
        for p in primes:
            if p not in EPSILON_PRIMES and p not in CM_PRIMES:
                continue
            b = lefschetz.extract_trace('b_q', p, {'S': self.count('S', p)}).value
            b2 = None
            if p in EPSILON_PRIMES:
                b2 = lefschetz.extract_trace('b_q', p*p, {'S': self.count('S', p, 2)}).value
            charpoly = lefschetz.epsilon_and_charpoly(b, b2, p)
            agrees = charpoly.epsilon == lefschetz.sigma(EPSILON_SIGNATURE, p)
            section['epsilon'][p] = {'b': b, 'b2': b2, 'epsilon': charpoly.epsilon, 'charpoly': list(charpoly.coeffs), 'agrees': agrees}
            passed = passed and agrees
            if p in CM_PRIMES:
                witnesses.append((p, b, charpoly.epsilon))
        if len(witnesses) >= 2:
            try:
                verdict = lefschetz.cm_exclusion(witnesses)
            except VerificationError as err:
                logger.warning("No CM verdict: %s", err.message)
                section['cm'] = {'verdict': None, 'error': err.message}
            else:
                section['cm'] = {'verdict': verdict.verdict, 'parts': verdict.parts}
                passed = passed and verdict.verdict == 'excluded'

        for p in primes:
            if p not in SEXTIC_PRIMES or p % 4 != 1:
                continue
            t, t2 = self._x_trace_sum(p, 1), self._x_trace_sum(p, 2)
            entry = {'t': t, 't2': t2}
            try:
                entry['split'] = list(lefschetz.infer_sextic_split(t, t2, p))
            except SplitError as err:
                entry['error'] = err.message
                passed = False
            coeffs = [self.tables[label].get(p) for label in ('f24B', 'f120E', 'f15C')]
            if 'split' in entry and None not in coeffs:
                entry['table'] = sorted(coeffs)
                passed = passed and entry['split'] == entry['table']
            section['sextic'][p] = entry

        for q in SQUARE_TRACES:
            p, k = lefschetz.prime_power(q)
            if p not in primes:
                continue
            trace = lefschetz.extract_trace('trYhat', q, {'Y': self.count('Y', p, k)}).value
            predicted = lefschetz.predict_yhat_trace(p, k, self.tables)
            printed = self.tables['Yhat'].get(q)
            section['yhat_squares'][q] = {'trace': trace, 'predicted': predicted, 'table': printed}
            passed = passed and trace == predicted and (printed is None or trace == printed)
        section['passed'] = passed
        return section

    def report(self, primes: Sequence[int], run_all: bool = False) -> Dict:
        """
        The consolidated verification report. Skipped identities (missing
        table rows) do not fail it.
        """
        started = time.perf_counter()
        tables = self.tables
        counts = self.count_table(self.sweep(REPORT_VARIETIES, primes))
        identities = lefschetz.check_conjectures(primes, counts, tables)
        sections: Dict = {
            'identities': [
                {'identity': r.identity, 'p': r.p, 'passed': r.passed, 'values': r.values}
                for r in identities
            ],
        }
        passed = all(r.passed is not False for r in identities)
        if run_all:
            builders = (
                ('arithmetic', lambda: self.arithmetic_section(primes)),
                ('hecke', lambda: self.hecke_section(primes)),
                ('tangent', self.tangent_section),
                ('group', self.group_section),
                ('lines', lambda: self.lines_section(primes[0])),
            )
            for name, build in builders:
                try:
                    sections[name] = build()
                except WorkbenchException as err:
                    sections[name] = {'passed': False, 'error': err.message}
                except (ValueError, ArithmeticError) as err:
                    logger.warning("Section %s failed: %s", name, err)
                    sections[name] = {'passed': False, 'error': str(err)}
                passed = passed and sections[name]['passed']
        return {
            'tool': 'maschke-octic',
            'version': __version__,
            'config': {'primes': [primes[0], primes[-1]] if primes else [], 'all': run_all},
            'sections': sections,
            'passed': passed,
            'timing': {'seconds': round(time.perf_counter() - started, 3)},
        }
