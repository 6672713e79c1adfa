"""
Command line entry point: ``maschke-octic <subcommand> [flags]``.

Exit status is 0 when every evaluated verification passes, 1 when one
fails and 2 for usage, configuration, fixture or checkpoint errors.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence
from pydantic import ValidationError
from maschke_octic import __version__
from maschke_octic.config import CHECK_IDS, LOG_LEVELS, VARIETY_IDS, LoadConfig, RunConfig, parse_prime_range
from maschke_octic.counting import CountRecord
from maschke_octic.exceptions import WorkbenchException
from maschke_octic.hecke import hecke_row
from maschke_octic.workbench import Workbench
from maschke_octic.workbench_config import WorkbenchConfig

logger = logging.getLogger(__name__)

COMMANDS = ('count', 'traces', 'group', 'lines', 'hecke', 'tangent', 'report')

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='maschke-octic', description="Point counts, traces and checks for Maschke's octic")
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--primes', help="prime range 'lo..hi', lo > 5")
    parser.add_argument('--variety', action='append', default=[], help="variety id, repeatable: {}".format(", ".join(VARIETY_IDS)))
    parser.add_argument('--check', action='append', default=[], help="symbolic check id, repeatable: {}".format(", ".join(CHECK_IDS)))
    parser.add_argument('--k', type=int, default=1, help="count over F_(p^k)")
    parser.add_argument('--workers', type=int)
    parser.add_argument('--fixtures', help="directory of coefficient tables")
    parser.add_argument('--checkpoint', help="JSON file of cached counts")
    parser.add_argument('--format', choices=('csv', 'json'))
    parser.add_argument('--output', help="write the result here instead of stdout")
    parser.add_argument('--all', action='store_true', help="report: add the group, lines, hecke, symbolic and arithmetic sections")
    parser.add_argument('-v', '--verbose', action='count', default=0)
    return parser

def environment_settings() -> List[tuple]:
    """``WORKBENCH_*`` environment variables as settings tuples, converted to int for the integer fields."""
    integer_fields = {name for name, field in LoadConfig.model_fields.items() if isinstance(field.default, int)}
    settings = []
    for key, value in os.environ.items():
        if not key.startswith('WORKBENCH_'):
            continue
        if key.lower() in integer_fields and value.strip().lstrip('-').isdigit():
            value = int(value)
        settings.append((key, value))
    return settings

def configure_logging(verbose: int) -> None:
    level = WorkbenchConfig._log_level
    if verbose:
        level = LOG_LEVELS[max(0, LOG_LEVELS.index('INFO') - (verbose - 1))]
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

def _rows_csv(rows: Sequence[Dict], fields: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()

def _emit(payload: str, output: Optional[str]) -> None:
    if output:
        with open(output, 'w') as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)

def _render(rows: List[Dict], fields: Sequence[str], fmt: str) -> str:
    if fmt == 'json':
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    return _rows_csv(rows, fields)

def _dump(document: Dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True, default=str) + "\n"

def _dispatch(config: RunConfig, bench: Workbench, output: Optional[str]) -> int:
    primes = bench.primes(config.lo, config.hi)
    if config.command == 'count':
        records = bench.sweep(config.varieties or ['S'], primes, config.k)
        _emit(_render([r.as_row() for r in records], CountRecord.FIELDS, config.format), output)
        return EXIT_OK

    if config.command == 'traces':
        records = bench.traces(config.varieties or ['S'], primes, config.k)
        rows = [{'target': r.target, 'q': r.q, 'value': r.value} for r in records]
        _emit(_render(rows, ('target', 'q', 'value'), config.format), output)
        return EXIT_OK

    if config.command == 'hecke':
        printed = bench.tables['heckeW']
        rows, failed = [], False
        for p in primes:
            p, kind, a, b, a_p = hecke_row(p)
            rows.append({'p': p, 'split': kind, 'a': a, 'b': b, 'a_p': a_p})
            failed = failed or (p in printed and printed[p] != a_p)
        _emit(_render(rows, ('p', 'split', 'a', 'b', 'a_p'), config.format), output)
        return EXIT_FAILED if failed else EXIT_OK

    if config.command == 'tangent':
        section = bench.tangent_section(config.checks or None)
        if config.format == 'csv':
            _emit(_rows_csv(section['checks'], ('id', 'verdict', 'witness', 'digest')), output)
        else:
            _emit(_dump(section), output)
        return EXIT_OK if section['passed'] else EXIT_FAILED

    if config.command == 'group':
        section = bench.group_section()
    elif config.command == 'lines':
        section = bench.lines_section(primes[0])
    else:
        section = bench.report(primes, config.run_all)
    _emit(_dump(section), output)
    return EXIT_OK if section['passed'] else EXIT_FAILED

def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse, validate and dispatch one invocation.

    :param argv: the arguments without the program name, ``sys.argv[1:]`` by default
    :return: the exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return EXIT_USAGE if stop.code else EXIT_OK

    try:
        WorkbenchConfig.load_config(environment_settings)
        lo, hi = parse_prime_range(args.primes) if args.primes else WorkbenchConfig._primes
        config = RunConfig(
            command=args.command,
            lo=lo,
            hi=hi,
            varieties=args.variety,
            k=args.k,
            workers=args.workers or WorkbenchConfig._workers,
            checkpoint=args.checkpoint,
            fixture_dir=args.fixtures,
            format=args.format or WorkbenchConfig._format,
            run_all=args.all,
            checks=args.check,
        )
        if not Workbench.primes(config.lo, config.hi):
            raise ValueError("No primes in {}..{}".format(config.lo, config.hi))
    except (ValidationError, ValueError, TypeError) as err:
        sys.stderr.write("maschke-octic: error: {}\n".format(err))
        return EXIT_USAGE
    configure_logging(args.verbose)

    try:
        bench = Workbench(config.checkpoint, config.fixture_dir, config.workers)
        status = _dispatch(config, bench, args.output)
    except WorkbenchException as err:
        sys.stderr.write("maschke-octic: {}\n".format(err.message))
        return err.status_code
    logger.info("%s finished with exit status %d", config.command, status)
    return status

def main() -> None:
    sys.exit(run())
