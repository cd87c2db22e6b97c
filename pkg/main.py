#!/usr/bin/env python3
"""
trichain

Exact multiplicity computation for zero-dimensional regular chains:
simple decomposition with multiplicity arrays, local multiplicity of a
zero, real root isolation with multiplicities and a dual space oracle.
"""

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

from src.config.config_manager import ConfigManager, DEFAULT_CONFIG_PATH
from src.core.chains import check_regular, is_simple
from src.core.dualspace import dual_space_dim
from src.core.errors import DomainError, NotRegularError, ParseError, TrichainError
from src.core.isolate import iso_mult
from src.core.reg2sim import configure_cache, reg2sim, reg_mult_detail
from src.reports.report_generator import (
    BranchRecord,
    ReportGenerator,
    ResultDocument,
    decomposition_document,
    zeros_document,
)
from src.utils.point_parser import parse_point, parse_rational
from src.utils.system_parser import CorpusEntry, load_corpus, load_system

logger = logging.getLogger(__name__)


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=DEFAULT_CONFIG_PATH,
                        help='Path to configuration file')
    common.add_argument('--json', action='store_true',
                        help='Print the result as JSON')
    common.add_argument('--csv', type=str, metavar='PATH',
                        help='Also write the branches or zeros as CSV')
    common.add_argument('--threads', type=int,
                        help='Number of worker threads (overrides config file)')
    common.add_argument('--no-split', action='store_true',
                        help='Do not split rational roots off point fibres')
    common.add_argument('--no-cache', action='store_true',
                        help='Recompute the simple decomposition instead of reusing a cached one')
    common.add_argument('--verbose', action='store_true',
                        help='Enable verbose output')
    common.add_argument('--save-config', action='store_true',
                        help='Save the effective configuration to the config file')

    parser = argparse.ArgumentParser(description='Multiplicities of zero-dimensional regular chains')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    decompose = commands.add_parser('decompose', parents=[common],
                                    help='Simple decomposition with multiplicity arrays')
    decompose.add_argument('file', help='System file')

    mult = commands.add_parser('mult', parents=[common], help='Local multiplicity at a zero')
    mult.add_argument('file', help='System file')
    mult.add_argument('--point', required=True, help='Zero as Gaussian rationals, e.g. 1+1i,0')

    isolate = commands.add_parser('isolate', parents=[common], help='Real zeros with multiplicities')
    isolate.add_argument('file', help='System file')
    isolate.add_argument('--width', type=str, help='Refine every box to this width, e.g. 1/1024')
    isolate.add_argument('--depth-cap', type=int, help='Bisection cap per coordinate')

    oracle = commands.add_parser('oracle', parents=[common], help='Dual space dimension at a rational zero')
    oracle.add_argument('file', help='System file')
    oracle.add_argument('--point', required=True, help='Rational zero, e.g. 1,1/2')
    oracle.add_argument('--cap', type=int, help='Highest Macaulay order tried')

    check = commands.add_parser('check', parents=[common], help='Check that a system is a regular chain')
    check.add_argument('file', help='System file')

    table = commands.add_parser('table', parents=[common], help='Multiplicities of the shipped corpus')
    table.add_argument('--corpus', type=str, help='Corpus directory (overrides config file)')
    table.add_argument('--oracle', action='store_true', help='Also run the dual space oracle where feasible')
    table.add_argument('--extended', action='store_true', help='Include extended systems')
    table.add_argument('--cap', type=int, help='Highest Macaulay order tried')

    return parser.parse_args(argv)


def configure_logging(level: str, log_file: str = '') -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )
    logging.getLogger().setLevel(level)


def apply_arguments(config_manager: ConfigManager, args: argparse.Namespace) -> Dict[str, Any]:
    """
    Override configuration values with command line flags.

    Returns:
        The effective configuration
    """
    if args.threads is not None:
        config_manager.set_value('threads', args.threads)
    if args.no_split:
        config_manager.set_value('decomposition.split_rational_roots', False)
    if args.no_cache:
        config_manager.set_value('decomposition.cache', False)
    if getattr(args, 'width', None) is not None:
        width = parse_rational(args.width)
        if width <= 0:
            raise DomainError(f"refinement width must be positive, got {width}")
        config_manager.set_value('isolation.width', str(width))
    if getattr(args, 'depth_cap', None) is not None:
        config_manager.set_value('isolation.depth_cap', args.depth_cap)
    if getattr(args, 'cap', None) is not None:
        config_manager.set_value('dualspace.cap', args.cap)
    if args.json:
        config_manager.set_value('output.format', 'json')
    return config_manager.update_config({})


def _elapsed_ms(start: float) -> int:
    return int(round((time.perf_counter() - start) * 1000))


def run_decompose(args, config) -> ResultDocument:
    order, triangular = load_system(args.file)
    start = time.perf_counter()
    decomposition = reg2sim(
        triangular,
        split_rational=config['decomposition']['split_rational_roots'],
        use_cache=config['decomposition']['cache'],
    )
    return decomposition_document('decompose', order, decomposition, _elapsed_ms(start))


def run_mult(args, config) -> ResultDocument:
    order, triangular = load_system(args.file)
    point = parse_point(args.point, len(order))
    start = time.perf_counter()
    branch = reg_mult_detail(
        triangular,
        point,
        split_rational=config['decomposition']['split_rational_roots'],
        use_cache=config['decomposition']['cache'],
    )
    return ResultDocument(
        command='mult',
        vars=list(order.names),
        branches=[BranchRecord.from_branch(branch)],
        ms=_elapsed_ms(start),
        extras={'point': [str(c) for c in point], 'multiplicity': branch.product},
    )


def run_isolate(args, config) -> ResultDocument:
    order, triangular = load_system(args.file)
    split = config['decomposition']['split_rational_roots']
    width = config['isolation']['width']
    start = time.perf_counter()
    decomposition = reg2sim(triangular, split_rational=split, use_cache=config['decomposition']['cache'])
    zeros = iso_mult(
        triangular,
        threads=config['threads'],
        width=parse_rational(str(width)) if width is not None else None,
        depth_cap=config['isolation']['depth_cap'],
        split_rational=split,
        decomposition=decomposition,
    )
    return zeros_document(order, zeros, decomposition, _elapsed_ms(start))


def _rational_point(text: str, size: int):
    point = parse_point(text, size)
    if not all(c.is_real() for c in point):
        raise DomainError("the dual space oracle needs a rational point")
    return point


def run_oracle(args, config) -> ResultDocument:
    order, triangular = load_system(args.file)
    point = _rational_point(args.point, len(order))
    start = time.perf_counter()
    dimension = dual_space_dim(list(triangular.polys), [c.re for c in point], config['dualspace']['cap'])
    return ResultDocument(
        command='oracle',
        vars=list(order.names),
        ms=_elapsed_ms(start),
        extras={'point': [str(c) for c in point], 'multiplicity': dimension},
    )


def run_check(args, config) -> ResultDocument:
    order, triangular = load_system(args.file)
    start = time.perf_counter()
    extras: Dict[str, Any] = {'regular': True}
    try:
        chain = check_regular(triangular)
        extras['simple'] = is_simple(chain)
    except NotRegularError as e:
        extras = {'regular': False, 'reason': str(e)}
    return ResultDocument(command='check', vars=list(order.names), ms=_elapsed_ms(start), extras=extras)


def _table_row(entry: CorpusEntry, with_oracle: bool, config) -> Dict[str, Any]:
    order, triangular = entry.load()
    point = parse_point(','.join(entry.zero), len(order))
    start = time.perf_counter()
    multiplicity = reg_mult_detail(
        triangular,
        point,
        split_rational=config['decomposition']['split_rational_roots'],
        use_cache=config['decomposition']['cache'],
    ).product
    row = {
        'system': entry.name,
        'vars': len(order),
        'zero': ','.join(entry.zero),
        'multiplicity': multiplicity,
        'expected': entry.multiplicity,
        'oracle': None,
        'ms': 0,
    }
    if with_oracle and entry.oracle and all(c.is_real() for c in point):
        row['oracle'] = dual_space_dim(list(triangular.polys), [c.re for c in point], config['dualspace']['cap'])
    row['ms'] = _elapsed_ms(start)
    logger.info(f"{entry.name}: multiplicity {multiplicity} in {row['ms']} ms")
    return row


def run_table(args, config) -> ResultDocument:
    corpus = args.corpus or config['corpus_path']
    entries = [e for e in load_corpus(corpus) if args.extended or not e.extended]
    start = time.perf_counter()
    if config['threads'] > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=config['threads']) as pool:
            rows = list(pool.map(lambda e: _table_row(e, args.oracle, config), entries))
    else:
        rows = [_table_row(e, args.oracle, config) for e in entries]
    return ResultDocument(command='table', vars=[], ms=_elapsed_ms(start), extras={'rows': rows})


RUNNERS = {
    'decompose': run_decompose,
    'mult': run_mult,
    'isolate': run_isolate,
    'oracle': run_oracle,
    'check': run_check,
    'table': run_table,
}


def _table_mismatches(document: ResultDocument) -> List[str]:
    mismatches = []
    for row in document.extras.get('rows', []):
        if row['multiplicity'] != row['expected']:
            mismatches.append(f"{row['system']}: multiplicity {row['multiplicity']}, expected {row['expected']}")
        if row['oracle'] is not None and row['oracle'] != row['multiplicity']:
            mismatches.append(f"{row['system']}: oracle {row['oracle']}, multiplicity {row['multiplicity']}")
    return mismatches


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the application."""
    args = parse_arguments(argv)
    # exact rationals in reports can exceed the default int to str digit limit
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)

    config_manager = ConfigManager(args.config)
    config = config_manager.load_config()
    level = 'DEBUG' if args.verbose else config['logging']['level'].upper()
    configure_logging(level, config['logging']['log_file'])
    if args.verbose:
        logger.debug("Verbose logging enabled")

    try:
        config = apply_arguments(config_manager, args)
        configure_cache(config['decomposition']['cache_entries'])
        if args.save_config:
            config_manager.save_config()

        logger.info(f"Running {args.command}")
        document = RUNNERS[args.command](args, config)
        logger.info(f"{args.command} finished in {document.ms} ms")

        report = ReportGenerator(document)
        print(report.render(config['output']['format']))
        if args.csv:
            report.generate_csv(args.csv)

        mismatches = _table_mismatches(document)
        if mismatches:
            for message in mismatches:
                logger.error(message)
                print(f"error: {message}", file=sys.stderr)
            return 1

    except ParseError as e:
        logger.error(f"Parse error: {str(e)}", exc_info=args.verbose)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except TrichainError as e:
        logger.error(f"{type(e).__name__}: {str(e)}", exc_info=args.verbose)
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        logger.error(f"I/O error: {str(e)}", exc_info=args.verbose)
        print(f"error: {e}", file=sys.stderr)
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
