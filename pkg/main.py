"""
Main entry point for the Sturmian regularity toolkit.

This script provides a command-line interface for the invariant suite,
the individual analyses and the parameter sweeps. Every run is recorded in
the run registry and writes its artifacts, with the resolved
configuration, under the output directory.
"""

import argparse
import sys
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

# Add src to path
sys.path.append(str(Path(__file__).parent / 'src'))

from src.analysis.complexity import cross_exponent_verdicts, equivalence_report
from src.analysis.jarnik import exact_hit_profile, inclusion_check, jarnik_hits
from src.analysis.spectral import WeightSpec, d_spectral_closed
from src.core.continued_fractions import alpha_type_sequence, convergents
from src.core.exceptions import (EXIT_OK, ConfigError, SturmianError, exit_code_for)
from src.experiments.slopes import build_slope, describe_slope
from src.experiments.sweep import SweepPoint, SweepProcessor
from src.experiments.verify import run_suite
from src.reporting.exporters import ReportWriter
from src.utils.config import FORMATS, MODULES, ExperimentConfig, apply_overrides, load_config
from src.utils.database import RunRegistry
from src.words.language import branching_profile_closed
from src.words.sturmian import limit_word_prefix, mechanical_prefix, substitution_words

logger = logging.getLogger(__name__)

COMMANDS = ('verify', 'classify', 'words', 'complexity', 'metric', 'dimension', 'sweep', 'status')

Outcome = Tuple[int, List[Dict]]


def setup_logging(level=logging.INFO, log_file: str = 'sturmian.log'):
    """Setup logging configuration."""
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stderr)
        ],
        force=True
    )


def run_verify(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Run the invariant suite."""
    print("Running invariant suite...")
    report = run_suite(config)
    for result in report.results:
        status = 'PASS' if result.passed else 'FAIL'
        print(f"  {status} [{result.kind}] {result.name}: {result.detail}")
    writer.write('verify', report.to_dict(), report.to_frame())
    failure = report.first_failure
    if failure is not None:
        print(f"First failing check: {failure.name}")
    return report.exit_code, []


def run_classify(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Band the alpha-type sequence of the configured slope."""
    cf = build_slope(config.slope)
    report = alpha_type_sequence(cf, config.alpha, config.verdict.to_rule())
    frame = pd.DataFrame({'n': range(1, cf.depth + 1), 's': report.s, 'log_s': report.log_s})
    writer.write('classify', {'slope': describe_slope(cf), **report.to_dict()}, frame)
    print(f"{cf.label} at alpha={config.alpha:g}: {report.verdict}")
    return EXIT_OK, [{'quantity': 'alpha-type', 'slope': cf.label, 'alpha': config.alpha,
                      'verdict': report.verdict}]


def run_words(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Dump word prefixes, substitution words and branching profiles."""
    cf = build_slope(config.slope)
    budget = config.budgets.word_budget
    length = config.budgets.max_factor_length
    table = convergents(cf)
    pairs = []
    k = 0
    while 2 * k <= cf.depth and table.q[2 * k] <= budget:
        pair = substitution_words(cf, k, materialize=table.q[2 * k] <= length, budget=budget, table=table)
        pairs.append(pair.to_dict())
        k += 1
    payload = {
        'slope': describe_slope(cf),
        'mechanical': mechanical_prefix(cf, length, budget).symbols,
        'x_limit': limit_word_prefix(cf, 'x', length, budget).symbols,
        'y_limit': limit_word_prefix(cf, 'y', length, budget).symbols,
        'substitution': pairs,
        'branching': {source: list(branching_profile_closed(cf, length, source).hits)
                      for source in ('x-limit', 'y-limit')},
    }
    writer.write('words', payload, pd.DataFrame(pairs))
    print(f"x-limit prefix: {payload['x_limit'][:80]}")
    print(f"Substitution levels within budget: {len(pairs)}")
    return EXIT_OK, []


def run_complexity(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Complexity tables and the joint alpha verdicts."""
    cf = build_slope(config.slope)
    rule = config.verdict.to_rule()
    budgets = config.budgets
    report = equivalence_report(cf, config.alpha, budgets.word_budget, budgets.brute_n_max,
                                budgets.p_cap, rule)
    writer.write_table('repetitive', report.repetitivity.to_frame())
    writer.write_table('repulsive', report.repulsiveness.to_frame())
    writer.write_table('repulsive_levels', report.repulsiveness.level_frame())
    writer.write_table('power', report.power.to_frame())
    cross = cross_exponent_verdicts(cf, config.alpha, rule=rule)
    writer.write_json('complexity', {**report.to_dict(), 'cross_exponent': cross})
    for quantity, verdict in report.verdicts.items():
        print(f"  {quantity}: {verdict}")
    print(f"Agreement: {report.agreement}")
    return EXIT_OK, [{'quantity': q, 'slope': cf.label, 'alpha': config.alpha, 'verdict': v}
                     for q, v in report.verdicts.items()]


def run_metric(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Closed-form distances along the distinguished pairs and psi sweeps over t."""
    cf = build_slope(config.slope)
    low, high = config.grids.n_range
    rows = []
    for t in config.grids.t:
        weights = WeightSpec(t)
        for n in range(max(low, 1), high + 1):
            distance = d_spectral_closed(cf, n, 'xy', weights, K=config.grids.depth)
            rows.append({'t': t, 'n': n, **distance.to_dict()})
    writer.write_table('distances', pd.DataFrame(rows))
    processor = SweepProcessor(config)
    result = processor.run([SweepPoint('regularity', t) for t in config.grids.t])
    processor.write(result, writer)
    for outcome in result.outcomes:
        if outcome['status'] == 'ok':
            summary = outcome['summary']
            print(f"t={outcome['value']:g}: transition {summary['empirical_transition']}, "
                  f"expected {summary['expected_transition']:.4f}, metric {summary['finiteness']}")
    return _sweep_exit(result), result.verdict_records()


def run_dimension(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Jarnik hits of the configured slope and cover estimates over the alpha grid."""
    cf = build_slope(config.slope)
    beta = config.dimension.beta
    query = jarnik_hits(cf, beta, 1.0)
    payload = {
        'slope': describe_slope(cf),
        'hits': query.to_dict(),
        'exact_profile': exact_hit_profile(cf, beta),
        'inclusion': inclusion_check(cf, config.alpha, config.verdict.to_rule()),
    }
    processor = SweepProcessor(config)
    result = processor.run([SweepPoint('dimension', alpha) for alpha in config.grids.alphas])
    payload['estimates'] = result.to_dict()
    writer.write_json('dimension', payload)
    print(f"Hits at beta={beta:g}: {query.hits}")
    for outcome in result.outcomes:
        if outcome['status'] == 'ok':
            cover = outcome['summary']['cover']
            print(f"alpha={outcome['value']:g}: {cover['dimension']:.3f} (target {cover['target']:.3f})")
    return _sweep_exit(result), []


def run_sweep(config: ExperimentConfig, writer: ReportWriter) -> Outcome:
    """Run the sweep selected by the module setting."""
    processor = SweepProcessor(config)
    result = processor.run()
    processor.write(result, writer)
    print(f"Swept {len(result.outcomes)} points, partial={result.partial}")
    return _sweep_exit(result), result.verdict_records()


def _sweep_exit(result) -> int:
    failures = result.failures
    return exit_code_for(failures[0]['error']) if failures else EXIT_OK


def show_status(config: ExperimentConfig):
    """Show the run registry summary."""
    print("Sturmian Toolkit Status")
    print("=" * 40)
    try:
        registry = RunRegistry(config.output.registry)
        stats = registry.get_summary_stats()
        print(f"Registry: {config.output.registry}")
        print(f"Total Runs: {stats.get('total_runs', 0)}")
        print(f"Runs by Status: {stats.get('runs_by_status', {})}")
        latest = stats.get('latest_run')
        if latest:
            print(f"Latest Run: #{latest['id']} {latest['command']} ({latest['status']}, exit {latest['exit_code']})")
        for row in stats.get('verdict_tallies', []):
            print(f"  {row['quantity']}: {row['verdict']} x{row['count']}")
    except Exception as e:
        print(f"Registry Status: Error - {e}")

    output_dir = Path(config.output.directory)
    if output_dir.exists():
        print(f"\nOutput files: {len(list(output_dir.glob('*/*')))}")
    else:
        print("\nOutput directory not found")


RUNNERS: Dict[str, Callable[[ExperimentConfig, ReportWriter], Outcome]] = {
    'verify': run_verify,
    'classify': run_classify,
    'words': run_words,
    'complexity': run_complexity,
    'metric': run_metric,
    'dimension': run_dimension,
    'sweep': run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Sturmian words, spectral metrics and Hölder regularity toolkit"
    )
    parser.add_argument('command', choices=COMMANDS, help='Command to execute')
    parser.add_argument('--config', help='YAML configuration file')
    parser.add_argument('--slope', help="fibonacci, synthesized, random or comma-separated entries")
    parser.add_argument('--alpha', type=float, help='Exponent alpha')
    parser.add_argument('--c', type=float, help='Growth constant of synthesized slopes')
    parser.add_argument('--t', help='Comma-separated weight exponents')
    parser.add_argument('--r-grid', dest='r_grid', help='Comma-separated Hölder exponents')
    parser.add_argument('--depth', type=int, help='Number of continued fraction entries')
    parser.add_argument('--budget', type=int, help='Word budget in symbols')
    parser.add_argument('--seed', type=int, help='Master seed')
    parser.add_argument('--out', help='Output directory')
    parser.add_argument('--format', choices=FORMATS, help='Preferred output format')
    parser.add_argument('--module', choices=MODULES, help='Module the sweep exercises')
    parser.add_argument('--workers', type=int, help='Worker processes for sweeps')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function to handle command line arguments."""
    args = build_parser().parse_args(argv)
    log_level = logging.DEBUG if args.verbose else logging.INFO

    try:
        config = apply_overrides(load_config(args.config), vars(args))
    except ConfigError as e:
        setup_logging(log_level)
        logger.error(f"Invalid configuration: {e}")
        print(f"Configuration error: {e}", file=sys.stderr)
        return exit_code_for(ConfigError.__name__)

    setup_logging(log_level, config.output.log_file)

    if args.command == 'status':
        show_status(config)
        return EXIT_OK

    registry = RunRegistry(config.output.registry)
    run_id = registry.start_run(args.command, config.digest())
    writer = ReportWriter(str(Path(config.output.directory) / args.command),
                          config.to_dict(), config.output.format)
    code, verdicts, error = EXIT_OK, [], None
    try:
        code, verdicts = RUNNERS[args.command](config, writer)
    except SturmianError as e:
        logger.error(f"Command '{args.command}' failed: {type(e).__name__}: {e}")
        code, error = exit_code_for(type(e).__name__), type(e).__name__
    finally:
        registry.record_verdicts(run_id, verdicts)
        registry.finish_run(run_id, code)
        writer.close({'command': args.command, 'exit_code': code, 'error': error})

    if code == EXIT_OK:
        print(f"\nCommand '{args.command}' completed successfully!")
    else:
        print(f"\nCommand '{args.command}' failed with exit code {code}!")
    return code


if __name__ == "__main__":
    sys.exit(main())
