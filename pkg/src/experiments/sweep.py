"""
Sweep Orchestration Module

Expands the configured grids into sweep points, evaluates them on a
worker pool and assembles the outputs in grid order. A point that raises a
domain error is recorded as failed and the sweep result is flagged
partial; nothing is dropped silently.
"""

import logging
from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Pool
from typing import Any, Dict, List, Optional

import pandas as pd

from src.analysis.complexity import equivalence_report
from src.analysis.jarnik import box_dimension_estimate, lebesgue_probe
from src.analysis.spectral import (WeightSpec, distance_table, metric_finiteness_probe,
                                   psi_series, regularity_probe, varrho)
from src.core.continued_fractions import alpha_type_sequence
from src.core.exceptions import ConfigError, SturmianError
from src.experiments.slopes import build_slope
from src.reporting.exporters import ReportWriter
from src.utils.config import ExperimentConfig
from src.words.language import branching_profile_bruteforce, branching_profile_closed, certified_length
from src.words.sturmian import limit_word_prefix

logger = logging.getLogger(__name__)

PLANS = {
    'spectral': ('regularity',),
    'jarnik': ('dimension',),
    'complexity': ('equivalence',),
    'cf': ('alpha_type',),
    'words': ('branching',),
    'all': ('alpha_type', 'equivalence', 'regularity', 'dimension'),
}


@dataclass(frozen=True)
class SweepPoint:
    """One grid point: a task kind and its parameter."""
    kind: str
    value: float

    @property
    def name(self) -> str:
        prefix = {'regularity': 't', 'branching': 'N'}.get(self.kind, 'alpha')
        return f"{self.kind}_{prefix}{self.value:g}"


@dataclass
class SweepResult:
    """Outcomes of every point in grid order."""
    outcomes: List[Dict] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return any(outcome['status'] != 'ok' for outcome in self.outcomes)

    @property
    def failures(self) -> List[Dict]:
        return [o for o in self.outcomes if o['status'] != 'ok']

    def verdict_records(self) -> List[Dict]:
        records = []
        for outcome in self.outcomes:
            records.extend(outcome.get('verdicts', []))
        return records

    def to_dict(self) -> Dict:
        return {
            'partial': self.partial,
            'points': [{key: value for key, value in o.items() if key != 'table'} for o in self.outcomes],
        }


def r_grid_for(config: ExperimentConfig, t: float) -> List[float]:
    """Explicit r-grid, or varrho_alpha(t) plus the configured offsets (positive values only)."""
    if config.grids.r:
        return sorted(config.grids.r)
    centre = varrho(config.alpha, t) if config.alpha > 1 else 1.0
    grid = sorted({round(centre + offset, 12) for offset in config.grids.r_offsets if centre + offset > 0})
    if not grid:
        raise ConfigError(f"No positive r values around {centre:.4f} for t={t}")
    return grid


def _regularity(config: ExperimentConfig, t: float) -> Dict:
    cf = build_slope(config.slope)
    rule = config.verdict.to_rule()
    weights = WeightSpec(t)
    K = config.grids.depth
    r_values = r_grid_for(config, t)
    distances = distance_table(cf, weights, K)
    report = regularity_probe(cf, config.alpha, weights, r_values, K, rule, distances=distances)
    low, high = config.grids.n_range
    frames = []
    for r in r_values:
        frame = psi_series(cf, weights, r, range(low, high + 1), distances=distances).to_frame()
        frame.insert(0, 'r', r)
        frames.append(frame)
    finiteness = metric_finiteness_probe(cf, weights, K=K, rule=rule)
    verdicts = [{'quantity': 'psi', 'slope': cf.label, 'alpha': config.alpha, 'verdict': v.trend}
                for v in report.verdicts]
    verdicts.append({'quantity': 'metric-finiteness', 'slope': cf.label, 'alpha': None,
                     'verdict': finiteness.verdict})
    return {
        'summary': {**report.to_dict(), 'finiteness': finiteness.verdict,
                    'finiteness_slope': finiteness.slope},
        'table': pd.concat(frames, ignore_index=True).to_dict(orient='records'),
        'verdicts': verdicts,
    }


def _dimension(config: ExperimentConfig, alpha: float) -> Dict:
    dim = config.dimension
    estimate = box_dimension_estimate(alpha, dim.c1, dim.c2, dim.depth, dim.samples, config.seed,
                                      dim.free_levels)
    probe = lebesgue_probe(alpha, dim.lebesgue_samples, dim.lebesgue_depth, config.seed,
                           config.verdict.to_rule())
    return {'summary': {'cover': estimate.to_dict(), 'lebesgue': probe.to_dict()}}


def _equivalence(config: ExperimentConfig, alpha: float) -> Dict:
    cf = build_slope(config.slope)
    budgets = config.budgets
    report = equivalence_report(cf, alpha, budgets.word_budget, budgets.brute_n_max,
                                budgets.p_cap, config.verdict.to_rule())
    frames = []
    for name, table in (('repetitive', report.repetitivity), ('repulsive', report.repulsiveness),
                        ('finite', report.power)):
        frame = table.to_frame()
        frame.insert(0, 'functional', name)
        frames.append(frame)
    verdicts = [{'quantity': quantity, 'slope': cf.label, 'alpha': alpha, 'verdict': verdict}
                for quantity, verdict in report.verdicts.items()]
    return {
        'summary': report.to_dict(),
        'table': pd.concat(frames, ignore_index=True).to_dict(orient='records'),
        'verdicts': verdicts,
    }


def _alpha_type(config: ExperimentConfig, alpha: float) -> Dict:
    cf = build_slope(config.slope)
    report = alpha_type_sequence(cf, alpha, config.verdict.to_rule())
    return {
        'summary': {'slope': cf.label, **report.to_dict()},
        'verdicts': [{'quantity': 'alpha-type', 'slope': cf.label, 'alpha': alpha, 'verdict': report.verdict}],
    }


def _branching(config: ExperimentConfig, N: float) -> Dict:
    cf = build_slope(config.slope)
    N = int(N)
    rows = []
    for source, letter in (('x-limit', 'x'), ('y-limit', 'y')):
        closed = branching_profile_closed(cf, N, source)
        word = limit_word_prefix(cf, letter, certified_length(cf, N + 1), config.budgets.word_budget)
        brute = branching_profile_bruteforce(word, N, source)
        rows.append({'source': source, 'closed': list(closed.hits), 'brute': list(brute.hits),
                     'agree': closed.hits == brute.hits})
    return {'summary': {'slope': cf.label, 'N': N, 'profiles': rows}}


TASKS = {
    'regularity': _regularity,
    'dimension': _dimension,
    'equivalence': _equivalence,
    'alpha_type': _alpha_type,
    'branching': _branching,
}


def execute_point(config_payload: Dict[str, Any], point: SweepPoint) -> Dict:
    """
    Evaluate one sweep point in a worker.

    The configuration travels as a plain dict and is rebuilt here so the
    point depends on nothing but its inputs.
    """
    config = ExperimentConfig.from_dict(config_payload)
    outcome = {'point': point.name, 'kind': point.kind, 'value': point.value}
    try:
        outcome.update(TASKS[point.kind](config, point.value))
        outcome['status'] = 'ok'
    except SturmianError as e:
        logger.error(f"Sweep point {point.name} failed: {type(e).__name__}: {e}")
        outcome.update({'status': 'failed', 'error': type(e).__name__, 'message': str(e)})
    return outcome


class SweepProcessor:
    """
    Runs the sweep a configuration describes.

    Args:
        config: Validated experiment configuration
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def plan(self) -> List[SweepPoint]:
        """Sweep points in grid order."""
        grids = self.config.grids
        points = []
        for kind in PLANS[self.config.module]:
            if kind == 'regularity':
                points += [SweepPoint(kind, t) for t in grids.t]
            elif kind == 'branching':
                points.append(SweepPoint(kind, float(self.config.budgets.max_factor_length)))
            else:
                points += [SweepPoint(kind, alpha) for alpha in grids.alphas]
        if not points:
            raise ConfigError("The sweep grid is empty")
        return points

    def run(self, points: Optional[List[SweepPoint]] = None) -> SweepResult:
        points = points if points is not None else self.plan()
        payload = self.config.to_dict()
        worker = partial(execute_point, payload)
        workers = min(self.config.workers, len(points))
        logger.info(f"Sweeping {len(points)} points on {workers} worker(s)")
        if workers > 1:
            with Pool(workers) as pool:
                outcomes = pool.map(worker, points)
        else:
            outcomes = [worker(point) for point in points]
        result = SweepResult(outcomes)
        if result.partial:
            logger.warning(f"Sweep is partial: {len(result.failures)} of {len(points)} points failed")
        return result

    def write(self, result: SweepResult, writer: ReportWriter) -> None:
        """Write one table per point that has one, then the summary, in grid order."""
        for outcome in result.outcomes:
            if outcome['status'] == 'ok' and outcome.get('table'):
                writer.write_table(outcome['point'], pd.DataFrame(outcome['table']))
        writer.write_json('sweep_summary', result.to_dict())


def main():
    """Run a small dimension sweep with the default configuration."""
    config = ExperimentConfig(module='jarnik')
    config.dimension.samples = 200
    config.dimension.lebesgue_samples = 50
    result = SweepProcessor(config).run()
    for outcome in result.outcomes:
        cover = outcome['summary']['cover']
        print(f"{outcome['point']}: {cover['dimension']:.3f} (target {cover['target']:.3f})")


if __name__ == "__main__":
    main()
