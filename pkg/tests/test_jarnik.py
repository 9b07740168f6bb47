"""
Tests for Jarník hit queries, the cover estimator and the measure probe.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.analysis.jarnik import (box_dimension_estimate, exact_hit_profile, inclusion_check,
                                 jarnik_hits, lebesgue_probe, sandwich_violations,
                                 uniform_rational_cf)
from src.core.exceptions import ConfigError, InsufficientDepthError
from src.utils.config import DimensionConfig


def test_fibonacci_hits_at_order_three(fibonacci):
    query = jarnik_hits(fibonacci, 3, 1)
    assert query.hits == [0, 1]
    assert 1 in query.exact
    assert not query.undecided
    assert query.last_hit == 1


def test_synthesized_slope_hits_every_index(synth2):
    query = jarnik_hits(synth2, 3, 1)
    assert query.hits == list(range(query.depth + 1))
    assert query.to_dict()['hit_rate'] == 1.0


def test_sandwich_holds_on_reference_slopes(fibonacci, synth2, synth15, random_slopes):
    for cf in [fibonacci, synth2, synth15] + random_slopes:
        assert sandwich_violations(cf) == []


def test_hit_query_arguments(fibonacci):
    with pytest.raises(ConfigError):
        jarnik_hits(fibonacci, 3, 0)
    with pytest.raises(InsufficientDepthError):
        jarnik_hits(fibonacci, 3, 1, depth=fibonacci.depth)


def test_non_integral_order_uses_logs(fibonacci):
    query = jarnik_hits(fibonacci, 2.5, 1)
    assert query.hits[0] == 0
    assert set(query.hits) | set(query.misses) | set(query.undecided) == set(range(query.depth + 1))


def test_exact_hit_profile(synth2):
    rows = exact_hit_profile(synth2, 3)
    assert len(rows) == 9
    assert rows[-1]['c'] == '1'
    assert rows[-1]['hits'] == synth2.depth
    assert [row['hits'] for row in rows] == sorted(row['hits'] for row in rows)


def test_inclusion_on_synthesized_slope(synth2):
    outcome = inclusion_check(synth2, 2.0)
    assert outcome['holds']
    assert outcome['threshold'] == pytest.approx(2.0)


def test_uniform_rational_slopes():
    rng = np.random.default_rng(5)
    for _ in range(20):
        cf = uniform_rational_cf(rng, 10)
        assert 1 <= cf.depth <= 10


def test_lebesgue_probe_without_samples():
    probe = lebesgue_probe(2.0, 0, 10)
    assert probe.fraction is None
    assert probe.to_dict()['samples'] == 0
    with pytest.raises(ConfigError):
        lebesgue_probe(2.0, -1, 10)


def test_lebesgue_probe_is_seeded():
    first = lebesgue_probe(2.0, 30, 15, seed=3)
    second = lebesgue_probe(2.0, 30, 15, seed=3)
    assert first.verdict_counts == second.verdict_counts
    assert sum(first.verdict_counts.values()) == 30


def test_single_choice_tree_has_dimension_zero():
    estimate = box_dimension_estimate(2.0, 1.0, 1.0, 8, 100, seed=1)
    assert estimate.dimension == 0.0
    assert estimate.free_levels == 0
    assert estimate.constrained_levels == 8
    assert estimate.target == pytest.approx(1 / 3)


@given(st.floats(1.2, 4.0), st.integers(2, 6), st.integers(0, 2 ** 16))
@settings(max_examples=20, deadline=None)
def test_single_choice_tree_is_zero_for_any_alpha(alpha, depth, seed):
    assert box_dimension_estimate(alpha, 1.0, 1.0, depth, 5, seed=seed).dimension == 0.0


def test_all_levels_tree_counts_branches():
    estimate = box_dimension_estimate(2.0, 0.5, 2.0, 8, 200, seed=3)
    masses = [record['mean_log_mass'] for record in estimate.records]
    assert masses[0] == 0.0
    assert all(b > a for a, b in zip(masses, masses[1:]))
    assert 0.2 < estimate.dimension < 0.5


def test_cover_estimate_is_reproducible():
    first = box_dimension_estimate(2.0, 0.5, 2.0, 6, 100, seed=7)
    second = box_dimension_estimate(2.0, 0.5, 2.0, 6, 100, seed=7)
    assert first.dimension == second.dimension
    assert first.band[0] <= first.dimension <= first.band[1]
    assert first.records[0]['branches'] == 100


def test_cover_estimate_decreases_with_alpha():
    dim = DimensionConfig()
    estimates = [box_dimension_estimate(alpha, dim.c1, dim.c2, dim.depth, 400, seed=0).dimension
                 for alpha in (2.0, 3.0)]
    assert estimates[1] <= estimates[0]


def test_interleaved_tree_exceeds_all_levels_tree():
    dim = DimensionConfig()
    cantor = box_dimension_estimate(2.0, dim.c1, dim.c2, dim.depth, 200, seed=0)
    interleaved = box_dimension_estimate(2.0, dim.c1, dim.c2, dim.depth, 200, seed=0,
                                         free_levels=dim.free_levels)
    assert interleaved.target == pytest.approx(2 / 3)
    assert cantor.dimension < interleaved.dimension


def test_cover_arguments():
    with pytest.raises(ConfigError):
        box_dimension_estimate(1.0, 0.5, 2.0, 8, 10)
    with pytest.raises(ConfigError):
        box_dimension_estimate(2.0, 2.0, 0.5, 8, 10)
    with pytest.raises(ConfigError):
        box_dimension_estimate(2.0, 0.5, 2.0, 8, 10, free_levels=8)


@pytest.mark.slow
def test_cover_estimates_near_target():
    dim = DimensionConfig()
    for alpha, (low, high) in {2.0: (0.55, 0.80), 3.0: (0.40, 0.62)}.items():
        estimate = box_dimension_estimate(alpha, dim.c1, dim.c2, dim.depth, dim.samples, 0,
                                          dim.free_levels)
        assert low <= estimate.dimension <= high
