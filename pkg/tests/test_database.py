"""
Tests for the run registry.
"""

import pytest

from src.utils.database import RunRegistry


@pytest.fixture
def registry(tmp_path):
    return RunRegistry(str(tmp_path / 'nested' / 'runs.db'))


def test_empty_registry(registry):
    stats = registry.get_summary_stats()
    assert stats['total_runs'] == 0
    assert stats['latest_run'] is None
    assert registry.get_runs().empty


def test_run_lifecycle(registry):
    run_id = registry.start_run('classify', 'abc123')
    stored = registry.record_verdicts(run_id, [
        {'quantity': 'alpha-type', 'slope': 'fib', 'alpha': 2.0, 'verdict': 'vanishing'},
        {'quantity': 'alpha-type', 'slope': 'synth', 'alpha': 2.0, 'verdict': 'bounded-positive'},
    ])
    registry.finish_run(run_id, 0)
    assert stored == 2

    runs = registry.get_runs()
    assert runs.iloc[0]['status'] == 'ok'
    assert runs.iloc[0]['config_digest'] == 'abc123'
    assert len(registry.get_verdicts(run_id)) == 2

    stats = registry.get_summary_stats()
    assert stats['total_runs'] == 1
    assert stats['runs_by_status'] == {'ok': 1}
    assert stats['latest_run']['command'] == 'classify'
    assert {row['verdict'] for row in stats['verdict_tallies']} == {'vanishing', 'bounded-positive'}


def test_failed_run_status(registry):
    run_id = registry.start_run('words', 'def456')
    registry.finish_run(run_id, 3)
    latest = registry.get_summary_stats()['latest_run']
    assert (latest['status'], latest['exit_code']) == ('failed', 3)


def test_verdict_records_need_fields(registry):
    run_id = registry.start_run('sweep', 'x')
    assert registry.record_verdicts(run_id, []) == 0
    with pytest.raises(ValueError):
        registry.record_verdicts(run_id, [{'quantity': 'psi', 'slope': 'fib'}])


def test_runs_are_listed_newest_first(registry):
    first = registry.start_run('verify', 'a')
    second = registry.start_run('metric', 'b')
    runs = registry.get_runs(limit=1)
    assert len(runs) == 1
    assert runs.iloc[0]['id'] == second != first
