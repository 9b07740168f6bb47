"""
Tests for the command-line entry point.
"""

import json

import pytest

import main as cli
from src.core.exceptions import EXIT_BUDGET, EXIT_OK, EXIT_USAGE
from src.utils.database import RunRegistry


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_classify_writes_report(workspace):
    assert cli.main(['classify', '--slope', 'synthesized', '--depth', '8']) == EXIT_OK
    document = json.loads((workspace / 'output' / 'classify' / 'classify.json').read_text(encoding='utf-8'))
    assert document['result']['verdict'] == 'bounded-positive'
    assert document['config']['slope']['kind'] == 'synthesized'
    manifest = json.loads((workspace / 'output' / 'classify' / 'manifest.json').read_text(encoding='utf-8'))
    assert manifest['status']['exit_code'] == EXIT_OK


def test_classify_csv_format(workspace):
    assert cli.main(['classify', '--format', 'csv']) == EXIT_OK
    assert (workspace / 'output' / 'classify' / 'classify.csv').exists()


def test_invalid_slope_is_a_usage_error():
    assert cli.main(['classify', '--slope', '2,0,1']) == EXIT_USAGE


def test_empty_r_grid_is_a_usage_error():
    assert cli.main(['metric', '--r-grid', ',']) == EXIT_USAGE


def test_words_budget_exit_code(workspace):
    assert cli.main(['words', '--budget', '10']) == EXIT_BUDGET
    latest = RunRegistry(str(workspace / 'data' / 'runs.db')).get_summary_stats()['latest_run']
    assert (latest['command'], latest['status'], latest['exit_code']) == ('words', 'failed', EXIT_BUDGET)


def test_words_dump(workspace):
    assert cli.main(['words']) == EXIT_OK
    document = json.loads((workspace / 'output' / 'words' / 'words.json').read_text(encoding='utf-8'))
    assert document['result']['mechanical'].startswith('0100101001')
    assert document['result']['branching']['x-limit'][:3] == [1, 3, 8]


def test_verdicts_reach_the_registry(workspace):
    cli.main(['classify', '--slope', 'fibonacci'])
    verdicts = RunRegistry(str(workspace / 'data' / 'runs.db')).get_verdicts()
    assert list(verdicts['verdict']) == ['vanishing']


def test_status(capsys):
    cli.main(['classify'])
    assert cli.main(['status']) == EXIT_OK
    output = capsys.readouterr().out
    assert 'Total Runs: 1' in output
    assert 'alpha-type: vanishing x1' in output


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        cli.main(['launch'])
