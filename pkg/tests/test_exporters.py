"""
Tests for JSON conversion and the report writer.
"""

import json
from fractions import Fraction

import numpy as np
import pandas as pd
from mpmath import mp

from src.core.continued_fractions import synthesize_alpha_cf
from src.reporting.exporters import ReportWriter, to_jsonable


def test_to_jsonable_scalars():
    assert to_jsonable(5) == 5
    assert to_jsonable(10 ** 30) == str(10 ** 30)
    assert to_jsonable(Fraction(1, 3)) == '1/3'
    assert to_jsonable(float('inf')) == 'inf'
    assert to_jsonable(np.bool_(True)) is True
    assert to_jsonable(np.int64(7)) == 7
    assert to_jsonable(mp.mpf('0.5')) == '0.5'
    assert to_jsonable(None) is None


def test_to_jsonable_containers():
    payload = {1: frozenset({'b', 'a'}), 'rows': pd.DataFrame({'n': [1, 2]})}
    assert to_jsonable(payload) == {'1': ['a', 'b'], 'rows': [{'n': 1}, {'n': 2}]}


def test_json_documents_embed_the_config(tmp_path):
    writer = ReportWriter(str(tmp_path / 'out'), {'seed': 3})
    path = writer.write_json('summary', {'cf': synthesize_alpha_cf(2.0, 1.0, 8).to_json()})
    document = json.loads(path.read_text(encoding='utf-8'))
    assert document['config'] == {'seed': 3}
    assert document['result']['cf']['entries'][:3] == ['2', '2', '5']


def test_format_selects_table_or_summary(tmp_path):
    frame = pd.DataFrame({'n': [1], 'value': ['3']})
    csv_writer = ReportWriter(str(tmp_path / 'csv'), {}, 'csv')
    assert csv_writer.write('table', {'n': 1}, frame).suffix == '.csv'
    json_writer = ReportWriter(str(tmp_path / 'json'), {}, 'json')
    assert json_writer.write('table', {'n': 1}, frame).suffix == '.json'
    assert csv_writer.write('summary', {'n': 1}).suffix == '.json'


def test_manifest_lists_files(tmp_path):
    writer = ReportWriter(str(tmp_path), {'a': 1})
    writer.write_table('b_table', pd.DataFrame({'x': [1]}))
    writer.write_json('a_summary', {})
    manifest = json.loads(writer.close({'exit_code': 0}).read_text(encoding='utf-8'))
    assert manifest['files'] == ['a_summary.json', 'b_table.csv']
    assert manifest['status'] == {'exit_code': 0}


def test_outputs_are_byte_identical(tmp_path):
    contents = []
    for name in ('first', 'second'):
        writer = ReportWriter(str(tmp_path / name), {'seed': 0})
        writer.write_table('rows', pd.DataFrame({'n': [1, 2], 'v': [0.5, 0.25]}))
        writer.write_json('summary', {'x': Fraction(2, 3)})
        writer.close({'exit_code': 0})
        contents.append([(tmp_path / name / f).read_bytes()
                         for f in ('rows.csv', 'summary.json', 'manifest.json')])
    assert contents[0] == contents[1]
