"""
Tests for the repetitivity, repulsiveness and power functionals.
"""

import math

import pytest

from src.analysis.complexity import (INFINITE, alpha_finite_estimate, alpha_repetitive_estimate,
                                     alpha_repulsive_estimate, border_lengths,
                                     cross_exponent_verdicts, equivalence_report, failure_function,
                                     power_Q, power_word_bound, repetitive_bruteforce,
                                     repetitive_formula, repulsive_A)
from src.core.exceptions import IncompleteLanguageError
from src.utils.calculations import BOUNDED, DIVERGENT, VANISHING
from src.words.language import certified_length, certified_word, factors
from src.words.sturmian import BinaryWord, limit_word_prefix


def test_repetitive_formula_fibonacci(fibonacci):
    assert [repetitive_formula(fibonacci, n) for n in range(1, 6)] == [3, 6, 10, 11, 17]


@pytest.mark.parametrize('slope_name, n_max', [('fibonacci', 40), ('synth15', 25)])
def test_repetitive_brute_force_matches_formula(request, slope_name, n_max):
    cf = request.getfixturevalue(slope_name)
    length = certified_length(cf, repetitive_formula(cf, n_max) + 1)
    word = limit_word_prefix(cf, 'x', length, 10 ** 6)
    for n in range(1, n_max + 1):
        assert repetitive_bruteforce(word, n) == repetitive_formula(cf, n)


def test_repetitive_brute_force_needs_a_slope():
    with pytest.raises(IncompleteLanguageError):
        repetitive_bruteforce(BinaryWord('0100101001001'), 2)


def test_borders():
    assert failure_function('abab') == [0, 0, 1, 2]
    assert border_lengths('abab') == [2]
    assert border_lengths('aaaa') == [3, 2, 1]
    assert border_lengths('') == []


def test_repulsive_small_lengths(fibonacci):
    word = certified_word(fibonacci, 10, 10 ** 6)
    assert repulsive_A(factors(word, 1), 2.0) is INFINITE
    assert repulsive_A(factors(word, 2), 2.0) == 1.0
    assert repulsive_A(factors(word, 3), 2.0) == 2.0
    assert repulsive_A(factors(word, 3), 1.0, exponent=1.0) == 2.0


def test_repulsive_needs_complete_slice(fibonacci):
    short = limit_word_prefix(fibonacci, 'x', 8)
    with pytest.raises(IncompleteLanguageError):
        repulsive_A(factors(short, 6, unsafe=True), 2.0)


def test_power_index_of_single_letters(fibonacci):
    word = certified_word(fibonacci, 20, 10 ** 6)
    row = power_Q(word, 1)
    assert row['value'] == 2
    assert not row['capped']


def test_power_index_cap(synth2):
    word = certified_word(synth2, 30, 10 ** 6)
    row = power_Q(word, 2, p_cap=2)
    assert row['capped']
    assert row['flag'] == 'capped'


def test_power_word_bound(fibonacci, synth2):
    assert power_word_bound(fibonacci, 3, 2.0) is None
    bound = power_word_bound(synth2, 3, 2.0)
    assert bound['n'] == 25
    assert bound['log_value'] == pytest.approx(0.5 * math.log(5) - math.log(4) / 2)


def test_alpha_repetitive_table_skips_repeated_denominators(fibonacci):
    table = alpha_repetitive_estimate(fibonacci, 1.0, 20)
    ns = [row['n'] for row in table.rows]
    assert ns == sorted(set(ns))
    frame = table.to_frame()
    assert list(frame.columns) == ['n', 'value', 'ratio', 'flags']


def test_repulsive_frame_keeps_witness_bounds_apart(synth2):
    table = alpha_repulsive_estimate(synth2, 2.0, 30, 10 ** 6)
    frame = table.to_frame()
    assert list(frame.columns) == ['n', 'A_brute', 'A_witness_upper', 'flags']
    brute = frame[frame['flags'] == 'brute']
    witness = frame[frame['flags'] == 'witness']
    assert len(brute) == 30 and len(witness) > 0
    assert brute['A_witness_upper'].isna().all() and brute['A_brute'].notna().all()
    assert witness['A_brute'].isna().all() and witness['A_witness_upper'].notna().all()
    assert (witness['n'].astype(int) > 30).all()
    levels = table.level_frame()
    assert list(levels.columns) == ['level', 'q', 'log_value', 'source']
    assert set(levels['source']) == {'brute', 'witness'}


def test_alpha_finite_rows_never_fall_below_witness(synth2):
    table = alpha_finite_estimate(synth2, 2.0, 6, 10 ** 6)
    for row in table.rows:
        assert row['value'] >= 1
        assert row['flag'] in ('brute', 'witness', 'capped')


def test_cross_exponent_brackets_alpha(synth2):
    verdicts = cross_exponent_verdicts(synth2, 2.0)
    assert verdicts == {1.5: DIVERGENT, 2.0: BOUNDED, 2.5: VANISHING}


@pytest.mark.slow
def test_equivalence_on_synthesized_slope(synth2):
    report = equivalence_report(synth2, 2.0, 10 ** 6)
    assert set(report.verdicts) == {'alpha-type', 'alpha-repetitive', 'alpha-repulsive', 'alpha-finite'}
    for quantity in ('alpha-type', 'alpha-repetitive', 'alpha-repulsive', 'alpha-finite'):
        assert report.verdicts[quantity] == BOUNDED
    assert report.agreement
    assert report.to_dict()['slope'] == synth2.label


def test_classic_repulsiveness(fibonacci):
    table = alpha_repulsive_estimate(fibonacci, 1.0, 120, 10 ** 6)
    assert table.classic_ell <= 1.0
    assert [row['flag'] for row in table.rows] == ['brute'] * 120
    assert table.running_min
