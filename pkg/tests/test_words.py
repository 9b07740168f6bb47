"""
Tests for Sturmian word generation and language extraction.
"""

import pytest
from hypothesis import given, settings, strategies as st

from src.core.continued_fractions import ContinuedFraction, complement_cf, convergents, fibonacci_cf
from src.core.exceptions import (BudgetExceededError, ConfigError, EnclosureExhaustedError,
                                 IncompleteLanguageError, InsufficientDepthError)
from src.words.language import (branching_profile_bruteforce, branching_profile_closed,
                                certified_length, certified_word, factor_set, factors,
                                is_certified, right_special_prefixes, z_function)
from src.words.sturmian import (BinaryWord, involution_eta, limit_word_prefix,
                                mechanical_prefix, substitution_words)

binary_strings = st.text(alphabet='01', max_size=64)


def test_mechanical_prefix_fibonacci(fibonacci):
    assert mechanical_prefix(fibonacci, 10).symbols == '0100101001'


def test_mechanical_prefix_needs_depth():
    with pytest.raises(EnclosureExhaustedError):
        mechanical_prefix(ContinuedFraction((2, 1, 1)), 100)


def test_mechanical_prefix_budget(fibonacci):
    with pytest.raises(BudgetExceededError):
        mechanical_prefix(fibonacci, 50, budget=10)


def test_substitution_words_fibonacci(fibonacci):
    first = substitution_words(fibonacci, 1)
    second = substitution_words(fibonacci, 2)
    assert (first.R, first.L) == ('010', '10')
    assert (second.R, second.L) == ('01010010', '10010')


def test_substitution_lengths_are_denominators(synth2):
    table = convergents(synth2)
    for k in range(1, 5):
        pair = substitution_words(synth2, k, materialize=False)
        assert not pair.materialized
        assert (pair.length_R, pair.length_L) == (table.q[2 * k], table.q[2 * k - 1])


def test_substitution_recursions(synth15):
    previous = substitution_words(synth15, 0)
    for k in range(1, 4):
        pair = substitution_words(synth15, k)
        assert pair.L == previous.L + previous.R * synth15.word_entry(2 * k - 1)
        assert pair.R == previous.R + pair.L * synth15.word_entry(2 * k)
        previous = pair


def test_substitution_budget(synth2):
    lazy = substitution_words(synth2, 3, budget=1000)
    assert lazy.R is None
    with pytest.raises(BudgetExceededError):
        substitution_words(synth2, 3, materialize=True, budget=1000)
    with pytest.raises(InsufficientDepthError):
        substitution_words(synth2, 6)


def test_limit_words_extend_substitution_words(fibonacci):
    pair = substitution_words(fibonacci, 4)
    assert limit_word_prefix(fibonacci, 'x', len(pair.R)).symbols == pair.R
    assert limit_word_prefix(fibonacci, 'y', len(pair.L)).symbols == pair.L
    assert limit_word_prefix(fibonacci, 'x', 5).symbols == pair.R[:5]


def test_limit_word_rejects_unknown_source(fibonacci):
    with pytest.raises(ValueError):
        limit_word_prefix(fibonacci, 'z', 5)


@given(binary_strings)
@settings(max_examples=100)
def test_eta_is_an_involution(symbols):
    word = BinaryWord(symbols)
    flipped = involution_eta(word)
    assert involution_eta(flipped) == word
    assert all(a != b for a, b in zip(word.symbols, flipped.symbols))


def test_eta_moves_slope_to_complement(fibonacci):
    flipped = involution_eta(BinaryWord('0100', fibonacci))
    assert flipped.symbols == '1011'
    assert flipped.slope == complement_cf(fibonacci)


def test_binary_word_alphabet():
    with pytest.raises(ConfigError):
        BinaryWord('012')
    assert BinaryWord('0110').shift(2).symbols == '10'


def test_factor_complexity(fibonacci, synth15, random_slopes):
    for cf in [fibonacci, synth15] + random_slopes:
        word = certified_word(cf, 60, 10 ** 6)
        for n in range(61):
            piece = factors(word, n)
            assert len(piece) == n + 1
            assert piece.complete
            assert piece.right_special + '0' in factor_set(word.symbols, n + 1)
            assert piece.right_special + '1' in factor_set(word.symbols, n + 1)


def test_fibonacci_factors_of_length_three(fibonacci):
    word = certified_word(fibonacci, 3, 10 ** 6)
    piece = factors(word, 3)
    assert piece.factors == frozenset({'001', '010', '100', '101'})
    assert piece.right_special == '010'


def test_short_word_is_not_certified(fibonacci):
    word = limit_word_prefix(fibonacci, 'x', 8)
    with pytest.raises(IncompleteLanguageError):
        factors(word, 6)
    loose = factors(word, 6, unsafe=True)
    assert not loose.complete
    assert not is_certified(BinaryWord('0101'), 1)


def test_mechanical_and_limit_words_share_a_language(fibonacci):
    mechanical = mechanical_prefix(fibonacci, certified_length(fibonacci, 31))
    limit = certified_word(fibonacci, 30, 10 ** 6)
    for n in range(31):
        assert factors(mechanical, n).factors == factors(limit, n).factors


def test_complement_language_is_the_flipped_language(fibonacci):
    other = complement_cf(fibonacci)
    word = mechanical_prefix(fibonacci, certified_length(fibonacci, 22))
    mirror = mechanical_prefix(other, certified_length(other, 22))
    for n in range(21):
        flipped = frozenset(w.translate(str.maketrans('01', '10')) for w in factors(mirror, n).factors)
        assert factors(word, n).factors == flipped


def test_z_function():
    assert z_function('aabxaab') == [7, 1, 0, 0, 3, 1, 0]
    assert z_function('') == []


def test_right_special_prefixes_of_fibonacci(fibonacci):
    word = limit_word_prefix(fibonacci, 'x', certified_length(fibonacci, 21))
    assert right_special_prefixes(word.symbols, 20) == [1, 3, 8]


@given(st.integers(2, 4), st.lists(st.integers(1, 4), min_size=12, max_size=12), st.sampled_from(['x', 'y']))
@settings(max_examples=30, deadline=None)
def test_shifted_right_special_prefixes_stay_right_special(first, rest, source):
    cf = ContinuedFraction((first, *rest))
    N = 30
    word = limit_word_prefix(cf, source, certified_length(cf, N + 1))
    symbols = word.symbols
    for n in right_special_prefixes(symbols, N):
        for k in range(1, n):
            suffix = symbols[k:n]
            extensions = factor_set(symbols, n - k + 1)
            assert suffix + '0' in extensions and suffix + '1' in extensions


def test_closed_branching_profiles(fibonacci):
    assert branching_profile_closed(fibonacci, 20, 'x-limit').hits == (1, 3, 8)
    assert branching_profile_closed(fibonacci, 20, 'y-limit').hits == (2, 5, 13)
    with pytest.raises(ValueError):
        branching_profile_closed(fibonacci, 20, 'z-limit')


@pytest.mark.parametrize('source, letter', [('x-limit', 'x'), ('y-limit', 'y')])
def test_branching_brute_force_matches_closed_form(fibonacci, synth15, random_slopes, source, letter):
    N = 400
    for cf in [fibonacci, synth15] + random_slopes:
        word = limit_word_prefix(cf, letter, certified_length(cf, N + 1), 10 ** 6)
        assert branching_profile_bruteforce(word, N, source).hits == branching_profile_closed(cf, N, source).hits


def test_branching_brute_force_needs_certified_word(fibonacci):
    with pytest.raises(IncompleteLanguageError):
        branching_profile_bruteforce(limit_word_prefix(fibonacci, 'x', 30), 100)


def test_certified_word_budget(fibonacci):
    with pytest.raises(BudgetExceededError):
        certified_word(fibonacci, 200, 10)


def test_certified_length_grows_with_n():
    cf = fibonacci_cf(30)
    lengths = [certified_length(cf, n) for n in range(1, 50)]
    assert lengths == sorted(lengths)
