"""
Tests for the ultrametric, the spectral metric and the Hölder probes.
"""

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from src.analysis.spectral import (WeightSpec, closed_distance_at_level, d_spectral_bruteforce,
                                   d_spectral_closed, d_ultra, distance_table, distinguished_pair,
                                   holder_continuity_check, liminf_witness, pair_level, phi,
                                   psi_series, regularity_probe, shift_grid, varrho)
from src.core.continued_fractions import ContinuedFraction, convergents
from src.core.exceptions import ConfigError, IncompleteLanguageError, UnresolvedDistanceError
from src.words.language import certified_length, right_special_prefixes
from src.words.sturmian import BinaryWord, limit_word_prefix

words16 = st.text(alphabet='01', min_size=16, max_size=16)


def common_prefix(v: BinaryWord, w: BinaryWord) -> int:
    n = 0
    for a, b in zip(v.symbols, w.symbols):
        if a != b:
            break
        n += 1
    return n


def test_varrho_pieces():
    assert varrho(2.0, 0.4) == 0.0
    assert varrho(2.0, 0.75) == pytest.approx(1 / 3)
    assert varrho(2.0, 1.0) == 0.5
    assert varrho(2.0, 1.5) == 0.5
    with pytest.raises(ConfigError):
        varrho(1.0, 0.75)


@settings(max_examples=200)
@given(st.floats(1.05, 10.0), st.floats(0.01, 5.0), st.floats(0.01, 5.0))
def test_varrho_is_monotone_in_t(alpha, t1, t2):
    low, high = sorted((t1, t2))
    assert -1e-12 <= varrho(alpha, low) <= varrho(alpha, high) + 1e-12 <= 1 / alpha + 2e-12


@settings(max_examples=200)
@given(st.floats(1.05, 10.0), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_varrho_is_concave_between_the_thresholds(alpha, u1, u2):
    edge = 1 - 1 / alpha
    t1, t2 = edge + (1 - edge) * u1, edge + (1 - edge) * u2
    chord = (varrho(alpha, t1) + varrho(alpha, t2)) / 2
    assert varrho(alpha, (t1 + t2) / 2) >= chord - 1e-12


def test_weights_must_be_positive():
    with pytest.raises(ConfigError):
        WeightSpec(0.0)
    assert WeightSpec(2.0).delta(4) == 1 / 16


def test_d_ultra():
    weights = WeightSpec(1.0)
    assert d_ultra(BinaryWord('0110'), BinaryWord('0100'), weights) == 0.5
    assert d_ultra(BinaryWord('0110'), BinaryWord('1110'), weights) == 1.0
    with pytest.raises(UnresolvedDistanceError):
        d_ultra(BinaryWord('01'), BinaryWord('010'), weights)


@given(st.lists(words16, min_size=3, max_size=3, unique=True), st.floats(min_value=0.2, max_value=3.0))
@settings(max_examples=200)
def test_ultrametric_axioms(words, t):
    weights = WeightSpec(t)
    u, v, w = (BinaryWord(s) for s in words)
    assert d_ultra(u, v, weights) == d_ultra(v, u, weights)
    assert d_ultra(u, v, weights) > 0
    assert d_ultra(u, w, weights) <= max(d_ultra(u, v, weights), d_ultra(v, w, weights))


def test_pair_levels():
    assert pair_level(1, 'xy', 'x') == 2
    assert pair_level(1, 'xy', 'y') == 3
    assert pair_level(2, 'shifted', 'x') == 4
    assert pair_level(2, 'shifted', 'y') == 3
    with pytest.raises(ConfigError):
        pair_level(1, 'diagonal', 'x')


def test_distinguished_pairs_share_q_m_symbols(fibonacci):
    q = convergents(fibonacci).q
    for m in range(2, 9):
        v, w = distinguished_pair(fibonacci, m, q[m] + 64)
        assert common_prefix(v, w) == q[m]
        assert closed_distance_at_level(fibonacci, m, WeightSpec(2.0)).lcp == q[m]


def test_shifted_pairs_share_their_prefix(synth2):
    q = convergents(synth2).q
    for m in (1, 2):
        a = synth2.word_entry(m + 2)
        for j in sorted({1, a}):
            lcp = j * q[m + 1] + q[m]
            v, w = distinguished_pair(synth2, m, lcp + 64, j)
            assert common_prefix(v, w) == lcp
            assert closed_distance_at_level(synth2, m, WeightSpec(2.0), j=j).lcp == lcp


ORACLE_CASES = [
    ('x', 'xy', 1, None), ('x', 'xy', 2, None), ('x', 'xy', 3, None),
    ('x', 'shifted', 1, 1), ('x', 'shifted', 2, 1),
    ('y', 'xy', 1, None), ('y', 'xy', 2, None),
    ('y', 'shifted', 1, 1), ('y', 'shifted', 2, 1),
]


def assert_matches_oracle(cf, source, variant, n, j, t, horizon=2000):
    weights = WeightSpec(t)
    m = pair_level(n, variant, source)
    v, w = distinguished_pair(cf, m, certified_length(cf, horizon + 1), j)
    brute = d_spectral_bruteforce(v, w, weights, horizon)
    closed = d_spectral_closed(cf, n, variant, weights, j=j, source=source)
    assert brute.rigorous and closed.rigorous
    assert brute.lcp == closed.lcp
    assert brute.value <= closed.upper
    assert closed.value <= brute.upper


@pytest.mark.parametrize('source, variant, n, j', ORACLE_CASES)
def test_closed_form_matches_right_special_oracle(fibonacci, source, variant, n, j):
    assert_matches_oracle(fibonacci, source, variant, n, j, 2.0)


@pytest.mark.parametrize('source, variant, n, j', [('x', 'xy', 1, None), ('y', 'xy', 1, None),
                                                  ('x', 'shifted', 1, 1), ('y', 'shifted', 2, 1)])
def test_closed_form_counts_every_shifted_branching_position(source, variant, n, j):
    # q = 1, 3, 4, 7, 11, 18, ...: the shifted partner at m = 2 branches at 8, 15 and 26
    cf = ContinuedFraction((3,) + (1,) * 38)
    assert_matches_oracle(cf, source, variant, n, j, 3.0)


def test_closed_form_at_level_two_includes_the_shifted_y_positions(fibonacci):
    # beyond the common prefix 3: x branches at 8, 21, 55, ...; sigma^2 y at 6, 11, 19, 32, 53, 87, ...
    weights = WeightSpec(2.0)
    closed = closed_distance_at_level(fibonacci, 2, weights)
    positions = [3, 6, 8, 11, 19, 21, 32, 53, 55, 87]
    head = mp.fsum(mp.mpf(n) ** -2 for n in positions)
    assert closed.value >= head
    assert closed.value - head < 2 * mp.mpf(87) ** -1


def test_brute_force_needs_certified_words(fibonacci):
    v, w = distinguished_pair(fibonacci, 2, 100)
    with pytest.raises(IncompleteLanguageError):
        d_spectral_bruteforce(v, w, WeightSpec(2.0), 1000)


def test_brute_force_of_equal_words_is_zero(fibonacci):
    word = BinaryWord('0100101001', fibonacci)
    assert d_spectral_bruteforce(word, word, WeightSpec(2.0), 5).value == 0


def test_brute_force_tail_below_one_is_an_estimate(fibonacci):
    v, w = distinguished_pair(fibonacci, 2, certified_length(fibonacci, 201))
    assert not d_spectral_bruteforce(v, w, WeightSpec(0.8), 200).rigorous


def test_brute_force_without_common_prefix_counts_delta_one_once(fibonacci):
    # x = 01c and y = 10c: no common prefix, and "0" is right special
    length = certified_length(fibonacci, 2001)
    v = limit_word_prefix(fibonacci, 'x', length)
    w = limit_word_prefix(fibonacci, 'y', length)
    weights = WeightSpec(2.0)
    brute = d_spectral_bruteforce(v, w, weights, 2000)
    assert brute.lcp == 0
    assert brute.ultrametric == 1
    assert 1 < brute.value < 1 + 2 * (mp.zeta(2) - 1)
    beyond_one = mp.fsum(weights.delta_mp(n) for word in (v, w)
                         for n in right_special_prefixes(word.symbols, 2000) if n > 1)
    assert abs(brute.value - 1 - beyond_one) < 1e-12


def test_brute_force_tail_needs_a_normalized_slope():
    slope = ContinuedFraction((1,))
    v, w = BinaryWord('0110', slope), BinaryWord('0101', slope)
    with pytest.raises(ConfigError):
        d_spectral_bruteforce(v, w, WeightSpec(0.8), 3, unsafe=True)


@given(st.lists(st.integers(0, 30), min_size=3, max_size=3, unique=True), st.floats(0.3, 3.0))
@settings(max_examples=40, deadline=None)
def test_spectral_metric_axioms_on_shifts(fibonacci, shifts, t):
    horizon = 200
    base = limit_word_prefix(fibonacci, 'x', certified_length(fibonacci, horizon + 1) + 30)
    u, v, w = (base.shift(s) for s in shifts)
    weights = WeightSpec(t)
    uv = d_spectral_bruteforce(u, v, weights, horizon)
    vu = d_spectral_bruteforce(v, u, weights, horizon)
    uw = d_spectral_bruteforce(u, w, weights, horizon)
    vw = d_spectral_bruteforce(v, w, weights, horizon)
    slack = mp.mpf(10) ** -20
    assert abs(uv.value - vu.value) <= slack * uv.value
    assert uv.value >= d_ultra(u, v, weights) * (1 - 1e-12)
    assert uw.value <= (uv.value + vw.value) * (1 + slack)


def test_shift_index_out_of_range(fibonacci):
    with pytest.raises(ConfigError):
        closed_distance_at_level(fibonacci, 2, WeightSpec(2.0), j=2)
    with pytest.raises(ConfigError):
        d_spectral_closed(fibonacci, 1, 'shifted', WeightSpec(2.0))


def test_phi_at_full_shift_is_a_power_of_q(fibonacci, synth2):
    for cf in (fibonacci.truncated(30), synth2):
        q = convergents(cf).q
        for m in range(0, min(cf.depth - 1, 8)):
            a = cf.word_entry(m + 2)
            for r, t in ((0.5, 0.75), (1.5, 2.0)):
                with mp.workdps(40):
                    value = phi(cf, m, a, r, t)
                    target = mp.mpf(q[m + 2]) ** (t * (r - 1))
                    assert abs(value / target - 1) < 1e-12


def test_liminf_witness_rows(fibonacci):
    _, rows = liminf_witness(fibonacci.truncated(20), 0.5, WeightSpec(1.0))
    for row in rows:
        assert row['log_phi'] == pytest.approx(-0.5 * float(mp.log(row['q'])), rel=1e-9)


def test_shift_grid():
    assert shift_grid(5) == [1, 2, 3, 4, 5]
    grid = shift_grid(10 ** 6)
    assert grid[0] == 1 and grid[-1] == 10 ** 6
    assert grid == sorted(set(grid))


def test_distance_table_reuse(regularity_slope):
    weights = WeightSpec(0.75)
    distances = distance_table(regularity_slope, weights)
    direct = psi_series(regularity_slope, weights, 0.4)
    reused = psi_series(regularity_slope, weights, 0.4, distances=distances)
    assert [row['log_psi'] for row in direct.rows] == [row['log_psi'] for row in reused.rows]
    assert not any(row['rigorous'] for row in direct.rows)


def test_psi_series_rejects_nonpositive_r(regularity_slope):
    with pytest.raises(ConfigError):
        psi_series(regularity_slope, WeightSpec(2.0), 0.0)
    with pytest.raises(ConfigError):
        regularity_probe(regularity_slope, 2.0, WeightSpec(2.0), [])


def test_regularity_report_carries_growth_constant(regularity_slope):
    report = regularity_probe(regularity_slope, 2.0, WeightSpec(1.5), [0.5])
    assert report.growth_constant == 1.0
    assert report.to_dict()['growth_constant'] == 1.0


def test_holder_check_needs_large_t(synth2):
    with pytest.raises(ConfigError):
        holder_continuity_check(synth2, 2.0, WeightSpec(1.5))


@pytest.mark.slow
def test_holder_bound_holds_on_unshifted_pairs(regularity_slope):
    outcome = holder_continuity_check(regularity_slope, 2.0, WeightSpec(2.0))
    assert outcome['rows']
    assert outcome['violations'] == 0
