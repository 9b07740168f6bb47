"""
Spectral Metric Module

The weighted ultrametric d_delta, the combinatorial spectral metric both by
exhaustive right-special search on certified words and in closed form along
the distinguished word pairs, the psi/phi probe series and the
Hölder-regularity verdicts built from them.

Weights are delta_n = n^(-t). Closed-form sums run over indices far beyond
machine floats, so they are evaluated with mpmath on exact integer indices;
levels with very many terms are summed exactly for the first few terms and
enclosed by integrals for the rest.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
from mpmath import mp

from src.core.continued_fractions import (ContinuedFraction, ConvergentTable,
                                          alpha_type_sequence, convergents)
from src.core.exceptions import (ConfigError, IncompleteLanguageError,
                                 InsufficientDepthError, UnresolvedDistanceError)
from src.utils.calculations import (BOUNDED, DIVERGENT, INCONCLUSIVE, VANISHING,
                                    BandRule, VerdictClassifier, safe_exp)
from src.words.language import is_certified, right_special_prefixes
from src.words.sturmian import BinaryWord, limit_word_prefix

logger = logging.getLogger(__name__)

WORKING_DPS = 40
EXACT_TERMS = 32
CONVERGENT = 'convergent'
SATURATION = 1e-3


@dataclass(frozen=True)
class WeightSpec:
    """Weights delta_n = n^(-t)."""
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ConfigError(f"Weight exponent t must be > 0, got {self.t}")

    def delta(self, n: int) -> float:
        return float(n) ** -self.t

    def delta_mp(self, n: int):
        return mp.mpf(n) ** -self.t

    def log_delta(self, n: int) -> float:
        return -self.t * math.log(n)


@dataclass
class MetricValue:
    """
    A distance known to lie in [value, value + tail_bound] when rigorous.

    Args:
        value: Lower partial sum
        tail_bound: Width of the enclosure (truncation and inner-sum error)
        rigorous: False when the tail is an estimate; such values feed trend
            analyses only
        divergent: The series does not converge at this weight
        ultrametric: Matching d_delta value, when known
        lcp: Length of the common prefix of the two words
    """
    value: object
    tail_bound: object = 0
    rigorous: bool = True
    divergent: bool = False
    ultrametric: Optional[object] = None
    lcp: Optional[int] = None

    @property
    def upper(self):
        return self.value + self.tail_bound

    def log_value(self) -> float:
        if self.value <= 0:
            return float('-inf')
        return float(mp.log(self.value))

    def to_dict(self) -> Dict:
        return {
            'value': _as_number(self.value),
            'tail_bound': _as_number(self.tail_bound),
            'rigorous': self.rigorous,
            'divergent': self.divergent,
            'ultrametric': None if self.ultrametric is None else _as_number(self.ultrametric),
            'lcp': None if self.lcp is None else str(self.lcp),
        }


@dataclass
class PsiSeries:
    """Rows of psi_{z,n}(r) and sup_j psi^{(j)}_{z,n}(r), one row per (source, level)."""
    t: float
    r: float
    sources: Tuple[str, ...]
    include_shifted: bool
    rows: List[Dict] = field(default_factory=list)

    def log_probe_values(self) -> Tuple[List[float], List[float]]:
        """Per-row log of max(psi, sup_j psi) with log q_m as scale, ordered by scale."""
        points = []
        for row in self.rows:
            candidates = [v for v in (row['log_psi'], row['log_sup_j_psi']) if v is not None]
            if candidates:
                points.append((row['log_q'], max(candidates)))
        points.sort()
        return [p[1] for p in points], [p[0] for p in points]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'source': row['source'],
            'n': row['n'],
            'm': row['m'],
            'q_n': str(row['q']),
            'psi': None if row['log_psi'] is None else safe_exp(row['log_psi']),
            'sup_j_psi': None if row['log_sup_j_psi'] is None else safe_exp(row['log_sup_j_psi']),
            'log_psi': row['log_psi'],
            'log_sup_j_psi': row['log_sup_j_psi'],
            'argmax_j': None if row['argmax_j'] is None else str(row['argmax_j']),
            'tail_flag': 'rigorous' if row['rigorous'] else 'estimated',
        } for row in self.rows])


@dataclass
class RegularityVerdict:
    """Banded verdict of the psi probe at one (alpha, t, r)."""
    alpha: float
    t: float
    r: float
    trend: str
    slope: Optional[float]
    diagnostics: Dict = field(default_factory=dict)
    log_values: List[float] = field(default_factory=list)
    log_scales: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            't': self.t,
            'r': self.r,
            'trend': self.trend,
            'slope': self.slope,
            'window_max': self.diagnostics.get('window_max'),
            'window_min': self.diagnostics.get('window_min'),
        }


@dataclass
class RegularityReport:
    """Verdicts over an r-grid and the empirical transition point."""
    alpha: float
    t: float
    expected: float
    verdicts: List[RegularityVerdict]
    transition: Tuple[Optional[float], Optional[float]]
    consistent: bool
    growth_constant: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            't': self.t,
            'expected_transition': self.expected,
            'empirical_transition': list(self.transition),
            'consistent': self.consistent,
            'growth_constant': self.growth_constant,
            'verdicts': [v.to_dict() for v in self.verdicts],
        }


@dataclass
class FinitenessReport:
    """Per-level increments of the closed-form distance series and the convergence verdict."""
    t: float
    m: int
    rows: List[Dict]
    slope: Optional[float]
    verdict: str
    min_increment: float
    saturation: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)


def _as_number(x):
    """float when representable, else a decimal string."""
    if isinstance(x, (int, float)):
        return x
    f = float(x)
    if math.isinf(f) or (f == 0 and x != 0):
        return mp.nstr(x, 17)
    return f


def d_ultra(v: BinaryWord, w: BinaryWord, weights: WeightSpec) -> float:
    """
    delta at the common prefix length, with an empty common prefix counted as 1.

    Raises:
        UnresolvedDistanceError: the words agree on their whole common range
    """
    n = _common_prefix(v.symbols, w.symbols)
    if n >= min(len(v), len(w)):
        raise UnresolvedDistanceError(
            f"Words agree on all {n} materialized symbols; extend them to resolve the distance")
    return weights.delta(max(1, n))


def _common_prefix(a: str, b: str) -> int:
    limit = min(len(a), len(b))
    n = 0
    while n < limit and a[n] == b[n]:
        n += 1
    return n


def d_spectral_bruteforce(v: BinaryWord, w: BinaryWord, weights: WeightSpec, horizon: int,
                          unsafe: bool = False) -> MetricValue:
    """
    Spectral distance from the right-special prefixes of both words up to horizon.

    Args:
        v, w: Words of one Sturmian subshift, carrying its slope
        weights: delta_n = n^(-t)
        horizon: Largest prefix length inspected
        unsafe: Skip the completeness certificate

    Returns:
        MetricValue; the tail is rigorous for t > 1 and an estimate otherwise
    """
    if v.symbols == w.symbols:
        return MetricValue(mp.mpf(0), mp.mpf(0), True, lcp=len(v))
    lcp = _common_prefix(v.symbols, w.symbols)
    if lcp >= min(len(v), len(w)):
        raise UnresolvedDistanceError(f"Words agree on all {lcp} materialized symbols")
    if not unsafe:
        for word in (v, w):
            if not is_certified(word, horizon + 1):
                raise IncompleteLanguageError(
                    f"Word of length {len(word)} cannot certify right-speciality up to {horizon}")

    t = weights.t
    with mp.workdps(WORKING_DPS):
        ultrametric = weights.delta_mp(max(1, lcp))
        total = ultrametric
        # a pair without a common prefix is treated as sharing one letter
        for word in (v, w):
            for n in right_special_prefixes(word.symbols, horizon):
                if n > max(1, lcp):
                    total += weights.delta_mp(n)
        if t > 1:
            tail = 2 * mp.mpf(horizon) ** (1 - t) / (t - 1)
            rigorous = True
        else:
            tail = _brute_tail_estimate(v.slope, horizon, t)
            rigorous = False
            logger.warning(f"t={t} <= 1: brute-force tail beyond {horizon} is an estimate")
    return MetricValue(total, tail, rigorous, ultrametric=ultrametric, lcp=lcp)


def _brute_tail_estimate(cf: Optional[ContinuedFraction], horizon: int, t: float):
    """Twice the weight of the limit-word branching positions beyond horizon within the stored depth."""
    if cf is None:
        return mp.inf
    cf.require_normalized()
    table = convergents(cf)
    q = table.q
    total = mp.mpf(0)
    for k in range(1, cf.depth):
        # positions j q_k + q_{k-1}, 0 <= j < a_{k+1}, cover both limit words
        lo, hi = _block_sum(q[k], q[k - 1], 0, cf.word_entry(k + 1) - 1, t, minimum=horizon + 1)
        total += hi
    return 2 * total


def _antiderivative(step: int, base: int, t: float, l):
    x = mp.mpf(l) * step + base
    if t == 1:
        return mp.log(x) / step
    return x ** (1 - t) / ((1 - t) * step)


def _block_sum(step: int, base: int, first: int, last: int, t: float,
               minimum: int = 1) -> Tuple[object, object]:
    """
    Enclosure (lower, upper) of sum_{l=first}^{last} (l step + base)^(-t).

    Terms with index below minimum are skipped.
    """
    if minimum > base + first * step:
        first = max(first, -(-(minimum - base) // step))
    if last < first:
        return mp.mpf(0), mp.mpf(0)
    exact_last = min(last, first + EXACT_TERMS - 1)
    exact = mp.fsum(mp.mpf(l * step + base) ** -t for l in range(first, exact_last + 1))
    if exact_last == last:
        return exact, exact
    lower = exact + _antiderivative(step, base, t, last + 1) - _antiderivative(step, base, t, exact_last + 1)
    upper = exact + _antiderivative(step, base, t, last) - _antiderivative(step, base, t, exact_last)
    return lower, upper


def _growth_tail(table: ConvergentTable, K: int, t: float):
    """
    Bound on the levels beyond K for t > 1 from q_{K+j} > q_K gamma^j / (2 sqrt 5).

    Each level holds at most two blocks, each below zeta(t) q_k^(-t) <= t/(t - 1) q_k^(-t).
    """
    gamma = (1 + mp.sqrt(5)) / 2
    return 2 * (mp.mpf(t) / (t - 1)) * (2 * mp.sqrt(5)) ** t * mp.mpf(table.q[K]) ** -t / (gamma ** t - 1)


def _level_blocks(cf: ContinuedFraction, table: ConvergentTable, m: int, t: float, K: int,
                  j: Optional[int] = None) -> Tuple[int, List[Tuple[int, object, object]]]:
    """
    Per-level enclosures of the closed-form distance series at level m.

    The limit words agree after their first two letters, so beyond the
    common prefix the shifted partner branches at every limit-word branching
    position minus its shift, while the unshifted word only contributes its
    own positions, which sit on the levels k with k - m odd.

    Unshifted (j None): the shift is q_{m-1}; level k = m..K holds the terms
    l q_k + q_{k-1} - q_{m-1} for l = 1..a_{k+1}, plus l q_k + q_{k-1} when
    k - m is odd. The term k = m, l = 1 is the common prefix q_m.

    Shifted by j: the shift is (a_{m+2} - j + 1) q_{m+1}; a head block
    l q_{m+1} + q_m for l = j..a_{m+2}, then levels k = m+2..K built the same
    way. The shifted term k = m+2, l = 1 equals the common prefix
    j q_{m+1} + q_m and is counted once, in the head.

    Returns:
        (common prefix length, [(level, lower, upper), ...]), one entry per level
    """
    q = table.q
    blocks = []
    if j is None:
        lcp = q[m]
        shift, start = q[m - 1], m
    else:
        a = cf.word_entry(m + 2)
        if not 1 <= j <= a:
            raise ConfigError(f"Shift index j must lie in 1..{a}, got {j}")
        lcp = j * q[m + 1] + q[m]
        lo, hi = _block_sum(q[m + 1], q[m], j, a, t)
        blocks.append((m + 1, lo, hi))
        shift, start = (a - j + 1) * q[m + 1], m + 2
    for k in range(start, K + 1):
        entry = cf.word_entry(k + 1)
        first = 2 if (j is not None and k == m + 2) else 1
        lo, hi = _block_sum(q[k], q[k - 1] - shift, first, entry, t)
        if (k - m) % 2 == 1:
            own_lo, own_hi = _block_sum(q[k], q[k - 1], 1, entry, t)
            lo, hi = lo + own_lo, hi + own_hi
        blocks.append((k, lo, hi))
    return lcp, blocks


def _check_level(cf: ContinuedFraction, m: int, K: int, shifted: bool) -> None:
    low = m + 2 if shifted else m
    if m < 1 or (not shifted and m < 2):
        raise ConfigError(f"Level m={m} is outside the distinguished families")
    if K < low:
        raise ConfigError(f"Truncation level K={K} must be >= {low}")
    if K + 1 > cf.depth:
        raise InsufficientDepthError(f"Level K={K} needs entry a_{K + 1}; slope has {cf.depth}")


def closed_distance_at_level(cf: ContinuedFraction, m: int, weights: WeightSpec, K: Optional[int] = None,
                             j: Optional[int] = None, table: Optional[ConvergentTable] = None) -> MetricValue:
    """Closed-form spectral distance of the distinguished pair at level m (shifted by j when given)."""
    cf.require_normalized()
    K = cf.depth - 1 if K is None else K
    _check_level(cf, m, K, j is not None)
    table = table or convergents(cf)
    t = weights.t
    with mp.workdps(WORKING_DPS):
        lcp, blocks = _level_blocks(cf, table, m, t, K, j)
        lower = mp.fsum(b[1] for b in blocks)
        width = mp.fsum(b[2] - b[1] for b in blocks)
        ultrametric = weights.delta_mp(lcp)
        if t > 1:
            return MetricValue(lower, width + _growth_tail(table, K, t), True,
                               ultrametric=ultrametric, lcp=lcp)
        increments = [b[2] for b in blocks if b[0] >= m]
        tail, divergent = _geometric_tail(increments)
        if divergent:
            logger.warning(f"Closed-form series at level m={m}, t={t} shows no decay up to level {K}")
        return MetricValue(lower, width + tail, False, divergent, ultrametric=ultrametric, lcp=lcp)


def _geometric_tail(increments: Sequence) -> Tuple[object, bool]:
    """Extrapolate the last two level increments geometrically; a ratio >= 1 means divergence."""
    if len(increments) < 2 or increments[-2] == 0:
        return mp.inf, False
    ratio = increments[-1] / increments[-2]
    if ratio >= 1:
        return mp.inf, True
    return increments[-1] * ratio / (1 - ratio), False


def d_spectral_closed(cf: ContinuedFraction, n: int, variant: str, weights: WeightSpec,
                      K: Optional[int] = None, j: Optional[int] = None,
                      source: str = 'x') -> MetricValue:
    """
    Closed-form spectral distance along the distinguished pairs.

    Args:
        cf: Normalized slope
        n: Pair index
        variant: 'xy' for d(x, sigma^{|L_n|} y) (source 'x') or
            d(sigma^{|R_n|} x, y) (source 'y'); 'shifted' for
            d(x, sigma^{(a_{2n+2} - j + 1)|L_{n+1}|} y) (source 'x') or
            d(sigma^{(a_{2n+1} - j + 1)|R_n|} x, y) (source 'y')
        weights: delta_n = n^(-t)
        K: Truncation level, defaults to the deepest available
        j: Shift index for the shifted variant
        source: 'x' or 'y'

    Returns:
        MetricValue with the matching ultrametric value
    """
    m = pair_level(n, variant, source)
    if variant == 'shifted' and j is None:
        raise ConfigError("The shifted variant needs a shift index j")
    return closed_distance_at_level(cf, m, weights, K, j if variant == 'shifted' else None)


def pair_level(n: int, variant: str, source: str) -> int:
    """Level m of the series for pair index n."""
    if source not in ('x', 'y'):
        raise ConfigError("Source must be 'x' or 'y'")
    if variant == 'xy':
        return 2 * n if source == 'x' else 2 * n + 1
    if variant == 'shifted':
        return 2 * n if source == 'x' else 2 * n - 1
    raise ConfigError(f"Unknown variant '{variant}'")


def distinguished_pair(cf: ContinuedFraction, m: int, length: int, j: Optional[int] = None,
                       budget: int = 10 ** 7) -> Tuple[BinaryWord, BinaryWord]:
    """
    Prefixes of the two words whose distance the level-m series describes.

    Even m pairs the x-limit word with a shift of the y-limit word, odd m
    pairs a shift of the x-limit word with the y-limit word.
    """
    table = convergents(cf)
    if j is None:
        shift = table.q[m - 1]
    else:
        shift = (cf.word_entry(m + 2) - j + 1) * table.q[m + 1]
    if m % 2 == 0:
        v = limit_word_prefix(cf, 'x', length, budget)
        w = limit_word_prefix(cf, 'y', length + shift, budget).shift(shift)
    else:
        v = limit_word_prefix(cf, 'x', length + shift, budget).shift(shift)
        w = limit_word_prefix(cf, 'y', length, budget)
    return v, w


def phi(cf: ContinuedFraction, m: int, j: int, r: float, t: float,
        table: Optional[ConvergentTable] = None):
    """
    (j q_{m+1} + q_m)^{t r} * sum_{l=j}^{a_{m+2}} (l q_{m+1} + q_m)^(-t).

    The inner sum is exact for short ranges and the midpoint of its
    integral enclosure otherwise.
    """
    if m + 2 > cf.depth:
        raise InsufficientDepthError(f"phi at m={m} needs entry a_{m + 2}")
    table = table or convergents(cf)
    q = table.q
    a = cf.word_entry(m + 2)
    if not 1 <= j <= a:
        raise ConfigError(f"j must lie in 1..{a}, got {j}")
    with mp.workdps(WORKING_DPS):
        lo, hi = _block_sum(q[m + 1], q[m], j, a, t)
        return mp.mpf(j * q[m + 1] + q[m]) ** (t * r) * (lo + hi) / 2


def liminf_witness(cf: ContinuedFraction, r: float, weights: WeightSpec,
                   rule: Optional[BandRule] = None) -> Tuple[str, List[Dict]]:
    """
    phi(m, a_{m+2}, r, t) = q_{m+2}^{t(r-1)} along every level; it vanishes for r < 1.

    Returns:
        (verdict, rows)
    """
    table = convergents(cf)
    rows = []
    for m in range(0, cf.depth - 1):
        value = phi(cf, m, cf.word_entry(m + 2), r, weights.t, table)
        rows.append({'m': m, 'q': table.q[m + 2], 'log_phi': float(mp.log(value))})
    verdict, _ = VerdictClassifier.classify(
        [row['log_phi'] for row in rows], rule,
        [math.log(row['q']) for row in rows], trend='down')
    return verdict, rows


def varrho(alpha: float, t: float) -> float:
    """Critical Hölder exponent: 0, then 1 - (alpha - 1)/(alpha t), then 1/alpha."""
    if alpha <= 1:
        raise ConfigError(f"varrho needs alpha > 1, got {alpha}")
    if t <= 1 - 1 / alpha:
        return 0.0
    if t < 1:
        return 1 - (alpha - 1) / (alpha * t)
    return 1 / alpha


def shift_grid(a: int, dense: int = 64, octaves: int = 24) -> List[int]:
    """Shift indices probed for sup_j: all of 1..a when short, else powers of two and ceil(a / 2^s)."""
    if a <= dense:
        return list(range(1, a + 1))
    grid = {1, a}
    p = 1
    for _ in range(octaves):
        p *= 2
        if p < a:
            grid.add(p)
    for s in range(octaves):
        grid.add(max(1, -(-a // (2 ** s))))
    return sorted(grid)


def _probe_levels(cf: ContinuedFraction, K: int, sources: Sequence[str]) -> List[Tuple[str, int]]:
    levels = []
    for m in range(1, K - 2):
        source = 'x' if m % 2 == 0 else 'y'
        if source in sources:
            levels.append((source, m))
    return levels


def distance_table(cf: ContinuedFraction, weights: WeightSpec, K: Optional[int] = None,
                   sources: Sequence[str] = ('x', 'y'), include_shifted: bool = True) -> List[Dict]:
    """
    Closed-form distances per level, independent of r.

    Levels m run up to K - 3 so every row has at least two levels beyond
    the shifted head.
    """
    cf.require_normalized()
    K = cf.depth - 1 if K is None else K
    table = convergents(cf)
    rows = []
    for source, m in _probe_levels(cf, K, sources):
        entry = {'source': source, 'm': m, 'n': m // 2 if source == 'x' else (m + 1) // 2,
                 'q': table.q[m], 'unshifted': None, 'shifted': []}
        if m >= 2:
            entry['unshifted'] = closed_distance_at_level(cf, m, weights, K, None, table)
        if include_shifted:
            for j in shift_grid(cf.word_entry(m + 2)):
                entry['shifted'].append((j, closed_distance_at_level(cf, m, weights, K, j, table)))
        rows.append(entry)
    logger.debug(f"Distance table for {cf.label}: {len(rows)} levels up to K={K}")
    return rows


def _log_psi(distance: MetricValue, t: float, r: float) -> float:
    return distance.log_value() + r * t * math.log(distance.lcp)


def psi_series(cf: ContinuedFraction, weights: WeightSpec, r: float, n_range: Optional[Sequence[int]] = None,
               include_shifted: bool = True, sources: Sequence[str] = ('x', 'y'),
               K: Optional[int] = None, distances: Optional[List[Dict]] = None) -> PsiSeries:
    """
    psi_{z,n}(r) = d_s / d_delta^r along the distinguished pairs, and sup over j of the shifted family.

    Args:
        cf: Normalized slope
        weights: delta_n = n^(-t)
        r: Hölder exponent
        n_range: Pair indices to keep, all available when None
        include_shifted: Add sup_j psi^{(j)}
        sources: Subset of ('x', 'y')
        K: Truncation level
        distances: Output of distance_table, reused across r

    Returns:
        PsiSeries
    """
    if r <= 0:
        raise ConfigError(f"r must be > 0, got {r}")
    t = weights.t
    if distances is None:
        distances = distance_table(cf, weights, K, sources, include_shifted)
    series = PsiSeries(t, r, tuple(sources), include_shifted)
    for entry in distances:
        if entry['source'] not in sources:
            continue
        if n_range is not None and entry['n'] not in n_range:
            continue
        log_psi = None
        rigorous = True
        if entry['unshifted'] is not None:
            log_psi = _log_psi(entry['unshifted'], t, r)
            rigorous = entry['unshifted'].rigorous
        log_sup, argmax = None, None
        if include_shifted:
            for j, distance in entry['shifted']:
                value = _log_psi(distance, t, r)
                rigorous = rigorous and distance.rigorous
                if log_sup is None or value > log_sup:
                    log_sup, argmax = value, j
        series.rows.append({
            'source': entry['source'], 'n': entry['n'], 'm': entry['m'], 'q': entry['q'],
            'log_q': math.log(entry['q']), 'log_psi': log_psi,
            'log_sup_j_psi': log_sup, 'argmax_j': argmax, 'rigorous': rigorous,
        })
    return series


def regularity_probe(cf: ContinuedFraction, alpha: float, weights: WeightSpec, r_grid: Sequence[float],
                     K: Optional[int] = None, rule: Optional[BandRule] = None,
                     sources: Sequence[str] = ('x', 'y'),
                     distances: Optional[List[Dict]] = None) -> RegularityReport:
    """
    Band the psi probe at every r and locate the empirical transition.

    The transition bracket is (largest r with a vanishing verdict, smallest
    r with a divergent verdict); it is consistent when varrho_alpha(t) lies
    inside it.
    """
    if not r_grid:
        raise ConfigError("The r-grid must not be empty")
    rule = rule or BandRule()
    expected = varrho(alpha, weights.t) if alpha > 1 else 1.0
    if distances is None:
        distances = distance_table(cf, weights, K, sources)
    verdicts = []
    for r in sorted(r_grid):
        series = psi_series(cf, weights, r, sources=sources, distances=distances)
        log_values, log_scales = series.log_probe_values()
        verdict, diagnostics = VerdictClassifier.classify(log_values, rule, log_scales, trend='both')
        if verdict == INCONCLUSIVE:
            logger.warning(f"psi probe inconclusive at alpha={alpha}, t={weights.t}, r={r}")
        verdicts.append(RegularityVerdict(alpha, weights.t, r, verdict, diagnostics.get('slope'),
                                          diagnostics, log_values, log_scales))

    below = [v.r for v in verdicts if v.trend == VANISHING]
    above = [v.r for v in verdicts if v.trend == DIVERGENT]
    low = max(below) if below else None
    high = min(above) if above else None
    consistent = ((low is None or low < expected + 1e-12) and (high is None or expected < high + 1e-12)
                  and (low is not None or high is not None))
    bounded_at = [v.r for v in verdicts if v.trend == BOUNDED]
    if bounded_at and low is None and high is None:
        consistent = True
    logger.info(f"Regularity probe {cf.label} alpha={alpha} t={weights.t}: transition in ({low}, {high}), "
                f"expected {expected:.4f}")
    # window limsup of a_{m+1} q_m^{1-alpha}, the constant of the tail bound
    growth_constant = alpha_type_sequence(cf, alpha, rule).window_max if alpha > 1 else None
    return RegularityReport(alpha, weights.t, expected, verdicts, (low, high), consistent, growth_constant)


def metric_finiteness_probe(cf: ContinuedFraction, weights: WeightSpec, m: int = 2,
                            K: Optional[int] = None, rule: Optional[BandRule] = None) -> FinitenessReport:
    """
    Level increments of the unshifted series at level m.

    Divergent when the increments do not decay against q_k (log-log slope
    within the tolerance or positive); convergent when they decay and the
    last increment is a negligible share of the partial sum.
    """
    cf.require_normalized()
    rule = rule or BandRule()
    K = cf.depth - 1 if K is None else K
    _check_level(cf, m, K, False)
    table = convergents(cf)
    t = weights.t
    rows = []
    with mp.workdps(WORKING_DPS):
        _, blocks = _level_blocks(cf, table, m, t, K)
        partial = mp.mpf(0)
        for k, lo, hi in blocks:
            increment = (lo + hi) / 2
            partial += increment
            rows.append({'k': k, 'q_k': str(table.q[k]), 'log_q': math.log(table.q[k]),
                         'log_increment': float(mp.log(increment)),
                         'partial_sum': float(partial)})
        saturation = float(blocks[-1][2] / partial) if partial > 0 else 1.0
    logs = [row['log_increment'] for row in rows]
    trend, slope = VerdictClassifier.detect_trend(
        logs, [row['log_q'] for row in rows], tolerance=rule.slope_tolerance)
    if trend in ('stable', 'increasing'):
        verdict = DIVERGENT
    elif trend == 'decreasing' and saturation <= SATURATION:
        verdict = CONVERGENT
    else:
        verdict = INCONCLUSIVE
    min_increment = safe_exp(min(logs))
    logger.info(f"Finiteness probe {cf.label} t={t}: {verdict} (slope {slope:.3f}, saturation {saturation:.2e})")
    return FinitenessReport(t, m, rows, slope, verdict, min_increment, saturation)


def holder_continuity_check(cf: ContinuedFraction, alpha: float, weights: WeightSpec,
                            K: Optional[int] = None, rule: Optional[BandRule] = None) -> Dict:
    """
    Check d_s <= d_delta + d_delta^{1/alpha} / (t - 1) on the unshifted pairs for t >= alpha/(alpha - 1).

    Also bands psi at r = 1/alpha over both families; it must not diverge.
    """
    t = weights.t
    if alpha <= 1 or t < alpha / (alpha - 1):
        raise ConfigError(f"Hölder continuity needs alpha > 1 and t >= alpha/(alpha-1); got alpha={alpha}, t={t}")
    rule = rule or BandRule()
    distances = distance_table(cf, weights, K)
    rows = []
    with mp.workdps(WORKING_DPS):
        for entry in distances:
            distance = entry['unshifted']
            if distance is None:
                continue
            bound = distance.ultrametric + distance.ultrametric ** (mp.mpf(1) / alpha) / (t - 1)
            rows.append({'m': entry['m'], 'source': entry['source'],
                         'holds': bool(distance.upper <= bound),
                         'ratio': float(distance.upper / bound)})
    series = psi_series(cf, weights, 1 / alpha, distances=distances)
    log_values, log_scales = series.log_probe_values()
    verdict, _ = VerdictClassifier.classify(log_values, rule, log_scales, trend='up')
    violations = sum(1 for row in rows if not row['holds'])
    return {'alpha': alpha, 't': t, 'rows': rows, 'violations': violations,
            'psi_verdict': verdict, 'continuous': violations == 0 and verdict != DIVERGENT}


def main():
    """Demonstrate the closed-form and brute-force spectral distances."""
    from src.core.continued_fractions import fibonacci_cf, synthesize_alpha_cf
    cf = fibonacci_cf(40)
    weights = WeightSpec(1.2)
    closed = d_spectral_closed(cf, 1, 'xy', weights)
    v, w = distinguished_pair(cf, 2, 40000)
    brute = d_spectral_bruteforce(v, w, weights, 10 ** 4)
    print(f"Closed form: {closed.to_dict()}")
    print(f"Brute force: {brute.to_dict()}")

    synth = synthesize_alpha_cf(2.0, 1.0, 12)
    report = regularity_probe(synth, 2.0, WeightSpec(0.75), [1 / 3 - 0.15, 1 / 3, 1 / 3 + 0.15],
                              sources=('x',))
    for verdict in report.verdicts:
        print(f"r={verdict.r:.3f}: {verdict.trend}")


if __name__ == "__main__":
    main()
