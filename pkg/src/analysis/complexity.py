"""
Complexity Functionals Module

Repetitivity R(n), repulsiveness A_{alpha,n} and the power index Q(n),
each computed by brute force over certified words and, where a closed form
or a structural witness exists, from the continued fraction. Windowed
estimates of the normalised functionals feed the joint alpha-type report.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from src.core.continued_fractions import (ContinuedFraction, alpha_type_sequence,
                                          convergents)
from src.core.exceptions import (BudgetExceededError, DataIntegrityError,
                                 IncompleteLanguageError, InsufficientDepthError)
from src.utils.calculations import (RECIPROCAL, BandRule, VerdictClassifier,
                                    log_int, safe_exp)
from src.words.language import (LanguageSlice, certified_length, certified_word,
                                factor_set, factors, is_certified)
from src.words.sturmian import BinaryWord

logger = logging.getLogger(__name__)

DEFAULT_P_CAP = 10 ** 6


@dataclass(frozen=True)
class Infinite:
    """Marker for an infimum over an empty set."""

    def __str__(self) -> str:
        return 'inf'


INFINITE = Infinite()

Value = Union[float, Infinite]


def _log_of(value: Value) -> float:
    if isinstance(value, Infinite):
        return float('inf')
    return math.log(value) if value > 0 else float('-inf')


@dataclass
class RepetitivityTable:
    """Rows n -> (R_formula(n), R_brute(n) or None, log of R(n)/n^alpha)."""
    alpha: float
    rows: List[Dict] = field(default_factory=list)
    verdict: Optional[str] = None
    diagnostics: Dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'n': str(row['n']),
            'value': str(row['formula']),
            'ratio': safe_exp(row['log_ratio']),
            'flags': 'brute-checked' if row.get('brute') is not None else 'formula',
        } for row in self.rows], columns=['n', 'value', 'ratio', 'flags'])


@dataclass
class RepulsivenessTable:
    """
    Rows n -> A_{alpha,n}: brute-force values, and power-word upper bounds
    beyond the brute-force range.

    running_min holds the per-level minima used as the liminf proxy for
    ell_alpha, each tagged with the kind of row it came from; classic_ell is
    the global infimum with exponent 1.
    """
    alpha: float
    rows: List[Dict] = field(default_factory=list)
    running_min: List[Dict] = field(default_factory=list)
    classic_ell: Optional[Value] = None
    verdict: Optional[str] = None
    classic_verdict: Optional[str] = None
    diagnostics: Dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'n': str(row['n']),
            'A_brute': str(row['value']) if row['flag'] == 'brute' else None,
            'A_witness_upper': str(row['value']) if row['flag'] == 'witness' else None,
            'flags': row['flag'],
        } for row in self.rows], columns=['n', 'A_brute', 'A_witness_upper', 'flags'])

    def level_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.running_min, columns=['level', 'q', 'log_value', 'source'])


@dataclass
class PowerTable:
    """Rows n -> Q(n) with capped and witness flags, and log of Q(n)/n^{alpha-1}."""
    alpha: float
    rows: List[Dict] = field(default_factory=list)
    verdict: Optional[str] = None
    diagnostics: Dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'n': str(row['n']),
            'value': str(row['value']),
            'ratio': safe_exp(row['log_ratio']),
            'flags': row['flag'],
        } for row in self.rows], columns=['n', 'value', 'ratio', 'flags'])


@dataclass
class EquivalenceReport:
    """Joint verdicts for alpha-type, alpha-repetitive, alpha-repulsive and alpha-finite."""
    alpha: float
    slope: str
    verdicts: Dict[str, str]
    agreement: bool
    repetitivity: RepetitivityTable
    repulsiveness: RepulsivenessTable
    power: PowerTable

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            'slope': self.slope,
            'verdicts': dict(self.verdicts),
            'agreement': self.agreement,
            'classic_repulsive': self.repulsiveness.classic_verdict,
            'classic_ell': str(self.repulsiveness.classic_ell),
        }


def repetitive_formula(cf: ContinuedFraction, n: int) -> int:
    """
    R(n) from the convergent denominators.

    Args:
        cf: Slope
        n: Factor length

    Returns:
        q_{k+1} + 2 q_k - 1 at n = q_k, and R(n - 1) + 1 otherwise
    """
    return convergents(cf).repetitive_value(n)


def repetitive_bruteforce(word: BinaryWord, n: int, unsafe: bool = False) -> int:
    """
    R(n) as the largest gap between consecutive occurrences of a length-n
    factor, plus n - 1.

    The word must contain every factor of length R(n) + 1 so that the
    widest gap is realised inside it; the result is then cross-checked
    against the closed form.

    Raises:
        IncompleteLanguageError: word too short or slope unknown
        DataIntegrityError: brute force disagrees with the closed form
    """
    if n < 1:
        raise ValueError(f"R(n) brute force needs n >= 1, got {n}")
    if not unsafe:
        if word.slope is None:
            raise IncompleteLanguageError("Word carries no slope, completeness cannot be certified")
        expected = repetitive_formula(word.slope, n)
        if not is_certified(word, expected + 1):
            raise IncompleteLanguageError(
                f"R({n}) brute force needs every factor of length {expected + 1} in the word")

    symbols = word.symbols
    last_seen: Dict[str, int] = {}
    widest: Dict[str, int] = {}
    for i in range(len(symbols) - n + 1):
        u = symbols[i:i + n]
        if u in last_seen:
            gap = i - last_seen[u]
            if gap > widest.get(u, 0):
                widest[u] = gap
        last_seen[u] = i

    if len(last_seen) != n + 1:
        raise IncompleteLanguageError(f"Expected {n + 1} factors of length {n}, found {len(last_seen)}")
    if len(widest) != len(last_seen):
        raise IncompleteLanguageError(f"Some length-{n} factor occurs only once; gaps are not witnessed")

    value = max(widest.values()) + n - 1
    if not unsafe and value != expected:
        raise DataIntegrityError(f"R({n}) brute force {value} disagrees with closed form {expected}")
    return value


def alpha_repetitive_estimate(cf: ContinuedFraction, alpha: float, K: int,
                              rule: Optional[BandRule] = None) -> RepetitivityTable:
    """
    Ratios R(q_k)/q_k^alpha for k <= K with the banded verdict.
    """
    table = convergents(cf)
    if K + 1 >= len(table.q):
        raise InsufficientDepthError(f"alpha-repetitive estimate to K={K} needs {K + 2} entries")
    result = RepetitivityTable(alpha=alpha)
    for k in range(0, K + 1):
        n = table.q[k]
        if k > 0 and n == table.q[k - 1]:
            continue
        value = table.repetitive_value(n)
        result.rows.append({
            'k': k,
            'n': n,
            'formula': value,
            'brute': None,
            'log_ratio': log_int(value) - alpha * log_int(n),
        })
    log_ratios = [row['log_ratio'] for row in result.rows]
    result.verdict, result.diagnostics = VerdictClassifier.classify(log_ratios, rule)
    return result


def failure_function(word: str) -> List[int]:
    """Classical prefix function: fail[i] is the longest proper border of word[:i+1]."""
    fail = [0] * len(word)
    k = 0
    for i in range(1, len(word)):
        while k > 0 and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    return fail


def border_lengths(word: str) -> List[int]:
    """All nonempty proper borders of word, longest first."""
    if not word:
        return []
    fail = failure_function(word)
    borders = []
    b = fail[-1]
    while b > 0:
        borders.append(b)
        b = fail[b - 1]
    return borders


def repulsive_A(language: LanguageSlice, alpha: float, exponent: Optional[float] = None) -> Value:
    """
    inf over W in the slice and nonempty proper borders w of W of
    (|W| - |w|) / |w|^{1/alpha}.

    Args:
        language: Complete language slice of length n
        alpha: Exponent parameter
        exponent: Override of the border exponent 1/alpha (1 gives the
            classic functional)

    Returns:
        The infimum, or INFINITE when no factor has a border
    """
    if not language.complete:
        raise IncompleteLanguageError(f"repulsive_A needs a complete slice at n={language.n}")
    power = 1.0 / alpha if exponent is None else exponent
    n = language.n
    best: Value = INFINITE
    for W in language.factors:
        for b in border_lengths(W):
            value = (n - b) / b ** power
            if isinstance(best, Infinite) or value < best:
                best = value
    return best


def power_word_bound(cf: ContinuedFraction, m: int, alpha: float) -> Optional[Dict]:
    """
    Upper bound for A_{alpha,n} at n = a_m q_{m-1} from the power word
    U^{a_m} with border U^{a_m - 1}, where U is L_k (m = 2k) or R_k (m = 2k + 1).

    Returns None when a_m < 2.
    """
    table = convergents(cf)
    a = cf.word_entry(m)
    if a < 2:
        return None
    q = table.q[m - 1]
    log_value = (1 - 1 / alpha) * log_int(q) - math.log(a - 1) / alpha
    return {'m': m, 'n': a * q, 'log_value': log_value}


def _level_of(table_q: Sequence[int], n: int) -> int:
    """Smallest k with n <= q_k (levels are the blocks (q_{k-1}, q_k])."""
    for k, q in enumerate(table_q):
        if n <= q:
            return k
    return len(table_q)


def alpha_repulsive_estimate(cf: ContinuedFraction, alpha: float, n_max: int,
                             budget: int, rule: Optional[BandRule] = None,
                             word: Optional[BinaryWord] = None) -> RepulsivenessTable:
    """
    Liminf proxy for ell_alpha.

    Brute-force rows cover n = 1..n_max; beyond that, power-word bounds
    supply witness rows. The proxy sequence is the minimum per level
    (q_{k-1}, q_k], banded with an upward trend test; the classic functional
    (exponent 1) is banded through its running global minimum.
    """
    table = convergents(cf)
    word = word or certified_word(cf, n_max + 1, budget)
    result = RepulsivenessTable(alpha=alpha)
    classic_rows = []

    for n in range(1, n_max + 1):
        language = factors(word, n)
        value = repulsive_A(language, alpha)
        classic = repulsive_A(language, alpha, exponent=1.0)
        result.rows.append({'n': n, 'value': value, 'log_value': _log_of(value), 'flag': 'brute'})
        classic_rows.append((n, classic))

    for m in range(1, cf.depth + 1):
        if m - 1 >= len(table.q):
            break
        bound = power_word_bound(cf, m, alpha)
        if bound is None or bound['n'] <= n_max:
            continue
        result.rows.append({'n': bound['n'], 'value': safe_exp(bound['log_value']),
                            'log_value': bound['log_value'], 'flag': 'witness'})
    result.rows.sort(key=lambda row: row['n'])

    levels: Dict[int, Dict] = {}
    for row in result.rows:
        level = _level_of(table.q, row['n'])
        if level >= len(table.q):
            continue
        current = levels.get(level)
        if current is None or row['log_value'] < current['log_value']:
            levels[level] = {'level': level, 'q': table.q[level], 'log_value': row['log_value'],
                             'source': row['flag']}
    result.running_min = [levels[k] for k in sorted(levels)]

    log_values = [entry['log_value'] for entry in result.running_min]
    log_scales = [log_int(entry['q']) for entry in result.running_min]
    result.verdict, result.diagnostics = VerdictClassifier.classify(
        log_values, rule, log_scales=log_scales, trend='up')

    running, global_min = [], INFINITE
    for _, value in classic_rows:
        if not isinstance(value, Infinite) and (isinstance(global_min, Infinite) or value < global_min):
            global_min = value
        running.append(_log_of(global_min))
    result.classic_ell = global_min
    result.classic_verdict, _ = VerdictClassifier.classify(running, rule)
    return result


def power_Q(word: BinaryWord, n: int, p_cap: int = DEFAULT_P_CAP, unsafe: bool = False) -> Dict:
    """
    Q(n): the largest p <= p_cap such that W^p is a factor for some factor
    W of length n.

    Returns:
        Row {'n', 'value', 'capped', 'flag'}

    Raises:
        IncompleteLanguageError: the word cannot certify the answer
    """
    if n < 1:
        raise ValueError(f"Q(n) needs n >= 1, got {n}")
    symbols = word.symbols
    candidates = factor_set(symbols, n)
    if not candidates:
        raise IncompleteLanguageError(f"No factors of length {n}")
    if not unsafe and not is_certified(word, n):
        raise IncompleteLanguageError(f"Word does not certify the length-{n} language slice")

    best, capped = 0, False
    for W in sorted(candidates):
        p = 1
        while p < p_cap and W * (p + 1) in symbols:
            p += 1
        if p >= p_cap:
            capped = True
        best = max(best, p)

    if not unsafe and not capped and not is_certified(word, (best + 1) * n):
        raise IncompleteLanguageError(
            f"Absence of a {best + 1}-th power of length-{n} factors is not certified by the word")
    if capped:
        logger.warning(f"Q({n}) reached the cap {p_cap}")
    return {'n': n, 'value': best, 'capped': capped, 'flag': 'capped' if capped else 'brute'}


def alpha_finite_estimate(cf: ContinuedFraction, alpha: float, K: int, budget: int,
                          n_max: int = 120, p_cap: int = DEFAULT_P_CAP,
                          rule: Optional[BandRule] = None) -> PowerTable:
    """
    Ratios Q(q_k)/q_k^{alpha-1} for k <= K.

    Rows are brute force for q_k <= n_max while the certifying word fits
    the budget, and fall back to the structural lower bound Q(q_k) >= a_{k+1} beyond it.
    """
    table = convergents(cf)
    if K + 1 > cf.depth:
        raise InsufficientDepthError(f"alpha-finite estimate to K={K} needs {K + 1} entries")
    result = PowerTable(alpha=alpha)
    for k in range(0, K + 1):
        n = table.q[k]
        if k > 0 and n == table.q[k - 1]:
            continue
        witness = cf.word_entry(k + 1)
        row = None
        try:
            needed = certified_length(cf, (witness + 3) * n + 1)
            if n <= n_max and needed <= budget:
                word = certified_word(cf, (witness + 3) * n, budget)
                row = power_Q(word, n, p_cap)
                if not row['capped'] and row['value'] < witness:
                    raise DataIntegrityError(f"Q({n}) = {row['value']} is below the bound a_{k + 1} = {witness}")
        except (InsufficientDepthError, BudgetExceededError, IncompleteLanguageError):
            row = None
        if row is None:
            row = {'n': n, 'value': witness, 'capped': False, 'flag': 'witness'}
        row['k'] = k
        row['log_ratio'] = log_int(row['value']) - (alpha - 1) * log_int(n)
        result.rows.append(row)

    result.verdict, result.diagnostics = VerdictClassifier.classify(
        [row['log_ratio'] for row in result.rows], rule)
    return result


def equivalence_report(cf: ContinuedFraction, alpha: float, budget: int = 10 ** 7,
                       n_max: int = 120, p_cap: int = DEFAULT_P_CAP,
                       rule: Optional[BandRule] = None) -> EquivalenceReport:
    """
    Joint verdicts for the four alpha-type characterisations.

    The repulsive verdict is read reciprocally (a divergent ell_alpha proxy
    matches vanishing ratios elsewhere) before the agreement test.

    Args:
        cf: Normalized slope
        alpha: Exponent
        budget: Word budget for brute-force rows
        n_max: Largest n for brute-force repulsiveness rows
        p_cap: Power cap for Q
        rule: Banding thresholds

    Returns:
        EquivalenceReport
    """
    K = cf.depth - 2
    alpha_type = alpha_type_sequence(cf, alpha, rule)
    repetitivity = alpha_repetitive_estimate(cf, alpha, K, rule)
    repulsiveness = alpha_repulsive_estimate(cf, alpha, n_max, budget, rule)
    power = alpha_finite_estimate(cf, alpha, K, budget, n_max, p_cap, rule)

    verdicts = {
        'alpha-type': alpha_type.verdict,
        'alpha-repetitive': repetitivity.verdict,
        'alpha-repulsive': repulsiveness.verdict,
        'alpha-finite': power.verdict,
    }
    aligned = [verdicts['alpha-type'], verdicts['alpha-repetitive'],
               RECIPROCAL[verdicts['alpha-repulsive']], verdicts['alpha-finite']]
    agreement = VerdictClassifier.verdicts_agree(aligned)
    if not agreement:
        logger.warning(f"Verdicts disagree for {cf.label} at alpha={alpha}: {verdicts}")
    return EquivalenceReport(alpha, cf.label, verdicts, agreement, repetitivity, repulsiveness, power)


def cross_exponent_verdicts(cf: ContinuedFraction, beta: float, delta: float = 0.5,
                            rule: Optional[BandRule] = None) -> Dict[float, str]:
    """
    Trend verdicts of R(q_k)/q_k^gamma at gamma = beta - delta, beta, beta + delta.

    A bounded-positive verdict at beta should come with divergent ratios
    below beta and vanishing ratios above it.
    """
    table = convergents(cf)
    K = cf.depth - 2
    outcome = {}
    for gamma in (beta - delta, beta, beta + delta):
        log_ratios, log_scales = [], []
        for k in range(1, K + 1):
            n = table.q[k]
            log_ratios.append(log_int(table.repetitive_value(n)) - gamma * log_int(n))
            log_scales.append(log_int(n))
        outcome[gamma], _ = VerdictClassifier.classify(log_ratios, rule, log_scales=log_scales, trend='both')
    return outcome


def main():
    """Demonstrate the complexity functionals."""
    from src.core.continued_fractions import fibonacci_cf
    cf = fibonacci_cf(30)
    print(f"R(1..8) by formula: {[repetitive_formula(cf, n) for n in range(1, 9)]}")
    word = certified_word(cf, 200, 10 ** 6)
    print(f"R(1..8) by brute force: {[repetitive_bruteforce(word, n) for n in range(1, 9)]}")
    print(f"A_(1,3) = {repulsive_A(factors(word, 3), 1.0)}")
    report = equivalence_report(cf, 2.0, n_max=60)
    print(f"Fibonacci at alpha=2: {report.verdicts} agreement={report.agreement}")


if __name__ == "__main__":
    main()
