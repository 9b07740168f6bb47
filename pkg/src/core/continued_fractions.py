"""
Continued Fraction Engine

This module holds the exact continued-fraction arithmetic everything else
is built on: convergent tables, rational enclosures of the slope, the
alpha-type sequence, synthesis of slopes with a prescribed growth law and
the theta <-> 1 - theta correspondence.

Entry lists are stored in full form: the first stored entry is the first
continued fraction digit of theta, so a slope below 1/2 has a first entry
of at least 2. Entry lists are prefixes of infinite expansions unless they
were produced from a rational.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from src.core.exceptions import ConfigError, InsufficientDepthError
from src.utils.calculations import BandRule, VerdictClassifier, safe_exp

logger = logging.getLogger(__name__)

KINDS = ('explicit', 'synthesized', 'random', 'rational')

GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class ContinuedFraction:
    """
    Finite prefix a_1..a_N of the continued fraction of a slope.

    Args:
        entries: Positive integers, first entry is the full first digit
        kind: Provenance tag, one of KINDS
        alpha: Growth exponent for synthesized slopes
        c: Growth constant for synthesized slopes
        seed: Generator seed for random slopes
    """
    entries: Tuple[int, ...]
    kind: str = 'explicit'
    alpha: Optional[float] = None
    c: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        if not entries:
            raise ConfigError("Continued fraction needs at least one entry")
        bad = [i + 1 for i, a in enumerate(entries) if a < 1]
        if bad:
            raise ConfigError(f"Continued fraction entries must be >= 1, offending positions: {bad[:5]}")
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown continued fraction kind '{self.kind}'")
        object.__setattr__(self, 'entries', entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def depth(self) -> int:
        return len(self.entries)

    @property
    def is_normalized(self) -> bool:
        """True when theta < 1/2, the form all word-level formulas assume."""
        return self.entries[0] >= 2

    def entry(self, n: int) -> int:
        """Stored entry a_n, 1-based."""
        if n < 1 or n > len(self.entries):
            raise InsufficientDepthError(f"Entry a_{n} requested but only {len(self.entries)} entries are stored")
        return self.entries[n - 1]

    def word_entry(self, k: int) -> int:
        """
        Entry in the substitution convention: the first digit minus one,
        later digits unchanged.
        """
        self.require_normalized()
        a = self.entry(k)
        return a - 1 if k == 1 else a

    def require_normalized(self) -> None:
        if not self.is_normalized:
            raise ConfigError(
                "Word-level formulas assume theta < 1/2 (first entry >= 2); "
                "use complement_cf to move to the other half"
            )

    @property
    def label(self) -> str:
        if self.kind == 'synthesized':
            return f"synthesized(alpha={self.alpha:g},c={self.c:g})"
        if self.kind == 'random':
            return f"random(seed={self.seed})"
        head = ','.join(str(a) for a in self.entries[:6])
        tail = ',...' if len(self.entries) > 6 else ''
        return f"[{head}{tail}]"

    def to_json(self) -> Dict:
        """Entries as decimal strings; they can exceed 64 bits."""
        return {
            'kind': self.kind,
            'alpha': self.alpha,
            'c': self.c,
            'seed': self.seed,
            'entries': [str(a) for a in self.entries],
        }

    @classmethod
    def from_json(cls, payload: Dict) -> 'ContinuedFraction':
        return cls(
            entries=tuple(int(a) for a in payload['entries']),
            kind=payload.get('kind', 'explicit'),
            alpha=payload.get('alpha'),
            c=payload.get('c'),
            seed=payload.get('seed'),
        )

    def truncated(self, depth: int) -> 'ContinuedFraction':
        return ContinuedFraction(self.entries[:depth], self.kind, self.alpha, self.c, self.seed)


@dataclass(frozen=True)
class ConvergentTable:
    """Numerators p_0..p_N and denominators q_0..q_N."""
    p: Tuple[int, ...]
    q: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.q)

    def fraction(self, n: int) -> Fraction:
        return Fraction(self.p[n], self.q[n])

    def largest_index_at_most(self, n: int) -> int:
        """Largest k with q_k <= n; ties between equal q values go to the larger k."""
        k = -1
        for i, qi in enumerate(self.q):
            if qi <= n:
                k = i
            else:
                break
        return k

    def repetitive_value(self, n: int) -> int:
        """
        R(n): q_{k+1} + 2 q_k - 1 at n = q_k, and R(n - 1) + 1 in between.

        Uses the largest k with q_k <= n, so R(n) = R(q_k) + n - q_k.
        """
        if n < 0:
            raise ValueError(f"R(n) needs n >= 0, got {n}")
        if n == 0:
            return 0
        k = self.largest_index_at_most(n)
        if k + 1 >= len(self.q):
            raise InsufficientDepthError(f"R({n}) needs q_{k + 1}; only {len(self.q) - 1} levels are stored")
        return self.q[k + 1] + 2 * self.q[k] - 1 + (n - self.q[k])

    def check_invariants(self, entries: Sequence[int]) -> List[str]:
        """
        Return a list of violated laws (empty when all hold).

        Checks the recursion, coprimality, monotonicity and the golden
        growth bound q_{k+j} > q_k * gamma^j / (2 sqrt 5).
        """
        problems = []
        p, q = self.p, self.q
        if q[0] != 1 or p[0] != 0 or p[1] != 1 or q[1] != entries[0]:
            problems.append("base case")
        for n in range(2, len(q)):
            a = entries[n - 1]
            if q[n] != a * q[n - 1] + q[n - 2] or p[n] != a * p[n - 1] + p[n - 2]:
                problems.append(f"recursion at n={n}")
        for n in range(len(q)):
            if math.gcd(p[n], q[n]) != 1:
                problems.append(f"gcd at n={n}")
        for n in range(1, len(q) - 1):
            if q[n + 1] <= q[n]:
                problems.append(f"monotonicity at n={n}")
        dps = len(str(q[-1])) + 30
        with mp.workdps(dps):
            gamma = (1 + mp.sqrt(5)) / 2
            scale = 2 * mp.sqrt(5)
            for k in range(1, len(q)):
                for j in range(0, len(q) - k):
                    if not mp.mpf(q[k + j]) * scale > mp.mpf(q[k]) * gamma ** j:
                        problems.append(f"growth bound at k={k}, j={j}")
        return problems


@dataclass(frozen=True)
class ThetaEnclosure:
    """Open interval between two consecutive convergents."""
    lower: Fraction
    upper: Fraction
    depth: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        return self.lower < value < self.upper

    def ceiling_of_multiple(self, n: int) -> Optional[int]:
        """
        Exact ceil(theta * n) when the enclosure decides it, else None.

        theta * n lies in the open interval (lower * n, upper * n); the
        ceiling is floor(lower * n) + 1 provided upper * n does not pass it.
        """
        a, b = self.lower.numerator, self.lower.denominator
        c, d = self.upper.numerator, self.upper.denominator
        candidate = (n * a) // b + 1
        if n * c <= candidate * d:
            return candidate
        return None


@dataclass
class AlphaTypeReport:
    """
    The sequence s_n = a_n q_{n-1}^{1-alpha} with its banded verdict.
    """
    alpha: float
    s: List[float]
    log_s: List[float]
    window_max: float
    window_min: float
    verdict: str
    rule: BandRule = field(default_factory=BandRule)

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            's': self.s,
            'window_max': self.window_max,
            'window_min': self.window_min,
            'verdict': self.verdict,
            'rule': self.rule.to_dict(),
        }


def convergents(cf: ContinuedFraction) -> ConvergentTable:
    """
    Build the convergent table of a continued fraction.

    Args:
        cf: Continued fraction prefix

    Returns:
        ConvergentTable of length N + 1
    """
    p = [0, 1]
    q = [1, cf.entries[0]]
    for a in cf.entries[1:]:
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return ConvergentTable(tuple(p), tuple(q))


def enclose_theta(cf: ContinuedFraction, depth: int,
                  table: Optional[ConvergentTable] = None) -> ThetaEnclosure:
    """
    Bracket theta between the convergents at depth and depth + 1.

    Args:
        cf: Continued fraction prefix
        depth: Index of the first convergent, 0 <= depth <= N - 1
        table: Precomputed convergents of cf

    Returns:
        ThetaEnclosure containing every extension of cf
    """
    if depth < 0 or depth > cf.depth - 1:
        raise InsufficientDepthError(f"Enclosure depth {depth} out of range 0..{cf.depth - 1}")
    table = table or convergents(cf)
    first, second = table.fraction(depth), table.fraction(depth + 1)
    return ThetaEnclosure(min(first, second), max(first, second), depth)


def deepest_enclosure(cf: ContinuedFraction, table: Optional[ConvergentTable] = None) -> ThetaEnclosure:
    return enclose_theta(cf, cf.depth - 1, table)


def alpha_type_sequence(cf: ContinuedFraction, alpha: float,
                        rule: Optional[BandRule] = None) -> AlphaTypeReport:
    """
    Evaluate s_n = a_n q_{n-1}^{1-alpha} for n = 1..N and band the tail.

    The logarithm is taken from the exact integers so huge denominators
    never pass through a float.
    """
    if alpha < 1:
        raise ConfigError(f"alpha must be >= 1, got {alpha}")
    rule = rule or BandRule()
    table = convergents(cf)
    log_s = []
    for n in range(1, cf.depth + 1):
        log_s.append(math.log(cf.entries[n - 1]) + (1 - alpha) * math.log(table.q[n - 1]))
    verdict, diagnostics = VerdictClassifier.classify(log_s, rule)
    report = AlphaTypeReport(
        alpha=alpha,
        s=[safe_exp(v) for v in log_s],
        log_s=log_s,
        window_max=safe_exp(diagnostics['window_max']),
        window_min=safe_exp(diagnostics['window_min']),
        verdict=verdict,
        rule=rule,
    )
    logger.debug(f"alpha-type {cf.label} at alpha={alpha}: {verdict}")
    return report


def synthesis_entry(q: int, alpha: float, c: float) -> int:
    """max(1, round(c q^(alpha-1))) evaluated with enough digits for q."""
    dps = len(str(q)) * max(1, math.ceil(alpha)) + 30
    with mp.workdps(dps):
        value = mp.mpf(c) * mp.mpf(q) ** (mp.mpf(alpha) - 1)
        return max(1, int(mp.nint(value)))


def synthesize_alpha_cf(alpha: float, c: float, max_depth: int,
                        q_cap: Optional[int] = None, first_entry: int = 2) -> ContinuedFraction:
    """
    Build a slope with a_{n+1} = max(1, round(c q_n^(alpha-1))).

    Args:
        alpha: Growth exponent, > 1
        c: Growth constant, > 0
        max_depth: Maximum number of entries
        q_cap: Stop once the last denominator exceeds this
        first_entry: Stored first entry; the default 2 keeps theta < 1/2

    Returns:
        Synthesized ContinuedFraction
    """
    if alpha <= 1 or c <= 0 or max_depth < 1 or first_entry < 1:
        raise ConfigError(f"Invalid synthesis parameters alpha={alpha}, c={c}, depth={max_depth}")
    entries = [first_entry]
    q_prev, q_last = 1, first_entry
    while len(entries) < max_depth:
        if q_cap is not None and q_last > q_cap:
            break
        a = synthesis_entry(q_last, alpha, c)
        entries.append(a)
        q_prev, q_last = q_last, a * q_last + q_prev
    logger.info(f"Synthesized alpha={alpha} c={c} slope with {len(entries)} entries")
    return ContinuedFraction(tuple(entries), kind='synthesized', alpha=alpha, c=c)


def complement_cf(cf: ContinuedFraction) -> ContinuedFraction:
    """
    Continued fraction of 1 - theta.

    [1, a_2, a_3, ...] maps to [a_2 + 1, a_3, ...] and [d, a_2, ...] with
    d >= 2 maps to [1, d - 1, a_2, ...]; the two rules are inverse.
    """
    if cf.depth < 2:
        raise InsufficientDepthError("complement_cf needs at least two entries")
    first, rest = cf.entries[0], cf.entries[1:]
    if first == 1:
        entries = (rest[0] + 1,) + tuple(rest[1:])
    else:
        entries = (1, first - 1) + tuple(rest)
    kind = 'rational' if cf.kind == 'rational' else 'explicit'
    return ContinuedFraction(entries, kind=kind)


def fibonacci_cf(depth: int = 40) -> ContinuedFraction:
    """theta = (3 - sqrt 5) / 2 = [0; 2, 1, 1, ...]."""
    return ContinuedFraction((2,) + (1,) * (depth - 1))


def random_cf(seed: int, depth: int, max_entry: int = 5) -> ContinuedFraction:
    """Random normalized slope with entries drawn uniformly from 1..max_entry."""
    rng = np.random.default_rng(seed)
    draws = rng.integers(1, max_entry + 1, size=depth)
    entries = [int(draws[0]) + 1] + [int(a) for a in draws[1:]]
    return ContinuedFraction(tuple(entries), kind='random', seed=seed)


def cf_from_rational(numerator: int, denominator: int,
                     max_depth: Optional[int] = None) -> ContinuedFraction:
    """
    Euclidean expansion of numerator/denominator in (0, 1).

    The expansion ends with an entry >= 2 unless it has a single entry,
    which is the canonical form for rationals.
    """
    if not 0 < numerator < denominator:
        raise ConfigError(f"Expected a rational in (0, 1), got {numerator}/{denominator}")
    entries = []
    a, b = denominator, numerator
    while b and (max_depth is None or len(entries) < max_depth):
        entries.append(a // b)
        a, b = b, a % b
    return ContinuedFraction(tuple(entries), kind='rational')


def main():
    """Demonstrate the continued fraction engine."""
    cf = fibonacci_cf(12)
    table = convergents(cf)
    print(f"Fibonacci slope {cf.label}")
    print(f"q: {list(table.q)}")
    print(f"Enclosure at depth 10: {enclose_theta(cf, 10, table)}")

    synth = synthesize_alpha_cf(2.0, 1.0, 7)
    print(f"\nSynthesized slope entries: {list(synth.entries)}")
    report = alpha_type_sequence(synth, 2.0)
    print(f"alpha-type verdict at alpha=2: {report.verdict}")


if __name__ == "__main__":
    main()
