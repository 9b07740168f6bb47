"""
Diophantine Approximation Module

Jarník hit queries |theta - p_n/q_n| <= c q_n^(-beta) decided from the
two-sided convergent bound and, when that bound straddles the threshold,
by exact comparison against the enclosure of theta. Also hosts the
Monte-Carlo cover estimator for the dimension of alpha-type slopes and the
full-measure probe.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
from mpmath import mp

from src.core.continued_fractions import (ContinuedFraction, alpha_type_sequence,
                                          cf_from_rational, convergents,
                                          deepest_enclosure)
from src.core.exceptions import ConfigError, InsufficientDepthError
from src.utils.calculations import DIVERGENT, BandRule

logger = logging.getLogger(__name__)

RATIONAL_BITS = 256
HIT, MISS, UNDECIDED = 1, -1, 0


@dataclass
class JarnikQuery:
    """
    Indices n with |theta - p_n/q_n| <= c q_n^(-beta).

    Args:
        beta: Approximation order
        c: Constant
        depth: Largest index examined
        hits: Certified hits
        misses: Certified misses
        undecided: Indices the enclosure could not decide
        exact: Indices decided by the exact fallback
    """
    beta: float
    c: float
    depth: int
    hits: List[int] = field(default_factory=list)
    misses: List[int] = field(default_factory=list)
    undecided: List[int] = field(default_factory=list)
    exact: List[int] = field(default_factory=list)

    @property
    def last_hit(self) -> Optional[int]:
        return self.hits[-1] if self.hits else None

    def to_dict(self) -> Dict:
        return {
            'beta': self.beta,
            'c': self.c,
            'depth': self.depth,
            'hits': self.hits,
            'undecided': self.undecided,
            'exact': self.exact,
            'hit_rate': len(self.hits) / (self.depth + 1),
        }


@dataclass
class CoverEstimate:
    """
    Local-dimension estimate of the alpha-constrained cylinder tree.

    records holds one dict per level with the mean log cylinder diameter
    and the mean accumulated log mass over all sampled branches. The target
    is 1/(alpha + 1) for the all-levels tree and 2/(alpha + 1) once free
    levels are interleaved.
    """
    alpha: float
    c1: float
    c2: float
    free_levels: int
    constrained_levels: int
    samples: int
    dimension: float
    band: tuple
    records: List[Dict] = field(default_factory=list)

    @property
    def target(self) -> float:
        return (2 if self.free_levels else 1) / (self.alpha + 1)

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            'c1': self.c1,
            'c2': self.c2,
            'free_levels': self.free_levels,
            'constrained_levels': self.constrained_levels,
            'samples': self.samples,
            'dimension': self.dimension,
            'band': list(self.band),
            'target': self.target,
            'records': self.records,
        }


@dataclass
class LebesgueProbe:
    """Share of uniformly drawn slopes whose alpha-type verdict is not divergent."""
    alpha: float
    samples: int
    depth: int
    not_divergent: int
    fraction: Optional[float]
    verdict_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            'samples': self.samples,
            'depth': self.depth,
            'not_divergent': self.not_divergent,
            'fraction': self.fraction,
            'verdict_counts': dict(self.verdict_counts),
        }


def _integral_beta(beta: float) -> Optional[int]:
    return int(beta) if float(beta).is_integer() else None


def _compare(value: Fraction, q: int, beta: float, c: float) -> int:
    """
    Sign of value - c q^(-beta): exact for integral beta, else high-precision logs.

    Returns 0 when the logs cannot be separated.
    """
    b = _integral_beta(beta)
    if b is not None:
        threshold = Fraction(c) / Fraction(q) ** b
        return (value > threshold) - (value < threshold)
    digits = len(str(q)) + len(str(value.denominator)) + 30
    with mp.workdps(digits):
        lhs = mp.log(value.numerator) - mp.log(value.denominator)
        rhs = mp.log(mp.mpf(c)) - mp.mpf(beta) * mp.log(q)
        if abs(lhs - rhs) < mp.mpf(10) ** (20 - digits):
            return 0
        return 1 if lhs > rhs else -1


def jarnik_hits(cf: ContinuedFraction, beta: float, c: float, depth: Optional[int] = None) -> JarnikQuery:
    """
    Decide |theta - p_n/q_n| <= c q_n^(-beta) for n = 0..depth.

    1/((a_{n+1} + 2) q_n^2) < |theta - p_n/q_n| < 1/(a_{n+1} q_n^2) decides
    most indices; the rest fall back to the exact distance interval between
    p_n/q_n and the deepest enclosure of theta.

    Args:
        cf: Slope
        beta: Approximation order
        c: Constant, > 0
        depth: Largest index, at most N - 1

    Returns:
        JarnikQuery
    """
    if c <= 0:
        raise ConfigError(f"Jarnik constant must be > 0, got {c}")
    depth = cf.depth - 1 if depth is None else depth
    if depth > cf.depth - 1:
        raise InsufficientDepthError(f"Index {depth} needs entry a_{depth + 1}; slope has {cf.depth}")
    table = convergents(cf)
    enclosure = deepest_enclosure(cf, table)
    query = JarnikQuery(beta, c, depth)
    for n in range(depth + 1):
        q = table.q[n]
        a = cf.entries[n]
        if _compare(Fraction(1, a * q * q), q, beta, c) <= 0:
            query.hits.append(n)
            continue
        if _compare(Fraction(1, (a + 2) * q * q), q, beta, c) > 0:
            query.misses.append(n)
            continue
        outcome = _exact_decision(table.fraction(n), enclosure, q, beta, c)
        query.exact.append(n)
        if outcome == HIT:
            query.hits.append(n)
        elif outcome == MISS:
            query.misses.append(n)
        else:
            query.undecided.append(n)
    if query.undecided:
        logger.warning(f"{len(query.undecided)} Jarnik indices undecided for {cf.label}; extend the slope")
    return query


def _exact_decision(convergent: Fraction, enclosure, q: int, beta: float, c: float) -> int:
    ends = [abs(enclosure.lower - convergent), abs(enclosure.upper - convergent)]
    if enclosure.contains(convergent):
        return UNDECIDED
    near, far = min(ends), max(ends)
    if far > 0 and _compare(far, q, beta, c) <= 0:
        return HIT
    if near > 0 and _compare(near, q, beta, c) > 0:
        return MISS
    return UNDECIDED


def sandwich_violations(cf: ContinuedFraction) -> List[int]:
    """
    Indices n in 1..N-2 where the enclosure of theta leaves the band
    [1/((a_{n+1} + 2) q_n^2), 1/(a_{n+1} q_n^2)] around p_n/q_n.
    """
    table = convergents(cf)
    enclosure = deepest_enclosure(cf, table)
    bad = []
    for n in range(1, cf.depth - 1):
        q, a = table.q[n], cf.entries[n]
        convergent = table.fraction(n)
        ends = [abs(enclosure.lower - convergent), abs(enclosure.upper - convergent)]
        if not (Fraction(1, (a + 2) * q * q) <= min(ends) and max(ends) <= Fraction(1, a * q * q)):
            bad.append(n)
    return bad


def exact_hit_profile(cf: ContinuedFraction, beta: float, n_values: Sequence[int] = range(1, 9),
                      depth: Optional[int] = None) -> List[Dict]:
    """
    Hit counts over c in {n/(n+1)} and c = 1.

    Membership in Exact(beta) cannot be certified from a prefix; a profile
    whose hits persist at every c < 1 only fails to refute it.
    """
    rows = []
    for c in [Fraction(n, n + 1) for n in n_values] + [Fraction(1)]:
        query = jarnik_hits(cf, beta, float(c), depth)
        rows.append({
            'c': str(c),
            'hits': len(query.hits),
            'last_hit': query.last_hit,
            'hit_rate': len(query.hits) / (query.depth + 1),
            'undecided': len(query.undecided),
        })
    return rows


def inclusion_check(cf: ContinuedFraction, alpha: float, rule: Optional[BandRule] = None) -> Dict:
    """
    Hits of order alpha + 1 at the constant 2 / A, with A the windowed limsup of a_n q_{n-1}^{1-alpha}.

    Every level whose entry reaches half the limsup is a hit, so an
    alpha-type slope keeps producing hits up to its depth.
    """
    report = alpha_type_sequence(cf, alpha, rule)
    A = report.window_max
    if not A > 0 or math.isinf(A):
        return {'alpha': alpha, 'threshold': None, 'hits': [], 'trailing_hits': 0, 'holds': False}
    threshold = 2 / A
    query = jarnik_hits(cf, alpha + 1, threshold)
    trailing = [n for n in query.hits if n >= query.depth // 2]
    return {
        'alpha': alpha,
        'threshold': threshold,
        'hits': query.hits,
        'trailing_hits': len(trailing),
        'holds': len(trailing) > 0,
    }


def uniform_rational_cf(rng: np.random.Generator, depth: int) -> ContinuedFraction:
    """Continued fraction of a uniform 256-bit rational in (0, 1), truncated to depth entries."""
    denominator = 1 << RATIONAL_BITS
    while True:
        numerator = int.from_bytes(rng.bytes(RATIONAL_BITS // 8), 'big')
        if numerator:
            break
    g = math.gcd(numerator, denominator)
    return cf_from_rational(numerator // g, denominator // g, max_depth=depth)


def lebesgue_probe(alpha: float, samples: int, depth: int, seed: int = 0,
                   rule: Optional[BandRule] = None) -> LebesgueProbe:
    """
    Fraction of uniform slopes whose alpha-type verdict is not divergent.

    samples=0 gives an explicit empty result with fraction None.
    """
    if samples < 0 or depth < 1:
        raise ConfigError(f"Need samples >= 0 and depth >= 1, got {samples}, {depth}")
    rng = np.random.default_rng(seed)
    counts: Dict[str, int] = {}
    for _ in range(samples):
        cf = uniform_rational_cf(rng, depth)
        verdict = alpha_type_sequence(cf, alpha, rule).verdict
        counts[verdict] = counts.get(verdict, 0) + 1
    not_divergent = samples - counts.get(DIVERGENT, 0)
    fraction = not_divergent / samples if samples else None
    logger.info(f"Lebesgue probe alpha={alpha}: {not_divergent}/{samples} not divergent")
    return LebesgueProbe(alpha, samples, depth, not_divergent, fraction, counts)


def _entry_range(q: int, alpha: float, c1: float, c2: float):
    with mp.workdps(len(str(q)) * max(1, math.ceil(alpha)) + 30):
        scale = mp.mpf(q) ** (mp.mpf(alpha) - 1)
        lo = max(1, int(mp.ceil(mp.mpf(c1) * scale)))
        hi = max(1, int(mp.ceil(mp.mpf(c2) * scale)))
    return lo, hi


def _log_cylinder(q: int, q_prev: int) -> float:
    """-log of the cylinder length 1/(q_n (q_n + q_{n-1}))."""
    return math.log(q) + math.log(q + q_prev)


def _sample_branch(rng: np.random.Generator, alpha: float, c1: float, c2: float,
                   free_levels: int, constrained_levels: int):
    """
    One branch: free entries from a uniform slope, then alpha-constrained entries.

    The log mass is -log of the free cylinder plus the log branch count of
    every constrained level above the last one. Returns that log mass, the
    log scale of the final cluster and the per-level (log-scale, log-mass) pairs.
    """
    entries = []
    if free_levels:
        while len(entries) < free_levels:
            entries = list(uniform_rational_cf(rng, free_levels).entries)
    q_prev, q = 0, 1
    for a in entries[:free_levels]:
        q_prev, q = q, a * q + q_prev
    log_mass = _log_cylinder(q, q_prev) if free_levels else 0.0
    levels = []
    for step in range(constrained_levels):
        lo, hi = _entry_range(q, alpha, c1, c2)
        width = hi - lo + 1
        draw = int(rng.integers(0, 1 << 53, dtype=np.int64))
        a = lo + (draw * width >> 53)
        q_next = a * q + q_prev
        # children of this level fill an interval of length about 1/(q (q + q_next))
        log_scale = math.log(q) + math.log(q + q_next)
        levels.append((log_scale, log_mass))
        if step < constrained_levels - 1:
            log_mass += math.log(width)
        q_prev, q = q, q_next
    return log_mass, levels[-1][0], levels


def box_dimension_estimate(alpha: float, c1: float, c2: float, depth: int, samples: int,
                           seed: int = 0, free_levels: int = 0) -> CoverEstimate:
    """
    Monte-Carlo local dimension of the tree of slopes with
    a_{n+1} in [max(1, ceil(c1 q_n^{alpha-1})), ceil(c2 q_n^{alpha-1})].

    Each branch has depth levels. By default every level is constrained, the
    Cantor tree of the admissible ranges: its log mass is the accumulated log
    branch count and the estimate is the ratio of mean log mass to mean
    -log diameter of the last cluster. That tree grows doubly exponentially
    and its dimension is 1/(alpha + 1); it is 0 when every range holds a
    single entry.

    free_levels > 0 draws the leading levels from a uniform slope and
    constrains only the remaining ones, the interleaved construction whose
    dimension is 2/(alpha + 1).

    Args:
        alpha: Growth exponent, > 1
        c1, c2: Range constants, 0 < c1 <= c2
        depth: Levels per branch
        samples: Number of branches
        seed: Master seed; branch generators are spawned from it
        free_levels: Leading uniform levels, 0 <= free_levels < depth

    Returns:
        CoverEstimate
    """
    if alpha <= 1 or not 0 < c1 <= c2 or depth < 1 or samples < 1 or not 0 <= free_levels < depth:
        raise ConfigError(f"Invalid cover parameters alpha={alpha}, c1={c1}, c2={c2}, "
                          f"depth={depth}, samples={samples}, free_levels={free_levels}")
    constrained_levels = depth - free_levels
    children = np.random.SeedSequence(seed).spawn(samples)
    masses, scales = [], []
    per_level: Dict[int, List] = {}
    for child in children:
        rng = np.random.default_rng(child)
        log_mass, log_scale, levels = _sample_branch(rng, alpha, c1, c2, free_levels, constrained_levels)
        masses.append(log_mass)
        scales.append(log_scale)
        for index, pair in enumerate(levels):
            per_level.setdefault(free_levels + index, []).append(pair)

    masses = np.array(masses, dtype=float)
    scales = np.array(scales, dtype=float)
    dimension = float(masses.mean() / scales.mean())
    residual = masses - dimension * scales
    error = float(2 * residual.std() / (scales.mean() * math.sqrt(samples)))
    records = [{
        'level': level,
        'branches': len(pairs),
        'mean_log_diameter': float(-np.mean([p[0] for p in pairs])),
        'mean_log_mass': float(np.mean([p[1] for p in pairs])),
    } for level, pairs in sorted(per_level.items())]
    estimate = CoverEstimate(alpha, c1, c2, free_levels, constrained_levels, samples,
                             dimension, (dimension - error, dimension + error), records)
    if dimension == 0:
        logger.info(f"Cover estimate for alpha={alpha} is 0: every admissible range holds one entry")
    logger.info(f"Cover estimate alpha={alpha}: {dimension:.4f} +- {error:.4f} (target {estimate.target:.4f})")
    return estimate


def main():
    """Demonstrate Jarnik queries and the dimension estimator."""
    from src.core.continued_fractions import fibonacci_cf, synthesize_alpha_cf
    synth = synthesize_alpha_cf(2.0, 1.0, 8)
    print(f"Synthesized alpha=2 hits at beta=3: {jarnik_hits(synth, 3, 1).hits}")
    print(f"Fibonacci hits at beta=3: {jarnik_hits(fibonacci_cf(30), 3, 1).hits}")
    for alpha in (1.5, 2.0, 3.0):
        for free in (0, 7):
            estimate = box_dimension_estimate(alpha, 0.5, 2.0, 8, 200, seed=1, free_levels=free)
            print(f"alpha={alpha}, free_levels={free}: {estimate.dimension:.3f} (target {estimate.target:.3f})")
    print(f"Lebesgue probe: {lebesgue_probe(2.0, 100, 25, seed=1).fraction}")


if __name__ == "__main__":
    main()
