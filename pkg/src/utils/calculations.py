"""
Verdict Calculations Module

Shared decision rules for limit-type quantities: the banding rule used by
every limsup/liminf proxy, the least-squares trend detector and the small
log-domain helpers that keep huge integers out of floating point.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

VANISHING = 'vanishing'
BOUNDED = 'bounded-positive'
DIVERGENT = 'divergent'
INCONCLUSIVE = 'inconclusive'
VERDICTS = (VANISHING, BOUNDED, DIVERGENT, INCONCLUSIVE)

# verdict of a quantity that behaves like the reciprocal of another
RECIPROCAL = {VANISHING: DIVERGENT, DIVERGENT: VANISHING, BOUNDED: BOUNDED, INCONCLUSIVE: INCONCLUSIVE}


@dataclass(frozen=True)
class BandRule:
    """
    Thresholds of the banding rule.

    Args:
        band_low: Window maximum below this means vanishing
        band_high: Window minimum above this (and increasing) means divergent
        max_ratio: Largest max/min ratio still called bounded
        slope_tolerance: Log-log slope treated as flat by the trend fit
    """
    band_low: float = 0.01
    band_high: float = 100.0
    max_ratio: float = 100.0
    slope_tolerance: float = 0.1

    def __post_init__(self):
        if not 0 < self.band_low < self.band_high:
            raise ValueError("Band must satisfy 0 < band_low < band_high")
        if self.max_ratio < 1 or self.slope_tolerance < 0:
            raise ValueError("max_ratio must be >= 1 and slope_tolerance >= 0")

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def safe_exp(value: float) -> float:
    """exp that saturates to inf instead of raising."""
    try:
        return math.exp(value)
    except OverflowError:
        return float('inf')


def log_int(n: int) -> float:
    """Natural log of an arbitrarily large positive integer."""
    if n <= 0:
        raise ValueError(f"log_int needs a positive integer, got {n}")
    return math.log(n)


def log_power_sum(terms: Sequence[float]) -> float:
    """log(sum(exp(t))) over log-domain terms."""
    finite = [t for t in terms if t != float('-inf')]
    if not finite:
        return float('-inf')
    top = max(finite)
    if top == float('inf'):
        return top
    return top + math.log(sum(math.exp(t - top) for t in finite))


class VerdictClassifier:
    """
    Classify finite samples of a limit-type quantity.
    """

    @staticmethod
    def trailing_window(values: Sequence[float]) -> List[float]:
        """Trailing half of the sequence, at least one element."""
        values = list(values)
        if not values:
            return []
        start = len(values) // 2
        return values[start:]

    @staticmethod
    def detect_trend(log_values: Sequence[float],
                     log_scales: Optional[Sequence[float]] = None,
                     min_periods: int = 3,
                     tolerance: float = 0.1) -> Tuple[str, float]:
        """
        Detect the trend of log values against log scales.

        Args:
            log_values: Natural logs of the sampled quantity
            log_scales: Natural logs of the scale (defaults to log of the index)
            min_periods: Minimum finite points to fit
            tolerance: Slopes within +-tolerance count as stable

        Returns:
            ('increasing' | 'decreasing' | 'stable' | 'insufficient_data', slope)
        """
        if log_scales is None:
            log_scales = [math.log(i + 1) for i in range(len(log_values))]
        points = [(x, y) for x, y in zip(log_scales, log_values)
                  if math.isfinite(x) and math.isfinite(y)]
        if len(points) < min_periods:
            return 'insufficient_data', 0.0

        x = np.array([p[0] for p in points], dtype=float)
        y = np.array([p[1] for p in points], dtype=float)
        if np.ptp(x) == 0:
            return 'insufficient_data', 0.0

        slope = float(np.polyfit(x, y, 1)[0])

        if slope > tolerance:
            return 'increasing', slope
        elif slope < -tolerance:
            return 'decreasing', slope
        else:
            return 'stable', slope

    @staticmethod
    def classify(log_values: Sequence[float], rule: Optional[BandRule] = None,
                 log_scales: Optional[Sequence[float]] = None,
                 trend: Optional[str] = None) -> Tuple[str, Dict]:
        """
        Band the trailing half of a sequence given in the log domain.

        Vanishing if the window maximum is below band_low, divergent if the
        window minimum is above band_high and the window increases,
        bounded-positive if the window sits inside the band with a max/min
        ratio of at most max_ratio, else inconclusive. With trend set to
        'up', 'down' or 'both', a log-log slope beyond the tolerance in that
        direction decides divergent or vanishing before the band is checked.

        Returns:
            (verdict, diagnostics)
        """
        rule = rule or BandRule()
        window = VerdictClassifier.trailing_window(log_values)
        diagnostics = {
            'window_max': float('nan'),
            'window_min': float('nan'),
            'slope': None,
            'trend': None,
            'points': len(window),
        }
        if not window:
            return INCONCLUSIVE, diagnostics

        top, bottom = max(window), min(window)
        diagnostics['window_max'] = top
        diagnostics['window_min'] = bottom
        low, high = math.log(rule.band_low), math.log(rule.band_high)
        increasing = len(window) == 1 or window[-1] > window[0]

        if top < low:
            return VANISHING, diagnostics
        if bottom > high and increasing:
            return DIVERGENT, diagnostics

        if trend:
            scales = None
            if log_scales is not None:
                scales = VerdictClassifier.trailing_window(log_scales)
            direction, slope = VerdictClassifier.detect_trend(
                window, scales, tolerance=rule.slope_tolerance)
            diagnostics['slope'] = slope
            diagnostics['trend'] = direction
            if direction == 'increasing' and trend in ('up', 'both') and window[-1] > window[0]:
                return DIVERGENT, diagnostics
            if direction == 'decreasing' and trend in ('down', 'both') and window[-1] < window[0]:
                return VANISHING, diagnostics

        if low <= bottom and top <= high and top - bottom <= math.log(rule.max_ratio):
            return BOUNDED, diagnostics
        return INCONCLUSIVE, diagnostics

    @staticmethod
    def verdicts_agree(verdicts: Sequence[str]) -> bool:
        """True when all verdicts are equal and none is inconclusive."""
        verdicts = list(verdicts)
        return bool(verdicts) and INCONCLUSIVE not in verdicts and len(set(verdicts)) == 1


def main():
    """Demonstrate the verdict classifier."""
    decaying = [math.log(1 / (k + 1)) * 4 for k in range(10)]
    flat = [0.1 * (-1) ** k for k in range(10)]
    growing = [0.5 * math.log(k + 1) for k in range(10)]

    print(f"Decaying: {VerdictClassifier.classify(decaying)[0]}")
    print(f"Flat: {VerdictClassifier.classify(flat)[0]}")
    print(f"Growing: {VerdictClassifier.classify(growing, trend='up')[0]}")


if __name__ == "__main__":
    main()
