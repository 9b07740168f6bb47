"""
Slope Factory

Builds the continued fraction an experiment runs on from its slope
configuration, plus the fixed panel of reference slopes the invariant
suite checks against.
"""

import logging
from typing import Dict, Optional

from src.core.continued_fractions import (ContinuedFraction, fibonacci_cf,
                                          random_cf, synthesize_alpha_cf)
from src.core.exceptions import ConfigError
from src.utils.config import SlopeConfig

logger = logging.getLogger(__name__)

# Synthesized denominators square at every level for alpha = 2; an uncapped
# depth-40 synthesis would never finish.
DEFAULT_Q_CAP = 10 ** 200


def build_slope(config: SlopeConfig) -> ContinuedFraction:
    """
    Build the slope described by a slope configuration.

    Args:
        config: Slope section of the experiment configuration

    Returns:
        ContinuedFraction
    """
    if config.kind == 'fibonacci':
        cf = fibonacci_cf(config.depth)
    elif config.kind == 'explicit':
        cf = ContinuedFraction(tuple(config.entries))
    elif config.kind == 'synthesized':
        q_cap = config.q_cap if config.q_cap is not None else DEFAULT_Q_CAP
        cf = synthesize_alpha_cf(config.alpha, config.c, config.depth, q_cap)
    elif config.kind == 'random':
        cf = random_cf(config.seed, config.depth, config.max_entry)
    else:
        raise ConfigError(f"Unknown slope kind '{config.kind}'")
    logger.info(f"Built slope {cf.label} with {cf.depth} entries")
    return cf


def standard_slopes(seed: int = 0, synthesized_depth: int = 10,
                    fibonacci_depth: int = 40) -> Dict[str, ContinuedFraction]:
    """
    Reference panel: Fibonacci, synthesized alpha = 1.5 and 2, and two random slopes.

    Returns:
        Mapping from panel name to slope, in a fixed order
    """
    return {
        'fibonacci': fibonacci_cf(fibonacci_depth),
        'synthesized-1.5': synthesize_alpha_cf(1.5, 1.0, synthesized_depth + 2),
        'synthesized-2': synthesize_alpha_cf(2.0, 1.0, synthesized_depth),
        'random-a': random_cf(seed, 30),
        'random-b': random_cf(seed + 1, 30),
    }


def describe_slope(cf: ContinuedFraction, entries: Optional[int] = 12) -> Dict:
    """Short JSON-ready description of a slope."""
    shown = cf.entries if entries is None else cf.entries[:entries]
    return {
        'label': cf.label,
        'kind': cf.kind,
        'depth': cf.depth,
        'entries': [str(a) for a in shown],
    }
