"""
Sturmian Word Generation

Two independent constructions of words in the Sturmian subshift of a
slope: the mechanical (rotation) formula evaluated with exact ceilings, and
the tau/rho substitution words R_k, L_k whose limits are the x- and
y-limit words.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from src.core.continued_fractions import (ContinuedFraction, ConvergentTable,
                                          complement_cf, convergents,
                                          deepest_enclosure)
from src.core.exceptions import (BudgetExceededError, ConfigError,
                                 EnclosureExhaustedError, InsufficientDepthError)

logger = logging.getLogger(__name__)

DEFAULT_WORD_BUDGET = 10 ** 7

_FLIP = str.maketrans('01', '10')


@dataclass(frozen=True)
class BinaryWord:
    """
    Finite word over {0, 1}.

    Args:
        symbols: The word as an ASCII string of 0/1
        slope: Slope of the subshift the word belongs to, when known
    """
    symbols: str
    slope: Optional[ContinuedFraction] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.symbols.strip('01'):
            raise ConfigError("Binary words may only contain the symbols 0 and 1")

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return self.symbols

    def prefix(self, length: int) -> 'BinaryWord':
        return BinaryWord(self.symbols[:length], self.slope)

    def shift(self, k: int) -> 'BinaryWord':
        """sigma^k: drop the first k symbols."""
        return BinaryWord(self.symbols[k:], self.slope)


@dataclass(frozen=True)
class SubstitutionPair:
    """
    The words R_k and L_k at level k; R and L are None when lazy.
    """
    k: int
    length_R: int
    length_L: int
    R: Optional[str] = None
    L: Optional[str] = None

    @property
    def materialized(self) -> bool:
        return self.R is not None

    def to_dict(self) -> dict:
        return {
            'k': self.k,
            'length_R': str(self.length_R),
            'length_L': str(self.length_L),
            'R': self.R,
            'L': self.L,
        }


def involution_eta(word: BinaryWord) -> BinaryWord:
    """Exchange 0 and 1 pointwise."""
    flipped_slope = None
    if word.slope is not None and word.slope.depth >= 2:
        flipped_slope = complement_cf(word.slope)
    return BinaryWord(word.symbols.translate(_FLIP), flipped_slope)


def mechanical_prefix(cf: ContinuedFraction, length: int,
                      budget: int = DEFAULT_WORD_BUDGET) -> BinaryWord:
    """
    First symbols x_1..x_length of x_n = ceil(theta (n + 1)) - ceil(theta n).

    Args:
        cf: Slope
        length: Number of symbols
        budget: Word budget

    Returns:
        BinaryWord carrying the slope

    Raises:
        EnclosureExhaustedError: cf is too short to resolve some ceiling
    """
    if length < 0:
        raise ValueError(f"Prefix length must be >= 0, got {length}")
    if length > budget:
        raise BudgetExceededError(f"Mechanical prefix of length {length} exceeds word budget {budget}")
    if length == 0:
        return BinaryWord('', cf)

    enclosure = deepest_enclosure(cf)
    ceilings = []
    for n in range(1, length + 2):
        value = enclosure.ceiling_of_multiple(n)
        if value is None:
            raise EnclosureExhaustedError(
                f"ceil(theta * {n}) is not decided by {cf.depth} entries; extend the continued fraction")
        ceilings.append(value)
    symbols = ''.join('1' if b - a else '0' for a, b in zip(ceilings, ceilings[1:]))
    return BinaryWord(symbols, cf)


def _tau_power(word: str, a: int) -> str:
    return word.translate({ord('1'): '1' + '0' * a}) if a else word


def _rho_power(word: str, a: int) -> str:
    return word.translate({ord('0'): '0' + '1' * a}) if a else word


def _substitute(seed: str, exponents) -> str:
    """Apply tau^{e_1} rho^{e_2} ... tau^{e_{2k-1}} rho^{e_{2k}} right to left."""
    word = seed
    for index in range(len(exponents) - 1, -1, -1):
        if index % 2 == 0:
            word = _tau_power(word, exponents[index])
        else:
            word = _rho_power(word, exponents[index])
    return word


def substitution_words(cf: ContinuedFraction, k: int, materialize: Optional[bool] = None,
                       budget: int = DEFAULT_WORD_BUDGET,
                       table: Optional[ConvergentTable] = None) -> SubstitutionPair:
    """
    Build R_k and L_k by iterated substitution.

    Args:
        cf: Normalized slope (theta < 1/2) with at least 2k entries
        k: Level, k >= 0
        materialize: True forces the words (budget errors raise), False
            returns lengths only, None materializes when within budget
        budget: Word budget
        table: Precomputed convergents

    Returns:
        SubstitutionPair
    """
    if k < 0:
        raise ValueError(f"Substitution level must be >= 0, got {k}")
    if k == 0:
        if materialize is False:
            return SubstitutionPair(0, 1, 1)
        return SubstitutionPair(0, 1, 1, "0", "1")
    cf.require_normalized()
    if cf.depth < 2 * k:
        raise InsufficientDepthError(f"R_{k} needs {2 * k} entries, slope has {cf.depth}")
    table = table or convergents(cf)
    length_R, length_L = table.q[2 * k], table.q[2 * k - 1]

    if materialize is False:
        return SubstitutionPair(k, length_R, length_L)
    if length_R > budget:
        if materialize:
            raise BudgetExceededError(f"|R_{k}| = {length_R} exceeds word budget {budget}")
        logger.info(f"R_{k} has length {length_R} beyond budget {budget}; returning lengths only")
        return SubstitutionPair(k, length_R, length_L)

    exponents = [cf.word_entry(i) for i in range(1, 2 * k + 1)]
    R = _substitute('0', exponents)
    L = _substitute('1', exponents)
    return SubstitutionPair(k, length_R, length_L, R, L)


def _recursive_prefix(cf: ContinuedFraction, table: ConvergentTable, which: str, k: int, length: int) -> str:
    """
    First length symbols of R_k or L_k from R_k = R_{k-1} L_k^{a_{2k}} and
    L_k = L_{k-1} R_{k-1}^{a_{2k-1}}, never building more than needed.
    """
    if k == 0:
        return ('0' if which == 'R' else '1')[:length]
    if which == 'R':
        head, body, exponent = ('R', k - 1), ('L', k), cf.word_entry(2 * k)
        body_length = table.q[2 * k - 1]
    else:
        head, body, exponent = ('L', k - 1), ('R', k - 1), cf.word_entry(2 * k - 1)
        body_length = table.q[2 * k - 2]

    out = _recursive_prefix(cf, table, head[0], head[1], length)
    if len(out) >= length:
        return out[:length]
    remaining = length - len(out)
    piece = _recursive_prefix(cf, table, body[0], body[1], min(remaining, body_length))
    if body_length <= remaining:
        copies = min(exponent, -(-remaining // body_length))
        out += piece * copies
    else:
        out += piece
    return out[:length]


def limit_word_prefix(cf: ContinuedFraction, source: str, length: int,
                      budget: int = DEFAULT_WORD_BUDGET) -> BinaryWord:
    """
    Prefix of the x-limit word (limit of R_k) or the y-limit word (limit of L_k).

    Only the requested prefix is built, so levels whose full words exceed
    the budget are still usable.

    Args:
        cf: Normalized slope
        source: 'x' or 'y'
        length: Number of symbols
        budget: Word budget

    Returns:
        BinaryWord carrying the slope
    """
    if source not in ('x', 'y'):
        raise ValueError("Source must be 'x' or 'y'")
    if length > budget:
        raise BudgetExceededError(f"Limit word prefix of length {length} exceeds word budget {budget}")
    cf.require_normalized()
    table = convergents(cf)
    k = 1
    while True:
        if 2 * k > cf.depth:
            raise InsufficientDepthError(f"Slope too short for a {source}-limit prefix of length {length}")
        size = table.q[2 * k] if source == 'x' else table.q[2 * k - 1]
        if size >= length:
            break
        k += 1
    word = _recursive_prefix(cf, table, 'R' if source == 'x' else 'L', k, length)
    return BinaryWord(word, cf)


def main():
    """Demonstrate both Sturmian constructions."""
    from src.core.continued_fractions import fibonacci_cf
    cf = fibonacci_cf(20)
    print(f"Mechanical prefix: {mechanical_prefix(cf, 21)}")
    for k in range(4):
        pair = substitution_words(cf, k)
        print(f"R_{k} = {pair.R}  L_{k} = {pair.L}")
    print(f"x-limit prefix: {limit_word_prefix(cf, 'x', 21)}")


if __name__ == "__main__":
    main()
