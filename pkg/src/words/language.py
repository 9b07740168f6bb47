"""
Language Extraction Module

Factor sets of Sturmian words, right-special structure and branching
profiles. Brute-force answers come from long words certified complete by
the repetitive function; closed-form answers come from the convergent
denominators.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

from src.core.continued_fractions import ContinuedFraction, convergents
from src.core.exceptions import (BudgetExceededError, DataIntegrityError,
                                 IncompleteLanguageError,
                                 InsufficientDepthError)
from src.words.sturmian import BinaryWord, limit_word_prefix

logger = logging.getLogger(__name__)

SOURCES = ('x-limit', 'y-limit')


@dataclass(frozen=True)
class LanguageSlice:
    """
    Length-n factors of a word.

    Args:
        n: Factor length
        factors: The distinct factors
        right_special: The factor w with w0 and w1 both factors
        complete: True when every factor of length n + 1 is certified to occur,
            which settles both the slice and its right-special factor
    """
    n: int
    factors: FrozenSet[str]
    right_special: Optional[str]
    complete: bool

    def __len__(self) -> int:
        return len(self.factors)

    def to_dict(self) -> dict:
        return {'n': self.n, 'factors': sorted(self.factors), 'right_special': self.right_special}


@dataclass(frozen=True)
class BranchingProfile:
    """Indices n <= N whose length-n prefix is right special."""
    source: str
    N: int
    hits: Tuple[int, ...]


def certified_length(cf: ContinuedFraction, n: int) -> int:
    """Word length R(n) + n - 1 that guarantees every length-n factor occurs."""
    if n == 0:
        return 0
    return convergents(cf).repetitive_value(n) + n - 1


def is_certified(word: BinaryWord, n: int) -> bool:
    if word.slope is None:
        return False
    try:
        return len(word) >= certified_length(word.slope, n)
    except InsufficientDepthError:
        return False


def factor_set(symbols: str, n: int) -> FrozenSet[str]:
    return frozenset(symbols[i:i + n] for i in range(len(symbols) - n + 1))


def factors(word: BinaryWord, n: int, unsafe: bool = False) -> LanguageSlice:
    """
    Length-n factors of a word together with the right-special factor.

    Args:
        word: Word of a Sturmian subshift, carrying its slope
        n: Factor length
        unsafe: Accept a word too short to certify completeness; the slice
            is then marked incomplete

    Returns:
        LanguageSlice

    Raises:
        IncompleteLanguageError: word too short, or wrong factor count
        DataIntegrityError: zero or several right-special factors
    """
    if n < 0:
        raise ValueError(f"Factor length must be >= 0, got {n}")
    complete = is_certified(word, n + 1)
    if not complete and not unsafe:
        raise IncompleteLanguageError(
            f"Word of length {len(word)} does not certify the length-{n} language slice and its extensions")

    symbols = word.symbols
    slice_n = factor_set(symbols, n)
    extended = factor_set(symbols, n + 1)
    special = sorted(w for w in slice_n if w + '0' in extended and w + '1' in extended)

    if not complete:
        return LanguageSlice(n, slice_n, special[0] if len(special) == 1 else None, False)

    if len(slice_n) != n + 1:
        raise IncompleteLanguageError(f"Expected {n + 1} factors of length {n}, found {len(slice_n)}")
    if len(special) != 1:
        raise DataIntegrityError(f"Expected one right-special factor of length {n}, found {len(special)}")
    return LanguageSlice(n, slice_n, special[0], True)


def z_function(s: str) -> List[int]:
    """z[i] = length of the longest common prefix of s and s[i:]; z[0] = len(s)."""
    n = len(s)
    z = [0] * n
    if n == 0:
        return z
    z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            z[i] = min(right - i, z[i - left])
        while i + z[i] < n and s[z[i]] == s[i + z[i]]:
            z[i] += 1
        if i + z[i] > right:
            left, right = i, i + z[i]
    return z


def right_special_prefixes(symbols: str, N: int) -> List[int]:
    """
    Indices m in 1..N whose length-m prefix is right special within symbols.

    The prefix z[:m] is followed by z[m] at position 0; it is followed by
    the other letter exactly when some later position matches z for
    precisely m symbols and the word continues past the match.
    """
    z = z_function(symbols)
    length = len(symbols)
    other = set()
    for i in range(1, length):
        m = z[i]
        if 1 <= m <= N and i + m < length:
            other.add(m)
    return sorted(m for m in other if m < length)


def branching_profile_bruteforce(word: BinaryWord, N: int, source: str = 'x-limit',
                                 unsafe: bool = False) -> BranchingProfile:
    """
    Right-special prefix lengths of a word, found by exhaustive search.

    The word must be long enough that every factor of length N + 1 occurs
    in it, i.e. at least R(N + 1) + N symbols.
    """
    if N <= 0:
        return BranchingProfile(source, max(N, 0), ())
    if not unsafe and not is_certified(word, N + 1):
        raise IncompleteLanguageError(
            f"Word of length {len(word)} cannot certify right-speciality up to {N}")
    hits = right_special_prefixes(word.symbols, N)
    return BranchingProfile(source, N, tuple(hits))


def branching_profile_closed(cf: ContinuedFraction, N: int, source: str) -> BranchingProfile:
    """
    Right-special prefix lengths of a limit word from the closed form.

    x-limit: n = j q_{2k-1} + q_{2k-2} with 0 <= j < a_{2k}, k >= 1.
    y-limit: n = i q_{2l} + q_{2l-1} with 0 <= i < a_{2l+1}, l >= 1.
    """
    if source not in SOURCES:
        raise ValueError(f"Source must be one of {SOURCES}")
    cf.require_normalized()
    table = convergents(cf)
    q = table.q
    hits = []
    level = 1
    while True:
        if source == 'x-limit':
            base_index, step_index, entry_index = 2 * level - 2, 2 * level - 1, 2 * level
        else:
            base_index, step_index, entry_index = 2 * level - 1, 2 * level, 2 * level + 1
        if base_index >= len(q):
            raise InsufficientDepthError(f"Closed-form profile up to {N} needs more than {cf.depth} entries")
        base = q[base_index]
        if base > N:
            break
        if entry_index > cf.depth:
            raise InsufficientDepthError(f"Closed-form profile up to {N} needs entry a_{entry_index}")
        step = q[step_index]
        for j in range(cf.word_entry(entry_index)):
            n = j * step + base
            if n > N:
                break
            hits.append(n)
        level += 1
    return BranchingProfile(source, N, tuple(sorted(hits)))


def certified_word(cf: ContinuedFraction, n: int, budget: int) -> BinaryWord:
    """
    Prefix of the x-limit word long enough to contain every factor of length n + 1,
    so that factors(word, m) is complete for every m <= n.

    Raises:
        BudgetExceededError: the certificate length exceeds the budget
    """
    length = max(certified_length(cf, n + 1), n)
    if length > budget:
        raise BudgetExceededError(
            f"Certifying length-{n} factors needs {length} symbols, budget is {budget}")
    return limit_word_prefix(cf, 'x', length, budget)


def main():
    """Demonstrate language extraction on the Fibonacci slope."""
    from src.core.continued_fractions import fibonacci_cf
    cf = fibonacci_cf(30)
    word = certified_word(cf, 12, 10 ** 6)
    for n in range(5):
        piece = factors(word, n)
        print(f"n={n}: {sorted(piece.factors)} right-special={piece.right_special!r}")
    print(f"x-limit branching (brute): {branching_profile_bruteforce(word, 10).hits}")
    print(f"x-limit branching (closed): {branching_profile_closed(cf, 10, 'x-limit').hits}")


if __name__ == "__main__":
    main()
