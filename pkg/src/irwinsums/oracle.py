"""Independent brute-force verification of the summation engine.

Everything here recomputes sums by plain enumeration (or rapidly convergent
closed forms in base 2) and shares nothing with the engine beyond the
condition-set type: digit occurrences are counted through string conversion
rather than the engine's arithmetic digit walk, and accumulation is exact
rational below a size threshold.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from fractions import Fraction

from .fixedpoint import div_nearest, fixed_to_decimal
from .model import ConditionSet, LimitTooLarge

ENUMERATION_BUDGET = 10 ** 8
EXACT_RATIONAL_LIMIT = 10 ** 6

_MODES = ("exact", "at-most")


def _digit_string(n: int, base: int) -> str:
    if base == 10:
        return str(n)
    if base == 2:
        return bin(n)[2:]
    chars = []
    while n:
        n, d = divmod(n, base)
        chars.append(chr(ord("0") + d))
    return "".join(reversed(chars))


def _qualifies(n: int, conditions: ConditionSet, exact: bool) -> bool:
    text = _digit_string(n, conditions.base)
    for digit, bound in conditions.conditions:
        occurrences = text.count(chr(ord("0") + digit))
        if occurrences > bound or (exact and occurrences != bound):
            return False
    return True


def _check_mode(mode: str) -> bool:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    return mode == "exact"


def _tree_sum(parts: list[Fraction]) -> Fraction:
    """Pairwise reduction; keeps intermediate denominators balanced."""
    if not parts:
        return Fraction(0)
    while len(parts) > 1:
        merged = [a + b for a, b in zip(parts[::2], parts[1::2])]
        if len(parts) & 1:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


def brute_force_fraction(conditions: ConditionSet, limit: int, mode: str = "exact") -> Fraction:
    """Exact rational sum of 1/n over qualifying n < limit."""
    exact = _check_mode(mode)
    if limit > EXACT_RATIONAL_LIMIT:
        raise LimitTooLarge(
            f"limit {limit} exceeds the exact-rational budget {EXACT_RATIONAL_LIMIT}"
        )
    parts = [
        Fraction(1, n) for n in range(1, limit) if _qualifies(n, conditions, exact)
    ]
    return _tree_sum(parts)


def _chunk_mantissa_sum(
    conditions: ConditionSet, start: int, stop: int, exact: bool, scale: int
) -> int:
    total = 0
    for n in range(start, stop):
        if _qualifies(n, conditions, exact):
            total += div_nearest(scale, n)
    return total


def brute_force_sum(
    conditions: ConditionSet,
    limit: int,
    mode: str = "exact",
    decimals: int = 30,
    jobs: int = 1,
) -> Decimal:
    """Sum 1/n over qualifying n < limit by enumeration.

    Exact rational accumulation up to 10**6; scaled-integer accumulation with
    ten spare decimals beyond that.  ``jobs > 1`` splits the range across
    processes; integer partial sums make the reduction order irrelevant, so
    the result is identical to a serial run.
    """
    exact = _check_mode(mode)
    if limit > ENUMERATION_BUDGET:
        raise LimitTooLarge(
            f"limit {limit} exceeds the enumeration budget {ENUMERATION_BUDGET}"
        )
    if limit <= EXACT_RATIONAL_LIMIT:
        value = brute_force_fraction(conditions, limit, mode)
        mantissa = div_nearest(value.numerator * 10 ** (decimals + 5), value.denominator)
        return fixed_to_decimal(mantissa, decimals + 5, decimals)

    scale = 10 ** (decimals + 10)
    if jobs > 1:
        chunk = max(10 ** 6, (limit + jobs - 1) // jobs)
        spans = [(s, min(s + chunk, limit)) for s in range(1, limit, chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_chunk_mantissa_sum, conditions, a, b, exact, scale)
                for a, b in spans
            ]
            total = sum(f.result() for f in futures)
    else:
        total = _chunk_mantissa_sum(conditions, 1, limit, exact, scale)
    return fixed_to_decimal(total, decimals + 10, decimals)


def block_cell_sums(
    conditions: ConditionSet, digit_length: int, decimals: int = 30
) -> list[Fraction]:
    """Per-occurrence-vector sums of 1/n over exactly ``digit_length``-digit
    denominators, for cross-checking one recurrence block cell by cell."""
    base = conditions.base
    start = base ** (digit_length - 1)
    stop = base ** digit_length
    if stop > ENUMERATION_BUDGET:
        raise LimitTooLarge(f"{base}**{digit_length} exceeds the enumeration budget")

    counts = conditions.counts
    strides = []
    stride = 1
    for n in counts:
        strides.append(stride)
        stride *= n + 1

    scale = 10 ** (decimals + 10)
    cells = [0] * conditions.cell_count
    digit_chars = [chr(ord("0") + d) for d in conditions.digits]
    for n in range(start, stop):
        text = _digit_string(n, base)
        slot = 0
        for pos, ch in enumerate(digit_chars):
            k = text.count(ch)
            if k > counts[pos]:
                slot = -1
                break
            slot += k * strides[pos]
        if slot >= 0:
            cells[slot] += div_nearest(scale, n)
    return [Fraction(v, scale) for v in cells]


def count_one_digit_numbers(digit: int, digit_length: int) -> int:
    """How many base-10 integers of the given length contain the digit
    exactly once: 9**(i-1) + 8*(i-1)*9**(i-2) for i >= 2, and 1 for i = 1.

    The closed form assumes a nonzero digit; leading-zero asymmetry breaks it
    for digit 0, so that case is rejected (enumerate instead).
    """
    if digit == 0:
        raise ValueError("closed-form count does not hold for digit 0")
    if not 1 <= digit <= 9:
        raise ValueError("digit must be 1..9")
    if digit_length < 1:
        raise ValueError("digit_length must be >= 1")
    if digit_length == 1:
        return 1
    i = digit_length
    return 9 ** (i - 1) + 8 * (i - 1) * 9 ** (i - 2)


def closed_form_base2(kind: str, decimals: int) -> Decimal:
    """Rapidly convergent base-2 series with a certified geometric tail.

    no-zero:     sum(1/(2**n - 1) for n >= 1)        (all-ones denominators)
    single-zero: sum over n >= 2, 0 <= k <= n-2 of 1/(2**n - 1 - 2**k)
    single-one:  powers of two, exactly 2

    Terms are accumulated at ten spare decimals and the loop stops once a
    term underflows that scale, so the dropped tail is far below the
    requested precision.
    """
    spare = 10
    scale = 10 ** (decimals + spare)
    if kind == "single-one":
        return fixed_to_decimal(2 * scale, decimals + spare, decimals)
    if kind == "no-zero":
        total = 0
        n = 1
        while True:
            term = div_nearest(scale, 2 ** n - 1)
            if term == 0:
                break
            total += term
            n += 1
        return fixed_to_decimal(total, decimals + spare, decimals)
    if kind == "single-zero":
        total = 0
        n = 2
        while True:
            largest = div_nearest(scale, 2 ** n - 1 - 2 ** (n - 2))
            if largest == 0:
                break
            for k in range(0, n - 1):
                total += div_nearest(scale, 2 ** n - 1 - 2 ** k)
            n += 1
        return fixed_to_decimal(total, decimals + spare, decimals)
    raise ValueError(f"unknown kind {kind!r}")
