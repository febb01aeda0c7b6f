"""Power-sum tables over digit-length blocks.

For digit length ``i`` and occurrence vector ``k``, the table cell at power
``j`` holds ``sum(1/x**j)`` over all i-digit integers ``x`` whose constrained
digits occur exactly ``k`` times each (componentwise).  Small digit lengths
are filled by direct enumeration; longer ones are produced by the recurrence
module from these seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .fixedpoint import div_nearest
from .model import (
    ConditionSet,
    EstimateFailed,
    PrecisionPlan,
    RangeTooLarge,
    occurrence_index,
)

# Upper bound on base**digit_length for direct enumeration.
DIRECT_ENUM_LIMIT = 10 ** 8


@dataclass
class PowerSumTable:
    """Reciprocal power sums for one digit length, all occurrence vectors.

    ``rows[j - 1][slot]`` is the fixed-point mantissa (at ``scale``) of the
    power-``j`` sum for the occurrence vector with flat index ``slot``.
    Tables are treated as immutable once returned.
    """

    conditions: ConditionSet
    digit_length: int
    max_power: int
    scale: int
    rows: list[list[int]]

    def value(self, power: int, slot: int) -> int:
        if not 1 <= power <= self.max_power:
            raise ValueError(f"power {power} outside [1, {self.max_power}]")
        return self.rows[power - 1][slot]

    def cell(self, power: int, vector: Sequence[int]) -> int:
        return self.value(power, occurrence_index(vector, self.conditions))


def digit_power_sum(base: int, n: int, conditions: ConditionSet) -> int:
    """Sum of d**n over the unconstrained digits d, with 0**0 taken as 1.

    For n = 0 every unconstrained digit contributes 1, giving
    ``base - len(conditions)``.
    """
    constrained = set(conditions.digits)
    if n == 0:
        return base - len(constrained)
    return sum(d ** n for d in range(1, base) if d not in constrained)


def direct_sum(
    conditions: ConditionSet,
    digit_length: int,
    max_power: int,
    plan: PrecisionPlan,
) -> PowerSumTable:
    """Fill one digit-length block by enumerating every denominator.

    Integers whose constrained-digit counts stay within the condition bounds
    contribute 1/x**j to the cell of their occurrence vector; the rest
    contribute nothing.
    """
    if digit_length < 1:
        raise ValueError("digit_length must be >= 1")
    base = conditions.base
    if base ** digit_length > DIRECT_ENUM_LIMIT:
        raise RangeTooLarge(
            f"{base}**{digit_length} exceeds the enumeration budget of "
            f"{DIRECT_ENUM_LIMIT}"
        )

    digits = conditions.digits
    counts = conditions.counts
    m = len(digits)
    slot_of_digit = [-1] * base
    for pos, d in enumerate(digits):
        slot_of_digit[d] = pos

    # Mixed-radix strides of the flat occurrence index.
    strides = [0] * m
    stride = 1
    for pos, n in enumerate(counts):
        strides[pos] = stride
        stride *= n + 1

    scale = plan.scale
    rows = [[0] * conditions.cell_count for _ in range(max_power)]
    found = [0] * m

    start = base ** (digit_length - 1)
    stop = base ** digit_length
    for x in range(start, stop):
        for pos in range(m):
            found[pos] = 0
        value = x
        while value:
            value, digit = divmod(value, base)
            pos = slot_of_digit[digit]
            if pos >= 0:
                found[pos] += 1

        slot = 0
        for pos in range(m):
            k = found[pos]
            if k > counts[pos]:
                slot = -1
                break
            slot += k * strides[pos]
        if slot < 0:
            continue

        xj = x
        for row in rows:
            term = div_nearest(scale, xj)
            if term == 0:
                break
            row[slot] += term
            xj *= x
    return PowerSumTable(conditions, digit_length, max_power, scale, rows)


def _tail_below(a: int, b: int, power: int, decimals: int) -> bool:
    """Whether sum(n**-power for n in a..b) < 10**-decimals, decided in
    integer arithmetic with a conservative margin for truncation."""
    spare = 10
    scale = 10 ** (decimals + spare)
    total = 0
    count = 0
    for n in range(a, b + 1):
        term = scale // n ** power
        if term == 0:
            break
        total += term
        count += 1
    return total + count + (b - a + 1 - count) < 10 ** spare


def _solve_tail_order(a: int, b: int, decimals: int) -> int:
    """Continuous order c with integral(x**-c, a..b) = 10**-decimals.

    Solved in log space by bisection; used only when the closed-form initial
    guess misses the search window.
    """
    log_eps = -decimals * math.log(10)
    ln_a, ln_b = math.log(a), math.log(b)

    def log_integral(c: float) -> float:
        # log of (a**(1-c) - b**(1-c)) / (c-1) for c > 1
        return (1 - c) * ln_a + math.log1p(-math.exp((1 - c) * (ln_b - ln_a))) - math.log(c - 1)

    lo = 1.0 + 1e-9
    hi = 2.0
    while log_integral(hi) > log_eps:
        hi *= 2
        if hi > 1e9:
            raise EstimateFailed("tail-order bisection diverged")
    for _ in range(200):
        mid = (lo + hi) / 2
        if log_integral(mid) > log_eps:
            lo = mid
        else:
            hi = mid
    return math.ceil(hi)


def estimate_max_power(base: int, requested_decimals: int, direct_sum_digits: int) -> int:
    """Smallest power J (plus a margin of 2) whose tail over the last
    directly-summed block drops below 10**-requested_decimals.

    The initial guess ``ceil(log_base(10) * decimals / (direct_sum_digits - 1))``
    is refined upward by direct evaluation; if no power up to 10x the guess
    works, the order is re-estimated from the integral bound and the search
    repeats once before giving up.
    """
    if direct_sum_digits < 2:
        raise ValueError("direct_sum_digits must be >= 2")
    a = base ** (direct_sum_digits - 1)
    b = base ** direct_sum_digits - 1
    guess = math.ceil(
        math.log(10) / math.log(base) * requested_decimals / (direct_sum_digits - 1)
    )
    guess = max(guess, 1)
    for attempt in range(2):
        for power in range(guess, 10 * guess + 1):
            if _tail_below(a, b, power, requested_decimals):
                return power + 2
        if attempt == 0:
            guess = max(_solve_tail_order(a, b, requested_decimals), 1)
    raise EstimateFailed(
        f"no truncation order up to {10 * guess} bounds the tail below "
        f"10^-{requested_decimals}"
    )
