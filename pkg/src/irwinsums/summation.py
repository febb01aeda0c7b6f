"""Top-level drivers: full sums, at-most sums, partial sums, thresholds.

The engine walks digit lengths in order: blocks short enough to enumerate
are summed directly, the last of them seeds the power-sum recurrence, and
recurrence steps continue until the requested digit limit, the finite-series
end, or convergence (two consecutive digit lengths whose block sums and
largest terms are both negligible at working precision).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Optional, Union

from .fixedpoint import div_nearest, fixed_to_decimal, parse_exact_decimal
from .model import (
    ConditionSet,
    InsufficientAccuracy,
    PrecisionPlan,
    ThresholdAboveTotal,
    clamp_decimals,
    default_max_digit_length,
    direct_sum_digit_count,
)
from .powersums import direct_sum, estimate_max_power
from .recurrence import advance, shrink_active_powers


class Termination(str, enum.Enum):
    """Why a summation run stopped."""

    CONVERGED = "Converged"
    FINITE_SERIES_EXHAUSTED = "FiniteSeriesExhausted"
    EMPTY_SERIES = "EmptySeries"
    DIGIT_CAP_REACHED = "DigitCapReached"
    PARTIAL_REQUESTED = "PartialRequested"


@dataclass(frozen=True)
class SumResult:
    """Result of a full or partial summation run.

    ``requested_sum`` is the exact-occurrence sum; ``at_most_sum`` aggregates
    every occurrence vector dominated by the condition counts.  With a single
    condition, ``per_count_sums[k]`` is the sum for exactly k occurrences.
    ``per_cell_sums`` carries the exact-count sum of every occurrence vector
    in mixed-radix slot order, whatever the number of conditions.
    """

    conditions: ConditionSet
    decimals: int
    requested_sum: Decimal
    at_most_sum: Decimal
    per_count_sums: Optional[tuple[Decimal, ...]]
    per_cell_sums: tuple[Decimal, ...]
    digits_processed: int
    termination: Termination


@dataclass(frozen=True)
class ThresholdResult:
    """Consecutive digit lengths whose partial sums bracket a threshold."""

    conditions: ConditionSet
    decimals: int
    threshold: Fraction
    digits_low: int
    sum_low: Decimal
    digits_high: int
    sum_high: Decimal


BlockObserver = Callable[[int, int, int, int], None]
"""Called per digit length with (digit_length, block, total, j_active);
block and total are fixed-point mantissas at the plan's working scale."""


def build_plan(conditions: ConditionSet, requested_decimals: int) -> PrecisionPlan:
    """Assemble the precision plan for one run.

    Large occurrence counts mean many thousands of digit-length iterations
    whose truncation deficits accumulate, so such runs carry extra guard
    decimals.
    """
    decimals = clamp_decimals(requested_decimals)
    ds_digits = direct_sum_digit_count(conditions.base)
    guard = 12 if max(conditions.counts) > 10 else 8
    return PrecisionPlan(
        requested_decimals=decimals,
        working_decimals=decimals + guard,
        max_power=estimate_max_power(conditions.base, decimals, ds_digits),
        max_digit_length=default_max_digit_length(decimals, max(conditions.counts)),
        direct_sum_digits=ds_digits,
    )


@dataclass
class _RawResult:
    plan: PrecisionPlan
    requested: int
    at_most: int
    per_cell: list[int]
    digits_processed: int
    termination: Termination
    crossing_digit: Optional[int] = None


def _quantized_fraction(mantissa: int, plan: PrecisionPlan) -> Fraction:
    """The run total as seen at requested precision (for threshold tests)."""
    decimals = plan.requested_decimals
    return Fraction(
        div_nearest(mantissa, 10 ** (plan.working_decimals - decimals)),
        10 ** decimals,
    )


def _compute(
    conditions: ConditionSet,
    requested_decimals: int,
    *,
    digit_limit: Optional[int] = None,
    threshold: Optional[Fraction] = None,
    plan: Optional[PrecisionPlan] = None,
    observer: Optional[BlockObserver] = None,
) -> _RawResult:
    """Run the engine; see the public wrappers for the result contracts."""
    plan = plan or build_plan(conditions, requested_decimals)
    per_cell = [0] * conditions.cell_count

    if conditions.is_empty_series():
        return _RawResult(plan, 0, 0, per_cell, 0, Termination.EMPTY_SERIES)

    finite_end = (
        conditions.finite_digit_limit() if conditions.is_finite_series() else None
    )
    limit = digit_limit if digit_limit is not None else plan.max_digit_length
    if finite_end is not None:
        limit = min(limit, finite_end)

    seed_digit = plan.direct_sum_digits
    requested_total = 0
    at_most_total = 0
    target = conditions.cell_count - 1
    table = None
    processed = 0
    seen_nonzero = False
    tiny_streak = 0
    converged = False
    j_active = plan.max_power

    def absorb(block_rows: list[int]) -> int:
        nonlocal requested_total, at_most_total, seen_nonzero
        block = block_rows[target]
        requested_total += block
        at_most_total += sum(block_rows)
        for slot, value in enumerate(block_rows):
            per_cell[slot] += value
        if block > 0:
            seen_nonzero = True
        return block

    for i in range(1, limit + 1):
        if i <= seed_digit:
            powers = plan.max_power if (i == seed_digit and limit > seed_digit) else 1
            table = direct_sum(conditions, i, powers, plan)
            block = absorb(table.rows[0])
            max_term = None
        else:
            table, max_term, per_power = advance(table, conditions, j_active, plan)
            block = absorb(table.rows[0])
            if j_active > 2:
                j_active = shrink_active_powers(per_power, j_active, plan)
        processed = i
        if observer is not None:
            observer(i, block, requested_total, j_active)

        if threshold is not None:
            if _quantized_fraction(requested_total, plan) >= threshold:
                return _RawResult(
                    plan,
                    requested_total,
                    at_most_total,
                    per_cell,
                    processed,
                    Termination.PARTIAL_REQUESTED,
                    crossing_digit=i,
                )
            continue  # threshold runs never stop on convergence

        if digit_limit is None and max_term is not None and seen_nonzero:
            block_size = Fraction(abs(block), plan.scale)
            if block_size < plan.tiny_cutoff_soft and max_term < plan.tiny_cutoff_hard:
                tiny_streak += 1
                if tiny_streak >= 2:
                    converged = True
                    break
            else:
                tiny_streak = 0

    if digit_limit is not None or threshold is not None:
        termination = Termination.PARTIAL_REQUESTED
    elif finite_end is not None and processed >= finite_end:
        termination = Termination.FINITE_SERIES_EXHAUSTED
    elif converged:
        termination = Termination.CONVERGED
    else:
        termination = Termination.DIGIT_CAP_REACHED
    return _RawResult(
        plan, requested_total, at_most_total, per_cell, processed, termination
    )


def _to_result(conditions: ConditionSet, raw: _RawResult) -> SumResult:
    decimals = raw.plan.requested_decimals
    working = raw.plan.working_decimals
    per_cell = tuple(fixed_to_decimal(v, working, decimals) for v in raw.per_cell)
    per_count = per_cell if conditions.num_conditions == 1 else None
    return SumResult(
        conditions=conditions,
        decimals=decimals,
        requested_sum=fixed_to_decimal(raw.requested, working, decimals),
        at_most_sum=fixed_to_decimal(raw.at_most, working, decimals),
        per_count_sums=per_count,
        per_cell_sums=per_cell,
        digits_processed=raw.digits_processed,
        termination=raw.termination,
    )


def irwin_sum(
    conditions: ConditionSet,
    requested_decimals: int = 15,
    *,
    plan: Optional[PrecisionPlan] = None,
    observer: Optional[BlockObserver] = None,
) -> SumResult:
    """Sum 1/n over integers whose constrained digits each occur exactly
    their prescribed number of times, to ``requested_decimals`` places."""
    raw = _compute(conditions, requested_decimals, plan=plan, observer=observer)
    return _to_result(conditions, raw)


def at_most_sum(conditions: ConditionSet, requested_decimals: int = 15) -> Decimal:
    """Sum 1/n over integers whose constrained digit counts are at most the
    prescribed ones (aggregate of every occurrence cell)."""
    return irwin_sum(conditions, requested_decimals).at_most_sum


def partial_sum(
    conditions: ConditionSet,
    digit_limit: int,
    requested_decimals: int = 15,
    *,
    plan: Optional[PrecisionPlan] = None,
    observer: Optional[BlockObserver] = None,
) -> SumResult:
    """Sum restricted to denominators below base**digit_limit."""
    if digit_limit < 1:
        raise ValueError("digit_limit must be >= 1")
    raw = _compute(
        conditions,
        requested_decimals,
        digit_limit=digit_limit,
        plan=plan,
        observer=observer,
    )
    return _to_result(conditions, raw)


def threshold_search(
    conditions: ConditionSet,
    threshold: Union[str, int],
    requested_decimals: int = 15,
    threshold_decimals: Optional[int] = None,
) -> ThresholdResult:
    """Find consecutive digit lengths d, d+1 whose partial sums bracket a
    threshold: partial(d) < threshold <= partial(d+1).

    The threshold must be text (or an int), parsed exactly; float input is
    refused because a binary approximation silently shifts the target.  The
    number of fractional digits in the text (or ``threshold_decimals`` when
    given) states how many decimals of the threshold are meant: if the series
    total agrees with the threshold through all of them, the bracket is not
    determined and :class:`InsufficientAccuracy` is raised.
    """
    if isinstance(threshold, float):
        raise TypeError(
            "threshold must be a string (or int); float thresholds lose the "
            "accuracy needed to place the bracket"
        )
    if isinstance(threshold, int):
        value, textual_decimals = Fraction(threshold), None
    else:
        value, textual_decimals = parse_exact_decimal(threshold)
    if value <= 0:
        raise ValueError("threshold must be positive")
    known_decimals = (
        threshold_decimals if threshold_decimals is not None else textual_decimals
    )

    decimals = clamp_decimals(requested_decimals)
    if known_decimals is not None:
        decimals = max(decimals, known_decimals + 5)
    plan = build_plan(conditions, decimals)

    total_raw = _compute(conditions, decimals, plan=plan)
    total = _quantized_fraction(total_raw.requested, plan)
    if value > total:
        raise ThresholdAboveTotal(
            f"threshold {threshold} exceeds the series total {float(total):.6g}"
        )
    if value == total or (
        known_decimals is not None
        and abs(total - value) < Fraction(1, 10 ** known_decimals)
    ):
        raise InsufficientAccuracy(
            "threshold is indistinguishable from the series total at the "
            "precision given; supply more threshold digits"
        )

    crossing = _compute(conditions, decimals, threshold=value, plan=plan)
    if crossing.crossing_digit is None:
        raise InsufficientAccuracy(
            "partial sums never reached the threshold before convergence; "
            "supply more threshold digits"
        )
    digits_high = crossing.crossing_digit
    digits_low = digits_high - 1

    # Re-verify the bracket with independent partial-sum runs.
    high_raw = _compute(conditions, decimals, digit_limit=digits_high, plan=plan)
    sum_high = _quantized_fraction(high_raw.requested, plan)
    if digits_low >= 1:
        low_raw = _compute(conditions, decimals, digit_limit=digits_low, plan=plan)
        sum_low = _quantized_fraction(low_raw.requested, plan)
    else:
        sum_low = Fraction(0)
    if not (sum_low < value <= sum_high):
        raise InsufficientAccuracy(
            "bracket could not be certified at working precision; "
            "supply more threshold digits"
        )

    def as_decimal(q: Fraction) -> Decimal:
        return fixed_to_decimal(
            q.numerator * 10 ** decimals // q.denominator, decimals, decimals
        )

    return ThresholdResult(
        conditions=conditions,
        decimals=decimals,
        threshold=value,
        digits_low=digits_low,
        sum_low=as_decimal(sum_low),
        digits_high=digits_high,
        sum_high=as_decimal(sum_high),
    )
