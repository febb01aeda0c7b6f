"""Advance power-sum tables from digit length i to i + 1.

Appending a digit d to an i-digit integer x produces base*x + d, and

    1 / (base*x + d)**j = sum_{n>=0} (-1)**n * C(j+n-1, n) * d**n / (base*x)**(j+n)

since |d / (base*x)| < 1.  Summing this expansion over a whole table cell
turns reciprocal-power sums at digit length i into those at i + 1: each
target cell collects one contribution per constrained digit that still has
occurrences to spend (reading the cell with that count decremented) plus one
contribution for all unconstrained digits at once, weighted by their digit
power sums.

Coefficients are exact integers throughout; one fixed-point rounding happens
per cell per power.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .fixedpoint import div_toward_zero
from .model import ConditionSet, PrecisionPlan, occurrence_vector
from .powersums import PowerSumTable, digit_power_sum


def expansion_coefficient(base: int, power: int, n: int) -> Fraction:
    """The n-th series coefficient (-1)**n * C(power+n-1, n) / base**(power+n)."""
    value = Fraction(math.comb(power + n - 1, n), base ** (power + n))
    return -value if n & 1 else value


@lru_cache(maxsize=32)
def _decrement_slots(conditions: ConditionSet) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Per flat slot, the (condition position, slot with that count - 1) pairs."""
    strides = []
    stride = 1
    for n in conditions.counts:
        strides.append(stride)
        stride *= n + 1
    table = []
    for slot in range(conditions.cell_count):
        vector = occurrence_vector(slot, conditions)
        table.append(
            tuple(
                (c, slot - strides[c])
                for c, k in enumerate(vector)
                if k > 0
            )
        )
    return tuple(table)


def shrink_active_powers(
    per_power_max: list[Fraction], j_active: int, plan: PrecisionPlan
) -> int:
    """Lowest power bound (>= 2) that keeps every discarded power tiny.

    Returns the smallest j' >= 2 such that the largest term seen at every
    power j >= j' stayed below the hard cutoff; never exceeds ``j_active``.
    """
    if j_active < 2:
        return j_active
    cutoff = plan.tiny_cutoff_hard
    shrunk = j_active
    for j in range(j_active, 1, -1):
        if per_power_max[j - 1] < cutoff:
            shrunk = j
        else:
            break
    return shrunk


def advance(
    table: PowerSumTable,
    conditions: ConditionSet,
    j_active: int,
    plan: PrecisionPlan,
) -> tuple[PowerSumTable, Fraction, list[Fraction]]:
    """One recurrence step: build the table for the next digit length.

    Returns the new table (powers 1..j_active), the largest single term seen
    anywhere, and the largest term seen per power (index j - 1).  The maxima
    are exact rationals derived from coefficient magnitudes and per-row source
    maxima; for the decrement contributions this is an upper bound, attained
    unless a row's peak cell sits at a condition's full count.
    """
    if len(table.rows) < j_active:
        raise ValueError(
            f"table holds {len(table.rows)} powers, {j_active} required"
        )
    base = conditions.base
    counts = conditions.counts
    m = conditions.num_conditions
    cells = conditions.cell_count
    scale = plan.scale
    rows_prev = table.rows
    neighbors = _decrement_slots(conditions)

    bn = [digit_power_sum(base, n, conditions) for n in range(j_active)]
    dpow = [[d ** n for n in range(j_active)] for d in conditions.digits]

    # Skip target cells whose sources are all zero; they stay exactly zero.
    col_nonzero = [
        any(rows_prev[j2][slot] for j2 in range(j_active)) for slot in range(cells)
    ]
    targets = [
        slot
        for slot in range(cells)
        if col_nonzero[slot] or any(col_nonzero[s2] for _, s2 in neighbors[slot])
    ]

    src_absmax = [
        max(max(row), -min(row)) if row else 0 for row in rows_prev[:j_active]
    ]

    new_rows: list[list[int]] = []
    per_power_max: list[Fraction] = []
    for j in range(1, j_active + 1):
        nmax = j_active - j
        divisor = base ** (j + nmax)

        # coeffs[n] = ((-1)^n * C(j+n-1, n) * base^(nmax-n)) * (bn, digit powers);
        # folding base^(nmax-n) in lets the whole cell divide once by divisor.
        coeffs: list[tuple[int, tuple[int, ...]]] = []
        max_num = 0
        base_pow = base ** nmax
        for n in range(nmax + 1):
            signed = math.comb(j + n - 1, n) * base_pow
            if n & 1:
                signed = -signed
            k0 = signed * bn[n]
            kcs = tuple(signed * dpow[c][n] for c in range(m))
            coeffs.append((k0, kcs))
            bound = abs(k0) * src_absmax[j - 1 + n]
            if bound > max_num:
                max_num = bound
            for c in range(m):
                if counts[c] > 0:
                    bound = abs(kcs[c]) * src_absmax[j - 1 + n]
                    if bound > max_num:
                        max_num = bound
            base_pow //= base

        row_new = [0] * cells
        n_range = range(nmax + 1)
        jm1 = j - 1
        for slot in targets:
            s = 0
            nbr = neighbors[slot]
            for n in n_range:
                src = rows_prev[jm1 + n]
                k0, kcs = coeffs[n]
                tv = src[slot]
                if tv and k0:
                    s += k0 * tv
                for c, s2 in nbr:
                    tv2 = src[s2]
                    if tv2:
                        kc = kcs[c]
                        if kc:
                            s += kc * tv2
            row_new[slot] = div_toward_zero(s, divisor)
        new_rows.append(row_new)
        per_power_max.append(Fraction(max_num, divisor * scale))

    next_table = PowerSumTable(
        conditions, table.digit_length + 1, j_active, scale, new_rows
    )
    max_term = max(per_power_max) if per_power_max else Fraction(0)
    return next_table, max_term, per_power_max
