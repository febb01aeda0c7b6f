"""Domain model: digit constraints, occurrence indexing, precision planning.

A condition set fixes the radix and, for a subset of its digits, how many
times each digit must occur in a qualifying denominator.  Occurrence vectors
(one count per constrained digit) are mapped to flat table slots through a
mixed-radix encoding with the first condition least significant; that order
is normative for every table in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence


class IrwinSumError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(IrwinSumError):
    """A condition set violates its invariants."""


class BaseOutOfRange(ValidationError):
    pass


class NoConditions(ValidationError):
    pass


class TooManyConditions(ValidationError):
    pass


class DigitOutOfRange(ValidationError):
    pass


class DuplicateDigit(ValidationError):
    pass


class NegativeCount(ValidationError):
    pass


class OutOfBounds(IrwinSumError):
    """An occurrence vector or flat index is outside its table."""


class RangeTooLarge(IrwinSumError):
    """A direct enumeration would exceed the enumeration budget."""


class EstimateFailed(IrwinSumError):
    """No power-truncation bound was found within the search window."""


class LimitTooLarge(IrwinSumError):
    """A brute-force enumeration limit exceeds the oracle budget."""


class ThresholdAboveTotal(IrwinSumError):
    """The requested threshold exceeds the sum of the entire series."""


class InsufficientAccuracy(IrwinSumError):
    """The threshold cannot be separated from the series total at the
    precision it was given; supply more threshold digits."""


MIN_BASE = 2
MAX_BASE = 10


@dataclass(frozen=True)
class ConditionSet:
    """An ordered list of (digit, occurrence count) constraints in one base.

    Constructing a ConditionSet validates it; an invalid combination raises
    the matching :class:`ValidationError` subclass.
    """

    base: int
    conditions: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not MIN_BASE <= self.base <= MAX_BASE:
            raise BaseOutOfRange(
                f"base {self.base} must be in the range {MIN_BASE} through {MAX_BASE}"
            )
        object.__setattr__(
            self, "conditions", tuple((int(d), int(n)) for d, n in self.conditions)
        )
        m = len(self.conditions)
        if m < 1:
            raise NoConditions("at least one digit condition is required")
        if m > self.base:
            raise TooManyConditions(
                f"{m} conditions exceed the {self.base} digits of base {self.base}"
            )
        seen = set()
        for digit, count in self.conditions:
            if not 0 <= digit < self.base:
                raise DigitOutOfRange(f"digit {digit} is not valid in base {self.base}")
            if digit in seen:
                raise DuplicateDigit(f"digit {digit} is duplicated")
            seen.add(digit)
            if count < 0:
                raise NegativeCount(f"count {count} for digit {digit} must be >= 0")

    @classmethod
    def of(
        cls, digits: Iterable[int], counts: Iterable[int], base: int = 10
    ) -> "ConditionSet":
        digits = tuple(digits)
        counts = tuple(counts)
        if len(digits) != len(counts):
            raise ValidationError(
                f"digit list and count list have different lengths "
                f"({len(digits)} and {len(counts)})"
            )
        return cls(base, tuple(zip(digits, counts)))

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.conditions)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.conditions)

    @property
    def num_conditions(self) -> int:
        return len(self.conditions)

    @property
    def cell_count(self) -> int:
        """Number of occurrence vectors: the product of (count + 1)."""
        return reduce(lambda acc, c: acc * (c[1] + 1), self.conditions, 1)

    def is_finite_series(self) -> bool:
        """True when every digit is constrained; denominators then have at
        most sum(counts) digits."""
        return len(self.conditions) == self.base

    def is_empty_series(self) -> bool:
        """True when every nonzero digit is constrained to zero occurrences.

        A positive integer always leads with a nonzero digit, so no
        denominator can qualify and the series sums to zero.
        """
        forbidden = {d for d, n in self.conditions if n == 0}
        return all(d in forbidden for d in range(1, self.base))

    def finite_digit_limit(self) -> int:
        """Largest possible denominator length for a finite series."""
        if not self.is_finite_series():
            raise ValueError("series is not finite")
        return sum(self.counts)


def occurrence_index(vector: Sequence[int], conditions: ConditionSet) -> int:
    """Flat slot of an occurrence vector: k1 + (n1+1)*k2 + (n1+1)(n2+1)*k3 + ..."""
    counts = conditions.counts
    if len(vector) != len(counts):
        raise OutOfBounds(
            f"vector length {len(vector)} != {len(counts)} conditions"
        )
    index = 0
    stride = 1
    for k, n in zip(vector, counts):
        if not 0 <= k <= n:
            raise OutOfBounds(f"occurrence count {k} outside [0, {n}]")
        index += k * stride
        stride *= n + 1
    return index


def occurrence_vector(index: int, conditions: ConditionSet) -> tuple[int, ...]:
    """Inverse of :func:`occurrence_index`."""
    if not 0 <= index < conditions.cell_count:
        raise OutOfBounds(
            f"index {index} outside [0, {conditions.cell_count})"
        )
    vector = []
    remainder = index
    for n in conditions.counts:
        remainder, k = divmod(remainder, n + 1)
        vector.append(k)
    return tuple(vector)


def direct_sum_digit_count(base: int) -> int:
    """ceil(log_base(1000)): enumeration reaches roughly 1000 denominators."""
    t = 1
    power = base
    while power < 1000:
        power *= base
        t += 1
    return t


DEFAULT_GUARD_DECIMALS = 8
MIN_REQUESTED_DECIMALS = 5


@dataclass(frozen=True)
class PrecisionPlan:
    """Working precision, truncation thresholds, and loop caps for one run.

    ``working_decimals`` is the scale of all fixed-point mantissas; results
    are rounded half-even to ``requested_decimals`` only at the output step.
    """

    requested_decimals: int
    working_decimals: int
    max_power: int
    max_digit_length: int
    direct_sum_digits: int
    scale: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.requested_decimals < MIN_REQUESTED_DECIMALS:
            raise ValueError(f"requested_decimals must be >= {MIN_REQUESTED_DECIMALS}")
        if self.working_decimals < self.requested_decimals + 2:
            raise ValueError("working precision needs at least 2 guard decimals")
        if self.max_power < 1:
            raise ValueError("max_power must be >= 1")
        if self.max_digit_length < self.direct_sum_digits + 1:
            raise ValueError("max_digit_length must exceed direct_sum_digits")
        object.__setattr__(self, "scale", 10 ** self.working_decimals)
        assert self.tiny_cutoff_hard < self.tiny_cutoff_soft < Fraction(
            1, 10 ** self.requested_decimals
        )

    @property
    def guard_decimals(self) -> int:
        return self.working_decimals - self.requested_decimals

    @property
    def tiny_cutoff_hard(self) -> Fraction:
        """Below this, a single recurrence term is negligible."""
        return Fraction(1, 10 ** (2 * self.working_decimals))

    @property
    def tiny_cutoff_soft(self) -> Fraction:
        """Below this, a whole digit-length block is negligible."""
        return Fraction(1, 10 ** (self.working_decimals + 5))


def clamp_decimals(requested_decimals: int) -> int:
    return max(int(requested_decimals), MIN_REQUESTED_DECIMALS)


def default_max_digit_length(requested_decimals: int, max_count: int) -> int:
    """Safety cap on the digit-length loop; normal runs stop on tiny terms.

    Large occurrence counts push the mass of the series to long denominators,
    so the cap grows sixfold once any count exceeds 10.
    """
    cap = max(60 * requested_decimals, 500)
    if max_count > 10:
        cap *= 6
    return cap
