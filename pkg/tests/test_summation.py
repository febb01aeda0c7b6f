"""Drivers: full sums, at-most aggregation, partial sums, threshold search."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction

import pytest

from irwinsums.model import (
    ConditionSet,
    InsufficientAccuracy,
    PrecisionPlan,
    ThresholdAboveTotal,
)
from irwinsums.summation import (
    Termination,
    at_most_sum,
    build_plan,
    irwin_sum,
    partial_sum,
    threshold_search,
)


class TestIrwinSum:
    def test_kempner_no_nine(self, ulp):
        r = irwin_sum(ConditionSet.of([9], [0]), 20)
        ulp(r.requested_sum, "22.92067661926415034816")
        assert r.termination is Termination.CONVERGED

    def test_one_nine(self, ulp):
        r = irwin_sum(ConditionSet.of([9], [1]), 20)
        ulp(r.requested_sum, "23.04428708074784831968")

    def test_two_nines_no_threes(self, ulp):
        r = irwin_sum(ConditionSet.of([9, 3], [2, 0]), 15)
        ulp(r.requested_sum, "2.593253652747189")

    def test_base2_single_one_is_two(self):
        r = irwin_sum(ConditionSet.of([1], [1], base=2), 20)
        assert r.requested_sum == Decimal("2.00000000000000000000")

    def test_base2_empty_series(self):
        r = irwin_sum(ConditionSet.of([1], [0], base=2), 15)
        assert r.requested_sum == 0
        assert r.termination is Termination.EMPTY_SERIES
        assert r.digits_processed == 0

    def test_all_digits_once_finite(self, ulp):
        r = irwin_sum(ConditionSet.of(list(range(10)), [1] * 10), 23)
        ulp(r.requested_sum, "0.00082589034791925293861")
        assert r.termination is Termination.FINITE_SERIES_EXHAUSTED
        assert r.digits_processed == 10

    def test_requested_never_exceeds_at_most(self):
        r = irwin_sum(ConditionSet.of([9, 3], [2, 1]), 15)
        assert 0 <= r.requested_sum <= r.at_most_sum

    def test_per_count_structure(self, ulp):
        r = irwin_sum(ConditionSet.of([9], [2]), 15)
        assert len(r.per_count_sums) == 3
        assert r.per_count_sums[2] == r.requested_sum
        total = sum(r.per_count_sums)
        assert abs(total - r.at_most_sum) <= Decimal("3e-15")
        ulp(r.at_most_sum, "68.991003965973242")

    def test_per_count_matches_standalone_runs(self):
        r = irwin_sum(ConditionSet.of([9], [2]), 15)
        for k in range(3):
            standalone = irwin_sum(ConditionSet.of([9], [k]), 15).requested_sum
            assert abs(r.per_count_sums[k] - standalone) < Decimal("1e-15")

    def test_no_per_count_for_multiple_conditions(self):
        r = irwin_sum(ConditionSet.of([9, 3], [1, 1]), 15)
        assert r.per_count_sums is None

    def test_digit_cap_is_reported(self):
        c = ConditionSet.of([9], [0])
        base_plan = build_plan(c, 15)
        tiny_cap = PrecisionPlan(
            requested_decimals=base_plan.requested_decimals,
            working_decimals=base_plan.working_decimals,
            max_power=base_plan.max_power,
            max_digit_length=12,
            direct_sum_digits=base_plan.direct_sum_digits,
        )
        r = irwin_sum(c, 15, plan=tiny_cap)
        assert r.termination is Termination.DIGIT_CAP_REACHED
        assert r.digits_processed == 12

    def test_zero_count_sums_decrease(self):
        # sums for k zeros strictly decrease for small k
        r = irwin_sum(ConditionSet.of([0], [3]), 20)
        s = r.per_count_sums
        assert s[0] > s[1] > s[2] > s[3]

    def test_sparse_early_blocks_do_not_stop_the_run(self):
        # with twelve zeros required, the first qualifying denominator has 13
        # digits; the empty early blocks must not trigger convergence
        r = irwin_sum(ConditionSet.of([0], [12]), 15)
        assert r.termination is Termination.CONVERGED
        assert r.requested_sum == Decimal("23.025850929940457")

    def test_per_cell_partition(self):
        r = irwin_sum(ConditionSet.of([9, 3], [2, 1]), 15)
        assert len(r.per_cell_sums) == 6
        total = sum(r.per_cell_sums)
        assert abs(total - r.at_most_sum) <= Decimal("6e-15")
        assert r.per_cell_sums[-1] == r.requested_sum

    def test_convergence_stop_is_sound(self):
        # five more digit lengths change nothing at the requested precision
        c = ConditionSet.of([9], [1])
        full = irwin_sum(c, 15)
        longer = partial_sum(c, full.digits_processed + 5, 15)
        assert abs(longer.requested_sum - full.requested_sum) < Decimal("1e-15")

    def test_truncation_order_is_sound(self):
        # doubling the power truncation leaves the result unchanged
        c = ConditionSet.of([9], [1])
        plan = build_plan(c, 15)
        doubled = PrecisionPlan(
            requested_decimals=plan.requested_decimals,
            working_decimals=plan.working_decimals,
            max_power=2 * plan.max_power,
            max_digit_length=plan.max_digit_length,
            direct_sum_digits=plan.direct_sum_digits,
        )
        assert abs(
            irwin_sum(c, 15, plan=doubled).requested_sum
            - irwin_sum(c, 15, plan=plan).requested_sum
        ) < Decimal("1e-15")

    def test_decimals_clamped_to_five(self):
        r = irwin_sum(ConditionSet.of([9], [0]), 2)
        assert r.decimals == 5
        assert r.requested_sum == Decimal("22.92068")


class TestAtMost:
    def test_distinct_digit_aggregate(self, ulp):
        # at most one of every digit: integers with all-distinct digits
        value = at_most_sum(ConditionSet.of(list(range(10)), [1] * 10), 20)
        ulp(value, "8.92994817475544342417")

    def test_two_nines_aggregate(self, ulp):
        ulp(at_most_sum(ConditionSet.of([9], [2]), 15), "68.991003965973242")


class TestPartialSum:
    def test_no_nine_thirty_digits(self, ulp):
        r = partial_sum(ConditionSet.of([9], [0]), 30, 15)
        ulp(r.requested_sum, "21.971055078178619")
        assert r.termination is Termination.PARTIAL_REQUESTED
        assert r.digits_processed == 30

    def test_ten_zeros_landmarks(self, ulp):
        c = ConditionSet.of([0], [10])
        ulp(partial_sum(c, 209, 15).requested_sum, "22.917796696018994")
        ulp(partial_sum(c, 210, 15).requested_sum, "22.924073628793615")

    def test_base2_single_one_six_digits(self):
        r = partial_sum(ConditionSet.of([1], [1], base=2), 6, 15)
        assert r.requested_sum == Decimal("1.968750000000000")  # 63/32

    def test_crossover_against_no_nine_total(self):
        # one-9 partial sums pass the no-9 total between 69 and 70 digits
        c = ConditionSet.of([9], [1])
        no_nine_total = Decimal("22.92067661926415034816")
        below = partial_sum(c, 69, 15).requested_sum
        above = partial_sum(c, 70, 15).requested_sum
        assert below < no_nine_total < above
        assert abs(below - Decimal("22.90872")) < Decimal("1e-5")
        assert abs(above - Decimal("22.92072")) < Decimal("1e-5")

    def test_partial_beyond_finite_end_is_total(self):
        c = ConditionSet.of([0, 1], [2, 3], base=2)
        full = irwin_sum(c, 15)
        r = partial_sum(c, 40, 15)
        assert r.requested_sum == full.requested_sum
        assert r.termination is Termination.PARTIAL_REQUESTED

    def test_power_must_be_positive(self):
        with pytest.raises(ValueError):
            partial_sum(ConditionSet.of([9], [0]), 0, 15)


class TestThresholdSearch:
    def test_one_nine_reaching_23(self, ulp):
        r = threshold_search(ConditionSet.of([9], [1]), "23", 15)
        assert (r.digits_low, r.digits_high) == (80, 81)
        ulp(r.sum_low, "22.995762680948152")
        ulp(r.sum_high, "23.000125707332644")

    def test_two_nines_one_zero_reaching_2(self, ulp):
        # quoted bracket carries 16 decimals, so search at 16
        r = threshold_search(ConditionSet.of([9, 0], [3, 1]), "2", 16)
        assert (r.digits_low, r.digits_high) == (27, 28)
        ulp(r.sum_low, "1.910422503190251")
        ulp(r.sum_high, "2.0043388417551473")

    def test_bracket_invariant(self):
        r = threshold_search(ConditionSet.of([9], [1]), "23", 15)
        threshold = Fraction(23)
        assert Fraction(str(r.sum_low)) < threshold <= Fraction(str(r.sum_high))
        assert r.digits_high == r.digits_low + 1

    def test_short_threshold_text_is_refused(self):
        with pytest.raises(InsufficientAccuracy):
            threshold_search(ConditionSet.of([9], [1]), "23.044287080747", 15)

    def test_declared_precision_recovers(self, ulp):
        r = threshold_search(
            ConditionSet.of([9], [1]), "23.044287080747", 15, threshold_decimals=25
        )
        assert (r.digits_low, r.digits_high) == (327, 328)
        ulp(r.sum_low, "23.04428708074693636344610077")
        ulp(r.sum_high, "23.04428708074702511802366170")

    def test_above_total(self):
        with pytest.raises(ThresholdAboveTotal):
            threshold_search(ConditionSet.of([9], [0]), "23", 15)

    def test_float_threshold_is_refused(self):
        with pytest.raises(TypeError):
            threshold_search(ConditionSet.of([9], [1]), 23.0, 15)

    def test_first_block_crossing_gives_zero_low_digits(self):
        r = threshold_search(ConditionSet.of([9], [0]), "0.5", 15)
        assert (r.digits_low, r.digits_high) == (0, 1)
        assert r.sum_low == 0
        assert r.sum_high == Decimal("2.717857142857143")  # 761/280

    def test_base2_example(self):
        r = threshold_search(ConditionSet.of([1], [1], base=2), "1.99", 15)
        assert (r.digits_low, r.digits_high) == (7, 8)
        assert r.sum_low == Decimal("1.984375000000000")
        assert r.sum_high == Decimal("1.992187500000000")

    def test_nonpositive_threshold(self):
        with pytest.raises(ValueError):
            threshold_search(ConditionSet.of([9], [1]), "0", 15)
        with pytest.raises(ValueError):
            threshold_search(ConditionSet.of([9], [1]), "-1.5", 15)
