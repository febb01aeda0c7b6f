"""Shared test helpers."""

from __future__ import annotations

from decimal import Decimal

import pytest


def assert_ulp(value, expected_text: str, ulps: int = 1) -> None:
    """Assert a value matches a quoted decimal within ``ulps`` units in the
    last place shown by the quote."""
    expected = Decimal(expected_text)
    tolerance = Decimal(ulps).scaleb(expected.as_tuple().exponent)
    got = Decimal(str(value))
    assert abs(got - expected) <= tolerance, (
        f"{got} differs from {expected_text} by more than {ulps} ulp"
    )


@pytest.fixture
def ulp():
    return assert_ulp
