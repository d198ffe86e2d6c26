from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.core.config import PHASE_UNITS_PER_TICK
from src.core.sim_time import ZERO, SimTime, units_to_ns


def test_from_units_splits_whole_and_fractional_nanoseconds():
    time = SimTime.from_units(3 * PHASE_UNITS_PER_TICK + PHASE_UNITS_PER_TICK // 3)
    assert time.ticks == 3
    assert time.residue == Fraction(1, 3)


def test_one_27mhz_period_is_on_the_grid():
    period = SimTime.from_seconds(Fraction(1, 27_000_000))
    assert period.exact_ns == Fraction(1000, 27)
    assert period.units == 1_000_000_000


def test_off_grid_time_has_no_units():
    with pytest.raises(ValueError):
        SimTime.from_ns(Fraction(1, 10**9)).units


def test_negative_time_is_rejected():
    with pytest.raises(ValueError):
        SimTime(-1)


def test_residue_must_be_a_fraction_of_one_nanosecond():
    with pytest.raises(ValueError):
        SimTime(0, Fraction(3, 2))


@given(st.integers(0, 10**18), st.integers(0, 10**18))
def test_addition_and_ordering_follow_the_units(a, b):
    first, second = SimTime.from_units(a), SimTime.from_units(b)
    assert (first < second) == (a < b)
    assert (first + second).units == a + b
    assert first.difference_ns(second) == units_to_ns(a - b)


def test_zero_and_str():
    assert ZERO.units == 0
    assert str(SimTime(5)) == "5 ns"
    assert str(SimTime.from_units(PHASE_UNITS_PER_TICK // 2)) == "0+1/2 ns"
