import numpy as np
import pytest

from src.clocks.clock_model import ClockModel
from src.clocks.drift import ConstantDrift, NoDrift, SinusoidalDrift
from src.clocks.measurement import ClockStats, measure_clock, measure_source_clock
from src.core.errors import InsufficientDataError, MeasurementError
from src.core.sim_time import SimTime


def test_ideal_clock_measures_exactly_27_mhz():
    model = ClockModel(drift=NoDrift())
    times = [model.next_edge(n) for n in range(900)]
    stats = measure_clock(times, window=300)
    assert (stats.min_hz, stats.mean_hz, stats.max_hz) == (27e6, 27e6, 27e6)
    assert stats.sample_count == 900


def test_unit_arrays_and_sim_times_agree():
    model = ClockModel(drift=ConstantDrift(42))
    units = model.edge_units(np.arange(1200))
    from_units = measure_clock(units, window=300)
    from_times = measure_clock([SimTime.from_units(int(u)) for u in units], window=300)
    assert from_units.mean_hz == pytest.approx(from_times.mean_hz, rel=1e-12)


def test_too_few_edges():
    times = [SimTime.from_ns(n) for n in range(299)]
    with pytest.raises(InsufficientDataError):
        measure_clock(times, window=300)


def test_window_of_one_is_rejected():
    with pytest.raises(MeasurementError):
        measure_clock([SimTime.from_ns(0), SimTime.from_ns(1)], window=1)


def test_non_increasing_times_are_rejected():
    times = [SimTime.from_ns(n) for n in range(10)]
    times[4] = times[3]
    with pytest.raises(MeasurementError):
        measure_clock(times, window=5)
    with pytest.raises(MeasurementError):
        measure_clock(np.array([0, 1, 4, 4]), window=2)


def test_trailing_partial_window_is_ignored():
    times = [SimTime.from_ns(37 * n) for n in range(650)]
    assert measure_clock(times, window=300).sample_count == 600


@pytest.mark.parametrize("ppm", [-100, -37.5, 0, 12, 100])
def test_constant_offset_is_recovered_within_one_ppm(ppm):
    stats = measure_source_clock(ClockModel(drift=ConstantDrift(ppm)), edge_count=2_000_000)
    assert stats.ppm(stats.mean_hz) == pytest.approx(ppm, abs=1)
    assert stats.min_hz <= stats.mean_hz <= stats.max_hz


def test_sinusoidal_envelope_spread():
    model = ClockModel(drift=SinusoidalDrift(100, 1.0))
    stats = measure_source_clock(model, edge_count=27_000_000, window=300)
    spread = stats.max_hz - stats.min_hz
    assert 1.5e-4 * 27e6 <= spread <= 2.0e-4 * 27e6
    assert stats.ppm(stats.max_hz) == pytest.approx(100, abs=2)
    assert stats.ppm(stats.min_hz) == pytest.approx(-100, abs=2)


def test_ppm_needs_a_nominal_frequency():
    stats = ClockStats(1.0, 1.0, 1.0, 300)
    with pytest.raises(MeasurementError):
        stats.ppm(1.0)
    assert "mean_ppm" not in stats.to_dict()
