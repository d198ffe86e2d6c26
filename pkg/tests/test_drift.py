import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.clocks.drift import ConstantDrift, NoDrift, RandomWalkDrift, SinusoidalDrift


def test_static_profiles():
    assert NoDrift().ppm_at(12.0) == 0.0
    assert NoDrift().is_static
    assert ConstantDrift(-50).ppm_at(3.0) == -50.0
    assert ConstantDrift(-50).bound_ppm == 50.0


def test_sinusoid_peaks_at_a_quarter_period():
    drift = SinusoidalDrift(amplitude_ppm=100, period_s=1.0)
    assert drift.ppm_at(0.25) == pytest.approx(100.0)
    assert drift.ppm_at(0.75) == pytest.approx(-100.0)
    assert not drift.is_static


def test_sinusoid_rejects_a_non_positive_period():
    with pytest.raises(ValueError):
        SinusoidalDrift(amplitude_ppm=10, period_s=0)


def test_random_walk_is_reproducible_from_its_seed():
    times = [k * 0.01 for k in range(2000)]
    first = RandomWalkDrift(step_ppm=1, bound=5, seed=11, interval_s=0.01)
    second = RandomWalkDrift(step_ppm=1, bound=5, seed=11, interval_s=0.01)
    # Look far ahead first on one of them; the sequence must not change.
    first.ppm_at(times[-1])
    assert [first.ppm_at(t) for t in times] == [second.ppm_at(t) for t in times]
    assert first == second


def test_random_walk_moves_one_step_per_interval():
    drift = RandomWalkDrift(step_ppm=2, bound=7, seed=3, interval_s=0.5)
    values = [drift.ppm_at(k * 0.5) for k in range(500)]
    assert values[0] == 0.0
    assert all(abs(later - earlier) <= 2 for earlier, later in zip(values, values[1:]))
    assert max(abs(value) for value in values) <= 7
    assert drift.ppm_at(0.49) == values[0]


def test_random_walk_seeds_differ():
    times = [k * 0.1 for k in range(200)]
    first = RandomWalkDrift(step_ppm=1, seed=1, interval_s=0.1)
    second = RandomWalkDrift(step_ppm=1, seed=2, interval_s=0.1)
    assert [first.ppm_at(t) for t in times] != [second.ppm_at(t) for t in times]


@given(
    st.floats(0, 100),
    st.floats(0.01, 10),
    st.floats(0, 6.3),
    st.floats(0, 1000),
)
def test_sinusoid_never_exceeds_its_bound(amplitude, period, phase, t):
    drift = SinusoidalDrift(amplitude_ppm=amplitude, period_s=period, phase=phase)
    assert abs(drift.ppm_at(t)) <= drift.bound_ppm + 1e-9


def test_descriptions_name_the_kind():
    assert ConstantDrift(5).describe() == {"kind": "constant", "ppm": 5}
    assert SinusoidalDrift(100, 2.0).describe()["period_s"] == 2.0
    assert RandomWalkDrift(seed=4).describe()["seed"] == 4
