import pytest

from src.clocks.measurement import ClockStats
from src.core.errors import ConfigError
from src.sync.sync_module import ReferencePolicy, SyncModule, select_reference
from src.video.geometry import Region
from tests.helpers import make_streams


def stats(mean_hz: float) -> ClockStats:
    return ClockStats(mean_hz - 1, mean_hz, mean_hz + 1, 300, 27e6)


@pytest.mark.parametrize("text, expected", [
    ("fixed(2)", ReferencePolicy("fixed", 2)),
    ("fixed", ReferencePolicy("fixed", 0)),
    (" slowest_clock ", ReferencePolicy("slowest_clock")),
])
def test_reference_policy_parsing(text, expected):
    assert ReferencePolicy.parse(text) == expected


@pytest.mark.parametrize("text", ["fastest", "fixed(-1)", "fixed()", ""])
def test_unknown_reference_policy(text):
    with pytest.raises(ConfigError):
        ReferencePolicy.parse(text)


def test_policy_text_round_trips():
    for policy in (ReferencePolicy("fixed", 3), ReferencePolicy("slowest_clock")):
        assert ReferencePolicy.parse(str(policy)) == policy


def test_slowest_clock_takes_the_lowest_mean_and_the_lower_index_on_ties():
    clocks = [stats(27_000_100), stats(26_999_000), stats(26_999_000)]
    assert select_reference(ReferencePolicy("slowest_clock"), clocks) == 1


def test_fixed_reference_must_exist():
    assert select_reference(ReferencePolicy("fixed", 1), [stats(1), stats(2)]) == 1
    with pytest.raises(ConfigError):
        select_reference(ReferencePolicy("fixed", 2), [stats(1), stats(2)])
    with pytest.raises(ConfigError):
        select_reference(ReferencePolicy("fixed", 0), [])


def test_invalid_module_configuration(desk):
    with pytest.raises(ConfigError):
        SyncModule(0, 0, desk)
    with pytest.raises(ConfigError):
        SyncModule(2, 2, desk)


def test_write_tick_rejects_the_reference_channel(desk):
    reference, _ = make_streams(desk, [None, None], [0, 0], frame_count=1)
    module = SyncModule(2, 0, desk)
    with pytest.raises(ValueError):
        module.write_tick(0, reference[0])


def test_nothing_is_emitted_before_the_reference_frame_start(desk):
    reference, _ = make_streams(desk, [None, None], [0, 0], frame_count=1)
    module = SyncModule(2, 0, desk)
    assert all(module.read_tick(reference[offset]) is None for offset in range(desk.frame_start_offset))
    output = module.read_tick(reference[desk.frame_start_offset])
    assert output is not None
    assert output.region is Region.SAV
    assert output.values == (reference.data[desk.frame_start_offset],) * 2


def test_identical_channels_align_after_priming(desk):
    reference, other = make_streams(desk, [None, None], [0, 0], frame_count=2)
    module = SyncModule(2, 0, desk, fill_byte=0x10, keep_trace=True)
    outputs = []
    for offset in range(len(reference)):
        module.write_tick(1, other[offset])
        output = module.read_tick(reference[offset])
        if output is not None and output.row is not None:
            outputs.append(output)
    assert module.all_primed
    assert module.trace.ticks == 2 * desk.active_bytes_per_frame
    assert module.trace.violation_count == 0
    first_frame = outputs[:desk.active_bytes_per_frame]
    assert all(output.values[1] == 0x10 and output.row.channels[1] is None for output in first_frame[:-1])
    # The write that completes frame 0 lands on the same edge as the last read, and writes go first.
    last = first_frame[-1]
    assert last.row.channels[1] == last.row.reference
    assert last.values[1] == last.values[0]
    second_frame = outputs[desk.active_bytes_per_frame:]
    assert all(output.values[0] == output.values[1] for output in second_frame)
    offsets = module.trace.offset_stats()[1]
    assert (offsets.minimum, offsets.maximum, offsets.mode) == (0, 0, 0)
