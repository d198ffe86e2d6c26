import json
from decimal import Decimal

import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.core.errors import ConfigError, PowerBudgetError
from src.power.budget import (
    LdoSpec,
    LoadDevice,
    case_study_budget,
    check_rails,
    devices_per_ldo,
    format_budget,
    load_budget,
    max_load_current,
    parse_budget,
    required_ldo_count,
    total_power,
)


def test_case_study_power_totals():
    budget = case_study_budget()
    assert total_power(budget.device_power) == Decimal("1569.5")
    assert total_power(budget.supply_power) == Decimal("1850")


@pytest.mark.parametrize("capacity, per_device, expected", [
    ("150", "32.9", 4),
    ("250", "37", 6),
    ("150", "150", 1),
    ("150", "150.1", 0),
])
def test_devices_per_ldo_rounds_down(capacity, per_device, expected):
    assert devices_per_ldo(LdoSpec("ldo", capacity), per_device) == expected


def test_case_study_rails_have_headroom():
    checks = check_rails(case_study_budget().ldos, case_study_budget().loads)
    assert [(check.ldo.name, check.load_current_mA, check.ok) for check in checks] == [
        ("LDO1", Decimal("65.8"), True),
        ("LDO2", Decimal("65.8"), True),
        ("LDO3", Decimal("37"), True),
    ]
    assert all(check.required_ldos == 1 for check in checks)


def test_decimal_arithmetic_is_exact():
    loads = [LoadDevice("a", "0.1", quantity=3)]
    assert max_load_current(loads) == Decimal("0.3")
    assert total_power([LoadDevice("p", power_mW=0.1), LoadDevice("q", power_mW=0.2)]) == Decimal("0.3")


def test_required_ldo_count_rounds_up():
    assert required_ldo_count(LdoSpec("ldo", "100"), [LoadDevice("a", "50", quantity=3)]) == 2


@pytest.mark.parametrize("build", [
    lambda: max_load_current([]),
    lambda: devices_per_ldo(LdoSpec("ldo", "150"), 0),
    lambda: LdoSpec("ldo", "0"),
    lambda: LoadDevice("a", "-1"),
    lambda: LoadDevice("a", "nan"),
    lambda: LoadDevice("a", "lots"),
    lambda: LoadDevice("a", "1", quantity=-1),
    lambda: check_rails([LdoSpec("ldo", "1")], [LoadDevice("a", "1", rail="other")]),
])
def test_invalid_inputs(build):
    with pytest.raises(PowerBudgetError):
        build()


def test_total_power_of_nothing_is_zero():
    assert total_power([]) == 0


def test_overloaded_rail_is_flagged():
    checks = check_rails([LdoSpec("ldo", "100")], [LoadDevice("a", "60", quantity=2, rail="ldo")])
    assert not checks[0].ok
    assert checks[0].headroom_mA == Decimal("-20")
    assert checks[0].to_dict()["required_ldos"] == 2


def test_budget_file_round_trip(tmp_path):
    document = {
        "name": "bench",
        "ldos": [{"name": "L1", "max_output_current_mA": "150", "part": "AP7312"}],
        "loads": [{"name": "decoder", "supply_current_mA": "32.9", "quantity": 2, "rail": "L1"}],
        "device_power": [{"name": "decoder", "power_mW": 115}],
        "supply_power": [{"name": "bench supply", "power_mW": "500.5"}],
    }
    path = tmp_path / "budget.json"
    path.write_text(json.dumps(document))
    budget = load_budget(path)
    data = budget.to_dict()
    assert data["name"] == "bench"
    assert data["supply_power_mW"] == "500.5"
    assert data["rails"][0]["load_mA"] == "65.8"
    assert data["capacity"][0]["devices_per_ldo"] == 4
    assert "L1 AP7312" in format_budget(budget)


@pytest.mark.parametrize("document", [
    {"boards": []},
    {"ldos": {}},
    {"ldos": [{"max_output_current_mA": 1}]},
    {"loads": [{"name": "a", "volts": 5}]},
    [],
])
def test_malformed_budgets(document):
    with pytest.raises(ConfigError):
        parse_budget(document)


amounts = st.decimals(min_value=0, max_value=5000, places=2, allow_nan=False, allow_infinity=False)
load_devices = st.builds(LoadDevice, name=st.sampled_from(["tvp5150", "adv7171", "fpga"]),
                         supply_current_mA=amounts, power_mW=amounts, quantity=st.integers(0, 8))


@given(st.lists(load_devices, max_size=6), st.lists(load_devices, max_size=6))
def test_total_power_adds_over_device_lists(first, second):
    assert total_power(first + second) == total_power(first) + total_power(second)


@given(st.lists(load_devices, min_size=1, max_size=6), st.randoms())
def test_totals_ignore_device_order(devices, rng):
    shuffled = list(devices)
    rng.shuffle(shuffled)
    assert total_power(shuffled) == total_power(devices)
    assert max_load_current(shuffled) == max_load_current(devices)


@given(load_devices, st.integers(0, 8))
def test_quantity_scales_current_and_power(device, quantity):
    single = LoadDevice(device.name, device.supply_current_mA, device.power_mW, quantity=1)
    many = LoadDevice(device.name, device.supply_current_mA, device.power_mW, quantity=quantity)
    assert max_load_current([many]) == quantity * max_load_current([single])
    assert total_power([many]) == quantity * total_power([single])


positive_amounts = st.decimals(min_value=Decimal("0.01"), max_value=500, places=2)


@given(st.decimals(min_value=1, max_value=1000, places=1), positive_amounts, positive_amounts)
def test_heavier_devices_never_fit_more_per_regulator(capacity, lighter, heavier):
    lighter, heavier = sorted((lighter, heavier))
    ldo = LdoSpec("ldo", capacity)
    assert devices_per_ldo(ldo, heavier) <= devices_per_ldo(ldo, lighter)
    assert devices_per_ldo(ldo, lighter) * lighter <= capacity
