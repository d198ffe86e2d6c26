# =============================================================
# File: budget.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2026-01-29
# Description:
#     LDO power budgeting for the multi-video board: load current
#     sums, devices per regulator, regulator counts per rail and
#     power totals. All arithmetic is decimal so published totals
#     come out exactly.
# =============================================================

import json
import logging
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from src.core.artifacts import read_text
from src.core.errors import ConfigError, PowerBudgetError

Number = Union[int, float, str, Decimal]


def to_decimal(value: Number, name: str = "value") -> Decimal:
    """Exact decimal from an int, a decimal string or a float's shortest repr."""
    if isinstance(value, bool):
        raise PowerBudgetError(f"{name}: expected a number, got {value!r}")
    try:
        result = value if isinstance(value, Decimal) else Decimal(str(value))
    except InvalidOperation:
        raise PowerBudgetError(f"{name}: expected a number, got {value!r}") from None
    if not result.is_finite():
        raise PowerBudgetError(f"{name}: expected a finite number, got {value!r}")
    return result


# =============================================================
# Records
# =============================================================
@dataclass(frozen=True)
class LoadDevice:
    """
    A device drawing current from (or consuming power on) the board.

    Attributes:
        name: Device name.
        supply_current_mA: Maximum load current of one unit.
        power_mW: Average power of one unit (or of the listed group).
        quantity: Units of this device.
        rail: Name of the LDO feeding it, if any.
    """

    name: str
    supply_current_mA: Decimal = Decimal(0)
    power_mW: Decimal = Decimal(0)
    quantity: int = 1
    rail: Optional[str] = None

    def __post_init__(self) -> None:
        current = to_decimal(self.supply_current_mA, f"{self.name}.supply_current_mA")
        power = to_decimal(self.power_mW, f"{self.name}.power_mW")
        if current < 0 or power < 0:
            raise PowerBudgetError(f"{self.name}: currents and powers must be non-negative")
        if isinstance(self.quantity, bool) or not isinstance(self.quantity, int) or self.quantity < 0:
            raise PowerBudgetError(f"{self.name}: quantity must be a non-negative integer, got {self.quantity!r}")
        object.__setattr__(self, "supply_current_mA", current)
        object.__setattr__(self, "power_mW", power)


@dataclass(frozen=True)
class LdoSpec:
    """A low-dropout regulator."""

    name: str
    max_output_current_mA: Decimal
    input_label: str = ""
    output_label: str = ""
    part: str = ""

    def __post_init__(self) -> None:
        capacity = to_decimal(self.max_output_current_mA, f"{self.name}.max_output_current_mA")
        if capacity <= 0:
            raise PowerBudgetError(f"{self.name}: max_output_current_mA must be positive, got {capacity}")
        object.__setattr__(self, "max_output_current_mA", capacity)


# =============================================================
# Sizing arithmetic
# =============================================================
def max_load_current(loads: Iterable[LoadDevice]) -> Decimal:
    """
    Maximum current required from one regulator: the sum over its loads
    of quantity times per-unit current.

    Raises:
        PowerBudgetError: If there are no loads.
    """
    loads = list(loads)
    if not loads:
        raise PowerBudgetError("at least one load device is required")
    return sum((load.quantity * load.supply_current_mA for load in loads), Decimal(0))


def devices_per_ldo(ldo: LdoSpec, per_device_mA: Number) -> int:
    """
    How many identical devices one regulator can feed (rounded down).

    Raises:
        PowerBudgetError: If ``per_device_mA`` is not positive.
    """
    per_device = to_decimal(per_device_mA, "per_device_mA")
    if per_device <= 0:
        raise PowerBudgetError(f"per-device current must be positive, got {per_device}")
    return int(ldo.max_output_current_mA // per_device)


def total_power(devices: Iterable[LoadDevice]) -> Decimal:
    """Sum of quantity times power; 0 for no devices."""
    return sum((device.quantity * device.power_mW for device in devices), Decimal(0))


def required_ldo_count(ldo: LdoSpec, loads: Iterable[LoadDevice]) -> int:
    """Regulators of this type needed until their combined capacity covers the load current."""
    needed = max_load_current(loads) / ldo.max_output_current_mA
    return int(needed.to_integral_value(rounding=ROUND_CEILING))


@dataclass(frozen=True)
class RailCheck:
    """Load of one regulator rail."""

    ldo: LdoSpec
    loads: Tuple[LoadDevice, ...]
    load_current_mA: Decimal
    required_ldos: int

    @property
    def headroom_mA(self) -> Decimal:
        return self.ldo.max_output_current_mA - self.load_current_mA

    @property
    def ok(self) -> bool:
        return self.headroom_mA >= 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ldo": self.ldo.name,
            "part": self.ldo.part,
            "output": self.ldo.output_label,
            "capacity_mA": str(self.ldo.max_output_current_mA),
            "load_mA": str(self.load_current_mA),
            "headroom_mA": str(self.headroom_mA),
            "required_ldos": self.required_ldos,
            "ok": self.ok,
        }


def check_rails(ldos: Iterable[LdoSpec], loads: Iterable[LoadDevice]) -> List[RailCheck]:
    """
    Groups current-drawing loads by rail and checks each regulator.

    Raises:
        PowerBudgetError: If a load names a rail with no regulator.
    """
    by_name = {ldo.name: ldo for ldo in ldos}
    grouped: Dict[str, List[LoadDevice]] = {name: [] for name in by_name}
    for load in loads:
        if load.rail is None:
            continue
        if load.rail not in by_name:
            raise PowerBudgetError(f"{load.name}: unknown rail '{load.rail}'")
        grouped[load.rail].append(load)
    checks = []
    for name, rail_loads in grouped.items():
        if not rail_loads:
            continue
        ldo = by_name[name]
        checks.append(RailCheck(ldo, tuple(rail_loads), max_load_current(rail_loads),
                                required_ldo_count(ldo, rail_loads)))
        if not checks[-1].ok:
            logging.warning(f"Power: rail {name} needs {checks[-1].load_current_mA} mA, "
                            f"capacity {ldo.max_output_current_mA} mA.")
    return checks


# =============================================================
# Budgets
# =============================================================
@dataclass(frozen=True)
class PowerBudget:
    """
    Regulators, their loads and the measured power tables of a board.

    Attributes:
        ldos: Regulators.
        loads: Current-drawing devices with their rails.
        device_power: Average power per main device (or device group).
        supply_power: Average power measured at each supply.
    """

    ldos: Tuple[LdoSpec, ...] = ()
    loads: Tuple[LoadDevice, ...] = ()
    device_power: Tuple[LoadDevice, ...] = ()
    supply_power: Tuple[LoadDevice, ...] = ()
    name: str = "budget"

    def capacity_table(self) -> List[Dict[str, Any]]:
        """Devices per regulator for every (regulator, load type) pair."""
        rows = []
        for ldo in self.ldos:
            for load in self.loads:
                if load.supply_current_mA > 0:
                    rows.append({
                        "ldo": ldo.name,
                        "part": ldo.part,
                        "device": load.name,
                        "per_device_mA": str(load.supply_current_mA),
                        "devices_per_ldo": devices_per_ldo(ldo, load.supply_current_mA),
                    })
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "device_power_mW": str(total_power(self.device_power)),
            "supply_power_mW": str(total_power(self.supply_power)),
            "rails": [check.to_dict() for check in check_rails(self.ldos, self.loads)],
            "capacity": self.capacity_table(),
        }


def case_study_budget() -> PowerBudget:
    """
    The two-input, one-output board: two AP7312 regulators feed the two
    decoders (analog 1.8 V; digital 1.8/3.3 V), an MCP1700T feeds the
    encoder at 5 V. The "2x" power rows are pair totals.
    """
    ldos = (
        LdoSpec("LDO1", Decimal("150"), "AV1 5 V", "AV2 1.8 V", "AP7312"),
        LdoSpec("LDO2", Decimal("150"), "DV2 5 V", "DV1 1.8/3.3 V", "AP7312"),
        LdoSpec("LDO3", Decimal("250"), "DV2 5 V", "DV3 5 V", "MCP1700T"),
    )
    loads = (
        LoadDevice("TVP5150 (analog)", Decimal("32.9"), quantity=2, rail="LDO1"),
        LoadDevice("TVP5150 (digital)", Decimal("32.9"), quantity=2, rail="LDO2"),
        LoadDevice("ADV7171", Decimal("37"), quantity=1, rail="LDO3"),
    )
    device_power = (
        LoadDevice("2x AP7312", power_mW=Decimal("45")),
        LoadDevice("2x TVP5150", power_mW=Decimal("230")),
        LoadDevice("MCP1700", power_mW=Decimal("44.5")),
        LoadDevice("ADV7171", power_mW=Decimal("1250")),
    )
    supply_power = (
        LoadDevice("Analog DC supply", power_mW=Decimal("350")),
        LoadDevice("Digital DC supply", power_mW=Decimal("1500")),
    )
    return PowerBudget(ldos, loads, device_power, supply_power, name="case_study")


def _records(data: Dict[str, Any], key: str, allowed: List[str]) -> List[Dict[str, Any]]:
    items = data.get(key, [])
    if not isinstance(items, list):
        raise ConfigError(key, "expected a list")
    for index, item in enumerate(items):
        if not isinstance(item, dict):
            raise ConfigError(f"{key}[{index}]", "expected an object")
        for name in item:
            if name not in allowed:
                raise ConfigError(f"{key}[{index}].{name}", "unknown key")
        if "name" not in item:
            raise ConfigError(f"{key}[{index}].name", "missing")
    return items


def parse_budget(data: Dict[str, Any]) -> PowerBudget:
    """
    Builds a budget from its JSON form.

    Raises:
        ConfigError: On unknown or missing keys.
        PowerBudgetError: On invalid values.
    """
    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected an object")
    for key in data:
        if key not in ("name", "ldos", "loads", "device_power", "supply_power"):
            raise ConfigError(key, "unknown key")
    load_keys = ["name", "supply_current_mA", "power_mW", "quantity", "rail"]
    ldos = tuple(
        LdoSpec(item["name"], item.get("max_output_current_mA", 0), item.get("input", ""), item.get("output", ""),
                item.get("part", ""))
        for item in _records(data, "ldos", ["name", "max_output_current_mA", "input", "output", "part"])
    )

    def devices(key: str) -> Tuple[LoadDevice, ...]:
        return tuple(
            LoadDevice(item["name"], item.get("supply_current_mA", 0), item.get("power_mW", 0),
                       item.get("quantity", 1), item.get("rail"))
            for item in _records(data, key, load_keys)
        )

    return PowerBudget(ldos, devices("loads"), devices("device_power"), devices("supply_power"),
                       name=str(data.get("name", "budget")))


def load_budget(path: Union[str, Path]) -> PowerBudget:
    """Reads a JSON budget file."""
    try:
        data = json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    budget = parse_budget(data)
    logging.info(f"Power: budget '{budget.name}' loaded ({len(budget.ldos)} LDO(s), {len(budget.loads)} load(s)).")
    return budget


def format_budget(budget: PowerBudget) -> str:
    """Plain-text totals, rail checks and capacity table."""
    lines = [
        f"device power: {total_power(budget.device_power)} mW",
        f"supply power: {total_power(budget.supply_power)} mW",
        "rails:",
    ]
    for check in check_rails(budget.ldos, budget.loads):
        status = "ok" if check.ok else "OVER"
        lines.append(f"  {check.ldo.name} {check.ldo.part} {check.ldo.output_label}: {check.load_current_mA} of "
                     f"{check.ldo.max_output_current_mA} mA, {check.required_ldos} LDO(s) [{status}]")
    lines.append("devices per LDO:")
    for row in budget.capacity_table():
        lines.append(f"  {row['ldo']} ({row['part']}) x {row['device']} @ {row['per_device_mA']} mA: "
                     f"{row['devices_per_ldo']}")
    return "\n".join(lines)
