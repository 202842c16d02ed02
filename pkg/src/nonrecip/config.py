"""Flat key-value scenario configuration.

The format is deliberately dumb: one ``dotted.key = value`` pair per line,
``#`` lines are comments, lists are comma separated.  Example::

    scenario.attack_present = true
    scenario.theta_grid = 0.5235987755982988, 1.0471975511965976
    scenario.pairs_per_setting = 100000
    scenario.seed = 42
    detection.significance = 0.001
"""

from __future__ import annotations

import math
from pathlib import Path

from .detect import Scenario
from .errors import ConfigError

__all__ = ["parse_config", "load_scenario", "RunSettings"]


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


def _parse_float(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {raw!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {raw!r}")
    return value


def _parse_int(raw: str) -> int:
    try:
        return int(raw, 10)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {raw!r}") from exc


def _parse_float_list(raw: str) -> tuple[float, ...]:
    items = [s for s in (part.strip() for part in raw.split(",")) if s]
    if not items:
        raise ConfigError("expected a comma-separated list of numbers")
    return tuple(_parse_float(s) for s in items)


def parse_config(text: str) -> dict[str, str]:
    """Raw key -> value mapping; duplicate keys are an error."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


class RunSettings:
    """Scenario plus the run options that ride along in the config file."""

    def __init__(self, scenario: Scenario, significance: float,
                 delay_a_to_b: float, delay_b_to_a: float):
        self.scenario = scenario
        self.significance = significance
        self.delay_a_to_b = delay_a_to_b
        self.delay_b_to_a = delay_b_to_a


_KNOWN_KEYS = {
    "scenario.attack_present",
    "scenario.theta_grid",
    "scenario.pairs_per_setting",
    "scenario.seed",
    "scenario.rotation_axis",
    "scenario.adversary",
    "scenario.compensator_theta0",
    "scenario.alice_basis",
    "scenario.alice_alpha",
    "device.delay_a_to_b",
    "device.delay_b_to_a",
    "detection.significance",
}


def load_scenario(path: str | Path) -> RunSettings:
    """Read and validate a scenario config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    raw = parse_config(text)

    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for required in ("scenario.attack_present", "scenario.theta_grid",
                     "scenario.pairs_per_setting", "scenario.seed"):
        if required not in raw:
            raise ConfigError(f"missing required key {required}")

    kwargs: dict = {
        "attack_present": _parse_bool(raw["scenario.attack_present"]),
        "theta_grid": _parse_float_list(raw["scenario.theta_grid"]),
        "pairs_per_setting": _parse_int(raw["scenario.pairs_per_setting"]),
        "seed": _parse_int(raw["scenario.seed"]),
    }
    if "scenario.rotation_axis" in raw:
        axis = _parse_float_list(raw["scenario.rotation_axis"])
        if len(axis) != 3:
            raise ConfigError("scenario.rotation_axis needs exactly 3 components")
        kwargs["rotation_axis"] = axis
    if "scenario.adversary" in raw:
        kwargs["adversary"] = raw["scenario.adversary"]
    if "scenario.compensator_theta0" in raw:
        kwargs["compensator_theta0"] = _parse_float(raw["scenario.compensator_theta0"])
    if "scenario.alice_basis" in raw:
        kwargs["alice_basis"] = raw["scenario.alice_basis"]
    if "scenario.alice_alpha" in raw:
        kwargs["alice_alpha"] = _parse_float(raw["scenario.alice_alpha"])

    scenario = Scenario(**kwargs)

    significance = 0.001
    if "detection.significance" in raw:
        significance = _parse_float(raw["detection.significance"])
        if not 0.0 < significance < 1.0:
            raise ConfigError("detection.significance must be in (0, 1)")
    delay_ab = _parse_float(raw.get("device.delay_a_to_b", "0"))
    delay_ba = _parse_float(raw.get("device.delay_b_to_a", "0"))
    if delay_ab < 0 or delay_ba < 0:
        raise ConfigError("device delays must be non-negative")
    return RunSettings(scenario, significance, delay_ab, delay_ba)
