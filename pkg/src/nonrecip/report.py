"""Delimited output and machine-readable run reports.

Number formatting is pinned down hard: fixed decimal notation, 9
significant digits, LF line endings, no locale anywhere.  Two runs with the
same inputs must produce byte-identical files (the JSON report's timestamp
is the one sanctioned exception, and it can be suppressed).
"""

from __future__ import annotations

import json
import math
import time
from decimal import Context
from pathlib import Path

import numpy as np

from .channel import induced_phase
from .detect import DetectionVerdict, Scenario, TallyTable

__all__ = [
    "FIG3_COLUMNS",
    "fixed_decimal",
    "fig3_rows_to_csv",
    "build_report",
    "dumps_report",
    "write_report",
    "load_report",
]

FIG3_COLUMNS = (
    "theta_rad",
    "p_theta_attack",
    "p_theta_perp_attack",
    "p_theta_null",
    "p_theta_perp_null",
)

_NINE_SIG = Context(prec=9)


def fixed_decimal(x: float, *, context: Context = _NINE_SIG) -> str:
    """Format to 9 significant digits in plain decimal notation."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot format non-finite value {x!r}")
    rounded = context.create_decimal(repr(x))
    return format(rounded, "f")


def fig3_rows_to_csv(rows) -> str:
    """CSV text for the coincidence-curve table; header is fixed."""
    lines = [",".join(FIG3_COLUMNS)]
    for row in rows:
        if len(row) != len(FIG3_COLUMNS):
            raise ValueError(f"expected {len(FIG3_COLUMNS)} columns, got {len(row)}")
        lines.append(",".join(fixed_decimal(v) for v in row))
    return "\n".join(lines) + "\n"


def _timestamp() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def build_report(
    scenario: Scenario,
    tallies: TallyTable,
    verdict: DetectionVerdict,
    *,
    delay_a_to_b: float = 0.0,
    delay_b_to_a: float = 0.0,
    threads: int = 1,
    with_timestamp: bool = True,
) -> dict:
    """Assemble the full run record as one JSON-serializable dict."""
    from . import __version__

    thetas = list(tallies.thetas)
    contrast_attack = [
        math.sin(t) * math.cos(2.0 * induced_phase(t)) for t in thetas
    ]
    report = {
        "tool": {"name": "nonrecip", "version": __version__},
        "scenario": {
            "attack_present": scenario.attack_present,
            "rotation_axis": list(scenario.rotation_axis),
            "adversary": scenario.adversary,
            "compensator_theta0": scenario.compensator_theta0,
            "alice_basis": scenario.alice_basis,
            "alice_alpha": scenario.alice_alpha,
            "theta_grid": list(scenario.theta_grid),
            "pairs_per_setting": scenario.pairs_per_setting,
            "seed": scenario.seed,
        },
        "run": {"threads": threads},
        "device_timing": {
            "delay_a_to_b": delay_a_to_b,
            "delay_b_to_a": delay_b_to_a,
            "asymmetry": delay_a_to_b - delay_b_to_a,
        },
        "tallies": {
            "outcome_order": ["++", "+-", "-+", "--"],
            "thetas": thetas,
            "counts": [[int(c) for c in row] for row in np.asarray(tallies.counts)],
            "pairs_per_setting": tallies.pairs_per_setting,
        },
        "verdict": {
            "chi_square": verdict.chi_square,
            "dof": verdict.dof,
            "p_value": verdict.p_value,
            "significance": verdict.significance,
            "non_reciprocal": verdict.non_reciprocal,
            "contrast_estimates": list(verdict.contrast_estimates),
        },
        "reference_curves": {
            "contrast_null": [math.sin(t) for t in thetas],
            "contrast_attack": contrast_attack,
        },
    }
    if with_timestamp:
        report["timestamp"] = _timestamp()
    return report


def dumps_report(report: dict) -> str:
    """Deterministic serialization: fixed key order, shortest-repr floats."""
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps_report(report), encoding="utf-8", newline="\n")


def load_report(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
