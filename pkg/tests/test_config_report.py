"""Config parsing, number formatting, CSV and JSON report output."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np
import pytest

from nonrecip.config import load_scenario, parse_config
from nonrecip.detect import Scenario, reciprocity_test, simulate
from nonrecip.errors import ConfigError
from nonrecip.report import (
    FIG3_COLUMNS,
    build_report,
    dumps_report,
    fig3_rows_to_csv,
    fixed_decimal,
    load_report,
    write_report,
)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL_CFG = """\
scenario.attack_present = true
scenario.theta_grid = 0.5235987755982988, 1.0471975511965976
scenario.pairs_per_setting = 1000
scenario.seed = 7
"""


class TestParseConfig:
    def test_key_value_lines(self):
        raw = parse_config("a.b = 1\n# comment\n\nc.d = x, y\n")
        assert raw == {"a.b": "1", "c.d": "x, y"}

    def test_duplicate_keys_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("a = 1\na = 2\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("just some words\n")

    def test_empty_key_rejected(self):
        with pytest.raises(ConfigError, match="empty key"):
            parse_config("= 3\n")


class TestLoadScenario:
    def test_minimal(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(MINIMAL_CFG)
        settings = load_scenario(cfg)
        assert settings.scenario.attack_present is True
        assert settings.scenario.theta_grid == (
            0.5235987755982988,
            1.0471975511965976,
        )
        assert settings.scenario.pairs_per_setting == 1000
        assert settings.scenario.seed == 7
        assert settings.significance == 0.001  # default
        assert settings.delay_a_to_b == 0.0

    def test_full(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(
            MINIMAL_CFG
            + "scenario.rotation_axis = 0, 0, 1\n"
            + "scenario.adversary = fixed_compensator\n"
            + "scenario.compensator_theta0 = 1.5707963267948966\n"
            + "scenario.alice_basis = circular\n"
            + "detection.significance = 0.01\n"
            + "device.delay_a_to_b = 2.4e-8\n"
            + "device.delay_b_to_a = 3.1e-8\n"
        )
        settings = load_scenario(cfg)
        assert settings.scenario.adversary == "fixed_compensator"
        assert settings.scenario.compensator_theta0 == math.pi / 2
        assert settings.significance == 0.01
        assert settings.delay_a_to_b == 2.4e-8
        assert settings.delay_b_to_a == 3.1e-8

    @pytest.mark.parametrize(
        "extra,message",
        [
            ("scenario.volume = 11\n", "unknown"),
            ("detection.significance = 1.5\n", "significance"),
            ("device.delay_a_to_b = -1\n", "non-negative"),
            ("scenario.rotation_axis = 1, 0\n", "3 components"),
        ],
    )
    def test_bad_values(self, tmp_path, extra, message):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(MINIMAL_CFG + extra)
        with pytest.raises(ConfigError, match=message):
            load_scenario(cfg)

    def test_missing_required_key(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("scenario.seed = 1\n")
        with pytest.raises(ConfigError, match="missing required"):
            load_scenario(cfg)

    def test_bad_boolean(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(MINIMAL_CFG.replace("true", "maybe"))
        with pytest.raises(ConfigError, match="boolean"):
            load_scenario(cfg)

    def test_unreadable_path(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_scenario(tmp_path / "absent.cfg")

    @pytest.mark.parametrize(
        "name,attack,adversary",
        [
            ("attack_on.cfg", True, "none"),
            ("attack_off.cfg", False, "none"),
            ("basis_aware.cfg", True, "basis_aware"),
        ],
    )
    def test_bundled_scenarios(self, name, attack, adversary):
        settings = load_scenario(SCENARIO_DIR / name)
        sc = settings.scenario
        assert sc.attack_present is attack
        assert sc.adversary == adversary
        assert len(sc.theta_grid) == 4
        assert sc.pairs_per_setting == 100000

    def test_bundled_basis_aware_has_timing_asymmetry(self):
        settings = load_scenario(SCENARIO_DIR / "basis_aware.cfg")
        assert settings.delay_a_to_b != settings.delay_b_to_a


class TestFixedDecimal:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (math.pi, "3.14159265"),
            (-math.pi / 2, "-1.57079633"),
            (0.0334936490538903, "0.0334936491"),
            (0.5, "0.5"),
            (0.0, "0.0"),
            (1e-12, "0.000000000001"),
            (123456789.123, "123456789"),
            (-2.0, "-2.0"),
        ],
    )
    def test_nine_significant_digits_no_exponent(self, value, expected):
        got = fixed_decimal(value)
        assert got == expected
        assert "e" not in got.lower()

    def test_round_trips_within_nine_digits(self):
        rng = np.random.default_rng(29)
        for _ in range(200):
            x = float(rng.uniform(-10, 10))
            back = float(fixed_decimal(x))
            assert math.isclose(back, x, rel_tol=5e-9, abs_tol=1e-15)

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(ValueError, match="non-finite"):
            fixed_decimal(bad)


class TestFig3Csv:
    def test_header_is_pinned(self):
        text = fig3_rows_to_csv([])
        assert text == "theta_rad,p_theta_attack,p_theta_perp_attack,p_theta_null,p_theta_perp_null\n"
        assert ",".join(FIG3_COLUMNS) == text.strip()

    def test_rows_and_line_endings(self):
        text = fig3_rows_to_csv([(0.0, 0.25, 0.25, 0.25, 0.25)])
        assert text == (
            "theta_rad,p_theta_attack,p_theta_perp_attack,p_theta_null,p_theta_perp_null\n"
            "0.0,0.25,0.25,0.25,0.25\n"
        )
        assert "\r" not in text

    def test_row_width_enforced(self):
        with pytest.raises(ValueError, match="columns"):
            fig3_rows_to_csv([(0.0, 0.1)])


def small_run():
    sc = Scenario(
        attack_present=True,
        theta_grid=(math.pi / 6, math.pi / 3),
        pairs_per_setting=20000,
        seed=5,
    )
    tallies = simulate(sc)
    verdict = reciprocity_test(tallies, significance=0.001)
    return sc, tallies, verdict


class TestBuildReport:
    def test_structure(self):
        sc, tallies, verdict = small_run()
        report = build_report(
            sc, tallies, verdict, delay_a_to_b=2.0e-8, delay_b_to_a=3.0e-8, threads=2
        )
        assert report["tool"]["name"] == "nonrecip"
        assert report["scenario"]["seed"] == 5
        assert report["run"]["threads"] == 2
        assert report["tallies"]["outcome_order"] == ["++", "+-", "-+", "--"]
        assert report["verdict"]["non_reciprocal"] is True
        assert math.isclose(report["device_timing"]["asymmetry"], -1.0e-8)

    def test_counts_are_plain_ints(self):
        sc, tallies, verdict = small_run()
        report = build_report(sc, tallies, verdict)
        for row in report["tallies"]["counts"]:
            assert all(isinstance(c, int) for c in row)

    def test_reference_curves(self):
        sc, tallies, verdict = small_run()
        report = build_report(sc, tallies, verdict)
        for theta, null, attack in zip(
            report["tallies"]["thetas"],
            report["reference_curves"]["contrast_null"],
            report["reference_curves"]["contrast_attack"],
        ):
            assert math.isclose(null, math.sin(theta), abs_tol=1e-15)
            beta = -math.pi * (1.0 - math.cos(theta))
            assert math.isclose(
                attack, math.sin(theta) * math.cos(2.0 * beta), abs_tol=1e-15
            )

    def test_timestamp_toggle(self):
        sc, tallies, verdict = small_run()
        stamped = build_report(sc, tallies, verdict, with_timestamp=True)
        assert re.fullmatch(
            r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z", stamped["timestamp"]
        )
        bare = build_report(sc, tallies, verdict, with_timestamp=False)
        assert "timestamp" not in bare

    def test_json_round_trip(self, tmp_path):
        sc, tallies, verdict = small_run()
        report = build_report(sc, tallies, verdict, with_timestamp=False)
        path = tmp_path / "report.json"
        write_report(report, path)
        assert load_report(path) == report
        assert json.loads(dumps_report(report)) == report

    def test_serialization_is_deterministic(self):
        sc, tallies, verdict = small_run()
        a = dumps_report(build_report(sc, tallies, verdict, with_timestamp=False))
        b = dumps_report(build_report(sc, tallies, verdict, with_timestamp=False))
        assert a == b
        assert a.endswith("\n")
