"""Command-line front end.

Three subcommands: ``phase`` evaluates the geometric phase of a full
analyzer-axis sweep by the method of your choice, ``fig3`` tabulates
coincidence-probability curves against analyzer colatitude, ``simulate``
runs a full Monte Carlo scenario and writes the JSON run report.  Exit
codes: 0 success, 2 configuration/usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from .bell import JointSetting, apply_to_bob, bob_basis, joint_prob, phi_minus
from .channel import AttackDevice, attack_operator, induced_phase
from .config import load_scenario
from .detect import reciprocity_test, simulate
from .errors import NonrecipError
from .geophase import geometric_phase_discrete, latitude_circle, solid_angle
from .poincare import circular_basis
from .report import (
    build_report,
    fig3_rows_to_csv,
    fixed_decimal,
    write_report,
)

__all__ = ["main", "cmd_phase", "cmd_fig3", "cmd_simulate"]


def _wrap_pi(x: float) -> float:
    w = math.remainder(x, 2.0 * math.pi)
    return w + 2.0 * math.pi if w <= -math.pi else w


def cmd_phase(args: argparse.Namespace) -> int:
    theta = math.radians(args.theta) if args.degrees else args.theta
    if args.method == "closed-form":
        beta = induced_phase(theta)
        omega = -2.0 * beta
    elif math.sin(theta) <= 1e-9:
        beta, omega = 0.0, 0.0  # polar sweep degenerates to a point loop
    elif args.method == "discrete":
        beta = geometric_phase_discrete(latitude_circle(theta, args.segments)).beta
        omega = -2.0 * beta
    else:  # solid-angle
        omega = solid_angle(latitude_circle(theta, args.segments))
        beta = _wrap_pi(-omega / 2.0)
    lines = [
        f"method = {args.method}",
        f"theta_rad = {fixed_decimal(theta)}",
        f"beta_rad = {fixed_decimal(beta)}",
        f"solid_angle_sr = {fixed_decimal(omega)}",
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def fig3_rows(points: int) -> list[tuple[float, float, float, float, float]]:
    """Coincidence curves on a uniform [0, pi] grid, via the amplitude
    pipeline (the closed forms stay on the test bench)."""
    device = AttackDevice()
    source = phi_minus()
    alice = circular_basis()
    rows = []
    for theta in np.linspace(0.0, math.pi, points):
        theta = float(theta)
        setting = JointSetting(alice, bob_basis(theta))
        attacked = apply_to_bob(source, attack_operator(device, theta))
        rows.append(
            (
                theta,
                joint_prob(attacked, setting, (1, 1)),
                joint_prob(attacked, setting, (1, -1)),
                joint_prob(source, setting, (1, 1)),
                joint_prob(source, setting, (1, -1)),
            )
        )
    return rows


def cmd_fig3(args: argparse.Namespace) -> int:
    if args.points < 2:
        raise NonrecipError("--points must be >= 2")
    rows = fig3_rows(args.points)
    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(fig3_rows_to_csv(rows))
    print(f"wrote {out} ({args.points} rows)")
    if args.plot:
        from .figures import render_curves

        png = out.with_suffix(".png")
        render_curves(rows, png)
        print(f"wrote {png}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    settings = load_scenario(args.config)
    scenario = settings.scenario
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    significance = (
        args.significance if args.significance is not None else settings.significance
    )
    tallies = simulate(scenario, threads=args.threads)
    verdict = reciprocity_test(tallies, significance=significance)
    report = build_report(
        scenario,
        tallies,
        verdict,
        delay_a_to_b=settings.delay_a_to_b,
        delay_b_to_a=settings.delay_b_to_a,
        threads=args.threads,
        with_timestamp=not args.no_timestamp,
    )
    out = Path(args.out)
    write_report(report, out)
    print(f"wrote {out}")
    print(
        f"non_reciprocal = {str(verdict.non_reciprocal).lower()} "
        f"(chi2 = {verdict.chi_square:.6g}, dof = {verdict.dof}, "
        f"p = {verdict.p_value:.6g})"
    )
    if args.plot:
        from .figures import render_detection

        png = out.with_suffix(".png")
        render_detection(report, png)
        print(f"wrote {png}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonrecip",
        description=(
            "Geometric-phase toolkit for spotting non-reciprocal optics "
            "with polarization-entangled pairs."
        ),
    )
    from . import __version__

    parser.add_argument("--version", action="version", version=f"nonrecip {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_phase = sub.add_parser(
        "phase",
        help="geometric phase of one full sweep at fixed analyzer colatitude",
    )
    p_phase.add_argument("--theta", type=float, required=True,
                         help="colatitude from the rotation axis (radians)")
    p_phase.add_argument("--segments", type=int, default=10000,
                         help="loop sampling for the numerical methods")
    p_phase.add_argument("--method", default="closed-form",
                         choices=("discrete", "solid-angle", "closed-form"))
    p_phase.add_argument("--degrees", action="store_true",
                         help="interpret --theta in degrees")
    p_phase.add_argument("--out", default=None, help="also write the output here")
    p_phase.set_defaults(func=cmd_phase)

    p_fig3 = sub.add_parser(
        "fig3",
        help="tabulate coincidence probabilities vs analyzer colatitude",
    )
    p_fig3.add_argument("--points", type=int, default=181,
                        help="number of grid points on [0, pi]")
    p_fig3.add_argument("--out", required=True, help="CSV output path")
    p_fig3.add_argument("--plot", dest="plot", action="store_true", default=True,
                        help="render the curves to PNG next to the CSV (default)")
    p_fig3.add_argument("--no-plot", dest="plot", action="store_false")
    p_fig3.set_defaults(func=cmd_fig3)

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo scenario")
    p_sim.add_argument("--config", required=True, help="scenario config file")
    p_sim.add_argument("--out", required=True, help="JSON report path")
    p_sim.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
    p_sim.add_argument("--significance", type=float, default=None,
                       help="override the detection significance level")
    p_sim.add_argument("--threads", type=int, default=1,
                       help="worker threads across settings (results identical)")
    p_sim.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp for byte-identical reports")
    p_sim.add_argument("--plot", dest="plot", action="store_true", default=True,
                       help="render the contrast summary to PNG (default)")
    p_sim.add_argument("--no-plot", dest="plot", action="store_false")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonrecipError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
