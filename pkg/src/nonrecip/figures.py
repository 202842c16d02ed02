"""Figure rendering for the CLI report paths.

Purely cosmetic layer: every plot is generated from the same arrays that go
into the delimited/JSON outputs, never the other way around.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_curves", "render_detection"]


def render_curves(rows, out_path: str | Path) -> None:
    """Coincidence probability curves vs analyzer colatitude.

    ``rows`` are (theta, p_attack, p_perp_attack, p_null, p_perp_null)
    tuples, the same ones written to CSV.
    """
    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(data[:, 0], data[:, 1], "-", color="tab:blue", label="P(+,+), intercepted")
    ax.plot(data[:, 0], data[:, 2], "-", color="tab:red", label="P(+,-), intercepted")
    ax.plot(data[:, 0], data[:, 3], "--", color="tab:blue", alpha=0.6, label="P(+,+), clean")
    ax.plot(data[:, 0], data[:, 4], "--", color="tab:red", alpha=0.6, label="P(+,-), clean")
    ax.set_xlabel(r"analyzer colatitude $\theta$ (rad)")
    ax.set_ylabel("coincidence probability")
    ax.set_xlim(data[0, 0], data[-1, 0])
    ax.set_ylim(-0.02, 0.52)
    ax.legend(loc="center left", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_detection(report: dict, out_path: str | Path) -> None:
    """Measured contrast per setting against the clean and intercepted models."""
    thetas = np.asarray(report["tallies"]["thetas"], dtype=float)
    est = np.asarray(report["verdict"]["contrast_estimates"], dtype=float)
    null = np.asarray(report["reference_curves"]["contrast_null"], dtype=float)
    attack = np.asarray(report["reference_curves"]["contrast_attack"], dtype=float)

    order = np.argsort(thetas)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(thetas[order], null[order], "--", color="tab:gray", label="clean channel")
    ax.plot(thetas[order], attack[order], "-", color="tab:red", alpha=0.7,
            label="intercepted channel")
    ax.plot(thetas[order], est[order], "o", color="tab:blue", label="estimated")
    ax.set_xlabel(r"analyzer colatitude $\theta$ (rad)")
    ax.set_ylabel("contrast")
    ax.set_ylim(-1.1, 1.1)
    v = report["verdict"]
    p = v["p_value"]
    ax.set_title(
        f"chi2 = {v['chi_square']:.4g}, dof = {v['dof']}, p = {p:.3g}, "
        f"non-reciprocal: {v['non_reciprocal']}"
    )
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
