"""Monte Carlo coincidence runs and the non-reciprocity hypothesis test.

Sampling is reproducible by construction: every analyzer setting draws from
its own counter-based Philox stream keyed by ``(seed, setting_index)``, so
the tallies depend only on the scenario, never on scheduling or thread
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .bell import (
    JointSetting,
    alice_linear_basis,
    apply_to_bob,
    bob_basis,
    joint_probs,
    phi_minus,
)
from .channel import AttackDevice, attack_operator
from .errors import ConfigError, DegenerateModel, EmptyTally
from .poincare import PolarizationUnitary, circular_basis

__all__ = [
    "Scenario",
    "TallyTable",
    "DetectionVerdict",
    "effective_bob_unitary",
    "simulate",
    "estimate_contrast",
    "reciprocity_test",
]

ADVERSARIES = ("none", "fixed_compensator", "basis_aware")

# Expected disagree counts below this are structural zeros of the null model,
# not small-sample trouble.
_STRUCTURAL_ZERO = 1e-12


@dataclass(frozen=True)
class Scenario:
    """Full description of one simulated experiment."""

    attack_present: bool
    theta_grid: tuple[float, ...]
    pairs_per_setting: int
    seed: int
    rotation_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)
    adversary: str = "none"
    compensator_theta0: float | None = None
    alice_basis: str = "circular"
    alice_alpha: float | None = None

    def __post_init__(self) -> None:
        grid = tuple(float(t) for t in self.theta_grid)
        if not grid:
            raise ConfigError("theta_grid must not be empty")
        if not all(math.isfinite(t) for t in grid):
            raise ConfigError("theta_grid entries must be finite")
        object.__setattr__(self, "theta_grid", grid)
        if self.pairs_per_setting < 1:
            raise ConfigError("pairs_per_setting must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.adversary not in ADVERSARIES:
            raise ConfigError(f"unknown adversary {self.adversary!r}")
        if self.adversary == "fixed_compensator" and self.compensator_theta0 is None:
            raise ConfigError("fixed_compensator requires compensator_theta0")
        if self.alice_basis not in ("circular", "linear"):
            raise ConfigError(f"unknown alice_basis {self.alice_basis!r}")
        if self.alice_basis == "linear" and self.alice_alpha is None:
            raise ConfigError("linear alice_basis requires alice_alpha")
        axis = tuple(float(c) for c in self.rotation_axis)
        if len(axis) != 3:
            raise ConfigError("rotation_axis needs 3 components")
        object.__setattr__(self, "rotation_axis", axis)

    def device(self) -> AttackDevice:
        return AttackDevice(rotation_axis=self.rotation_axis)


@dataclass(frozen=True)
class TallyTable:
    """Coincidence counts per analyzer setting.

    ``counts[i]`` holds the four cells for ``thetas[i]`` in the fixed order
    (+,+), (+,-), (-,+), (-,-); each row sums to ``pairs_per_setting``.
    """

    thetas: tuple[float, ...]
    counts: np.ndarray
    pairs_per_setting: int

    def __post_init__(self) -> None:
        c = np.asarray(self.counts, dtype=np.int64)
        if c.shape != (len(self.thetas), 4):
            raise ValueError(f"counts shape {c.shape} does not match grid")
        if np.any(c < 0):
            raise ValueError("negative counts")
        if len(self.thetas) and not np.all(c.sum(axis=1) == self.pairs_per_setting):
            raise ValueError("rows must sum to pairs_per_setting")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))


@dataclass(frozen=True)
class DetectionVerdict:
    chi_square: float
    dof: int
    p_value: float
    non_reciprocal: bool
    contrast_estimates: tuple[float, ...]
    significance: float


def effective_bob_unitary(scenario: Scenario, theta: float) -> PolarizationUnitary:
    """Net operator on Bob's photon for one analyzer setting.

    With the attack off this is the identity.  A ``basis_aware`` adversary
    undoes its own gate exactly (it knows ``theta``), so the statistics are
    identical to the null; only timing metadata can betray it.  A
    ``fixed_compensator`` guesses one setting ``theta0`` and unwinds that
    gate for every ``theta``, which fails off the guess because gates about
    different meridian axes do not commute.
    """
    if not scenario.attack_present:
        return PolarizationUnitary.identity()
    if scenario.adversary == "basis_aware":
        return PolarizationUnitary.identity()
    device = scenario.device()
    u = attack_operator(device, theta)
    if scenario.adversary == "fixed_compensator":
        comp = attack_operator(device, scenario.compensator_theta0)
        return comp.dagger() @ u
    return u


def _alice_basis(scenario: Scenario):
    if scenario.alice_basis == "circular":
        return circular_basis()
    return alice_linear_basis(scenario.alice_alpha)


def setting_distributions(scenario: Scenario) -> np.ndarray:
    """Exact four-cell distribution for every grid setting, shape (n, 4)."""
    source = phi_minus()
    alice = _alice_basis(scenario)
    rows = []
    for theta in scenario.theta_grid:
        state = apply_to_bob(source, effective_bob_unitary(scenario, theta))
        rows.append(joint_probs(state, JointSetting(alice, bob_basis(theta))))
    return np.array(rows)


def _sample_setting(seed: int, index: int, cdf: np.ndarray, n: int) -> np.ndarray:
    key = np.array([seed, index], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    cells = np.searchsorted(cdf, gen.random(n), side="right")
    return np.bincount(cells, minlength=4).astype(np.int64)


def simulate(scenario: Scenario, threads: int = 1) -> TallyTable:
    """Draw ``pairs_per_setting`` coincidences per grid setting.

    The tally is a pure function of the scenario: per-setting Philox
    substreams make the draw order irrelevant, so any ``threads`` value
    gives identical counts.
    """
    probs = setting_distributions(scenario)
    cdfs = np.cumsum(probs, axis=1)
    cdfs[:, -1] = 1.0  # rows sum to 1 within 1e-12; pin the top exactly
    n = scenario.pairs_per_setting

    def run(i: int) -> np.ndarray:
        return _sample_setting(scenario.seed, i, cdfs[i], n)

    indices = range(len(scenario.theta_grid))
    if threads <= 1:
        rows = [run(i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, indices))
    return TallyTable(scenario.theta_grid, np.array(rows), n)


def estimate_contrast(tallies: TallyTable) -> np.ndarray:
    """Per-setting correlation estimator ``((n++ - n+-) + (n-- - n-+))/n``.

    Converges to ``sin(theta) * cos(2*beta)`` for circular Alice settings.
    """
    if len(tallies.thetas) == 0:
        raise EmptyTally("no settings in tally")
    c = tallies.counts
    return ((c[:, 0] - c[:, 1]) + (c[:, 3] - c[:, 2])) / tallies.pairs_per_setting


def reciprocity_test(
    tallies: TallyTable, significance: float = 0.001
) -> DetectionVerdict:
    """Pearson chi-square of the tallies against the reciprocal-channel null.

    The null (circular Alice, no interception) fixes the agree/disagree
    split at each setting to ``(1 +/- sin(theta))/2``, one degree of freedom
    per informative setting.  Settings where the null puts zero weight on
    disagreement (``sin(theta) = 1``) carry no freedom: they are skipped,
    unless a forbidden disagreement was actually observed, which refutes the
    null outright.  Nonzero expected cells below 5 counts are refused
    (:class:`DegenerateModel`): grow ``pairs_per_setting`` or coarsen the
    grid instead of trusting the asymptotics.
    """
    if len(tallies.thetas) == 0 or tallies.counts.size == 0:
        raise EmptyTally("no settings in tally")
    if not 0.0 < significance < 1.0:
        raise ValueError("significance must be in (0, 1)")
    n = tallies.pairs_per_setting
    chi = 0.0
    dof = 0
    impossible_seen = False
    for i, theta in enumerate(tallies.thetas):
        p_agree = 0.5 * (1.0 + math.sin(theta))
        p_dis = 1.0 - p_agree
        agree = int(tallies.counts[i, 0] + tallies.counts[i, 3])
        dis = n - agree
        if p_dis < _STRUCTURAL_ZERO:
            if dis > 0:
                impossible_seen = True
            continue
        expected = (n * p_agree, n * p_dis)
        if min(expected) < 5.0:
            raise DegenerateModel(
                f"expected cell count {min(expected):.3g} < 5 at theta = {theta:.6g}"
            )
        chi += (agree - expected[0]) ** 2 / expected[0]
        chi += (dis - expected[1]) ** 2 / expected[1]
        dof += 1
    if dof == 0 and not impossible_seen:
        raise DegenerateModel("no informative settings in the grid")
    if impossible_seen:
        chi, p_value = math.inf, 0.0
        dof = max(dof, 1)
    else:
        p_value = float(stats.chi2.sf(chi, dof))
    contrasts = tuple(float(x) for x in estimate_contrast(tallies))
    return DetectionVerdict(
        chi_square=chi,
        dof=dof,
        p_value=p_value,
        non_reciprocal=bool(p_value < significance),
        contrast_estimates=contrasts,
        significance=significance,
    )
