"""Optical channel elements and the reciprocity bookkeeping between them.

An element carries one Jones operator per travel direction.  For reciprocal
optics the backward operator is the transpose of the forward one in the
linear basis; magneto-optic elements break that rule, which is the entire
point of this package.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPort
from .poincare import PolarizationUnitary, _as_unit3, geometric_phase_gate

__all__ = [
    "Direction",
    "OpticalElement",
    "Channel",
    "AttackDevice",
    "waveplate",
    "faraday_rotator",
    "is_reciprocal",
    "round_trip",
    "induced_phase",
    "attack_operator",
    "propagation_delay",
    "circulator_route",
]


class Direction(enum.Enum):
    A_TO_B = "a_to_b"
    B_TO_A = "b_to_a"


@dataclass(frozen=True)
class OpticalElement:
    """One channel element with direction-dependent action and delay."""

    name: str
    u_forward: PolarizationUnitary
    u_backward: PolarizationUnitary
    delay_forward: float = 0.0
    delay_backward: float = 0.0

    def __post_init__(self) -> None:
        if self.delay_forward < 0.0 or self.delay_backward < 0.0:
            raise ValueError("delays must be non-negative")


@dataclass(frozen=True)
class Channel:
    """Ordered stack of elements; index 0 is nearest the A side."""

    elements: tuple[OpticalElement, ...]

    def __init__(self, elements):
        object.__setattr__(self, "elements", tuple(elements))

    def forward(self) -> PolarizationUnitary:
        u = PolarizationUnitary.identity()
        for e in self.elements:
            u = e.u_forward @ u
        return u

    def backward(self) -> PolarizationUnitary:
        u = PolarizationUnitary.identity()
        for e in reversed(self.elements):
            u = e.u_backward @ u
        return u

    def delay(self, direction: Direction) -> float:
        if direction is Direction.A_TO_B:
            return sum(e.delay_forward for e in self.elements)
        return sum(e.delay_backward for e in self.elements)

    def as_element(self, name: str = "channel") -> OpticalElement:
        return OpticalElement(
            name,
            self.forward(),
            self.backward(),
            self.delay(Direction.A_TO_B),
            self.delay(Direction.B_TO_A),
        )


@dataclass(frozen=True)
class AttackDevice:
    """Circulator pair bracketing the channel, plus its timing footprint.

    ``rotation_axis`` is the Poincare axis the intercepted polarization is
    carried around (the circular R/L axis for the standard fiber loop).
    Delays are the extra path lengths the rerouted photon picks up in each
    direction; they never enter the quantum statistics, only the report.
    """

    rotation_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)
    delta_ab: float = 0.0
    delta_ba: float = 0.0

    def __post_init__(self) -> None:
        axis = tuple(float(c) for c in _as_unit3(self.rotation_axis))
        object.__setattr__(self, "rotation_axis", axis)
        if self.delta_ab < 0.0 or self.delta_ba < 0.0:
            raise ValueError("delays must be non-negative")


def _plane_rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def waveplate(retardance: float, fast_axis_angle: float) -> OpticalElement:
    """Linear retarder: ``retardance`` on the slow axis, fast axis at
    ``fast_axis_angle`` from H in the linear plane.

    The Jones matrix is symmetric in the linear basis, so forward and
    backward actions coincide: the reciprocal case.
    """
    r = _plane_rotation(fast_axis_angle)
    jones = r @ np.diag([1.0, np.exp(1j * retardance)]) @ r.T
    u = PolarizationUnitary.from_linear(jones)
    u_back = PolarizationUnitary.from_linear(jones.T)
    return OpticalElement(
        f"waveplate(ret={retardance:.6g}, axis={fast_axis_angle:.6g})", u, u_back
    )


def faraday_rotator(rotation: float) -> OpticalElement:
    """Magneto-optic rotator turning the linear plane by ``rotation`` for
    BOTH travel directions (Bloch rotation by ``2*rotation`` about the R/L
    axis).  Backward light is not untwisted, so a round trip accumulates
    ``2*rotation``: the canonical non-reciprocal element.
    """
    u = PolarizationUnitary.from_linear(_plane_rotation(rotation))
    return OpticalElement(f"faraday({rotation:.6g})", u, u)


def is_reciprocal(element: OpticalElement, tol: float = 1e-9) -> bool:
    """True when ``u_backward`` equals ``u_forward`` transposed in the linear
    basis, entrywise within ``tol``.

    The comparison is deliberately phase-sensitive: re-phasing both
    directions together (the one freedom an element really has) cancels in
    ``N - M^T``, but a phase picked up in only one direction is a
    direction-dependent action and must count as non-reciprocal.  This also
    keeps a half-turn rotator (``U = -U^T``) on the non-reciprocal side.
    """
    m = element.u_forward.to_linear()
    n = element.u_backward.to_linear()
    return float(np.max(np.abs(n - m.T))) <= tol


def round_trip(element: OpticalElement) -> PolarizationUnitary:
    """Net operator for A -> B -> A traversal."""
    return element.u_backward @ element.u_forward


def induced_phase(bob_theta: float) -> float:
    """Geometric phase picked up at colatitude ``bob_theta`` from the
    rotation axis during one full sweep: ``-pi * (1 - cos(theta))``."""
    return -math.pi * (1.0 - math.cos(bob_theta))


def _meridian_axis(rotation_axis, theta: float) -> np.ndarray:
    """Unit vector at colatitude ``theta`` from ``rotation_axis``, in the
    deterministic reference meridian of that axis."""
    n = _as_unit3(rotation_axis)
    ref = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = ref - np.dot(ref, n) * n
    e1 /= np.linalg.norm(e1)
    return math.cos(theta) * n + math.sin(theta) * e1


def attack_operator(device: AttackDevice, bob_theta: float) -> PolarizationUnitary:
    """Effective gate on Bob's photon for analyzer colatitude ``bob_theta``.

    States aligned with the ``bob_theta`` meridian direction pick up
    ``exp(-i*beta)``, the orthogonal ray ``exp(+i*beta)``, with ``beta``
    from :func:`induced_phase`.  Note this is a per-setting family: no
    single fixed Jones matrix reproduces it for every ``bob_theta`` at once
    (a full fixed-axis turn is globally ``-I``), so the device is modeled as
    seen by each analyzer setting.
    """
    axis = _meridian_axis(device.rotation_axis, bob_theta)
    return geometric_phase_gate(axis, induced_phase(bob_theta))


def propagation_delay(device: AttackDevice, direction: Direction) -> float:
    """Extra detour time added by the interception hardware."""
    if direction is Direction.A_TO_B:
        return device.delta_ab
    if direction is Direction.B_TO_A:
        return device.delta_ba
    raise ValueError(f"unknown direction {direction!r}")


def circulator_route(port: int) -> int:
    """Ideal three-port circulator: 1 -> 2, 2 -> 3, 3 -> 1."""
    if port not in (1, 2, 3):
        raise InvalidPort(f"port {port!r} not in (1, 2, 3)")
    return {1: 2, 2: 3, 3: 1}[port]
