"""Single polarization qubits on the Poincare sphere.

Conventions used throughout the package:

* Storage basis is circular, ``(amp_r, amp_l)``, with the linear basis
  related by ``|R> = (|V> + i|H>)/sqrt(2)`` and ``|L> = (|V> - i|H>)/sqrt(2)``.
* Bloch chart: +z is ``|R>``, +x is the ``phi = 0`` equator state (``|V>``),
  and rotations follow the right-hand rule about their axis.
* Global phase is significant.  No function re-gauges a state; normalization
  divides by a positive real number only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import OrthogonalStates

__all__ = [
    "PureQubit",
    "BlochVector",
    "PolarizationUnitary",
    "MeasurementBasis",
    "state_from_angles",
    "state_from_linear",
    "state_from_bloch",
    "linear_view",
    "bloch_vector",
    "overlap",
    "pancharatnam_phase",
    "rotation_about_axis",
    "geometric_phase_gate",
    "circular_basis",
]

_NORM_TOL = 1e-12
_ORTH_TOL = 1e-12
DEFAULT_EPS_ORTH = 1e-9

_SQRT2 = math.sqrt(2.0)

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Rows (H, V), columns (R, L): amp_lin = _CIRC_TO_LIN @ amp_circ.
_CIRC_TO_LIN = np.array([[1j, -1j], [1.0, 1.0]], dtype=complex) / _SQRT2


@dataclass(frozen=True)
class PureQubit:
    """Normalized pure polarization state, amplitudes in the circular basis."""

    amp_r: complex
    amp_l: complex

    def __post_init__(self) -> None:
        norm_sq = abs(self.amp_r) ** 2 + abs(self.amp_l) ** 2
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: |amps|^2 = {norm_sq!r}")
        object.__setattr__(self, "amp_r", complex(self.amp_r))
        object.__setattr__(self, "amp_l", complex(self.amp_l))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.amp_r, self.amp_l], dtype=complex)

    @classmethod
    def from_vec(cls, v: Sequence[complex]) -> "PureQubit":
        return cls(complex(v[0]), complex(v[1]))


@dataclass(frozen=True)
class BlochVector:
    """Unit vector on the Poincare sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        n = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"Bloch vector norm {n!r} not 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def _as_unit3(axis: BlochVector | Sequence[float]) -> np.ndarray:
    """Coerce an axis argument to a unit 3-vector."""
    if isinstance(axis, BlochVector):
        return axis.as_array()
    v = np.asarray(axis, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"axis must have 3 components, got shape {v.shape}")
    n = float(np.linalg.norm(v))
    if n < 1e-12:
        raise ValueError("axis has zero length")
    return v / n


@dataclass(frozen=True)
class PolarizationUnitary:
    """2x2 unitary Jones operator, stored in the circular basis."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m.conj().T @ m, np.eye(2), atol=_NORM_TOL):
            raise ValueError("matrix is not unitary within 1e-12")
        det = np.linalg.det(m)
        if abs(abs(det) - 1.0) > _NORM_TOL:
            raise ValueError(f"|det| = {abs(det)!r}, expected 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, q: PureQubit) -> PureQubit:
        return PureQubit.from_vec(self.matrix @ q.vec)

    def dagger(self) -> "PolarizationUnitary":
        return PolarizationUnitary(self.matrix.conj().T)

    def __matmul__(self, other: "PolarizationUnitary") -> "PolarizationUnitary":
        return PolarizationUnitary(self.matrix @ other.matrix)

    def to_linear(self) -> np.ndarray:
        """Matrix of the same operator in the (H, V) basis."""
        return _CIRC_TO_LIN @ self.matrix @ _CIRC_TO_LIN.conj().T

    @classmethod
    def from_linear(cls, m: np.ndarray) -> "PolarizationUnitary":
        """Build from a Jones matrix given in the (H, V) basis."""
        m = np.asarray(m, dtype=complex)
        return cls(_CIRC_TO_LIN.conj().T @ m @ _CIRC_TO_LIN)

    @classmethod
    def identity(cls) -> "PolarizationUnitary":
        return cls(np.eye(2, dtype=complex))


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal two-outcome analyzer basis with a display label."""

    ket_plus: PureQubit
    ket_minus: PureQubit
    label: str

    def __post_init__(self) -> None:
        if abs(overlap(self.ket_plus, self.ket_minus)) > _ORTH_TOL:
            raise ValueError(f"basis {self.label!r} kets are not orthogonal")


def state_from_angles(theta: float, phi: float) -> PureQubit:
    """State at colatitude ``theta`` and azimuth ``phi`` on the Poincare sphere.

    Returns ``exp(-i*phi) * cos(theta/2) |R> + sin(theta/2) |L>``.  The phase
    sits on the R component, so the family is single valued in ``phi`` away
    from the poles.  Angles are reduced modulo their period on entry;
    ``theta`` outside [0, pi] is folded back onto the chart
    (``theta -> 2*pi - theta``, ``phi -> phi + pi``).
    """
    theta = math.fmod(theta, 2.0 * math.pi)
    if theta < 0.0:
        theta += 2.0 * math.pi
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
        phi = phi + math.pi
    phi = math.fmod(phi, 2.0 * math.pi)
    if phi < 0.0:
        phi += 2.0 * math.pi
    return PureQubit(
        cmath.exp(-1j * phi) * math.cos(theta / 2.0),
        math.sin(theta / 2.0),
    )


def state_from_linear(amp_h: complex, amp_v: complex) -> PureQubit:
    """State from amplitudes in the linear (H, V) basis."""
    return PureQubit(
        (amp_v - 1j * amp_h) / _SQRT2,
        (amp_v + 1j * amp_h) / _SQRT2,
    )


def state_from_bloch(v: BlochVector | Sequence[float]) -> PureQubit:
    """State whose Bloch vector is ``v``, in the ``state_from_angles`` gauge."""
    x, y, z = _as_unit3(v)
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x) if (abs(x) > 0 or abs(y) > 0) else 0.0
    return state_from_angles(theta, phi)


def linear_view(q: PureQubit) -> tuple[complex, complex]:
    """Amplitudes ``(amp_h, amp_v)`` of the same state in the linear basis."""
    amp_h = 1j * (q.amp_r - q.amp_l) / _SQRT2
    amp_v = (q.amp_r + q.amp_l) / _SQRT2
    return amp_h, amp_v


def bloch_vector(q: PureQubit) -> BlochVector:
    """Bloch vector of a state; +z is |R>, +x is |V>."""
    cross = q.amp_r.conjugate() * q.amp_l
    return BlochVector(
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(q.amp_r) ** 2 - abs(q.amp_l) ** 2,
    )


def overlap(a: PureQubit, b: PureQubit) -> complex:
    """Inner product <a|b>."""
    return a.amp_r.conjugate() * b.amp_r + a.amp_l.conjugate() * b.amp_l


def pancharatnam_phase(
    a: PureQubit, b: PureQubit, *, eps_orth: float = DEFAULT_EPS_ORTH
) -> float:
    """Relative phase arg<a|b> between two non-orthogonal states, in (-pi, pi].

    Raises :class:`OrthogonalStates` when ``|<a|b>| <= eps_orth``; the phase
    carries no information there.
    """
    ov = overlap(a, b)
    if abs(ov) <= eps_orth:
        raise OrthogonalStates(f"|<a|b>| = {abs(ov)!r} <= {eps_orth!r}")
    return cmath.phase(ov)


def rotation_about_axis(
    axis: BlochVector | Sequence[float], angle: float
) -> PolarizationUnitary:
    """SU(2) rotation ``exp(-i*(angle/2)*(axis . sigma))``.

    Moves Bloch vectors by ``angle`` about ``axis`` (right-hand rule).
    A full ``2*pi`` turn returns ``-I``: the global sign is kept.
    """
    nx, ny, nz = _as_unit3(axis)
    n_dot_sigma = nx * _SIGMA_X + ny * _SIGMA_Y + nz * _SIGMA_Z
    half = angle / 2.0
    return PolarizationUnitary(
        math.cos(half) * np.eye(2, dtype=complex) - 1j * math.sin(half) * n_dot_sigma
    )


def geometric_phase_gate(
    axis: BlochVector | Sequence[float], beta: float
) -> PolarizationUnitary:
    """Phase gate ``exp(-i*beta)|n><n| + exp(+i*beta)|n_perp><n_perp|``.

    ``|n>`` is the +1 eigenstate of ``axis . sigma``.  Identical to a Bloch
    rotation by ``2*beta`` about ``axis``.
    """
    return rotation_about_axis(axis, 2.0 * beta)


def circular_basis() -> MeasurementBasis:
    """The (R, L) analyzer basis; + outcome is R."""
    return MeasurementBasis(PureQubit(1.0, 0.0), PureQubit(0.0, 1.0), "circular")
