"""Polarization-entangled pairs and coincidence probabilities.

The source state is the singlet built in the linear basis,
``(|HV> - |VH>)/sqrt(2)``, converted once through the fixed circular
convention and kept in circular amplitudes from then on.  Everything the
detection layer consumes goes through the amplitude pipeline
(:func:`apply_to_bob` + :func:`joint_prob`); the closed forms below exist as
independent oracles, not as a fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poincare import (
    MeasurementBasis,
    PolarizationUnitary,
    PureQubit,
    state_from_linear,
)

__all__ = [
    "TwoQubitState",
    "JointSetting",
    "OUTCOME_ORDER",
    "phi_minus",
    "apply_to_bob",
    "joint_prob",
    "joint_probs",
    "marginal_prob",
    "meridian_pair",
    "alice_linear_basis",
    "bob_basis",
    "closed_form_linear",
    "closed_form_circular",
    "closed_form_general",
]

_NORM_TOL = 1e-12

# Fixed coincidence-cell order: (+,+), (+,-), (-,+), (-,-).
OUTCOME_ORDER: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class TwoQubitState:
    """Pure two-photon state; amplitudes ordered (RR, RL, LR, LL),
    Alice's index first."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {a.shape}")
        norm_sq = float(np.sum(np.abs(a) ** 2))
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: |amps|^2 = {norm_sq!r}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to [alice_index, bob_index]."""
        return np.asarray(self.amps).reshape(2, 2)


@dataclass(frozen=True)
class JointSetting:
    alice: MeasurementBasis
    bob: MeasurementBasis


def phi_minus() -> TwoQubitState:
    """Singlet-form pair ``(|HV> - |VH>)/sqrt(2)`` in circular amplitudes."""
    h = state_from_linear(1.0, 0.0).vec
    v = state_from_linear(0.0, 1.0).vec
    amps = (np.kron(h, v) - np.kron(v, h)) / math.sqrt(2.0)
    return TwoQubitState(amps)


def apply_to_bob(state: TwoQubitState, u: PolarizationUnitary) -> TwoQubitState:
    """Local action ``(I (x) U)`` on Bob's photon."""
    m = state.as_matrix() @ u.matrix.T
    return TwoQubitState(m.reshape(4))


def _clamp_probability(p: float) -> float:
    if p < -1e-12:
        raise ValueError(f"probability {p!r} below clamping window")
    return max(p, 0.0)


def _ket(basis: MeasurementBasis, outcome: int) -> PureQubit:
    if outcome == 1:
        return basis.ket_plus
    if outcome == -1:
        return basis.ket_minus
    raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")


def joint_prob(
    state: TwoQubitState, setting: JointSetting, outcome: tuple[int, int]
) -> float:
    """Coincidence probability for one ``(alice, bob)`` outcome pair."""
    a = _ket(setting.alice, outcome[0]).vec
    b = _ket(setting.bob, outcome[1]).vec
    amp = a.conj() @ state.as_matrix() @ b.conj()
    return _clamp_probability(float(abs(amp) ** 2))


def joint_probs(state: TwoQubitState, setting: JointSetting) -> np.ndarray:
    """All four coincidence probabilities in :data:`OUTCOME_ORDER`."""
    return np.array([joint_prob(state, setting, oc) for oc in OUTCOME_ORDER])


def marginal_prob(
    state: TwoQubitState,
    party: str,
    basis: MeasurementBasis,
    outcome: int = 1,
) -> float:
    """Single-party outcome probability, the other side unobserved."""
    k = _ket(basis, outcome).vec
    m = state.as_matrix()
    if party == "alice":
        reduced = k.conj() @ m
    elif party == "bob":
        reduced = m @ k.conj()
    else:
        raise ValueError(f"party must be 'alice' or 'bob', got {party!r}")
    return _clamp_probability(float(np.sum(np.abs(reduced) ** 2)))


def meridian_pair(theta: float) -> tuple[PureQubit, PureQubit]:
    """Orthogonal pair in the reference meridian at colatitude ``theta``:
    ``cos(theta/2)|R> + sin(theta/2)|L>`` and its perpendicular ray.

    These are the eigenstates of the interception gate for analyzer
    setting ``theta``.
    """
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return PureQubit(c, s), PureQubit(-s, c)


def alice_linear_basis(alpha: float) -> MeasurementBasis:
    """Alice's linear analyzer at angle ``alpha``:
    ``cos(alpha/2)|H> + sin(alpha/2)|V>`` and its perpendicular."""
    c, s = math.cos(alpha / 2.0), math.sin(alpha / 2.0)
    return MeasurementBasis(
        state_from_linear(c, s),
        state_from_linear(-s, c),
        f"linear(alpha={alpha:.6g})",
    )


def bob_basis(theta: float) -> MeasurementBasis:
    """Bob's analyzer for setting ``theta``: the equal superpositions of the
    meridian pair, ``(psi +/- psi_perp)/sqrt(2)``.

    At ``theta = 0`` this is the (V, H) linear basis up to phase.
    """
    psi, psi_perp = meridian_pair(theta)
    sq2 = math.sqrt(2.0)
    plus = PureQubit((psi.amp_r + psi_perp.amp_r) / sq2, (psi.amp_l + psi_perp.amp_l) / sq2)
    minus = PureQubit((psi.amp_r - psi_perp.amp_r) / sq2, (psi.amp_l - psi_perp.amp_l) / sq2)
    return MeasurementBasis(plus, minus, f"bob(theta={theta:.6g})")


def closed_form_linear(alpha: float) -> float:
    """Coincidence probability with both analyzers in the rotation plane:
    ``(1 + cos(alpha))/4``, independent of any geometric phase."""
    return _clamp_probability(0.25 * (1.0 + math.cos(alpha)))


def closed_form_circular(theta: float, beta: float, perp: bool = False) -> float:
    """Coincidence probability for Alice circular-plus and Bob ``theta``
    (or ``theta``-perp when ``perp``): ``(1 +/- sin(theta) cos(2 beta))/4``."""
    term = math.sin(theta) * math.cos(2.0 * beta)
    if perp:
        term = -term
    return _clamp_probability(0.25 * (1.0 + term))


def closed_form_general(alpha: float, theta: float, beta: float) -> float:
    """Coincidence probability for Alice ``alpha`` (linear) and Bob ``theta``
    with a phase gate ``beta`` about the ``theta`` meridian axis."""
    half = theta / 2.0
    sa2 = math.sin(alpha / 2.0) ** 2
    ca2 = math.cos(alpha / 2.0) ** 2
    p = 0.25 * (
        (math.sin(half + beta) ** 2 + math.sin(half - beta) ** 2) * sa2
        + (math.cos(half + beta) ** 2 + math.cos(half - beta) ** 2) * ca2
        + math.sin(2.0 * beta) * math.sin(alpha)
    )
    return _clamp_probability(p)
