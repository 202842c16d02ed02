"""Geometric phase of closed loops on the Poincare sphere.

Three independent routes to the same number live here: the discrete
Pancharatnam accumulation over a sampled loop, the signed solid angle of the
traced polygon (`beta = -solid_angle/2`), and the gauge-field line element
for analytic work.  Tests lean on their agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegeneratePolygon, OrthogonalStates, PathNotClosed, PoleSingularity
from .poincare import (
    DEFAULT_EPS_ORTH,
    BlochVector,
    PureQubit,
    _as_unit3,
    bloch_vector,
    overlap,
    pancharatnam_phase,
    rotation_about_axis,
    state_from_bloch,
    state_from_angles,
)

__all__ = [
    "SpherePath",
    "GaugeFieldSample",
    "DiscretePhase",
    "latitude_circle",
    "geodesic_polygon",
    "unitary_orbit",
    "geometric_phase_discrete",
    "solid_angle",
    "gauge_field",
    "berry_curvature",
    "dynamical_phase",
]

_CLOSURE_TOL = 1e-9


@dataclass(frozen=True)
class SpherePath:
    """Ordered loop of states on the sphere.

    ``closed`` is computed at construction: the first and last points must
    represent the same ray (overlap modulus 1 within 1e-9).  Consecutive
    points must not be orthogonal, otherwise the connection between them is
    undefined.
    """

    points: tuple[PureQubit, ...]
    closed: bool = False

    def __init__(self, points: Sequence[PureQubit]):
        pts = tuple(points)
        if len(pts) < 3:
            raise ValueError(f"path needs at least 3 points, got {len(pts)}")
        for k in range(len(pts) - 1):
            if abs(overlap(pts[k], pts[k + 1])) <= DEFAULT_EPS_ORTH:
                raise OrthogonalStates(
                    f"consecutive points {k} and {k + 1} are orthogonal"
                )
        closed = abs(abs(overlap(pts[0], pts[-1])) - 1.0) <= _CLOSURE_TOL
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "closed", closed)

    def __len__(self) -> int:
        return len(self.points)

    def bloch_vertices(self) -> np.ndarray:
        return np.array([list(bloch_vector(p)) for p in self.points], dtype=float)


@dataclass(frozen=True)
class GaugeFieldSample:
    """Connection components at one chart point (``a_theta`` is always 0)."""

    theta: float
    phi: float
    a_theta: float
    a_phi: float


class DiscretePhase(NamedTuple):
    """Wrapped geometric phase plus the raw accumulator for diagnostics."""

    beta: float
    accumulated: float


def latitude_circle(theta: float, segments: int, direction: int = +1) -> SpherePath:
    """Closed circle of constant colatitude, swept once in azimuth.

    ``direction=+1`` sweeps toward increasing phi (right-hand rule about +z).
    The loop has ``segments`` edges; the final point repeats the first
    exactly so the loop closes in phase, not just in ray.
    """
    if segments < 3:
        raise ValueError("need at least 3 segments")
    if direction not in (+1, -1):
        raise ValueError("direction must be +1 or -1")
    pts = [
        state_from_angles(theta, direction * 2.0 * math.pi * k / segments)
        for k in range(segments)
    ]
    pts.append(pts[0])
    return SpherePath(pts)


def _slerp_edge(a: np.ndarray, b: np.ndarray, samples: int) -> np.ndarray:
    """Evenly spaced points along the arc from ``a`` toward ``b``, excluding
    ``b`` itself; rows of shape (samples, 3)."""
    omega = math.atan2(float(np.linalg.norm(np.cross(a, b))), float(np.dot(a, b)))
    if omega < 1e-12:
        return np.tile(a, (samples, 1))
    t = np.arange(samples)[:, None] * (omega / samples)
    return (np.sin(omega - t) * a + np.sin(t) * b) / math.sin(omega)


def geodesic_polygon(
    vertices: Sequence[BlochVector | Sequence[float]], samples_per_edge: int = 64
) -> SpherePath:
    """Closed path tracing great-circle arcs between the given Bloch corners.

    Corners must be pairwise non-antipodal along each edge (the geodesic is
    ambiguous between antipodes).
    """
    vs = [_as_unit3(v) for v in vertices]
    if len(vs) < 3:
        raise DegeneratePolygon("need at least 3 corners")
    if samples_per_edge < 1:
        raise ValueError("samples_per_edge must be >= 1")
    pts: list[PureQubit] = []
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if np.dot(a, b) < -1.0 + 1e-12:
            raise DegeneratePolygon("antipodal corners have no unique geodesic")
        pts.extend(state_from_bloch(p) for p in _slerp_edge(a, b, samples_per_edge))
    pts.append(pts[0])
    return SpherePath(pts)


def unitary_orbit(initial: PureQubit, axis, total_angle: float, segments: int) -> SpherePath:
    """Path traced by ``exp(-i*(angle/2) axis.sigma)`` acting on ``initial``.

    Keeps the physical phases of the evolving state, which is what the
    total-phase bookkeeping (geometric + dynamical) needs.
    """
    if segments < 3:
        raise ValueError("need at least 3 segments")
    pts = [initial]
    for k in range(1, segments + 1):
        u = rotation_about_axis(axis, total_angle * k / segments)
        pts.append(u.apply(initial))
    return SpherePath(pts)


def geometric_phase_discrete(path: SpherePath) -> DiscretePhase:
    """Pancharatnam geometric phase of a closed sampled loop.

    Accumulates the discrete connection
    ``arg<p0|pN> - sum_k arg<p_k|p_{k+1}>`` left to right, so the result is
    reproducible bit for bit and exactly invariant under per-point phase
    changes that agree at the two ends.  Converges to ``-solid_angle/2`` as
    the sampling is refined.  Returns the value wrapped to (-pi, pi] together
    with the raw accumulator.
    """
    if not path.closed:
        raise PathNotClosed("first and last points are not the same ray")
    pts = path.points
    acc = 0.0
    for k in range(len(pts) - 1):
        acc -= pancharatnam_phase(pts[k], pts[k + 1])
    closing = overlap(pts[0], pts[-1])
    acc += math.atan2(closing.imag, closing.real)
    wrapped = math.remainder(acc, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return DiscretePhase(wrapped, acc)


def _arc_lengths(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Great-circle distances between paired rows of unit vectors."""
    cross = np.cross(u, v)
    return np.arctan2(
        np.linalg.norm(cross, axis=-1), np.einsum("...i,...i->...", u, v)
    )


def _excess_lhuilier(la: np.ndarray, lb: np.ndarray, lc: np.ndarray) -> np.ndarray:
    """Unsigned spherical excess from three side lengths; stable when thin."""
    s = 0.5 * (la + lb + lc)
    prod = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - la))
        * np.tan(0.5 * (s - lb))
        * np.tan(0.5 * (s - lc))
    )
    # Rounding noise on degenerate triangles can push prod slightly negative.
    return 4.0 * np.arctan(np.sqrt(np.clip(prod, 0.0, None)))


def solid_angle(path: SpherePath | Sequence) -> float:
    """Signed solid angle enclosed by a simple closed loop, in steradians.

    Accepts a :class:`SpherePath` or a bare sequence of Bloch vectors
    (treated as the corner list of a closed polygon).  The polygon is fanned
    into triangles from its vertex-centroid direction and each triangle
    contributes its l'Huilier excess with an orientation sign, so the result
    is positive for counterclockwise traversal seen from the centroid side
    and flips sign exactly when the path is reversed.  Values lie in
    (-4*pi, 4*pi); loops hugging a great circle fall back to the loop's area
    vector as fan origin, where the traversal side degenerates and the sign
    convention with it.
    """
    if isinstance(path, SpherePath):
        if not path.closed:
            raise PathNotClosed("first and last points are not the same ray")
        verts = path.bloch_vertices()
    else:
        verts = np.array([_as_unit3(v) for v in path], dtype=float)
        if len(verts) < 3:
            raise DegeneratePolygon("need at least 3 vertices")

    # Drop the closing duplicate and any adjacent repeats.
    if np.linalg.norm(verts[0] - verts[-1]) < 1e-9:
        verts = verts[:-1]
    keep = [0]
    for i in range(1, len(verts)):
        if np.linalg.norm(verts[i] - verts[keep[-1]]) >= 1e-9:
            keep.append(i)
    verts = verts[keep]
    n = len(verts)
    if n < 3:
        raise DegeneratePolygon("fewer than 3 distinct vertices after dedup")

    base = verts.mean(axis=0)
    base_norm = float(np.linalg.norm(base))
    if base_norm < 1e-9:
        area_vec = np.sum(np.cross(verts, np.roll(verts, -1, axis=0)), axis=0)
        av_norm = float(np.linalg.norm(area_vec))
        if av_norm < 1e-9:
            raise DegeneratePolygon("no usable fan origin for this vertex set")
        base = area_vec / av_norm
    else:
        base = base / base_norm

    nxt = np.roll(verts, -1, axis=0)
    orient = np.cross(verts, nxt) @ base
    base_rows = np.broadcast_to(base, verts.shape)
    excess = _excess_lhuilier(
        _arc_lengths(verts, nxt),
        _arc_lengths(nxt, base_rows),
        _arc_lengths(base_rows, verts),
    )
    signed = np.where(np.abs(orient) < 1e-30, 0.0, np.copysign(excess, orient))
    return float(np.sum(signed))


def gauge_field(theta: float, phi: float) -> GaugeFieldSample:
    """Berry connection of the reference state family, azimuthal component
    ``cos^2(theta/2)/sin(theta)`` in the gauge with zero accumulated phase
    along meridians.  Defined for ``theta`` strictly inside (0, pi).
    """
    if not 0.0 < theta < math.pi or math.sin(theta) == 0.0:
        raise PoleSingularity(f"gauge field undefined at theta = {theta!r}")
    a_phi = math.cos(theta / 2.0) ** 2 / math.sin(theta)
    return GaugeFieldSample(theta, phi, 0.0, a_phi)


def berry_curvature() -> float:
    """Radial curvature component on the unit sphere: constant -1/2."""
    return -0.5


def dynamical_phase(initial: PureQubit, axis, total_angle: float) -> float:
    """Dynamical phase for a constant-speed rotation about ``axis``.

    The generator is ``(angle/2) * axis.sigma``, whose expectation is
    conserved along the orbit, so the integral collapses to
    ``-(total_angle/2) * (axis . bloch(initial))``.
    """
    n = _as_unit3(axis)
    b = bloch_vector(initial).as_array()
    return -(total_angle / 2.0) * float(np.dot(n, b))
