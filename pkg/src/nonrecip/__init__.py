"""Polarization qubits, geometric phase, and non-reciprocity detection."""

from .bell import (
    JointSetting,
    TwoQubitState,
    alice_linear_basis,
    apply_to_bob,
    bob_basis,
    closed_form_circular,
    closed_form_general,
    closed_form_linear,
    joint_prob,
    joint_probs,
    marginal_prob,
    meridian_pair,
    phi_minus,
)
from .channel import (
    AttackDevice,
    Channel,
    Direction,
    OpticalElement,
    attack_operator,
    circulator_route,
    faraday_rotator,
    induced_phase,
    is_reciprocal,
    propagation_delay,
    round_trip,
    waveplate,
)
from .detect import (
    DetectionVerdict,
    Scenario,
    TallyTable,
    effective_bob_unitary,
    estimate_contrast,
    reciprocity_test,
    simulate,
)
from .errors import (
    ConfigError,
    DegenerateModel,
    DegeneratePolygon,
    EmptyTally,
    InvalidPort,
    NonrecipError,
    OrthogonalStates,
    PathNotClosed,
    PoleSingularity,
)
from .geophase import (
    DiscretePhase,
    GaugeFieldSample,
    SpherePath,
    berry_curvature,
    dynamical_phase,
    gauge_field,
    geodesic_polygon,
    geometric_phase_discrete,
    latitude_circle,
    solid_angle,
    unitary_orbit,
)
from .poincare import (
    BlochVector,
    MeasurementBasis,
    PolarizationUnitary,
    PureQubit,
    bloch_vector,
    circular_basis,
    geometric_phase_gate,
    linear_view,
    overlap,
    pancharatnam_phase,
    rotation_about_axis,
    state_from_angles,
    state_from_bloch,
    state_from_linear,
)

__version__ = "0.1.0"
