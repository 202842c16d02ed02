"""Channel elements, reciprocity predicate, interception model."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from nonrecip.channel import (
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
from nonrecip.errors import InvalidPort
from nonrecip.poincare import (
    PolarizationUnitary,
    pancharatnam_phase,
    state_from_bloch,
)


def up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    return 2.0 - abs(np.trace(a.conj().T @ b)) <= tol


def random_waveplate(rng: np.random.Generator) -> OpticalElement:
    return waveplate(rng.uniform(0.0, 2.0 * math.pi), rng.uniform(0.0, math.pi))


class TestWaveplate:
    def test_zero_retardance_is_identity_both_ways(self):
        wp = waveplate(0.0, 0.37)
        assert np.allclose(wp.u_forward.to_linear(), np.eye(2), atol=1e-12)
        assert np.allclose(wp.u_backward.to_linear(), np.eye(2), atol=1e-12)

    def test_quarter_wave_fast_horizontal(self):
        u = waveplate(math.pi / 2, 0.0).u_forward.to_linear()
        assert np.allclose(u, np.diag([1.0, 1j]), atol=1e-12)

    def test_half_wave_at_45_swaps_h_and_v(self):
        u = waveplate(math.pi, math.pi / 4).u_forward.to_linear()
        assert np.allclose(u, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-12)

    def test_is_reciprocal(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            assert is_reciprocal(random_waveplate(rng))

    def test_stacks_stay_reciprocal(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            chain = Channel([random_waveplate(rng) for _ in range(10)])
            assert is_reciprocal(chain.as_element())

    def test_quarter_wave_round_trip_acts_like_half_wave(self):
        qwp = waveplate(math.pi / 2, math.pi / 4)
        hwp = waveplate(math.pi, math.pi / 4)
        assert up_to_phase(round_trip(qwp).matrix, hwp.u_forward.matrix)


class TestFaradayRotator:
    @pytest.mark.parametrize("rho", [math.pi / 8, math.pi / 4, math.pi / 2])
    def test_not_reciprocal(self, rho):
        assert not is_reciprocal(faraday_rotator(rho))

    def test_zero_rotation_is_reciprocal(self):
        assert is_reciprocal(faraday_rotator(0.0))

    @pytest.mark.parametrize("rho", [0.2, math.pi / 8, math.pi / 4, 1.0])
    def test_round_trip_doubles_the_rotation(self, rho):
        got = round_trip(faraday_rotator(rho)).to_linear()
        c, s = math.cos(2.0 * rho), math.sin(2.0 * rho)
        assert np.allclose(got, np.array([[c, -s], [s, c]]), atol=1e-12)

    def test_quarter_turn_round_trips_to_minus_identity(self):
        got = round_trip(faraday_rotator(math.pi / 2)).to_linear()
        assert np.allclose(got, -np.eye(2), atol=1e-12)

    def test_mixed_stack_is_not_reciprocal(self):
        chain = Channel(
            [waveplate(0.8, 0.3), faraday_rotator(math.pi / 8), waveplate(1.1, 1.2)]
        )
        assert not is_reciprocal(chain.as_element())


class TestReciprocityPredicate:
    def test_identity_is_reciprocal(self):
        e = OpticalElement(
            "id", PolarizationUnitary.identity(), PolarizationUnitary.identity()
        )
        assert is_reciprocal(e)

    def test_invariant_under_common_phase(self):
        # the physical freedom: one propagation phase shared by both directions
        base = waveplate(1.3, 0.4)
        phased = OpticalElement(
            "phased",
            PolarizationUnitary(cmath.exp(0.77j) * base.u_forward.matrix),
            PolarizationUnitary(cmath.exp(0.77j) * base.u_backward.matrix),
        )
        assert is_reciprocal(phased)

    def test_one_sided_phase_is_non_reciprocal(self):
        # a phase picked up in only one direction is direction-dependent action
        base = waveplate(1.3, 0.4)
        lopsided = OpticalElement(
            "lopsided",
            PolarizationUnitary(cmath.exp(0.77j) * base.u_forward.matrix),
            base.u_backward,
        )
        assert not is_reciprocal(lopsided)

    def test_sign_flipped_backward_is_non_reciprocal(self):
        # U = -U^T elements (half-turn rotators) must not slip through
        assert not is_reciprocal(faraday_rotator(math.pi / 2))

    def test_tolerance_is_adjustable(self):
        almost = faraday_rotator(1e-6)
        assert not is_reciprocal(almost, tol=1e-14)
        assert is_reciprocal(almost, tol=1e-3)


class TestChannel:
    def test_forward_composes_left_to_right(self):
        a, b = waveplate(0.9, 0.1), waveplate(1.7, 1.0)
        got = Channel([a, b]).forward().matrix
        want = b.u_forward.matrix @ a.u_forward.matrix
        assert np.allclose(got, want, atol=1e-12)

    def test_backward_composes_right_to_left(self):
        a, b = faraday_rotator(0.3), waveplate(1.7, 1.0)
        got = Channel([a, b]).backward().matrix
        want = a.u_backward.matrix @ b.u_backward.matrix
        assert np.allclose(got, want, atol=1e-12)

    def test_delays_sum_per_direction(self):
        e1 = OpticalElement(
            "a",
            PolarizationUnitary.identity(),
            PolarizationUnitary.identity(),
            delay_forward=1.0,
            delay_backward=2.0,
        )
        e2 = OpticalElement(
            "b",
            PolarizationUnitary.identity(),
            PolarizationUnitary.identity(),
            delay_forward=0.25,
            delay_backward=0.5,
        )
        chain = Channel([e1, e2])
        assert chain.delay(Direction.A_TO_B) == 1.25
        assert chain.delay(Direction.B_TO_A) == 2.5
        merged = chain.as_element("merged")
        assert merged.delay_forward == 1.25
        assert merged.delay_backward == 2.5

    def test_negative_delay_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            OpticalElement(
                "bad",
                PolarizationUnitary.identity(),
                PolarizationUnitary.identity(),
                delay_forward=-1.0,
            )


class TestInducedPhase:
    @pytest.mark.parametrize(
        "theta,expected",
        [
            (0.0, 0.0),
            (math.pi / 3, -math.pi / 2),
            (math.pi / 2, -math.pi),
            (math.pi, -2.0 * math.pi),
        ],
    )
    def test_reference_values(self, theta, expected):
        assert math.isclose(induced_phase(theta), expected, abs_tol=1e-15)

    def test_equals_minus_half_cap_area(self):
        for theta in np.linspace(0.0, math.pi, 17):
            cap = 2.0 * math.pi * (1.0 - math.cos(theta))
            assert math.isclose(induced_phase(theta), -0.5 * cap, abs_tol=1e-12)


class TestAttackOperator:
    def test_identity_at_zero_colatitude(self):
        u = attack_operator(AttackDevice(), 0.0)
        assert np.allclose(u.matrix, np.eye(2), atol=1e-12)

    def test_eigen_action_includes_the_phase(self):
        device = AttackDevice()
        rng = np.random.default_rng(7)
        for theta in rng.uniform(0.05, math.pi - 0.05, size=20):
            psi = state_from_bloch(
                (math.sin(theta), 0.0, math.cos(theta))
            )  # +1 eigenstate for the z-axis device
            u = attack_operator(device, float(theta))
            beta = induced_phase(float(theta))
            assert np.allclose(
                u.apply(psi).vec, cmath.exp(-1j * beta) * psi.vec, atol=1e-12
            )

    def test_orthogonal_ray_gets_opposite_phase(self):
        theta = 1.2
        psi_perp = state_from_bloch((-math.sin(theta), 0.0, -math.cos(theta)))
        u = attack_operator(AttackDevice(), theta)
        beta = induced_phase(theta)
        assert np.allclose(
            u.apply(psi_perp).vec, cmath.exp(1j * beta) * psi_perp.vec, atol=1e-12
        )

    def test_tilted_device_axis(self):
        device = AttackDevice(rotation_axis=(1.0, 0.0, 0.0))
        theta = 0.9
        # meridian direction at colatitude theta from +x, toward +y
        psi = state_from_bloch((math.cos(theta), math.sin(theta), 0.0))
        u = attack_operator(device, theta)
        got = u.apply(psi)
        assert math.isclose(abs(np.vdot(psi.vec, got.vec)), 1.0, abs_tol=1e-12)
        # <psi|U psi> = exp(-i*beta), so the relative phase is -beta
        assert math.isclose(
            pancharatnam_phase(psi, got), -induced_phase(theta), abs_tol=1e-12
        )

    def test_axis_is_normalized_on_entry(self):
        device = AttackDevice(rotation_axis=(0.0, 0.0, 3.0))
        assert device.rotation_axis == (0.0, 0.0, 1.0)

    def test_unitary_for_every_setting(self):
        device = AttackDevice()
        for theta in np.linspace(0.0, math.pi, 21):
            m = attack_operator(device, float(theta)).matrix
            assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-12)


class TestDeviceTiming:
    def test_delays_by_direction(self):
        device = AttackDevice(delta_ab=2.4e-8, delta_ba=3.1e-8)
        assert propagation_delay(device, Direction.A_TO_B) == 2.4e-8
        assert propagation_delay(device, Direction.B_TO_A) == 3.1e-8

    def test_negative_delay_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            AttackDevice(delta_ab=-1.0)


class TestCirculator:
    @pytest.mark.parametrize("port,expected", [(1, 2), (2, 3), (3, 1)])
    def test_routing(self, port, expected):
        assert circulator_route(port) == expected

    @pytest.mark.parametrize("port", [0, 4, -1])
    def test_invalid_ports(self, port):
        with pytest.raises(InvalidPort):
            circulator_route(port)

    def test_three_hops_return_home(self):
        port = 2
        for _ in range(3):
            port = circulator_route(port)
        assert port == 2
