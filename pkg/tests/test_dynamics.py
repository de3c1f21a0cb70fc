"""Tests for the time-domain integrators and the adiabatic validity check."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cavitymagnons.dynamics import (
    adiabatic_validity_report,
    integrate_adiabatic,
    integrate_full,
    matrix_exponential,
    propagate_exact,
    slaved_cavity_amplitude,
)
from cavitymagnons.model import (
    DriveParams,
    SystemParams,
    build_adiabatic_model,
    build_driven_system,
)
from cavitymagnons.response import steady_state

SQRT2 = math.sqrt(2.0)

WEAK = SystemParams(kappa=1, gamma1=0.01, gamma2=0.01, g1=0.2, g2=0.2, s=0.04)
STRONG = SystemParams(kappa=1, gamma1=1, gamma2=1, g1=2, g2=2, s=0.5)


class TestMatrixExponential:
    def test_diagonal_case(self):
        a = np.diag([1.0 + 0j, -2.0, 0.5j])
        assert_allclose(matrix_exponential(a), np.diag(np.exp(np.diag(a))), rtol=1e-13)

    def test_defective_generator_falls_back(self):
        # Jordan block: exp([[0,1],[0,0]]) = [[1,1],[0,1]]
        a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        assert_allclose(matrix_exponential(a), [[1, 1], [0, 1]], atol=1e-12)

    def test_against_scipy_generic(self):
        import scipy.linalg
        rng = np.random.default_rng(3)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert_allclose(matrix_exponential(a), scipy.linalg.expm(a), rtol=1e-10)


class TestIntegrateFull:
    def test_free_decay_to_vacuum(self):
        traj = integrate_full(STRONG, DriveParams(delta=0.0, amplitude=0.0),
                              [1.0, 0.5j, -0.25], t_end=30.0, dt=0.02)
        assert np.linalg.norm(traj.states[-1]) < 1e-10
        assert traj.final_residual < 1e-10

    def test_converges_to_closed_form_steady_state(self):
        drive = DriveParams(delta=0.0, amplitude=1.0)
        traj = integrate_full(WEAK, drive, np.zeros(3), t_end=50 / 0.05, dt=0.05)
        point = steady_state(WEAK, drive)
        target = np.array([point.a, point.m1, point.m2])
        assert np.linalg.norm(traj.states[-1] - target) < 1e-8

    def test_decoupled_magnons_stay_dark(self):
        p = SystemParams(kappa=1, gamma1=0.01, gamma2=0.01, g1=0, g2=0, s=0.3)
        traj = integrate_full(p, DriveParams(delta=0.0, amplitude=1.0),
                              np.zeros(3), t_end=20.0, dt=0.02)
        assert np.abs(traj.states[:, 1:]).max() == 0.0

    def test_matches_exact_propagator(self):
        drive = DriveParams(delta=0.3, amplitude=1.0)
        x0 = np.array([0.2, -0.1j, 0.05 + 0.05j])
        traj = integrate_full(STRONG, drive, x0, t_end=10.0, dt=1e-3)
        exact = propagate_exact(STRONG, drive, x0, 10.0)
        assert np.linalg.norm(traj.states[-1] - exact) < 1e-8

    def test_fourth_order_convergence(self):
        drive = DriveParams(delta=0.3, amplitude=1.0)
        x0 = np.array([0.2, -0.1j, 0.05 + 0.05j])
        exact = propagate_exact(STRONG, drive, x0, 5.0)
        errors = []
        for dt in (0.05, 0.025):
            traj = integrate_full(STRONG, drive, x0, t_end=5.0, dt=dt)
            errors.append(np.linalg.norm(traj.states[-1] - exact))
        assert errors[0] / errors[1] >= 12.0

    def test_monotone_approach_on_trajectory_tail(self):
        drive = DriveParams(delta=0.1, amplitude=1.0)
        traj = integrate_full(STRONG, drive, np.zeros(3), t_end=40.0, dt=0.02)
        point = steady_state(STRONG, drive)
        target = np.array([point.a, point.m1, point.m2])
        distance = np.linalg.norm(traj.states - target, axis=1)
        tail = distance[-(len(distance) // 5):]
        assert np.all(np.diff(tail) <= 1e-15)

    def test_times_strictly_increasing(self):
        traj = integrate_full(WEAK, DriveParams(), np.zeros(3), t_end=1.0, dt=0.01)
        assert np.all(np.diff(traj.times) > 0)

    def test_rejects_unstable_step(self):
        # stiffest decay ~ kappa; RK4 blows up past dt ~ 2.8/kappa
        with pytest.raises(ValueError):
            integrate_full(STRONG, DriveParams(), np.zeros(3), t_end=10.0, dt=3.0)

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError):
            integrate_full(WEAK, DriveParams(), np.zeros(3), t_end=1.0, dt=0.0)

    def test_rejects_wrong_state_shape(self):
        with pytest.raises(ValueError):
            integrate_full(WEAK, DriveParams(), np.zeros(2), t_end=1.0, dt=0.01)


class TestIntegrateAdiabatic:
    def test_bright_combination_decays_superradiantly(self):
        # At s=0 the (1,1)/sqrt(2) combination decays at gamma + 2 g^2/kappa.
        p = SystemParams(kappa=1, gamma1=0.01, gamma2=0.01, g1=0.2, g2=0.2, s=0)
        model = build_adiabatic_model(p)
        bright = np.array([1.0, 1.0]) / SQRT2
        traj = integrate_adiabatic(model, bright, t_end=10.0, dt=0.01)
        rate = 0.01 + 2 * 0.04
        expected = math.exp(-rate * 10.0)
        assert np.linalg.norm(traj.states[-1]) == pytest.approx(expected, rel=1e-8)

    def test_dark_combination_decays_at_bare_rate(self):
        p = SystemParams(kappa=1, gamma1=0.01, gamma2=0.01, g1=0.2, g2=0.2, s=0)
        model = build_adiabatic_model(p)
        dark = np.array([1.0, -1.0]) / SQRT2
        traj = integrate_adiabatic(model, dark, t_end=10.0, dt=0.01)
        expected = math.exp(-0.01 * 10.0)
        assert np.linalg.norm(traj.states[-1]) == pytest.approx(expected, rel=1e-8)

    def test_norm_non_increasing(self):
        p = SystemParams(kappa=1, gamma1=0.02, gamma2=0.03, g1=0.3, g2=0.2, s=0.1)
        traj = integrate_adiabatic(build_adiabatic_model(p), [0.8, -0.6j], t_end=20.0, dt=0.01)
        norms = np.linalg.norm(traj.states, axis=1)
        assert np.all(np.diff(norms) <= 1e-12)

    def test_rejects_wrong_state_shape(self):
        with pytest.raises(ValueError):
            integrate_adiabatic(build_adiabatic_model(WEAK), np.zeros(3), t_end=1.0, dt=0.01)


class TestSlavedCavity:
    def test_formula(self):
        p = SystemParams(kappa=2.0, g1=0.4, g2=0.6)
        assert slaved_cavity_amplitude(p, 1.0, 1j) == pytest.approx(
            -1j * (0.4 * 1.0 + 0.6 * 1j) / 2.0
        )


class TestAdiabaticValidityReport:
    def test_weak_coupling_regime_is_accurate(self):
        deviation = adiabatic_validity_report(WEAK, [1.0, 0.0], t_end=100.0, dt=0.01)
        assert deviation <= 0.1

    def test_strong_coupling_regime_fails(self):
        deviation = adiabatic_validity_report(STRONG, [1.0, 0.0], t_end=20.0, dt=0.002)
        assert deviation > 0.5

    def test_decoupled_systems_agree_exactly(self):
        p = SystemParams(kappa=1, gamma1=0.01, gamma2=0.01, g1=0, g2=0, s=0.3)
        assert adiabatic_validity_report(p, [1.0, 0.5j], t_end=10.0, dt=0.01) == 0.0

    def test_rejects_zero_initial_state(self):
        with pytest.raises(ValueError):
            adiabatic_validity_report(WEAK, [0.0, 0.0], t_end=1.0)
