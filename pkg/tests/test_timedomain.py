"""Time-domain solver checked against closed-form relaxation and spectra.

Free-decay runs from hand-picked initial states have exact solutions
(single exponentials, two-level eigenmode mixtures); driven runs must
reproduce the closed-form yield and fidelity. These tests exercise the
kernel without any shared algebra with the analytic module beyond the
eigensystem itself.
"""

import math

import numpy as np
import pytest

from valleyqst import _core
from valleyqst.analytic import source_coefficients, system_poles
from valleyqst.errors import NumericalError, ParameterError
from valleyqst.metrics import fidelity, fidelity_from_spectrum, transfer_yield
from valleyqst.model import CouplingSet, TrionParams, baseline
from valleyqst.timedomain import (
    IntegratorConfig,
    bright_dark_channels,
    default_t_end,
    fidelity_numeric,
    integrate,
    to_spectrum,
    yield_numeric,
)


def _no_dbr_feed(params):
    """Couplings with the vertical cavity cut off from the trion."""
    return params.with_(couplings=CouplingSet(A=45.0, B=1.8, C=0.0, D=0.0))


class TestConfigValidation:
    def test_tolerances_must_be_positive(self):
        with pytest.raises(ParameterError, match="rel_tol"):
            IntegratorConfig(rel_tol=0.0)
        with pytest.raises(ParameterError, match="abs_tol"):
            IntegratorConfig(abs_tol=-1e-14)

    def test_window_fields_must_be_positive_when_given(self):
        with pytest.raises(ParameterError, match="t_end"):
            IntegratorConfig(t_end=0.0)
        with pytest.raises(ParameterError, match="dt_max"):
            IntegratorConfig(dt_max=-0.1)
        with pytest.raises(ParameterError, match="sample_dt"):
            IntegratorConfig(sample_dt=0.0)

    def test_core_stop_non_negative(self):
        with pytest.raises(ParameterError, match="core_stop"):
            IntegratorConfig(core_stop=-1.0)

    def test_omega_points_floor(self):
        with pytest.raises(ParameterError, match="omega_points"):
            IntegratorConfig(omega_points=2)


class TestFreeDecay:
    def test_dbr_kick_is_a_single_exponential(self, base_params):
        # with C = D = 0 the kicked vertical-cavity channel cannot feed
        # anything and must ring down at exactly its own pole
        p = _no_dbr_feed(base_params)
        init = np.zeros(10, dtype=complex)
        init[0] = 1.0
        traj = integrate(p, initial=init, drive=False)
        pole = p.dbr.omega - 1j * p.dbr.leak
        expected = np.exp(-1j * pole * traj.times)
        np.testing.assert_allclose(traj.phi_dc[:, 0], expected,
                                   rtol=1e-7, atol=1e-12)
        # nothing was fed anywhere else
        assert np.max(np.abs(traj.phi_dc[:, 1:])) < 1e-13
        assert np.max(np.abs(traj.phi_trion)) < 1e-13
        assert np.max(np.abs(traj.phi_pc)) < 1e-13

    def test_trion_kick_follows_the_two_level_eigenmodes(self, base_params):
        # a bare trion excitation relaxes through the trion / bright-PC
        # block; expanding the kick on the block eigenvectors gives the
        # exact trajectory for both members
        p = _no_dbr_feed(base_params)
        init = np.zeros(10, dtype=complex)
        init[4] = 1.0
        traj = integrate(p, initial=init, drive=False)
        eig = system_poles(p)
        c1, c2 = source_coefficients(eig, 1.0)
        phase1 = np.exp(-1j * eig.lambda1 * traj.times)
        phase2 = np.exp(-1j * eig.lambda2 * traj.times)
        trion = c1 * eig.vectors[0, 0] * phase1 + c2 * eig.vectors[1, 0] * phase2
        bright = c1 * eig.vectors[0, 1] * phase1 + c2 * eig.vectors[1, 1] * phase2
        np.testing.assert_allclose(traj.phi_trion[:, 0], trion,
                                   rtol=1e-7, atol=1e-12)
        A, B = p.couplings.A, p.couplings.B
        g = p.couplings.pc_strength
        bright_run = (A * traj.phi_pc[:, 0] + B * traj.phi_pc[:, 1]) / g
        np.testing.assert_allclose(bright_run, bright, rtol=1e-7, atol=1e-12)
        # the dark combination is orthogonal to the trion feed
        dark_run = (-np.conj(B) * traj.phi_pc[:, 0]
                    + np.conj(A) * traj.phi_pc[:, 1]) / g
        assert np.max(np.abs(dark_run)) < 1e-12

    def test_vacuum_stays_empty_without_drive(self, base_params):
        traj = integrate(base_params, drive=False)
        assert traj.residual == 0.0
        assert np.max(np.abs(traj.phi_out)) == 0.0


class TestDrivenRun:
    def test_default_window_frozen(self, base_params):
        assert default_t_end(base_params) == pytest.approx(
            3.4243961344129294, rel=1e-12)

    def test_residual_guard_fires_on_short_window(self, base_params):
        # stopping right at the packet peak leaves the chain fully loaded
        with pytest.raises(NumericalError, match="increase t_end"):
            integrate(base_params, IntegratorConfig(t_end=2.0))

    def test_matches_closed_form_yield_and_fidelity(self, base_params):
        y = yield_numeric(base_params)
        f = fidelity_numeric(base_params)
        assert y == pytest.approx(transfer_yield(base_params).probability,
                                  rel=1e-6)
        assert f == pytest.approx(
            fidelity(base_params.qubit, base_params.couplings), rel=1e-6)

    def test_spectrum_roundtrip(self, base_params):
        traj = integrate(base_params)
        spec = to_spectrum(traj, base_params)
        f = fidelity_from_spectrum(spec, base_params.qubit,
                                   base_params.couplings)
        assert f == pytest.approx(
            fidelity(base_params.qubit, base_params.couplings), rel=1e-9)
        assert spec.probability() == pytest.approx(
            transfer_yield(base_params).probability, rel=1e-5)

    def test_dark_channels_stay_empty(self, base_params):
        traj = integrate(base_params)
        channels = bright_dark_channels(traj, base_params)
        peak = np.max(np.abs(channels["K1"]))
        assert np.max(np.abs(channels["K2"])) < 1e-10 * peak
        assert np.max(np.abs(channels["Kp2"])) < 1e-10 * peak

    def test_core_stop_cuts_steps_not_physics(self, base_params):
        full = integrate(base_params)
        stopped = integrate(base_params, IntegratorConfig(core_stop=1e-16))
        assert stopped.steps < full.steps
        p_full = float(full.mode_density * np.trapezoid(
            np.sum(np.abs(full.phi_out) ** 2, axis=0), full.omega))
        p_stop = float(stopped.mode_density * np.trapezoid(
            np.sum(np.abs(stopped.phi_out) ** 2, axis=0), stopped.omega))
        assert p_stop == pytest.approx(p_full, rel=1e-6)

    def test_backends_agree(self, base_params, monkeypatch):
        if _core.BACKEND != "cython":
            pytest.skip("compiled backend unavailable")
        fast = yield_numeric(base_params)
        monkeypatch.setattr(_core, "integrate_amplitudes",
                            _core.integrate_amplitudes_np)
        slow = yield_numeric(base_params)
        assert slow == pytest.approx(fast, rel=1e-12)

    def test_bright_dark_needs_pc_couplings(self, base_params):
        p = base_params.with_(
            couplings=CouplingSet(A=0.0, B=0.0, C=30.0, D=0.0))
        traj = integrate(p)
        with pytest.raises(ParameterError, match="bright/dark"):
            bright_dark_channels(traj, p)

    def test_no_transfer_without_input(self, base_params):
        with pytest.raises(NumericalError, match="no transferred"):
            fidelity_numeric(base_params.with_(
                couplings=CouplingSet(A=0.0, B=0.0, C=30.0, D=0.0)))
