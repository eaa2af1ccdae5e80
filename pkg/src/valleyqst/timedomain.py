"""Brute-force time-domain solution of the full amplitude chain.

This module is the independent check on the closed forms: it integrates
the ten coupled core amplitudes with an adaptive Runge-Kutta kernel (no
pole algebra, no Fourier shortcuts in the dynamics) and extracts the
exit-mode amplitudes as the spectral transform of the in-plane cavity
trajectory, which is their exact asymptotic limit for a leaky cavity.

Everything runs in the frame rotating at the photon carrier; returned
core trajectories are rotated back to the lab frame so they compare
directly against the closed-form amplitudes. Exit amplitudes follow the
same convention as the analytic per-mode amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .analytic import (
    BRANCH_K,
    BRANCH_KPRIME,
    OutputSpectrum,
    default_omega_grid,
    exit_coupling,
    mode_density,
    pulse_norm,
    system_poles,
)
from .errors import NumericalError, ParameterError
from .model import SystemParams, derive_rates

#: Residual core population allowed at the end of the integration window.
RESIDUAL_LIMIT = 1e-8


@dataclass
class IntegratorConfig:
    """Controls for the time-domain run.

    ``None`` fields are auto-sized from the system's decay rates and the
    packet: the window ends six packet widths plus fourteen lifetimes of
    the slowest populated mode after arrival, the step cap resolves the
    fastest rate, and the sampling step keeps the spectral quadrature
    error well under the comparison tolerances.
    """

    t_end: float | None = None
    dt_max: float | None = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    omega_grid: np.ndarray | None = None
    omega_points: int = 2001
    omega_halfwidth: float = 10.0
    sample_dt: float | None = None
    core_stop: float = 0.0

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive")
        for name in ("t_end", "dt_max", "sample_dt"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ParameterError(f"{name} must be positive when given")
        if self.core_stop < 0:
            raise ParameterError("core_stop must be non-negative")
        if self.omega_points < 3:
            raise ParameterError("omega_points must be at least 3")


@dataclass
class BranchAmplitudes:
    """Sampled trajectory and asymptotic exit amplitudes of one run.

    Core arrays are lab-frame amplitudes at ``times``; columns follow the
    channel order [sigma+ K, sigma- K, sigma+ K', sigma- K'] for the
    cavities and [K, K'] for the trion. ``phi_out[c, j]`` is the
    asymptotic amplitude of output channel ``c`` in the mode at
    ``omega[j]``.
    """

    times: np.ndarray
    phi_dc: np.ndarray
    phi_trion: np.ndarray
    phi_pc: np.ndarray
    omega: np.ndarray
    phi_out: np.ndarray
    mode_density: float
    residual: float
    steps: int
    backend: str


def default_t_end(params: SystemParams) -> float:
    """Integration window: packet arrival plus fourteen lifetimes.

    Fourteen e-foldings of the slowest decaying populated mode push the
    leftover core population below the residual limit with margin.
    """
    eig = system_poles(params)
    pulse = params.pulse
    widths = [w for w in (-eig.lambda1.imag, -eig.lambda2.imag,
                          params.dbr.leak) if w > 0]
    tail = 14.0 / min(widths) if widths else 6.0 / pulse.delta_omega
    return pulse.t_center + 6.0 / pulse.delta_omega + tail


def _resolve(params: SystemParams, cfg: IntegratorConfig):
    eig = system_poles(params)
    pulse = params.pulse
    dw = pulse.delta_omega
    rate_max = max(params.dbr.leak, params.pc.leak,
                   abs(eig.a.imag), eig.coupling, dw,
                   abs(params.dbr.omega - pulse.omega_ph),
                   abs(params.trion.omega - pulse.omega_ph),
                   abs(params.pc.omega - pulse.omega_ph))

    if cfg.omega_grid is not None:
        omega = np.asarray(cfg.omega_grid, dtype=float)
    else:
        omega = default_omega_grid(params, cfg.omega_points, cfg.omega_halfwidth)
    delta_max = float(np.max(np.abs(omega - pulse.omega_ph), initial=0.0))

    t_end = cfg.t_end if cfg.t_end is not None else default_t_end(params)
    dt_max = cfg.dt_max
    if dt_max is None:
        dt_max = min(0.2 / dw, 1.0 / rate_max)
    sample_dt = cfg.sample_dt
    if sample_dt is None:
        sample_dt = 0.2 / max(rate_max, delta_max, 1e-300)
    # Simpson weights need an odd number of uniformly spaced samples.
    intervals = max(2, math.ceil(t_end / sample_dt))
    intervals += intervals % 2
    times = np.linspace(0.0, t_end, intervals + 1)
    return eig, omega, t_end, dt_max, times


def _simpson_weights(times: np.ndarray) -> np.ndarray:
    h = times[1] - times[0]
    w = np.full(times.shape[0], 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def _exit_transform(phi_pc_rot: np.ndarray, times: np.ndarray,
                    delta: np.ndarray, t_k: float) -> np.ndarray:
    """Asymptotic exit amplitudes as the transform of the cavity history."""
    weights = _simpson_weights(times)
    out = np.zeros((4, delta.shape[0]), dtype=complex)
    step = 1024
    for lo in range(0, times.shape[0], step):
        sl = slice(lo, min(lo + step, times.shape[0]))
        phase = np.exp(1j * np.outer(delta, times[sl]))
        out += (phase @ (weights[sl, None] * phi_pc_rot[sl, :])).T
    return -1j * t_k * out


def integrate(params: SystemParams, cfg: IntegratorConfig | None = None,
              initial: np.ndarray | None = None,
              drive: bool = True) -> BranchAmplitudes:
    """Run the time-domain solver and collect trajectory plus exit modes.

    ``initial`` seeds the ten core amplitudes at t = 0 (default vacuum);
    ``drive=False`` switches the input packet off, which turns the run
    into a relaxation from the initial state, useful for checking decay
    rates in isolation.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    eig, omega, t_end, dt_max, times = _resolve(params, cfg)
    pulse = params.pulse
    rates = derive_rates(params)
    cpl = params.couplings

    y0 = np.zeros(10, dtype=complex)
    if initial is not None:
        y0[:] = np.asarray(initial, dtype=complex)
    drive_coef = (1j * math.sqrt(pulse.c * params.dbr.leak / pulse.L)
                  * pulse_norm(pulse)) if drive else 0.0

    samples, status, n_steps, n_rejected, t_final = _core.integrate_amplitudes(
        y0, 0.0, t_end, dt_max * 0.1, dt_max, cfg.rel_tol, cfg.abs_tol,
        params.dbr.omega - pulse.omega_ph, params.dbr.leak,
        params.trion.omega - pulse.omega_ph, rates.gamma_total,
        params.pc.omega - pulse.omega_ph, params.pc.leak,
        cpl.A, cpl.B, cpl.C, cpl.D,
        params.qubit.alpha, params.qubit.beta, drive_coef,
        pulse.delta_omega, pulse.t_center,
        times, cfg.core_stop, pulse.t_center + 6.0 / pulse.delta_omega,
    )
    if status == _core.STATUS_DT_UNDERFLOW:
        raise NumericalError(
            f"step size underflow at t = {t_final:.6g} "
            f"({n_steps} accepted, {n_rejected} rejected steps)")
    if status == _core.STATUS_STEP_BUDGET:
        raise NumericalError(
            f"step budget exceeded at t = {t_final:.6g}; "
            "loosen tolerances or shorten t_end")

    residual = float(np.sum(np.abs(samples[-1]) ** 2))
    if status == _core.STATUS_OK and residual > RESIDUAL_LIMIT:
        raise NumericalError(
            f"core population {residual:.3e} still present at "
            f"t_end = {t_end:.6g}; increase t_end")

    phi_out = _exit_transform(samples[:, 6:10], times,
                              omega - pulse.omega_ph, exit_coupling(params))
    carrier = np.exp(-1j * pulse.omega_ph * times)[:, None]
    lab = samples * carrier
    return BranchAmplitudes(
        times=times,
        phi_dc=lab[:, 0:4],
        phi_trion=lab[:, 4:6],
        phi_pc=lab[:, 6:10],
        omega=omega,
        phi_out=phi_out,
        mode_density=mode_density(params),
        residual=residual,
        steps=n_steps,
        backend=_core.BACKEND,
    )


def bright_dark_channels(traj: BranchAmplitudes,
                         params: SystemParams) -> dict[str, np.ndarray]:
    """Rotate the four exit channels onto bright/dark combinations.

    For each valley sector the bright channel collects the combination
    actually fed by its trion; the dark channel is the orthogonal one and
    must stay empty, which is a sharp test of the coupling structure.
    """
    A, B = params.couplings.A, params.couplings.B
    g = params.couplings.pc_strength
    if g == 0:
        raise ParameterError("bright/dark split undefined for A = B = 0")
    out = traj.phi_out
    return {
        "K1": (A * out[0] + B * out[1]) / g,
        "K2": (-B.conjugate() * out[0] + A.conjugate() * out[1]) / g,
        "Kp1": -(B.conjugate() * out[2] + A.conjugate() * out[3]) / g,
        "Kp2": (A * out[2] - B * out[3]) / g,
    }


def to_spectrum(traj: BranchAmplitudes, params: SystemParams) -> OutputSpectrum:
    """Package the run's exit probabilities like the closed-form spectrum."""
    channels = bright_dark_channels(traj, params)
    return OutputSpectrum(
        omega=traj.omega,
        p_k=np.abs(channels["K1"]) ** 2,
        p_kprime=np.abs(channels["Kp1"]) ** 2,
        mode_density=traj.mode_density,
    )


def yield_numeric(params: SystemParams,
                  cfg: IntegratorConfig | None = None) -> float:
    """Total exit probability summed over channels and modes."""
    traj = integrate(params, cfg)
    densities = np.sum(np.abs(traj.phi_out) ** 2, axis=0)
    return float(traj.mode_density * np.trapezoid(densities, traj.omega))


def fidelity_numeric(params: SystemParams,
                     cfg: IntegratorConfig | None = None) -> float:
    """Exit-state fidelity against the perfect-transfer reference.

    Projects each exit mode onto the target (the sigma+ K channel with
    weight -conj(alpha) and the sigma- K' channel with conj(beta)) and
    normalizes by the transferred probability.
    """
    traj = integrate(params, cfg)
    alpha, beta = params.qubit.alpha, params.qubit.beta
    overlap = (-alpha.conjugate() * traj.phi_out[0]
               + beta.conjugate() * traj.phi_out[3])
    total = float(traj.mode_density
                  * np.trapezoid(np.sum(np.abs(traj.phi_out) ** 2, axis=0),
                                 traj.omega))
    if total <= 0.0:
        raise NumericalError("no transferred population")
    captured = float(traj.mode_density
                     * np.trapezoid(np.abs(overlap) ** 2, traj.omega))
    return captured / total


__all__ = [
    "BRANCH_K",
    "BRANCH_KPRIME",
    "BranchAmplitudes",
    "IntegratorConfig",
    "RESIDUAL_LIMIT",
    "bright_dark_channels",
    "fidelity_numeric",
    "integrate",
    "to_spectrum",
    "yield_numeric",
]
