"""Yield and fidelity figures checked against quadrature and closed forms.

The spectral integral gets a second, independent evaluation through
adaptive quadrature; the asymptotic yield forms are compared against the
full expression in the limit where they become exact; the fidelity
identities are exercised over random qubits and couplings.
"""

import dataclasses
import math

import numpy as np
import pytest
from scipy.integrate import quad

from valleyqst.errors import NumericalError, ParameterError
from valleyqst.analytic import output_spectrum, system_poles
from valleyqst.ideal import branch_weights
from valleyqst.metrics import (
    fidelity,
    fidelity_equal_amplitude,
    fidelity_from_spectrum,
    fidelity_haar_average,
    spectral_integral,
    transfer_yield,
    yield_case1,
    yield_case2,
)
from valleyqst.model import (
    CouplingSet,
    PhotonQubit,
    SystemParams,
    TrionParams,
    baseline,
    classify_regime,
    derive_rates,
)

# Baseline figures, frozen after verification against quadrature.
BASELINE_SPECTRAL = 5.96705174356989e-11
BASELINE_YIELD = 0.4431732441193821
BASELINE_FIDELITY = 0.9968076636487051
BASELINE_ETA1 = 0.46786459310982786
BASELINE_ETA2 = 0.21266572414083088


def _quad_spectral(params: SystemParams) -> float:
    """Reference evaluation of I_w by adaptive Gauss-Kronrod quadrature."""
    eig = system_poles(params)
    w0 = params.pulse.omega_ph
    zetas = [eig.lambda1 - w0, eig.lambda2 - w0, eig.lambda3 - w0]
    dw = params.pulse.delta_omega

    def integrand(u):
        val = math.exp(-((u / dw) ** 2))
        for z in zetas:
            val /= (u - z.real) ** 2 + z.imag**2
        return val

    # The Gaussian confines everything to a dozen packet widths; flag the
    # pole positions so the subdivision lands on the sharp features.
    half = 14.0 * dw
    pts = sorted(z.real for z in zetas if abs(z.real) < half)
    value, err = quad(integrand, -half, half, points=pts or None,
                      limit=400, epsabs=0.0, epsrel=1e-12)
    assert err < 1e-9 * abs(value)
    return value


class TestSpectralIntegral:
    def test_matches_quadrature_at_baseline(self, base_params):
        mine = spectral_integral(base_params)
        ref = _quad_spectral(base_params)
        assert mine == pytest.approx(ref, rel=1e-8)

    def test_matches_quadrature_detuned(self, base_params):
        # detune the trion and vertical cavity so the pole features sit
        # away from the packet center
        p = base_params.with_(
            trion=TrionParams(omega=1.6e5 + 15.0, gamma_SE=1.0),
            dbr=dataclasses.replace(base_params.dbr, omega=1.6e5 - 8.0))
        assert spectral_integral(p) == pytest.approx(_quad_spectral(p),
                                                     rel=1e-8)

    def test_matches_quadrature_broad_packet(self, base_params):
        p = base_params.with_(
            pulse=dataclasses.replace(base_params.pulse, delta_omega=40.0))
        assert spectral_integral(p) == pytest.approx(_quad_spectral(p),
                                                     rel=1e-8)

    def test_baseline_value_frozen(self, base_params):
        assert spectral_integral(base_params) == pytest.approx(
            BASELINE_SPECTRAL, rel=1e-10)

    def test_tightening_tolerance_is_stable(self, base_params):
        loose = spectral_integral(base_params, rel_tol=1e-6)
        tight = spectral_integral(base_params, rel_tol=1e-10)
        assert loose == pytest.approx(tight, rel=1e-5)

    def test_undamped_pole_rejected(self, base_params):
        # with every coupling and decay channel off the trion pole sits on
        # the real axis and the integral diverges
        p = base_params.with_(
            couplings=CouplingSet(A=0.0, B=0.0, C=0.0, D=0.0),
            trion=TrionParams(omega=1.6e5, gamma_SE=0.0))
        with pytest.raises(NumericalError, match="diverges"):
            spectral_integral(p)


class TestTransferYield:
    def test_baseline_frozen(self, base_params):
        y = transfer_yield(base_params)
        assert y.probability == pytest.approx(BASELINE_YIELD, rel=1e-10)
        assert y.spectral == pytest.approx(BASELINE_SPECTRAL, rel=1e-10)
        assert y.regime == "Case1"

    def test_eta_coefficients(self, base_params):
        y = transfer_yield(base_params)
        rates = derive_rates(base_params)
        widest = max(rates.gamma_total, rates.gamma_tp)
        kappa = base_params.dbr.leak
        gamma_pc = base_params.pc.leak
        dw = base_params.pulse.delta_omega
        eta1 = gamma_pc**2 * widest**2 * kappa**2 * y.spectral / dw
        eta2 = gamma_pc**2 * widest * kappa**2 * y.spectral
        assert y.eta1 == pytest.approx(eta1, rel=1e-12)
        assert y.eta2 == pytest.approx(eta2, rel=1e-12)
        assert y.eta1 == pytest.approx(BASELINE_ETA1, rel=1e-10)
        assert y.eta2 == pytest.approx(BASELINE_ETA2, rel=1e-10)

    def test_prefactor_assembly(self, base_params):
        # P must equal the explicit product of its published factors
        y = transfer_yield(base_params)
        w_k, w_kp = branch_weights(base_params.qubit, base_params.couplings)
        bracket = abs(w_k) ** 2 + abs(w_kp) ** 2
        g2 = base_params.couplings.pc_strength**2
        manual = (2.0 / math.sqrt(math.pi) * base_params.dbr.leak
                  * base_params.pc.leak / base_params.pulse.delta_omega
                  * bracket * g2 * y.spectral)
        assert y.probability == pytest.approx(manual, rel=1e-12)

    def test_yield_scales_with_input_norm_invariance(self, base_params):
        # the qubit is a normalized state, so a pure phase cannot move P
        q = PhotonQubit(alpha=1.0 * np.exp(0.7j), beta=0.0)
        p = base_params.with_(qubit=q)
        assert transfer_yield(p).probability == pytest.approx(
            BASELINE_YIELD, rel=1e-10)


class TestAsymptoticForms:
    """In the clean limit both regime formulas reduce to the full P."""

    def _clean_params(self, delta_omega: float) -> SystemParams:
        # no minor couplings, gamma_tp dominant, primed rates summing
        # below one: the asymptotic forms are then exact
        base = baseline()
        return base.with_(
            couplings=CouplingSet(A=45.0, B=0.0, C=9.0, D=0.0),
            trion=TrionParams(omega=1.6e5, gamma_SE=0.1),
            pulse=dataclasses.replace(base.pulse, delta_omega=delta_omega))

    def test_case1_exact_in_clean_limit(self):
        p = self._clean_params(5.0)
        assert classify_regime(p) == "Case1"
        assert yield_case1(p) == pytest.approx(
            transfer_yield(p).probability, rel=1e-12)

    def test_case2_exact_in_clean_limit(self):
        p = self._clean_params(40.0)
        assert classify_regime(p) == "Case2"
        assert yield_case2(p) == pytest.approx(
            transfer_yield(p).probability, rel=1e-12)

    def test_case1_formula(self, base_params):
        rates = derive_rates(base_params)
        y = transfer_yield(base_params)
        denom = max(rates.gamma_iD_prime + rates.gamma_SE_prime, 1.0)
        manual = (2.0 / math.sqrt(math.pi) * y.eta1 * rates.gamma_iD_prime
                  / denom)
        assert yield_case1(base_params) == pytest.approx(manual, rel=1e-12)

    def test_case2_formula(self, base_params):
        p = base_params.with_(
            pulse=dataclasses.replace(base_params.pulse, delta_omega=40.0))
        rates = derive_rates(p)
        y = transfer_yield(p)
        denom = max(rates.gamma_iD_prime + rates.gamma_SE_prime, 1.0)
        manual = (2.0 / math.sqrt(math.pi) * y.eta2 * rates.gamma_iD_prime
                  / (denom * rates.delta_omega_prime))
        assert yield_case2(p) == pytest.approx(manual, rel=1e-12)

    def test_wrong_regime_rejected(self, base_params):
        with pytest.raises(ParameterError, match="expected Case2"):
            yield_case2(base_params)
        broad = base_params.with_(
            pulse=dataclasses.replace(base_params.pulse, delta_omega=40.0))
        with pytest.raises(ParameterError, match="expected Case1"):
            yield_case1(broad)

    def test_case2_carries_width_suppression(self, base_params):
        # doubling the packet width in deep Case 2 should roughly halve
        # the asymptotic yield
        p40 = base_params.with_(
            pulse=dataclasses.replace(base_params.pulse, delta_omega=40.0))
        p80 = base_params.with_(
            pulse=dataclasses.replace(base_params.pulse, delta_omega=80.0))
        ratio = yield_case2(p80) / yield_case2(p40)
        assert 0.3 < ratio < 0.7


class TestFidelity:
    def test_baseline_frozen(self, base_params):
        f = fidelity(base_params.qubit, base_params.couplings)
        assert f == pytest.approx(BASELINE_FIDELITY, rel=1e-12)

    def test_perfect_without_minor_couplings(self, rng):
        cs = CouplingSet(A=45.0, B=0.0, C=30.0, D=0.0)
        for _ in range(20):
            re_a, im_a, re_b, im_b = rng.standard_normal(4)
            q = PhotonQubit(complex(re_a, im_a), complex(re_b, im_b))
            assert fidelity(q, cs) == pytest.approx(1.0, abs=1e-12)

    def test_global_phase_invariance(self, base_params, rng):
        cs = base_params.couplings
        q = PhotonQubit(0.6, 0.8j)
        ref = fidelity(q, cs)
        for _ in range(10):
            phase = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
            rotated = PhotonQubit(q.alpha * phase, q.beta * phase)
            assert fidelity(rotated, cs) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.filterwarnings("ignore:minor/major ratios disagree")
    def test_bounded_by_one(self, rng):
        for _ in range(100):
            re_a, im_a, re_b, im_b = rng.standard_normal(4)
            a, c = rng.uniform(1.0, 50.0, size=2)
            rb, rd = rng.uniform(0.0, 0.9, size=2)
            phb, phd = rng.uniform(0.0, 2.0 * math.pi, size=2)
            cs = CouplingSet(A=a, B=rb * a * np.exp(1j * phb),
                             C=c, D=rd * c * np.exp(1j * phd))
            q = PhotonQubit(complex(re_a, im_a), complex(re_b, im_b))
            f = fidelity(q, cs)
            assert 0.0 <= f <= 1.0 + 1e-12

    def test_no_population_raises(self):
        cs = CouplingSet(A=0.0, B=0.0, C=0.0, D=0.0)
        with pytest.raises(NumericalError, match="no transferred"):
            fidelity(PhotonQubit(1.0, 0.0), cs)


class TestEqualAmplitudeFidelity:
    @pytest.mark.filterwarnings("ignore:minor/major ratios disagree")
    def test_matches_general_fidelity(self, rng):
        # alpha = 1/sqrt(2), beta = e^{i(delta - phi_DC)}/sqrt(2) folds
        # every phase into the single argument delta
        for _ in range(50):
            a = rng.uniform(5.0, 50.0)
            c = rng.uniform(5.0, 50.0)
            rb = rng.uniform(0.0, 0.5)
            rd = rng.uniform(0.0, 0.5)
            phi_dc = rng.uniform(0.0, 2.0 * math.pi)
            delta = rng.uniform(0.0, 2.0 * math.pi)
            cs = CouplingSet(A=a, B=rb * a, C=c,
                             D=rd * c * np.exp(1j * phi_dc))
            q = PhotonQubit(1.0 / math.sqrt(2.0),
                            np.exp(1j * (delta - phi_dc)) / math.sqrt(2.0))
            assert fidelity_equal_amplitude(delta, cs) == pytest.approx(
                fidelity(q, cs), rel=1e-12)

    def test_extrema_values(self):
        cs = CouplingSet(A=45.0, B=1.8, C=30.0, D=1.2)
        a2, b2 = 45.0**2, 1.8**2
        c2, d2 = 30.0**2, 1.2**2
        top = a2 / (a2 + b2)
        bottom = a2 * c2 / ((c2 + d2) * (a2 + b2))
        for n in range(3):
            assert fidelity_equal_amplitude(n * math.pi, cs) == pytest.approx(
                top, rel=1e-12)
            assert fidelity_equal_amplitude(
                (n + 0.5) * math.pi, cs) == pytest.approx(bottom, rel=1e-12)

    def test_extrema_bracket_everything_between(self):
        # the exact stationary minimum is at cos(delta) = -|D|/C, a hair
        # past the half period, with value A^2 (C^2-D^2)/(C^2 (A^2+B^2))
        a, b, c, d = 45.0, 1.8, 30.0, 1.2
        cs = CouplingSet(A=a, B=b, C=c, D=d)
        grid = np.linspace(0.0, 2.0 * math.pi, 721)
        values = np.array([fidelity_equal_amplitude(x, cs) for x in grid])
        true_min = a * a * (c * c - d * d) / (c * c * (a * a + b * b))
        assert values.max() <= fidelity_equal_amplitude(0.0, cs) + 1e-12
        assert values.min() >= true_min - 1e-12
        # the half-period form is the right near-minimum: off only at the
        # O(|D|^4 / C^4) level
        assert values.min() == pytest.approx(
            fidelity_equal_amplitude(0.5 * math.pi, cs), rel=1e-5)
        assert grid[np.argmin(values)] == pytest.approx(
            math.acos(-d / c), abs=2.0 * math.pi / 720)

    @pytest.mark.filterwarnings("ignore:minor/major ratios disagree")
    def test_degenerate_denominator_raises(self):
        # C = |D| with delta = pi zeroes the bright-channel weight
        cs = CouplingSet(A=45.0, B=0.0, C=10.0, D=10.0)
        with pytest.raises(NumericalError, match="no transferred"):
            fidelity_equal_amplitude(math.pi, cs)


class TestSpectrumWeightedFidelity:
    def test_collapses_to_pointwise_value(self, base_params):
        spec = output_spectrum(base_params)
        f = fidelity_from_spectrum(spec, base_params.qubit,
                                   base_params.couplings)
        assert f == pytest.approx(
            fidelity(base_params.qubit, base_params.couplings), rel=1e-12)

    def test_empty_spectrum_rejected(self, base_params):
        spec = output_spectrum(base_params)
        empty = dataclasses.replace(
            spec, omega=np.empty(0), p_k=np.empty(0), p_kprime=np.empty(0))
        with pytest.raises(NumericalError, match="empty"):
            fidelity_from_spectrum(empty, base_params.qubit,
                                   base_params.couplings)

    def test_zero_weight_rejected(self, base_params):
        spec = output_spectrum(base_params)
        dead = dataclasses.replace(
            spec, p_k=np.zeros_like(spec.p_k),
            p_kprime=np.zeros_like(spec.p_kprime))
        with pytest.raises(NumericalError, match="no transferred"):
            fidelity_from_spectrum(dead, base_params.qubit,
                                   base_params.couplings)


class TestHaarAverage:
    def test_deterministic(self, base_params):
        cs = base_params.couplings
        assert fidelity_haar_average(cs, 256, seed=7) == \
            fidelity_haar_average(cs, 256, seed=7)

    def test_bounds(self, base_params):
        val = fidelity_haar_average(base_params.couplings, 512)
        assert 0.0 < val <= 1.0

    def test_perfect_couplings_average_to_one(self):
        cs = CouplingSet(A=45.0, B=0.0, C=30.0, D=0.0)
        assert fidelity_haar_average(cs, 128) == pytest.approx(1.0,
                                                               abs=1e-12)

    def test_sample_count_validated(self, base_params):
        with pytest.raises(ParameterError, match="n_samples"):
            fidelity_haar_average(base_params.couplings, 0)
