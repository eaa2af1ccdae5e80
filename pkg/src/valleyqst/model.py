"""Parameter containers and derived rates for the photon-valley transfer model.

A circularly polarized photon (amplitudes alpha, beta on sigma+/sigma-)
enters a vertical distributed-Bragg-reflector cavity, excites a trion in
a quantum dot hosting a valley-singlet electron pair, and the trion
re-emits into an in-plane photonic-crystal cavity whose leakage carries
the transferred qubit away. Two optical matrix elements describe each
stage: a major element (A for the in-plane cavity, C for the vertical
one) and a symmetry-breaking minor element (B, D).

Conventions used throughout the package:

* hbar = 1; every frequency and rate is an angular frequency in GHz,
  times are in ns, lengths in m.
* Cavity and trion widths are amplitude (half-width) decay rates: they
  enter equations of motion as ``-i * rate``, so an intensity lifetime
  ``1/(2*kappa)`` corresponds to a stored value ``kappa``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace

from .errors import ParameterError

#: Speed of light in m/ns, matching the GHz angular-frequency convention.
SPEED_OF_LIGHT = 0.299792458

# Operating-regime labels returned by classify_regime.
CASE_1 = "Case1"
CASE_2 = "Case2"
OUTSIDE = "Outside"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParameterError(message)


def _finite(x: float, name: str) -> float:
    x = float(x)
    _require(math.isfinite(x), f"{name} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class PhotonQubit:
    """Polarization state ``alpha |sigma+> + beta |sigma->`` of the photon.

    Amplitudes are normalized on construction, so only the ratio beta/alpha
    is physical.
    """

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (cmath.isfinite(a) and cmath.isfinite(b)):
            raise ParameterError("qubit amplitudes must be finite")
        norm = math.hypot(abs(a), abs(b))
        _require(norm > 0.0, "qubit amplitudes alpha and beta cannot both be zero")
        object.__setattr__(self, "alpha", a / norm)
        object.__setattr__(self, "beta", b / norm)

    @property
    def amplitude_ratio(self) -> float:
        """|beta/alpha|, infinite for a pure sigma- photon."""
        if self.alpha == 0:
            return math.inf
        return abs(self.beta) / abs(self.alpha)

    @property
    def relative_phase(self) -> float:
        """arg(beta/alpha) in radians, 0 when either amplitude vanishes."""
        if self.alpha == 0 or self.beta == 0:
            return 0.0
        return cmath.phase(self.beta / self.alpha)


@dataclass(frozen=True)
class CouplingSet:
    """Trion optical matrix elements, in GHz.

    ``A``/``B`` couple the trion to the two circular modes of the in-plane
    photonic-crystal cavity, ``C``/``D`` to the vertical DBR cavity. Only
    the phases of the minor elements relative to their majors are physical,
    so construction rotates each pair to make A and C real non-negative.

    The minors arise from one symmetry-breaking mechanism, so B/A and D/C
    are expected to agree; a mismatch beyond ``ratio_tol`` triggers a
    warning (not an error) to keep deliberately asymmetric studies possible.
    """

    A: complex
    B: complex
    C: complex
    D: complex
    ratio_tol: float = field(default=1e-6, repr=False, compare=False)

    def __post_init__(self):
        vals = []
        for name in "ABCD":
            z = complex(getattr(self, name))
            if not cmath.isfinite(z):
                raise ParameterError(f"coupling {name} must be finite")
            vals.append(z)
        a, b, c, d = vals
        if a != 0:
            phase = a / abs(a)
            a, b = complex(abs(a)), b / phase
        if c != 0:
            phase = c / abs(c)
            c, d = complex(abs(c)), d / phase
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "C", c)
        object.__setattr__(self, "D", d)
        if a != 0 and c != 0 and self.ratio_tol != math.inf:
            mismatch = abs(b / a - d / c)
            if mismatch > self.ratio_tol:
                warnings.warn(
                    f"minor/major ratios disagree: B/A = {b / a:.6g}, "
                    f"D/C = {d / c:.6g} (|difference| = {mismatch:.3g})",
                    stacklevel=2,
                )

    @property
    def pc_strength(self) -> float:
        """Combined in-plane coupling g = sqrt(|A|^2 + |B|^2)."""
        return math.hypot(abs(self.A), abs(self.B))

    @property
    def dbr_strength(self) -> float:
        """Combined vertical coupling sqrt(|C|^2 + |D|^2)."""
        return math.hypot(abs(self.C), abs(self.D))


@dataclass(frozen=True)
class CavityParams:
    """Resonance frequency and amplitude leak rate of one cavity, in GHz."""

    omega: float
    leak: float

    def __post_init__(self):
        object.__setattr__(self, "omega", _finite(self.omega, "cavity omega"))
        object.__setattr__(self, "leak", _finite(self.leak, "cavity leak"))
        _require(self.omega > 0, f"cavity omega must be positive, got {self.omega}")
        _require(self.leak > 0, f"cavity leak must be positive, got {self.leak}")


@dataclass(frozen=True)
class TrionParams:
    """Trion transition frequency and non-radiative amplitude decay, in GHz."""

    omega: float
    gamma_SE: float

    def __post_init__(self):
        object.__setattr__(self, "omega", _finite(self.omega, "omega_trion"))
        object.__setattr__(self, "gamma_SE", _finite(self.gamma_SE, "gamma_SE"))
        _require(self.omega > 0, f"omega_trion must be positive, got {self.omega}")
        _require(self.gamma_SE >= 0, f"gamma_SE must be non-negative, got {self.gamma_SE}")


@dataclass(frozen=True)
class PulseParams:
    """Incoming Gaussian wave packet.

    The packet is centred at ``x0 < 0`` at t = 0 and travels toward the
    sample at speed ``c``, so it peaks at the dot at ``t_center = -x0/c``.
    ``L`` is the quantization length of the one-dimensional photon modes;
    physical outputs do not depend on it, which the tests exploit.
    """

    omega_ph: float
    delta_omega: float
    x0: float | None = None
    c: float = SPEED_OF_LIGHT
    L: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "omega_ph", _finite(self.omega_ph, "omega_ph"))
        object.__setattr__(self, "delta_omega", _finite(self.delta_omega, "delta_omega_ph"))
        object.__setattr__(self, "c", _finite(self.c, "c"))
        object.__setattr__(self, "L", _finite(self.L, "L"))
        _require(self.omega_ph > 0, f"omega_ph must be positive, got {self.omega_ph}")
        _require(self.delta_omega > 0,
                 f"delta_omega_ph must be positive, got {self.delta_omega}")
        _require(self.c > 0, f"c must be positive, got {self.c}")
        _require(self.L > 0, f"L must be positive, got {self.L}")
        if self.x0 is None:
            # Far enough out that the packet tail at t = 0 is negligible.
            object.__setattr__(self, "x0", -8.0 * self.c / self.delta_omega)
        else:
            object.__setattr__(self, "x0", _finite(self.x0, "x0"))
            _require(self.x0 < 0, f"x0 must be negative (incoming packet), got {self.x0}")

    @property
    def t_center(self) -> float:
        """Arrival time -x0/c of the packet peak at the dot."""
        return -self.x0 / self.c


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set for one transfer computation."""

    qubit: PhotonQubit
    couplings: CouplingSet
    dbr: CavityParams
    pc: CavityParams
    trion: TrionParams
    pulse: PulseParams

    def with_(self, **kwargs) -> "SystemParams":
        """Return a copy with the given top-level sections replaced."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class DerivedRates:
    """Effective rates of the transfer chain, in GHz.

    * ``gamma_iD``: trion re-emission back through the vertical cavity,
      |C|^2 / kappa_DC.
    * ``gamma_tp``: trion emission into the in-plane cavity, |A|^2 / Gamma_PC.
    * ``gamma_total``: total trion amplitude width, gamma_SE + gamma_iD.

    The primed values are the same quantities divided by ``gamma_tp``; they
    are the natural dimensionless axes of the parameter studies. When
    ``gamma_tp`` vanishes a prime is ``inf`` for a positive numerator and
    ``nan`` for a zero one.
    """

    gamma_iD: float
    gamma_tp: float
    gamma_total: float
    gamma_iD_prime: float
    gamma_SE_prime: float
    delta_omega_prime: float


def _prime(value: float, gamma_tp: float) -> float:
    if gamma_tp > 0:
        return value / gamma_tp
    return math.inf if value > 0 else math.nan


def derive_rates(params: SystemParams) -> DerivedRates:
    """Compute the effective decay rates and their dimensionless forms."""
    cpl = params.couplings
    gamma_iD = abs(cpl.C) ** 2 / params.dbr.leak
    gamma_tp = abs(cpl.A) ** 2 / params.pc.leak
    gamma_total = params.trion.gamma_SE + gamma_iD
    return DerivedRates(
        gamma_iD=gamma_iD,
        gamma_tp=gamma_tp,
        gamma_total=gamma_total,
        gamma_iD_prime=_prime(gamma_iD, gamma_tp),
        gamma_SE_prime=_prime(params.trion.gamma_SE, gamma_tp),
        delta_omega_prime=_prime(params.pulse.delta_omega, gamma_tp),
    )


def classify_regime(params: SystemParams) -> str:
    """Place the parameter point in one of the closed-form validity regimes.

    With ``mn = min(Gamma_PC, kappa_DC)`` and
    ``mx = max(gamma_total, gamma_tp)``:

    * ``Case1`` when mn >= mx >= delta_omega_ph (narrow packet, slow dot),
    * ``Case2`` when mn >= delta_omega_ph >= mx (packet between the scales),
    * ``Outside`` otherwise.

    Boundary ties fall into the first matching case by branch order.
    """
    rates = derive_rates(params)
    mn = min(params.pc.leak, params.dbr.leak)
    mx = max(rates.gamma_total, rates.gamma_tp)
    dw = params.pulse.delta_omega
    if mn >= mx >= dw:
        return CASE_1
    if mn >= dw >= mx:
        return CASE_2
    return OUTSIDE


def baseline() -> SystemParams:
    """Reference operating point used throughout the documentation and tests.

    A sigma+ photon, couplings (A, B, C, D) = (45, 1.8, 30, 1.2) GHz, all
    four frequencies resonant at 1.6e5 GHz, kappa_DC = 90, Gamma_PC = 200,
    gamma_SE = 1, packet width 5 GHz.
    """
    omega = 1.6e5
    return SystemParams(
        qubit=PhotonQubit(1.0, 0.0),
        couplings=CouplingSet(45.0, 1.8, 30.0, 1.2),
        dbr=CavityParams(omega=omega, leak=90.0),
        pc=CavityParams(omega=omega, leak=200.0),
        trion=TrionParams(omega=omega, gamma_SE=1.0),
        pulse=PulseParams(omega_ph=omega, delta_omega=5.0),
    )
