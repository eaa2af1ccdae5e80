"""Order-of-magnitude estimates of the optical matrix elements.

These translate quantum-dot geometry and cavity mode data into the
coupling strengths used by the transfer model: the vacuum field of each
cavity mode, the interband velocity scale of the dot, and from them the
major matrix element ``e v_F E_0 / omega`` and the minor/major ratio
``(v / 2 v_F)^2``. They are advisory inputs for design studies; the
dynamical modules take whatever :class:`~valleyqst.model.CouplingSet`
they are given.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.constants import e as ELEMENTARY_CHARGE, epsilon_0, hbar

from .errors import ParameterError
from .model import CouplingSet

#: rad/s per GHz (angular).
GHZ = 1e9
#: m^3 per um^3.
_UM3 = 1e-18
#: J per eV.
_EV = 1.602176634e-19


@dataclass(frozen=True)
class QdGeometry:
    """Square quantum dot with hard-wall confinement.

    ``edge_length`` in nm, ``gap_parameter`` (half the Dirac gap) in eV,
    ``fermi_velocity`` in m/s.
    """

    edge_length: float
    gap_parameter: float
    fermi_velocity: float

    def __post_init__(self):
        if self.edge_length <= 0:
            raise ParameterError(f"edge_length must be positive, got {self.edge_length}")
        if self.gap_parameter < 0:
            raise ParameterError(f"gap_parameter must be non-negative, got {self.gap_parameter}")
        if self.fermi_velocity <= 0:
            raise ParameterError(f"fermi_velocity must be positive, got {self.fermi_velocity}")


@dataclass(frozen=True)
class CavityMode:
    """One cavity mode: volume in um^3, refractive index, angular frequency in GHz."""

    mode_volume: float
    refractive_index: float
    omega: float

    def __post_init__(self):
        if self.mode_volume <= 0:
            raise ParameterError(f"mode_volume must be positive, got {self.mode_volume}")
        if self.refractive_index < 1:
            raise ParameterError(
                f"refractive_index must be >= 1, got {self.refractive_index}")
        if self.omega <= 0:
            raise ParameterError(f"omega must be positive, got {self.omega}")


# Reference design values: a large vertical DBR cavity in vacuum and a
# tight in-plane photonic-crystal cavity in a high-index slab, both at the
# 1.6e5 GHz operating frequency, with a 70 nm dot.
DEFAULT_GEOMETRY = QdGeometry(edge_length=70.0, gap_parameter=0.1, fermi_velocity=1e6)
DEFAULT_DBR_MODE = CavityMode(mode_volume=1e4, refractive_index=1.0, omega=1.6e5)
DEFAULT_PC_MODE = CavityMode(mode_volume=600.0, refractive_index=2.6, omega=1.6e5)


def vacuum_field(mode: CavityMode) -> float:
    """Root-mean-square vacuum field of the mode, in V/m.

    E_0 = sqrt(hbar * omega / (4 pi epsilon_0 n^2 V)). Scales as
    1/sqrt(V) and sqrt(omega); doubling the index quarters the energy
    density and halves the field.
    """
    omega_si = mode.omega * GHZ
    volume_si = mode.mode_volume * _UM3
    return math.sqrt(
        hbar * omega_si
        / (4.0 * math.pi * epsilon_0 * mode.refractive_index**2 * volume_si)
    )


def qd_velocity(geom: QdGeometry) -> float:
    """Interband velocity of the dot ground state, as a fraction of v_F.

    For a massive Dirac dispersion the velocity at momentum k is
    ``hbar v_F k / sqrt(Delta^2 + (hbar v_F k)^2)``. The hard-wall ground
    state of a square dot puts ``k = sqrt(2) pi / edge``. The result is 1
    for a vanishing gap and falls off as the gap dominates the confinement
    energy.
    """
    k = math.sqrt(2.0) * math.pi / (geom.edge_length * 1e-9)
    kinetic = hbar * geom.fermi_velocity * k  # J
    gap = geom.gap_parameter * _EV
    return kinetic / math.hypot(gap, kinetic)


def estimate_major(geom: QdGeometry, mode: CavityMode) -> float:
    """Major optical matrix element e v_F E_0 / omega, in GHz.

    This is the dipole coupling of the dominant valley transition to the
    mode's vacuum field.
    """
    omega_si = mode.omega * GHZ
    coupling_si = ELEMENTARY_CHARGE * geom.fermi_velocity * vacuum_field(mode) / (
        hbar * omega_si)  # rad/s
    return coupling_si / GHZ


def estimate_minor_ratio(geom: QdGeometry) -> float:
    """Minor/major matrix element ratio (v / 2 v_F)^2.

    The symmetry-forbidden transition opens at second order in the
    interband velocity, giving |M_</M_>| = (v/2 v_F)^2: 0.04 at
    v = 0.4 v_F.
    """
    v = qd_velocity(geom)
    return v * v / 4.0


def build_couplings(
    geom: QdGeometry,
    dbr_mode: CavityMode,
    pc_mode: CavityMode,
    phase_BA: float = 0.0,
) -> CouplingSet:
    """Assemble a :class:`CouplingSet` from the geometric estimates.

    A and C are the major elements of the in-plane and vertical cavities,
    the minors share the magnitude ratio from :func:`estimate_minor_ratio`
    and carry the common phase ``phase_BA`` (radians).
    """
    a = estimate_major(geom, pc_mode)
    c = estimate_major(geom, dbr_mode)
    minor = estimate_minor_ratio(geom) * cmath.exp(1j * phase_BA)
    return CouplingSet(A=a, B=a * minor, C=c, D=c * minor)
