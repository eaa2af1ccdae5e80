"""Lossless state pipeline of the transfer protocol.

This module tracks the protocol in the idealized limit where cavity
leakage and dephasing are ignored and only the coupling amplitudes act.
A photon qubit meets an inter-dot valley-singlet electron pair; whichever
electron matches the photon's valley selection rule is promoted to a
trion, and the trion re-emits into the in-plane cavity, leaving the
qubit imprinted on the valley pair. Projecting the emitted photon onto
linear polarizations heralds the transfer.

States are sparse amplitude maps keyed by basis labels. Photon-and-valley
product labels use ``"<pol>|<valley>"``; bare trion or valley labels and
bare polarization labels cover the photon-free and valley-free sectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NumericalError
from .model import CouplingSet, PhotonQubit

# Valley-pair labels: left dot / right dot occupation.
VALLEY_KKP = "K_L K'_R"
VALLEY_KPK = "K'_L K_R"
# Trion labels: which valley pair in the left dot is excited.
TRION_K = "K_ex,L K'_L K_R"
TRION_KP = "K'_ex,L K_L K'_R"
# Photon polarization labels.
POL_P = "sigma+"
POL_M = "sigma-"
POL_X = "sigma_x"
POL_Y = "sigma_y"

CIRCULAR = "circular"
LINEAR = "linear"

_SQRT2 = math.sqrt(2.0)


def _split(key: str) -> tuple[str | None, str]:
    """Separate a basis label into (polarization, rest)."""
    pol, sep, rest = key.partition("|")
    if sep and pol in (POL_P, POL_M, POL_X, POL_Y):
        return pol, rest
    if key in (POL_P, POL_M, POL_X, POL_Y):
        return key, ""
    return None, key


def _join(pol: str, rest: str) -> str:
    return f"{pol}|{rest}" if rest else pol


@dataclass
class HybridState:
    """Sparse photon-valley state: basis label -> complex amplitude."""

    amplitudes: dict[str, complex] = field(default_factory=dict)
    frame: str = CIRCULAR

    def amplitude(self, key: str) -> complex:
        return self.amplitudes.get(key, 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def normalized(self) -> "HybridState":
        n = self.norm()
        if n == 0.0:
            raise NumericalError("cannot normalize a zero state")
        return HybridState({k: v / n for k, v in self.amplitudes.items()}, self.frame)

    def overlap(self, other: "HybridState") -> complex:
        """Inner product <self|other>; both states must share a frame."""
        if self.frame != other.frame:
            raise ValueError(f"frame mismatch: {self.frame} vs {other.frame}")
        return sum(
            self.amplitudes[k].conjugate() * other.amplitudes[k]
            for k in self.amplitudes.keys() & other.amplitudes.keys()
        )

    def to_linear(self) -> "HybridState":
        """Rewrite the photon sector in the sigma_x/sigma_y basis."""
        if self.frame == LINEAR:
            return HybridState(dict(self.amplitudes), LINEAR)
        out: dict[str, complex] = {}
        rests = set()
        for key, amp in self.amplitudes.items():
            pol, rest = _split(key)
            if pol is None:
                out[key] = amp
            else:
                rests.add(rest)
        for rest in rests:
            cp = self.amplitudes.get(_join(POL_P, rest), 0j)
            cm = self.amplitudes.get(_join(POL_M, rest), 0j)
            out[_join(POL_X, rest)] = (cp + cm) / _SQRT2
            out[_join(POL_Y, rest)] = 1j * (cp - cm) / _SQRT2
        return HybridState(out, LINEAR)

    def to_circular(self) -> "HybridState":
        """Rewrite the photon sector in the sigma+/sigma- basis."""
        if self.frame == CIRCULAR:
            return HybridState(dict(self.amplitudes), CIRCULAR)
        out: dict[str, complex] = {}
        rests = set()
        for key, amp in self.amplitudes.items():
            pol, rest = _split(key)
            if pol is None:
                out[key] = amp
            else:
                rests.add(rest)
        for rest in rests:
            cx = self.amplitudes.get(_join(POL_X, rest), 0j)
            cy = self.amplitudes.get(_join(POL_Y, rest), 0j)
            out[_join(POL_P, rest)] = (cx - 1j * cy) / _SQRT2
            out[_join(POL_M, rest)] = (cx + 1j * cy) / _SQRT2
        return HybridState(out, CIRCULAR)


def branch_weights(qubit: PhotonQubit, couplings: CouplingSet) -> tuple[complex, complex]:
    """Absorption weights (W_K, W_K') of the two trion branches.

    W_K = alpha C + beta D collects the paths exciting the K trion,
    W_K' = alpha conj(D) + beta conj(C) the K' trion; the conjugates
    reflect the time-reversed role of the minor element in the opposite
    valley.
    """
    a, b = qubit.alpha, qubit.beta
    w_k = a * couplings.C + b * couplings.D
    w_kp = a * couplings.D.conjugate() + b * couplings.C.conjugate()
    return w_k, w_kp


def forward_sequence(qubit: PhotonQubit, couplings: CouplingSet) -> dict[str, HybridState]:
    """Run the lossless protocol and return its stages in order.

    Stages:

    * ``input``: photon qubit times the valley-singlet pair.
    * ``trion``: after absorption, one trion branch per valley weight.
    * ``emission``: after re-emission into the in-plane cavity; the photon
      polarization is now entangled with the valley pair.
    * ``project_x`` / ``project_y``: unnormalized valley states heralded by
      detecting the emitted photon in sigma_x or sigma_y.
    """
    a, b = qubit.alpha, qubit.beta
    A, B = couplings.A, couplings.B
    w_k, w_kp = branch_weights(qubit, couplings)

    s = 1.0 / _SQRT2
    stages: dict[str, HybridState] = {}
    stages["input"] = HybridState({
        _join(POL_P, VALLEY_KKP): s * a,
        _join(POL_M, VALLEY_KKP): s * b,
        _join(POL_P, VALLEY_KPK): -s * a,
        _join(POL_M, VALLEY_KPK): -s * b,
    })
    stages["trion"] = HybridState({
        TRION_KP: -s * w_kp,
        TRION_K: -s * w_k,
    })
    stages["emission"] = HybridState({
        _join(POL_P, VALLEY_KKP): s * w_kp * B,
        _join(POL_M, VALLEY_KKP): s * w_kp * A,
        _join(POL_P, VALLEY_KPK): -s * w_k * A.conjugate(),
        _join(POL_M, VALLEY_KPK): -s * w_k * B.conjugate(),
    })
    stages["project_x"] = HybridState({
        VALLEY_KKP: 0.5 * w_kp * (A + B),
        VALLEY_KPK: -0.5 * w_k * (A.conjugate() + B.conjugate()),
    })
    stages["project_y"] = HybridState({
        VALLEY_KKP: 0.5j * w_kp * (B - A),
        VALLEY_KPK: -0.5j * w_k * (A.conjugate() - B.conjugate()),
    })
    return stages


def reverse_sequence(qubit: PhotonQubit) -> dict[str, HybridState]:
    """Photon states read out from an encoded valley pair.

    Running the protocol backwards on a valley pair that encodes
    ``(alpha, beta)`` produces one photon state per spin sector of the
    pair: the singlet yields the original qubit, the triplet-zero flips
    the sign of the sigma+ component.
    """
    a, b = qubit.alpha, qubit.beta
    return {
        "singlet": HybridState({POL_P: a, POL_M: b}),
        "triplet0": HybridState({POL_P: -a, POL_M: b}),
    }


def ideal_reference(qubit: PhotonQubit) -> HybridState:
    """Target state of a perfect transfer, for fidelity comparisons.

    The emitted photon carries the flipped polarization while the valley
    pair stores the qubit: ``beta |sigma-,K_L K'_R> - alpha |sigma+,K'_L K_R>``.
    """
    return HybridState({
        _join(POL_M, VALLEY_KKP): qubit.beta,
        _join(POL_P, VALLEY_KPK): -qubit.alpha,
    })


def lossless_fidelity(qubit: PhotonQubit, couplings: CouplingSet) -> float:
    """Overlap of the emission stage with the perfect-transfer target.

    Equals 1 exactly when the minor elements vanish, independent of the
    qubit; B and D only ever reduce it.
    """
    target = ideal_reference(qubit)
    emitted = forward_sequence(qubit, couplings)["emission"]
    denom = emitted.norm() ** 2
    if denom == 0.0:
        raise NumericalError("no transferred population")
    return abs(target.overlap(emitted)) ** 2 / denom
