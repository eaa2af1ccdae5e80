"""Two-axis parameter grids over the dimensionless transfer parameters.

Sweeps run in the reduced parameter space (primed rates, coupling ratio
and phase, qubit ratio and phase) and are bound to physical rates by a
fixed rule: the in-plane major coupling, both cavity leaks, and all
resonance frequencies stay at their reference values, while C, gamma_SE
and the packet width are scaled by gamma_tp. This keeps the regime
classification meaningful across the whole grid.

Angles are expressed in units of pi throughout this module so that grid
bounds like a half turn stay exact in text form.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ParameterError
from .metrics import fidelity, transfer_yield
from .model import (
    CavityParams,
    CouplingSet,
    PhotonQubit,
    PulseParams,
    SystemParams,
    TrionParams,
    baseline,
)

#: Physical anchors of the binding rule (GHz, angular).
BINDING_A = 45.0
BINDING_GAMMA_PC = 200.0
BINDING_KAPPA_DC = 90.0
BINDING_OMEGA = 1.6e5
BINDING_GAMMA_TP = BINDING_A * BINDING_A / BINDING_GAMMA_PC

#: Sweepable dimensionless parameters and their reference-point values.
DEFAULT_POINT = {
    "gamma_SE_prime": 1.0 / BINDING_GAMMA_TP,
    "gamma_iD_prime": 10.0 / BINDING_GAMMA_TP,
    "delta_omega_prime": 5.0 / BINDING_GAMMA_TP,
    "ratio_BA": 0.04,
    "phi_DC": 0.0,
    "ratio_beta": 0.0,
    "phi_beta": 0.0,
}

QUANTITIES = ("yield", "fidelity")


@dataclass(frozen=True)
class SweepAxis:
    """One grid axis: a named parameter scanned over ``points`` values."""

    name: str
    min: float
    max: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in DEFAULT_POINT:
            raise ParameterError(
                f"unknown sweep axis {self.name!r}; "
                f"choose from {sorted(DEFAULT_POINT)}")
        if self.points < 2:
            raise ParameterError(f"axis {self.name}: points must be >= 2")
        if self.scale not in ("linear", "log"):
            raise ParameterError(
                f"axis {self.name}: scale must be 'linear' or 'log'")
        if not (self.min < self.max):
            raise ParameterError(f"axis {self.name}: min must be < max")
        if self.scale == "log" and self.min <= 0:
            raise ParameterError(
                f"axis {self.name}: log scale needs positive bounds")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SweepSpec:
    """Full description of a grid run: two axes, bindings, and quantity."""

    axis1: SweepAxis
    axis2: SweepAxis
    quantity: str
    fixed: dict = field(default_factory=dict)
    preset_id: str | None = None

    def __post_init__(self):
        if self.axis1.name == self.axis2.name:
            raise ParameterError("sweep axes must be distinct parameters")
        if self.quantity not in QUANTITIES:
            raise ParameterError(
                f"unknown sweep quantity {self.quantity!r}; "
                f"choose from {QUANTITIES}")
        for key in self.fixed:
            if key not in DEFAULT_POINT:
                raise ParameterError(f"unknown fixed sweep parameter {key!r}")
            if key in (self.axis1.name, self.axis2.name):
                raise ParameterError(
                    f"parameter {key!r} is both swept and fixed")


@dataclass(frozen=True)
class SweepResult:
    """Evaluated grid with provenance.

    ``values[i, j]`` is the quantity at ``axis1_values[i]``,
    ``axis2_values[j]`` (row-major over axis1).
    """

    spec: SweepSpec
    axis1_values: np.ndarray
    axis2_values: np.ndarray
    values: np.ndarray
    version: str = __version__


@dataclass(frozen=True)
class Optimum:
    """Argmax cell, with the dimensionless point and its physical binding."""

    index: tuple[int, int]
    axis1_value: float
    axis2_value: float
    value: float
    point: dict
    params: SystemParams


def bind_point(point: dict) -> SystemParams:
    """Convert a dimensionless parameter point into physical parameters.

    The anchors (A, cavity leaks, resonances) are fixed; C, gamma_SE and
    the packet width scale with gamma_tp, and the minor couplings share
    their ratio and phase with the majors. Angles are in units of pi.
    """
    gd = dict(DEFAULT_POINT)
    gd.update(point)
    c_major = math.sqrt(gd["gamma_iD_prime"] * BINDING_GAMMA_TP
                        * BINDING_KAPPA_DC)
    minor = gd["ratio_BA"] * cmath.exp(1j * math.pi * gd["phi_DC"])
    couplings = CouplingSet(
        A=BINDING_A, B=BINDING_A * minor,
        C=c_major, D=c_major * minor,
    )
    beta = gd["ratio_beta"] * cmath.exp(1j * math.pi * gd["phi_beta"])
    ref = baseline()
    return SystemParams(
        qubit=PhotonQubit(alpha=1.0, beta=beta),
        couplings=couplings,
        dbr=CavityParams(omega=BINDING_OMEGA, leak=BINDING_KAPPA_DC),
        pc=CavityParams(omega=BINDING_OMEGA, leak=BINDING_GAMMA_PC),
        trion=TrionParams(omega=BINDING_OMEGA,
                          gamma_SE=gd["gamma_SE_prime"] * BINDING_GAMMA_TP),
        pulse=PulseParams(
            omega_ph=BINDING_OMEGA,
            delta_omega=gd["delta_omega_prime"] * BINDING_GAMMA_TP,
            c=ref.pulse.c, L=ref.pulse.L),
    )


def _evaluate(quantity: str, point: dict) -> float:
    params = bind_point(point)
    if quantity == "yield":
        return transfer_yield(params).probability
    return fidelity(params.qubit, params.couplings)


def run_grid(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate the grid cell by cell.

    Rows are independent and may run on a thread pool; results are
    gathered by index, so the output is identical for any thread count.
    A failing cell aborts the whole run with its coordinates attached.
    """
    a1 = spec.axis1.values()
    a2 = spec.axis2.values()

    def eval_row(i: int) -> np.ndarray:
        row = np.empty(a2.shape[0])
        for j, v2 in enumerate(a2):
            point = dict(spec.fixed)
            point[spec.axis1.name] = float(a1[i])
            point[spec.axis2.name] = float(v2)
            try:
                row[j] = _evaluate(spec.quantity, point)
            except Exception as exc:
                raise type(exc)(
                    f"sweep cell ({i}, {j}) "
                    f"[{spec.axis1.name}={a1[i]:.6g}, "
                    f"{spec.axis2.name}={v2:.6g}] failed: {exc}") from exc
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(eval_row, range(a1.shape[0])))
    else:
        rows = [eval_row(i) for i in range(a1.shape[0])]
    values = np.vstack(rows)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise ParameterError(
            f"sweep cell ({bad[0]}, {bad[1]}) produced a non-finite value")
    return SweepResult(spec=spec, axis1_values=a1, axis2_values=a2,
                       values=values)


def find_optimum(result: SweepResult) -> Optimum:
    """Largest cell; ties resolve to the smallest row-major index."""
    flat = int(np.argmax(result.values))
    i, j = divmod(flat, result.values.shape[1])
    point = dict(DEFAULT_POINT)
    point.update(result.spec.fixed)
    point[result.spec.axis1.name] = float(result.axis1_values[i])
    point[result.spec.axis2.name] = float(result.axis2_values[j])
    return Optimum(
        index=(i, j),
        axis1_value=float(result.axis1_values[i]),
        axis2_value=float(result.axis2_values[j]),
        value=float(result.values[i, j]),
        point=point,
        params=bind_point(point),
    )


_RATE_AXIS = {"min": 1e-2, "max": 1e2, "points": 81, "scale": "log"}
_WIDTH_AXIS = {"min": 1e-1, "max": 1e1, "points": 61, "scale": "log"}
_RATIO_AXIS = {"min": 0.0, "max": 0.5, "points": 51, "scale": "linear"}
_PHASE_AXIS = {"min": 0.0, "max": 2.0, "points": 81, "scale": "linear"}
_BETA_AXIS = {"min": 0.0, "max": 1.0, "points": 51, "scale": "linear"}

_PRESETS: dict[str, dict] = {
    # Yield over the spontaneous-emission and DBR-feed rates at two
    # packet widths (narrow enough for capture, and clearly too wide).
    "fig5a": dict(axis1=("gamma_SE_prime", _RATE_AXIS),
                  axis2=("gamma_iD_prime", _RATE_AXIS),
                  fixed={"delta_omega_prime": 0.5}, quantity="yield"),
    "fig5b": dict(axis1=("gamma_SE_prime", _RATE_AXIS),
                  axis2=("gamma_iD_prime", _RATE_AXIS),
                  fixed={"delta_omega_prime": 5.0}, quantity="yield"),
    # Yield over width and DBR feed at fixed spontaneous emission.
    "fig6a": dict(axis1=("delta_omega_prime", _WIDTH_AXIS),
                  axis2=("gamma_iD_prime", _RATE_AXIS),
                  fixed={"gamma_SE_prime": 0.1}, quantity="yield"),
    "fig6b": dict(axis1=("delta_omega_prime", _WIDTH_AXIS),
                  axis2=("gamma_iD_prime", _RATE_AXIS),
                  fixed={"gamma_SE_prime": 1.0}, quantity="yield"),
    # Yield over spontaneous emission and width at fixed DBR feed.
    "fig7a": dict(axis1=("gamma_SE_prime", _RATE_AXIS),
                  axis2=("delta_omega_prime", _WIDTH_AXIS),
                  fixed={"gamma_iD_prime": 0.1}, quantity="yield"),
    "fig7b": dict(axis1=("gamma_SE_prime", _RATE_AXIS),
                  axis2=("delta_omega_prime", _WIDTH_AXIS),
                  fixed={"gamma_iD_prime": 1.0}, quantity="yield"),
    "fig7c": dict(axis1=("gamma_SE_prime", _RATE_AXIS),
                  axis2=("delta_omega_prime", _WIDTH_AXIS),
                  fixed={"gamma_iD_prime": 10.0}, quantity="yield"),
    # Fidelity over coupling ratio and phase for three input qubits.
    "fig8a": dict(axis1=("ratio_BA", _RATIO_AXIS),
                  axis2=("phi_DC", _PHASE_AXIS),
                  fixed={"ratio_beta": 0.0, "phi_beta": 0.0},
                  quantity="fidelity"),
    "fig8b": dict(axis1=("ratio_BA", _RATIO_AXIS),
                  axis2=("phi_DC", _PHASE_AXIS),
                  fixed={"ratio_beta": 1.0, "phi_beta": 0.0},
                  quantity="fidelity"),
    "fig8c": dict(axis1=("ratio_BA", _RATIO_AXIS),
                  axis2=("phi_DC", _PHASE_AXIS),
                  fixed={"ratio_beta": 1.0, "phi_beta": 0.5},
                  quantity="fidelity"),
    # Fidelity over the input qubit for six coupling configurations.
    "fig9a": dict(axis1=("ratio_beta", _BETA_AXIS),
                  axis2=("phi_beta", _PHASE_AXIS),
                  fixed={"ratio_BA": 0.04, "phi_DC": 0.0},
                  quantity="fidelity"),
    "fig9b": dict(axis1=("ratio_beta", _BETA_AXIS),
                  axis2=("phi_beta", _PHASE_AXIS),
                  fixed={"ratio_BA": 0.04, "phi_DC": 0.25},
                  quantity="fidelity"),
    "fig9c": dict(axis1=("ratio_beta", _BETA_AXIS),
                  axis2=("phi_beta", _PHASE_AXIS),
                  fixed={"ratio_BA": 0.04, "phi_DC": 0.5},
                  quantity="fidelity"),
    "fig9d": dict(axis1=("ratio_beta", _BETA_AXIS),
                  axis2=("phi_beta", _PHASE_AXIS),
                  fixed={"ratio_BA": 0.4, "phi_DC": 0.0},
                  quantity="fidelity"),
    "fig9e": dict(axis1=("ratio_beta", _BETA_AXIS),
                  axis2=("phi_beta", _PHASE_AXIS),
                  fixed={"ratio_BA": 0.4, "phi_DC": 0.25},
                  quantity="fidelity"),
    "fig9f": dict(axis1=("ratio_beta", _BETA_AXIS),
                  axis2=("phi_beta", _PHASE_AXIS),
                  fixed={"ratio_BA": 0.4, "phi_DC": 0.5},
                  quantity="fidelity"),
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name: str) -> SweepSpec:
    """Canonical grid for one of the reference figures."""
    try:
        entry = _PRESETS[name]
    except KeyError:
        raise ParameterError(
            f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}"
        ) from None
    (n1, kw1), (n2, kw2) = entry["axis1"], entry["axis2"]
    return SweepSpec(
        axis1=SweepAxis(name=n1, **kw1),
        axis2=SweepAxis(name=n2, **kw2),
        quantity=entry["quantity"],
        fixed=dict(entry["fixed"]),
        preset_id=name,
    )


def _fmt(x: float) -> str:
    return "%.12g" % x


def write_csv(result: SweepResult, path) -> None:
    """Write the grid as RFC-4180 CSV: axis1, axis2, value per row."""
    lines = [f"{result.spec.axis1.name},{result.spec.axis2.name},value"]
    for i, v1 in enumerate(result.axis1_values):
        for j, v2 in enumerate(result.axis2_values):
            lines.append(
                f"{_fmt(v1)},{_fmt(v2)},{_fmt(result.values[i, j])}")
    with open(path, "w", newline="") as fh:
        fh.write("\r\n".join(lines) + "\r\n")


def _json_value(value) -> str:
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    if isinstance(value, dict):
        items = (f'"{k}": {_json_value(value[k])}' for k in sorted(value))
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dump_json(obj: dict, indent: int = 0) -> str:
    """Deterministic JSON with sorted keys and 12-digit floats."""
    if indent <= 0:
        return _json_value(obj)
    pad = " " * indent
    items = (f'{pad}"{k}": {_json_value(obj[k])}' for k in sorted(obj))
    return "{\n" + ",\n".join(items) + "\n}"


def meta_record(result: SweepResult) -> dict:
    opt = find_optimum(result)
    axes = {}
    for label, axis in (("axis1", result.spec.axis1),
                        ("axis2", result.spec.axis2)):
        axes[label] = {"name": axis.name, "min": axis.min, "max": axis.max,
                       "points": axis.points, "scale": axis.scale}
    params = opt.params
    return {
        "preset": result.spec.preset_id,
        "quantity": result.spec.quantity,
        **axes,
        "fixed": {k: float(v) for k, v in sorted(result.spec.fixed.items())},
        "binding": {
            "A": BINDING_A,
            "Gamma_PC": BINDING_GAMMA_PC,
            "kappa_DC": BINDING_KAPPA_DC,
            "omega": BINDING_OMEGA,
            "gamma_tp": BINDING_GAMMA_TP,
            "rule": ("C = sqrt(gamma_iD_prime*gamma_tp*kappa_DC); "
                     "gamma_SE = gamma_SE_prime*gamma_tp; "
                     "delta_omega_ph = delta_omega_prime*gamma_tp; "
                     "B/A = D/C = ratio_BA * exp(i*pi*phi_DC); "
                     "angles in units of pi"),
        },
        "argmax": {
            "index": list(opt.index),
            result.spec.axis1.name: opt.axis1_value,
            result.spec.axis2.name: opt.axis2_value,
            "value": opt.value,
            "physical": {
                "C": abs(params.couplings.C),
                "ratio_BA": (abs(params.couplings.B / params.couplings.A)
                             if params.couplings.A else 0.0),
                "gamma_SE": params.trion.gamma_SE,
                "delta_omega_ph": params.pulse.delta_omega,
                "alpha": abs(params.qubit.alpha),
                "beta_abs": abs(params.qubit.beta),
            },
        },
        "version": result.version,
    }


def write_meta(result: SweepResult, path) -> None:
    """Companion metadata: spec, binding rule, argmax, code version."""
    with open(path, "w", newline="") as fh:
        fh.write(dump_json(meta_record(result), indent=2) + "\n")


__all__ = [
    "BINDING_A",
    "BINDING_GAMMA_PC",
    "BINDING_GAMMA_TP",
    "BINDING_KAPPA_DC",
    "BINDING_OMEGA",
    "DEFAULT_POINT",
    "Optimum",
    "PRESET_NAMES",
    "SweepAxis",
    "SweepResult",
    "SweepSpec",
    "bind_point",
    "dump_json",
    "find_optimum",
    "meta_record",
    "preset",
    "run_grid",
    "write_csv",
    "write_meta",
]
