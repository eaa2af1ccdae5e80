"""Flat ``key = value`` configuration files.

One parameter per line, ``#`` starts a comment, unknown and duplicate
keys are rejected with their line number. A file may pull in fragments
with ``include = relative/path``; keys written in the including file win
over included ones, so fragments act as overridable presets.

Angles are given in units of pi (``phi_DC = 0.5`` means a quarter turn)
so preset files stay exact in decimal text.
"""

from __future__ import annotations

import math
import cmath
import os
from dataclasses import dataclass, replace

from .errors import ConfigError, ParameterError
from .matrix_elements import (
    DEFAULT_DBR_MODE,
    DEFAULT_GEOMETRY,
    DEFAULT_PC_MODE,
    CavityMode,
    QdGeometry,
)
from .model import (
    CavityParams,
    CouplingSet,
    PhotonQubit,
    PulseParams,
    SystemParams,
    TrionParams,
)
from .sweep import DEFAULT_POINT, SweepAxis, SweepSpec
from .timedomain import IntegratorConfig

_FLOAT = "float"
_INT = "int"
_STR = "str"

#: key -> (type, default). ``None`` defaults mean "derived elsewhere".
SCHEMA: dict[str, tuple[str, object]] = {
    # input photon qubit (beta as magnitude + phase in units of pi)
    "alpha": (_FLOAT, 1.0),
    "beta": (_FLOAT, 0.0),
    "phi_beta": (_FLOAT, 0.0),
    # couplings: majors real, minors via shared ratio and phase
    "A": (_FLOAT, 45.0),
    "C": (_FLOAT, 30.0),
    "ratio_BA": (_FLOAT, 0.04),
    "phi_DC": (_FLOAT, 0.0),
    # cavities, trion, input packet
    "omega_DC": (_FLOAT, 1.6e5),
    "kappa_DC": (_FLOAT, 90.0),
    "omega_PC": (_FLOAT, 1.6e5),
    "Gamma_PC": (_FLOAT, 200.0),
    "omega_trion": (_FLOAT, 1.6e5),
    "gamma_SE": (_FLOAT, 1.0),
    "omega_ph": (_FLOAT, 1.6e5),
    "delta_omega_ph": (_FLOAT, 5.0),
    "x0": (_FLOAT, None),
    "c": (_FLOAT, 0.299792458),
    "L": (_FLOAT, 1.0),
    # time-domain solver controls
    "rel_tol": (_FLOAT, 1e-10),
    "abs_tol": (_FLOAT, 1e-14),
    "t_end": (_FLOAT, None),
    "dt_max": (_FLOAT, None),
    "omega_points": (_INT, 2001),
    "omega_halfwidth": (_FLOAT, 10.0),
    # quantum-dot geometry and cavity modes for the coupling estimates
    "edge_length": (_FLOAT, DEFAULT_GEOMETRY.edge_length),
    "gap_parameter": (_FLOAT, DEFAULT_GEOMETRY.gap_parameter),
    "fermi_velocity": (_FLOAT, DEFAULT_GEOMETRY.fermi_velocity),
    "dbr_volume": (_FLOAT, DEFAULT_DBR_MODE.mode_volume),
    "dbr_index": (_FLOAT, DEFAULT_DBR_MODE.refractive_index),
    "pc_volume": (_FLOAT, DEFAULT_PC_MODE.mode_volume),
    "pc_index": (_FLOAT, DEFAULT_PC_MODE.refractive_index),
    # sweep axes (all-or-nothing) and dimensionless fixed values
    "axis1_name": (_STR, None),
    "axis1_min": (_FLOAT, None),
    "axis1_max": (_FLOAT, None),
    "axis1_points": (_INT, None),
    "axis1_scale": (_STR, "linear"),
    "axis2_name": (_STR, None),
    "axis2_min": (_FLOAT, None),
    "axis2_max": (_FLOAT, None),
    "axis2_points": (_INT, None),
    "axis2_scale": (_STR, "linear"),
    "quantity": (_STR, None),
    "gamma_SE_prime": (_FLOAT, None),
    "gamma_iD_prime": (_FLOAT, None),
    "delta_omega_prime": (_FLOAT, None),
    "ratio_beta": (_FLOAT, None),
}

_AXIS_KEYS = ("name", "min", "max", "points")


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI command may need, fully validated."""

    params: SystemParams
    integrator: IntegratorConfig
    geometry: QdGeometry
    dbr_mode: CavityMode
    pc_mode: CavityMode
    sweep_spec: SweepSpec | None
    explicit: frozenset


def _convert(key: str, text: str, lineno, source: str):
    kind = SCHEMA[key][0]
    try:
        if kind == _FLOAT:
            return float(text)
        if kind == _INT:
            return int(text)
        return text
    except ValueError:
        raise ConfigError(
            f"{source}:{lineno}: invalid {kind} for {key!r}: {text!r}"
        ) from None


def _parse_text(text: str, source: str, base_dir: str,
                visited: frozenset) -> dict:
    own: dict[str, object] = {}
    included: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', "
                              f"got {line!r}")
        if key == "include":
            target = os.path.normpath(os.path.join(base_dir, value))
            included.update(_parse_file(target, visited))
            continue
        if key not in SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in own:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        own[key] = _convert(key, value, lineno, source)
    return {**included, **own}


def _parse_file(path, visited: frozenset) -> dict:
    path = os.path.abspath(path)
    if path in visited:
        raise ConfigError(f"include cycle at {path}")
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return _parse_text(text, path, os.path.dirname(path),
                       visited | {path})


def _build(values: dict) -> RunConfig:
    def get(key):
        return values.get(key, SCHEMA[key][1])

    try:
        beta = get("beta") * cmath.exp(1j * math.pi * get("phi_beta"))
        qubit = PhotonQubit(alpha=get("alpha"), beta=beta)
        minor = get("ratio_BA") * cmath.exp(1j * math.pi * get("phi_DC"))
        couplings = CouplingSet(A=get("A"), B=get("A") * minor,
                                C=get("C"), D=get("C") * minor)
        params = SystemParams(
            qubit=qubit,
            couplings=couplings,
            dbr=CavityParams(omega=get("omega_DC"), leak=get("kappa_DC")),
            pc=CavityParams(omega=get("omega_PC"), leak=get("Gamma_PC")),
            trion=TrionParams(omega=get("omega_trion"),
                              gamma_SE=get("gamma_SE")),
            pulse=PulseParams(omega_ph=get("omega_ph"),
                              delta_omega=get("delta_omega_ph"),
                              x0=get("x0"), c=get("c"), L=get("L")),
        )
        integrator = IntegratorConfig(
            t_end=get("t_end"), dt_max=get("dt_max"),
            rel_tol=get("rel_tol"), abs_tol=get("abs_tol"),
            omega_points=get("omega_points"),
            omega_halfwidth=get("omega_halfwidth"),
        )
        geometry = QdGeometry(edge_length=get("edge_length"),
                              gap_parameter=get("gap_parameter"),
                              fermi_velocity=get("fermi_velocity"))
        dbr_mode = CavityMode(mode_volume=get("dbr_volume"),
                              refractive_index=get("dbr_index"),
                              omega=get("omega_DC"))
        pc_mode = CavityMode(mode_volume=get("pc_volume"),
                             refractive_index=get("pc_index"),
                             omega=get("omega_PC"))
        sweep_spec = _build_sweep(values)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(params=params, integrator=integrator, geometry=geometry,
                     dbr_mode=dbr_mode, pc_mode=pc_mode,
                     sweep_spec=sweep_spec, explicit=frozenset(values))


def _build_sweep(values: dict) -> SweepSpec | None:
    axis_keys = [f"axis{n}_{part}" for n in (1, 2) for part in _AXIS_KEYS]
    present = [k for k in axis_keys if k in values]
    if not present:
        return None
    missing = [k for k in axis_keys if k not in values]
    if missing:
        raise ConfigError(
            f"incomplete sweep spec: missing {', '.join(missing)}")
    if "quantity" not in values:
        raise ConfigError("incomplete sweep spec: missing quantity")

    def axis(n: int) -> SweepAxis:
        return SweepAxis(
            name=values[f"axis{n}_name"],
            min=values[f"axis{n}_min"],
            max=values[f"axis{n}_max"],
            points=values[f"axis{n}_points"],
            scale=values.get(f"axis{n}_scale", "linear"),
        )

    a1, a2 = axis(1), axis(2)
    fixed = {k: values[k] for k in DEFAULT_POINT
             if k in values and k not in (a1.name, a2.name)}
    return SweepSpec(axis1=a1, axis2=a2, quantity=values["quantity"],
                     fixed=fixed)


def parse_config(path) -> RunConfig:
    """Parse and validate a config file; defaults fill unset keys."""
    return _build(_parse_file(path, frozenset()))


def loads(text: str, base_dir: str = ".") -> RunConfig:
    """Parse config text directly (includes resolve against base_dir)."""
    return _build(_parse_text(text, "<config>", base_dir, frozenset()))


def apply_overrides(cfg_values: dict, pairs) -> dict:
    """Merge ``KEY=VALUE`` strings (CLI overrides) into parsed values."""
    merged = dict(cfg_values)
    for item in pairs:
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"override {item!r}: expected KEY=VALUE")
        if key not in SCHEMA:
            raise ConfigError(f"override {item!r}: unknown key {key!r}")
        merged[key] = _convert(key, value, "override", key)
    return merged


def load(path=None, overrides=()) -> RunConfig:
    """File (optional) plus overrides, as the CLI consumes them."""
    values = _parse_file(path, frozenset()) if path else {}
    if overrides:
        values = apply_overrides(values, overrides)
    return _build(values)


__all__ = [
    "RunConfig",
    "SCHEMA",
    "apply_overrides",
    "load",
    "loads",
    "parse_config",
]
