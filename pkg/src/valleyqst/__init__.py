"""Photon-to-valley-qubit state transfer in a double-cavity design.

The package computes, for a single photon entering a vertical DBR cavity
and leaving through an in-plane photonic-crystal cavity:

* closed-form amplitudes and exit spectra (:mod:`valleyqst.analytic`),
* transfer yield and fidelity (:mod:`valleyqst.metrics`),
* an independent brute-force time-domain integrator
  (:mod:`valleyqst.timedomain`),
* the lossless protocol pipeline (:mod:`valleyqst.ideal`),
* coupling-strength estimates from geometry
  (:mod:`valleyqst.matrix_elements`),
* reproducible parameter sweeps (:mod:`valleyqst.sweep`) and a CLI
  (``valleyqst``).
"""

from .errors import ConfigError, NumericalError, ParameterError
from .model import (
    CASE_1,
    CASE_2,
    OUTSIDE,
    CavityParams,
    CouplingSet,
    DerivedRates,
    PhotonQubit,
    PulseParams,
    SystemParams,
    TrionParams,
    baseline,
    classify_regime,
    derive_rates,
)

__version__ = "0.1.0"

__all__ = [
    "CASE_1",
    "CASE_2",
    "OUTSIDE",
    "CavityParams",
    "ConfigError",
    "CouplingSet",
    "DerivedRates",
    "NumericalError",
    "ParameterError",
    "PhotonQubit",
    "PulseParams",
    "SystemParams",
    "TrionParams",
    "__version__",
    "baseline",
    "classify_regime",
    "derive_rates",
]
