"""Riemann zeta evaluation through an integral-series continuation.

Engines, zero characterization, critical-line zero search and numerical
checks of several RH-equivalent criteria. The dispatcher is
``critline.zeta.zeta``; ``evaluate`` also accepts an engine name.
"""
from .errors import CritlineError
from .numerics import RegionLabel, classify_region, gamma, integrate_01, log_gamma
from .zeta import Engine, EvalResult, PrecisionParams, evaluate

__version__ = "0.1.0"

__all__ = [
    "CritlineError",
    "Engine",
    "EvalResult",
    "PrecisionParams",
    "RegionLabel",
    "classify_region",
    "evaluate",
    "gamma",
    "integrate_01",
    "log_gamma",
]
