"""Fractional extreme distributions: special functions, double Gamma kernels,
distribution laws, Monte Carlo samplers and a fractional hazard-rate solver."""

from . import barnes, dist, errors, fracsolve, mc, specfun
from .errors import (DomainError, EnvelopeViolated, FracxError, MissingTail, NonConvergent,
                     NotARandomVariable, QuadratureFailure, RecursionCap)
from .specfun import EvalConfig, EvalResult, KSParams, kilbas_saigo, le_roy, mittag_leffler

__version__ = "0.1.0"

__all__ = ["barnes", "dist", "errors", "fracsolve", "mc", "specfun", "EvalConfig", "EvalResult",
           "KSParams", "kilbas_saigo", "le_roy", "mittag_leffler", "FracxError", "DomainError",
           "NonConvergent", "QuadratureFailure", "NotARandomVariable", "MissingTail",
           "EnvelopeViolated", "RecursionCap"]
