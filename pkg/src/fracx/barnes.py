"""Barnes double Gamma function G(z; delta) for real z > 0, the Pochhammer
symbols [a; delta]_s = G(a+s; delta) / G(a; delta), and Mellin transforms
built from them.

log G is computed from the Malmsten representation

    log G(z; d) = int_0^inf ( (1-e^{-zx}) / ((1-e^{-x})(1-e^{-dx}))
                              - z e^{-dx} / (1-e^{-dx})
                              + (z-1)(z/(2d) - 1) e^{-dx} - 1 ) dx / x.

The bracket cancels to O(x) at the origin.  On [0, 1] the integrand is
analytic with its nearest singularities at 2 pi i / max(1, d), so a
Gauss-Legendre rule evaluated in extended precision converges geometrically
there; the remaining half-line is handled by adaptive Gauss-Kronrod in double
precision, where the cancellation is mild.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import mpmath
from scipy import integrate
from scipy.special import gammaln

from .errors import DomainError, NotARandomVariable, QuadratureFailure

_SPLIT = 1.0
_GL_NODES = (24, 36)


@dataclass(frozen=True)
class PochhammerContext:
    """Double Gamma state: the parameter ``delta`` and the quadrature tolerance."""

    delta: float
    quad_tol: float = 1e-12

    def __post_init__(self):
        if not (self.delta > 0) or not math.isfinite(self.delta):
            raise DomainError(f"delta={self.delta} must be positive and finite")
        if not (0 < self.quad_tol < 1):
            raise DomainError("quad_tol must lie in (0, 1)")


@dataclass(frozen=True)
class MellinKernelParams:
    """Parameters of one Mellin kernel.

    ``T_abc`` uses a, b, c; ``Z_four`` uses a, b, c, d together with the
    context's delta; ``Y_ksl`` uses ``ks`` (a :class:`fracx.specfun.KSParams`).
    """

    variant: str
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    ks: Optional[object] = None

    def __post_init__(self):
        if self.variant not in ("T_abc", "Y_ksl", "Z_four"):
            raise DomainError(f"unknown kernel variant {self.variant!r}")
        if self.variant == "T_abc" and not (self.a > 0 and self.b > 0 and self.c > 0):
            raise DomainError("T_abc needs a, b, c > 0")
        if self.variant == "Z_four" and not all(v > 0 for v in (self.a, self.b, self.c, self.d)):
            raise DomainError("Z_four needs a, b, c, d > 0")
        if self.variant == "Y_ksl" and self.ks is None:
            raise DomainError("Y_ksl needs KSParams")


@lru_cache(maxsize=None)
def _gl_rule(n: int, dps: int):
    mp = mpmath.MPContext()
    mp.dps = dps
    # Legendre nodes by Newton iteration on P_n, in extended precision
    nodes, weights = [], []
    for i in range(1, n + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** (-dps + 5):
                break
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


def _head_integral(z: float, delta: float, n: int) -> float:
    mp = mpmath.MPContext()
    mp.dps = 40
    zz, dd = mp.mpf(z), mp.mpf(delta)
    c1 = (zz - 1) * (zz / (2 * dd) - 1)
    half = mp.mpf(_SPLIT) / 2
    nodes, weights = _gl_rule(n, 40)
    total = mp.mpf(0)
    for t, wt in zip(nodes, weights):
        x = half * (t + 1)
        ed = mp.exp(-dd * x)
        br = (-mp.expm1(-zz * x)) / ((-mp.expm1(-x)) * (-mp.expm1(-dd * x))) \
            - zz * ed / (-mp.expm1(-dd * x)) + c1 * ed - 1
        total += wt * br / x
    return float(total * half)


def _tail_integrand(x: float, z: float, delta: float, c1: float) -> float:
    ed = math.exp(-delta * x)
    omd = -math.expm1(-delta * x)
    return ((-math.expm1(-z * x)) / ((-math.expm1(-x)) * omd) - z * ed / omd + c1 * ed - 1.0) / x


@lru_cache(maxsize=4096)
def _log_double_gamma(z: float, delta: float, quad_tol: float) -> float:
    h1 = _head_integral(z, delta, _GL_NODES[0])
    h2 = _head_integral(z, delta, _GL_NODES[1])
    head_err = abs(h2 - h1)
    rate = min(1.0, delta, z)
    x_max = _SPLIT + (math.log(1.0 / quad_tol) + 10.0 + math.log1p(z * z / delta)) / rate
    c1 = (z - 1.0) * (z / (2.0 * delta) - 1.0)
    with warnings.catch_warnings():
        # roundoff warnings at epsrel 1e-14 are expected; the error estimate is checked below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        tail, tail_err = integrate.quad(_tail_integrand, _SPLIT, x_max, args=(z, delta, c1),
                                        epsabs=quad_tol / 10, epsrel=1e-14, limit=400)
    if head_err + tail_err > quad_tol * max(1.0, abs(h2 + tail)):
        raise QuadratureFailure(
            f"log G({z}; {delta}) quadrature error {head_err + tail_err:.3g} above {quad_tol:.3g}")
    return h2 + tail


def log_double_gamma(z: float, ctx: PochhammerContext) -> float:
    """log G(z; delta) for real z > 0.

    Examples
    --------
    >>> log_double_gamma(1.0, PochhammerContext(0.7))
    0.0
    >>> round(log_double_gamma(2.0, PochhammerContext(2.0)), 7)
    0.5723649
    """
    if not (z > 0) or not math.isfinite(z):
        raise DomainError(f"log_double_gamma needs finite z > 0, got {z}")
    if z == 1.0:
        return 0.0
    return _log_double_gamma(float(z), float(ctx.delta), float(ctx.quad_tol))


def log_pochhammer(a: float, s: float, ctx: PochhammerContext) -> float:
    """log [a; delta]_s = log G(a+s; delta) - log G(a; delta), for a > 0, s > -a."""
    if not (a > 0):
        raise DomainError(f"a={a} must be positive")
    if not (s > -a):
        raise DomainError(f"[a; delta]_s needs s > -a (a={a}, s={s})")
    if s == 0:
        return 0.0
    return log_double_gamma(a + s, ctx) - log_double_gamma(a, ctx)


def z_four_exists(a: float, b: float, c: float, d: float) -> bool:
    """Existence condition for the random variable Z[a, c; b, d; delta]."""
    return b + d <= a + c and min(b, d) <= min(a, c)


def log_mellin_kernel(p: MellinKernelParams, s: float, ctx: Optional[PochhammerContext] = None) -> float:
    """Logarithm of :func:`mellin_kernel`."""
    if not math.isfinite(s):
        raise DomainError("s must be finite")
    if p.variant == "T_abc":
        a, b, c = p.a, p.b, p.c
        if not s > -a:
            raise DomainError(f"T_abc Mellin transform needs s > -a = {-a}")
        if s == 0:
            return 0.0
        pc = PochhammerContext(b, ctx.quad_tol if ctx else 1e-12)
        return s * (gammaln(a / b) - gammaln((a + c) / b)) \
            + log_pochhammer(a + c, s, pc) - log_pochhammer(a, s, pc)
    if p.variant == "Y_ksl":
        ks = p.ks
        delta = 1.0 / (ks.alpha * ks.m)
        a0 = (ks.alpha * ks.l + 1.0) * delta
        a1 = 1.0 / ks.m + a0
        if not (s > -1.0 and s > -a0):
            raise DomainError(f"Y_ksl Mellin transform needs s > {-min(1.0, a0)}")
        if s == 0:
            return 0.0
        pc = PochhammerContext(delta, ctx.quad_tol if ctx else 1e-12)
        return float(gammaln(1.0 + s)) + log_pochhammer(a0, s, pc) - log_pochhammer(a1, s, pc)
    a, b, c, d = p.a, p.b, p.c, p.d
    if ctx is None:
        raise DomainError("Z_four needs a PochhammerContext carrying delta")
    if not z_four_exists(a, b, c, d):
        raise NotARandomVariable(
            f"Z[{a},{c};{b},{d}] is not a random variable (needs b+d <= a+c and min(b,d) <= min(a,c))")
    if not s > -min(b, d):
        raise DomainError(f"Z_four Mellin transform needs s > {-min(b, d)}")
    if s == 0:
        return 0.0
    return log_pochhammer(a, s, ctx) + log_pochhammer(c, s, ctx) \
        - log_pochhammer(b, s, ctx) - log_pochhammer(d, s, ctx)


def mellin_kernel(p: MellinKernelParams, s: float, ctx: Optional[PochhammerContext] = None) -> float:
    """E[X^s] for X = T(a,b,c), Y_{alpha,m,l} or Z[a,c;b,d;delta].

    Examples
    --------
    >>> round(mellin_kernel(MellinKernelParams("T_abc", 1.0, 1.0, 1.0), 2.0), 9)
    2.0
    """
    return math.exp(log_mellin_kernel(p, s, ctx))


def x_ksl_params(alpha: float, m: float, l: float) -> tuple[MellinKernelParams, PochhammerContext]:
    """Kernel and context for X_{alpha,m,l} = Z[1+1/m, (alpha l+1) delta; 1, 1/m + (alpha l+1) delta; delta]."""
    delta = 1.0 / (alpha * m)
    a0 = (alpha * l + 1.0) * delta
    return (MellinKernelParams("Z_four", a=1.0 + 1.0 / m, b=1.0, c=a0, d=1.0 / m + a0),
            PochhammerContext(delta))


def stirling_second_difference(z: float, delta: float) -> float:
    """Second difference at z predicted by the Stirling-type expansion,
    i.e. the second derivative of (z^2 log z - (3/2 + log d) z^2 - (1+d) z log z) / (2d)."""
    return (math.log(z) - math.log(delta)) / delta - (1.0 + delta) / (2.0 * delta * z)


def log_double_gamma_at_delta(delta: float) -> float:
    """log G(delta; delta) = log G(1+delta; delta) = (delta-1)/2 log(2 pi) - log(delta)/2."""
    return 0.5 * (delta - 1.0) * math.log(2 * math.pi) - 0.5 * math.log(delta)


__all__ = [
    "PochhammerContext", "MellinKernelParams", "log_double_gamma", "log_pochhammer",
    "mellin_kernel", "log_mellin_kernel", "z_four_exists", "x_ksl_params",
    "stirling_second_difference", "log_double_gamma_at_delta",
]
