"""Fractional Weibull, Frechet and Gumbel distributions.

    fweibull  P[W > x] = E_{a, r/a, r/a - 1}(-lam x^r)        x >= 0
    ffrechet  P[F <= x] = E_{a, r/a, (r-1)/a}(-lam x^-r)      x > 0
    fgumbel   P[G > x] = L_a(-e^{lam x})                      x real

with the closed forms 1/(1 + h) at a = 0 and exp(-h/r) (resp. exp(-e^{lam x}))
at a = 1.  Every value is returned as an :class:`~fracx.specfun.EvalResult`.
Tail probabilities that are close to 1 are computed from the series without
its constant term, so ``1 - sf`` never loses digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
from scipy import optimize
from scipy.special import gammaln

from . import barnes, specfun
from .errors import DomainError, NonConvergent
from .specfun import EvalConfig, EvalResult, KSParams

KINDS = ("fweibull", "ffrechet", "fgumbel")

#: Default accuracy of distribution evaluations.  Looser than the specfun
#: default so that far tails remain reachable through the Abel-equation route.
DIST_CFG = EvalConfig(target_rel_error=1e-10)


@dataclass(frozen=True)
class DistDescriptor:
    """One fractional extreme law.  ``rho`` is ``None`` for fgumbel."""

    kind: str
    alpha: float
    lam: float
    rho: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown distribution kind {self.kind!r}")
        if not (0.0 <= self.alpha <= 1.0):
            raise DomainError(f"alpha={self.alpha} outside [0, 1]")
        if not (self.lam > 0) or not math.isfinite(self.lam):
            raise DomainError(f"lambda={self.lam} must be positive")
        if self.kind == "fgumbel":
            if self.rho is not None:
                raise DomainError("fgumbel takes no rho")
        elif self.rho is None or not (self.rho > 0) or not math.isfinite(self.rho):
            raise DomainError(f"{self.kind} needs rho > 0")

    @property
    def ks(self) -> KSParams:
        a, r = self.alpha, self.rho
        if self.kind == "fweibull":
            return KSParams(a, r / a, r / a - 1.0)
        return KSParams(a, r / a, (r - 1.0) / a)

    def support(self) -> tuple[float, float]:
        if self.kind == "fweibull":
            return 0.0, math.inf
        if self.kind == "ffrechet":
            return 0.0, math.inf
        return -math.inf, math.inf


def make_dist(kind: str, alpha: float, lam: float, rho: Optional[float] = None) -> DistDescriptor:
    """Validated descriptor.

    Examples
    --------
    >>> make_dist("fgumbel", 0.5, 2.0).rho is None
    True
    """
    return DistDescriptor(kind, float(alpha), float(lam), None if rho is None else float(rho))


# ---------------------------------------------------------------------------
# helpers

def _closed(fn: Callable, *args) -> EvalResult:
    """Evaluate a closed form in 113-bit arithmetic."""
    ctx = mpmath.MPContext()
    ctx.prec = 113
    v = fn(ctx, *[ctx.mpf(a) for a in args])
    value = float(v)
    err = abs(v - ctx.mpf(value)) + abs(v) * ctx.ldexp(1, -100)
    return EvalResult(value, math.nextafter(float(err), math.inf), 1, 113, "closed_form")


def _neg(r: EvalResult) -> EvalResult:
    return EvalResult(-r.value, r.abs_error_bound, r.terms_used, r.precision_bits_used, r.method)


def _one_minus(r: EvalResult) -> EvalResult:
    v = 1.0 - r.value
    err = r.abs_error_bound + math.ulp(1.0)
    return EvalResult(v, err, r.terms_used, r.precision_bits_used, r.method)


def _scale(r: EvalResult, c: float) -> EvalResult:
    v = c * r.value
    return EvalResult(v, abs(c) * r.abs_error_bound * (1 + 4e-16) + math.ulp(v),
                      r.terms_used, r.precision_bits_used, r.method)


def _check_x(d: DistDescriptor, x: float, open_support: bool = False):
    if math.isnan(x):
        raise DomainError("x is NaN")
    if d.kind != "fgumbel" and (x < 0 or (open_support and x == 0)):
        raise DomainError(f"x={x} outside the support of {d.kind}")


# ---------------------------------------------------------------------------
# tail probabilities: for each kind the "primary" side is evaluated from the
# full series and the complementary side from the constant-free series

def _primary(d: DistDescriptor, x: float, cfg: EvalConfig, complement: bool) -> EvalResult:
    """fweibull/fgumbel: sf (complement: sf - 1); ffrechet: cdf (complement: cdf - 1)."""
    a, lam = d.alpha, d.lam
    if d.kind == "fgumbel":
        if math.isinf(x):
            v = (0.0 if x > 0 else 1.0) - (1.0 if complement else 0.0)
            return EvalResult(v, 0.0, 0, 53, "exact")
        if a == 0.0:
            if complement:
                return _closed(lambda c, t, l: -1 / (1 + c.exp(-l * t)), x, lam)
            return _closed(lambda c, t, l: 1 / (1 + c.exp(l * t)), x, lam)
        if a == 1.0:
            if complement:
                return _closed(lambda c, t, l: c.expm1(-c.exp(l * t)), x, lam)
            return _closed(lambda c, t, l: c.exp(-c.exp(l * t)), x, lam)
        u = -math.exp(lam * x)
        if complement:
            return specfun.le_roy_complement(a, u, cfg)
        return specfun.le_roy(a, u, cfg)

    r = d.rho
    if d.kind == "fweibull":
        if math.isinf(x):
            h = math.inf
        else:
            h = lam * x ** r
    else:
        h = math.inf if x == 0 else (0.0 if math.isinf(x) else lam * x ** (-r))
    if math.isinf(h) or h == 0.0:
        v = (0.0 if math.isinf(h) else 1.0) - (1.0 if complement else 0.0)
        return EvalResult(v, 0.0, 0, 53, "exact")
    if a == 0.0:
        if complement:
            return _closed(lambda c, hh: -hh / (1 + hh), h)
        return _closed(lambda c, hh: 1 / (1 + hh), h)
    if a == 1.0:
        if complement:
            return _closed(lambda c, hh, rr: c.expm1(-hh / rr), h, r)
        return _closed(lambda c, hh, rr: c.exp(-hh / rr), h, r)
    if complement:
        return specfun.kilbas_saigo_complement(d.ks, -h, cfg)
    return specfun.kilbas_saigo(d.ks, -h, cfg)


def _upper_is_primary(d: DistDescriptor) -> bool:
    return d.kind != "ffrechet"


def _prefer_complement(d: DistDescriptor, x: float) -> bool:
    """True when the primary probability is close to 1 (small series argument)."""
    if d.kind == "fgumbel":
        return x < 0
    if d.kind == "fweibull":
        return d.lam * x ** d.rho < 0.5
    return x > 0 and d.lam * x ** (-d.rho) < 0.5


def _tail(d: DistDescriptor, x: float, cfg: EvalConfig, upper: bool) -> EvalResult:
    want_primary = upper == _upper_is_primary(d)
    if _prefer_complement(d, x):
        c = _primary(d, x, cfg, complement=True)       # primary - 1
        return _one_minus(_neg(c)) if want_primary else _neg(c)
    p = _primary(d, x, cfg, complement=False)
    return p if want_primary else _one_minus(p)


def sf(d: DistDescriptor, x: float, cfg: EvalConfig = DIST_CFG) -> EvalResult:
    """Survival function P[X > x].

    Examples
    --------
    >>> round(sf(make_dist("fweibull", 0, 1, 2), 3.0).value, 12)
    0.1
    """
    _check_x(d, x)
    return _tail(d, x, cfg, upper=True)


def cdf(d: DistDescriptor, x: float, cfg: EvalConfig = DIST_CFG) -> EvalResult:
    """Distribution function P[X <= x]."""
    _check_x(d, x)
    return _tail(d, x, cfg, upper=False)


def pdf(d: DistDescriptor, x: float, cfg: EvalConfig = DIST_CFG) -> EvalResult:
    """Density, from the derivative of the defining series."""
    _check_x(d, x, open_support=d.kind != "fgumbel")
    a, lam = d.alpha, d.lam
    if math.isinf(x):
        return EvalResult(0.0, 0.0, 0, 53, "exact")
    if d.kind == "fgumbel":
        e = math.exp(lam * x)
        if a == 0.0:
            return _closed(lambda c, t, l: l * c.exp(l * t) / (1 + c.exp(l * t)) ** 2, x, lam)
        if a == 1.0:
            return _closed(lambda c, t, l: l * c.exp(l * t - c.exp(l * t)), x, lam)
        return _scale(specfun.le_roy_derivative(a, -e, cfg), lam * e)
    r = d.rho
    if d.kind == "fweibull":
        h = lam * x ** r
        jac = lam * r * x ** (r - 1.0)          # dh/dx, sf = E(-h)
    else:
        h = lam * x ** (-r)
        jac = lam * r * x ** (-r - 1.0)         # -dh/dx, cdf = E(-h)
    if a == 0.0:
        return _closed(lambda c, hh, j: j / (1 + hh) ** 2, h, jac)
    if a == 1.0:
        return _closed(lambda c, hh, j, rr: j / rr * c.exp(-hh / rr), h, jac, r)
    return _scale(specfun.kilbas_saigo_derivative(d.ks, -h, cfg), jac)


def _quantile_guess(d: DistDescriptor, p: float) -> float:
    # the alpha = 0 law, used to seed the bracket
    lam = d.lam
    if d.kind == "fgumbel":
        return math.log(p / (1 - p)) / lam
    if d.kind == "fweibull":
        return (p / (1 - p) / lam) ** (1.0 / d.rho)
    return ((1 - p) / p / lam) ** (-1.0 / d.rho)


def quantile(d: DistDescriptor, p: float, cfg: EvalConfig = DIST_CFG) -> float:
    """Inverse of :func:`cdf` to ``|cdf(x) - p| <= 1e-9``.

    The root is bracketed by geometric expansion around the alpha = 0
    quantile and located with Brent's method.

    Examples
    --------
    >>> quantile(make_dist("fgumbel", 0.0, 1.0), 0.5)
    0.0
    """
    if not (0.0 < p < 1.0):
        raise DomainError("p must lie in (0, 1)")
    if d.kind == "fgumbel" and p == 0.5 and d.alpha == 0.0:
        return 0.0

    def g(x):
        # compare on the side that is small, to keep relative accuracy
        if p > 0.5:
            return (1.0 - p) - sf(d, x, cfg).value
        return cdf(d, x, cfg).value - p

    x0 = _quantile_guess(d, p)
    if d.kind == "fgumbel":
        step = max(1.0, abs(x0))
        lo, hi = x0 - step, x0 + step
        while g(lo) > 0:
            step *= 2
            lo = x0 - step
        while g(hi) < 0:
            step *= 2
            hi = x0 + step
    else:
        lo, hi = x0 / 2, x0 * 2
        while g(lo) > 0:
            lo /= 4
            if lo < 1e-300:
                raise NonConvergent("quantile bracket collapsed to 0")
        while g(hi) < 0:
            hi *= 4
            if hi > 1e300:
                raise NonConvergent("quantile bracket diverged")
    root = optimize.brentq(g, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=200)
    return float(root)


# ---------------------------------------------------------------------------
# Mellin transforms

def mellin_strip(d: DistDescriptor) -> tuple[float, float]:
    """Open interval of s where E[X^s] (E[e^{sX}] for fgumbel) is finite."""
    if d.kind == "fgumbel":
        return -d.lam, (d.lam if d.alpha < 1 else math.inf)
    r, a = d.rho, d.alpha
    if d.kind == "fweibull":
        return -r, (r if a < 1 else math.inf)
    return (-r - a if a > 0 else -r), r


def log_mellin(d: DistDescriptor, s: float, ctx: Optional[barnes.PochhammerContext] = None,
               use_closed_forms: bool = True) -> float:
    """Logarithm of :func:`mellin`."""
    lo, hi = mellin_strip(d)
    if not (lo < s < hi):
        raise DomainError(f"s={s} outside the Mellin strip ({lo}, {hi})")
    if s == 0:
        return 0.0
    a, lam = d.alpha, d.lam
    tol = ctx.quad_tol if ctx is not None else 1e-12
    if d.kind == "fgumbel":
        t = s / lam
        val = gammaln(1 + t)
        if a < 1:
            val += (1 - a) * gammaln(1 - t)
        return float(val)
    r = d.rho
    if d.kind == "fweibull":
        if use_closed_forms and a == 0.0:
            return float(-s / r * math.log(lam) + gammaln(1 + s / r) + gammaln(1 - s / r))
        if use_closed_forms and a == 1.0:
            return float(s / r * math.log(r / lam) + gammaln(1 + s / r))
        pc = barnes.PochhammerContext(r, tol)
        return float(s / r * (a * math.log(r) - math.log(lam)) + gammaln(1 + s / r)
                     + barnes.log_pochhammer(r + 1 - a, -s, pc) - barnes.log_pochhammer(r, -s, pc))
    if use_closed_forms and a == 0.0:
        return float(s / r * math.log(lam) + gammaln(1 + s / r) + gammaln(1 - s / r))
    if use_closed_forms and a == 1.0:
        return float(s / r * math.log(lam / r) + gammaln(1 - s / r))
    pc = barnes.PochhammerContext(r, tol)
    return float(-s / r * (a * math.log(r) - math.log(lam)) + gammaln(1 - s / r)
                 + barnes.log_pochhammer(r + 1, s, pc) - barnes.log_pochhammer(r + a, s, pc))


def mellin(d: DistDescriptor, s: float, ctx: Optional[barnes.PochhammerContext] = None,
           use_closed_forms: bool = True) -> float:
    """E[X^s] for fweibull/ffrechet, the MGF E[e^{sX}] for fgumbel.

    ``use_closed_forms=False`` forces the double-Gamma formula at alpha in
    {0, 1}, which is how the boundary reductions are cross-checked.

    Examples
    --------
    >>> round(mellin(make_dist("fgumbel", 0.5, 1.0), 0.5), 4)
    1.1799
    """
    return math.exp(log_mellin(d, s, ctx, use_closed_forms))


# ---------------------------------------------------------------------------
# asymptotics of the density at the support ends

@dataclass(frozen=True)
class DensityAsymptote:
    """``f(x) ~ constant * |x|**power * exp(-exp_rate * |x|)`` at the given end."""

    end: str
    constant: float
    power: float
    exp_rate: float = 0.0
    log_power: float = 0.0

    def evaluate(self, x: float) -> float:
        ax = abs(x)
        v = self.constant * ax ** self.power * math.exp(-self.exp_rate * ax)
        if self.log_power:
            v *= math.log(ax) ** self.log_power
        return v

    def tail_mass(self, x: float) -> float:
        """Leading term of the probability beyond x (towards this end): the
        integrated density asymptote."""
        ax = abs(x)
        if self.log_power:
            raise DomainError("tail_mass is not implemented for log-corrected asymptotes")
        if self.exp_rate:
            return self.evaluate(x) / self.exp_rate
        p1 = self.power + 1.0
        if (self.end == "upper" and not p1 < 0) or (self.end == "lower" and not p1 > 0):
            raise DomainError("density asymptote is not integrable towards this end")
        return self.constant * ax ** p1 / abs(p1)


def support_asymptote(d: DistDescriptor, end: str) -> DensityAsymptote:
    """Leading behaviour of the density at the lower or upper support end.

    Examples
    --------
    >>> a = support_asymptote(make_dist("fweibull", 0.5, 1, 1), "upper")
    >>> round(a.constant, 7), a.power
    (0.5641896, -2.0)
    """
    if end not in ("lower", "upper"):
        raise DomainError("end must be 'lower' or 'upper'")
    a, lam = d.alpha, d.lam
    if not (0.0 < a < 1.0):
        raise DomainError("support asymptotes are for alpha in (0, 1); use the closed forms")
    if d.kind == "fgumbel":
        if end == "upper":
            return DensityAsymptote(end, lam ** (1 - a) / math.gamma(1 - a), -a, lam)
        return DensityAsymptote(end, lam, 0.0, lam)
    r = d.rho
    if d.kind == "fweibull":
        if end == "lower":
            return DensityAsymptote(end, lam * math.exp(gammaln(r + 1 - a) - gammaln(r)), r - 1.0)
        return DensityAsymptote(end, r / (lam * math.gamma(1 - a)), -r - 1.0)
    if end == "upper":
        return DensityAsymptote(end, lam * math.exp(gammaln(r + 1) - gammaln(r + a)), -r - 1.0)
    ctx = barnes.PochhammerContext(r)
    logc = (a * a / r) * math.log(r) + math.log(r + a) - (1 + a / r) * math.log(lam) \
        + gammaln(1 + a) + barnes.log_double_gamma(1 - a, ctx) + barnes.log_double_gamma(1 + a, ctx)
    return DensityAsymptote(end, math.exp(logc), r + a - 1.0)


__all__ = [
    "DistDescriptor", "DensityAsymptote", "DIST_CFG", "KINDS", "make_dist", "sf", "cdf", "pdf",
    "quantile", "mellin", "log_mellin", "mellin_strip", "support_asymptote",
]
