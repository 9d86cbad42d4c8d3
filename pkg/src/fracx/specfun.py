"""Real-argument evaluation of the Mittag-Leffler, Kilbas-Saigo and Le Roy
functions with an absolute error bound, plus their hyperbolic bounds and
leading asymptotics at -infinity.

    E_{a,b}(z)   = sum z^n / Gamma(b + n a)
    E_{a,m,l}(z) = sum c_n z^n,  c_n = prod_{k=1}^n Gamma(1+a((k-1)m+l)) / Gamma(1+a((k-1)m+l+1))
    L_a(z)       = sum z^n / (n!)^a

The main route is a two-pass summation of the power series.  A cheap pass in
doubles locates the peak term and the truncation index; the second pass runs
in an mpmath context whose precision covers the cancellation between the
peak term and the result.  Consecutive coefficients come from Gamma ratios;
when the argument step of the Gamma sequence is a small rational p/q, the
sequence is advanced by the lag-q recurrence Gamma(x+p) = (x)_p Gamma(x)
instead of fresh Gamma evaluations.

For large negative arguments where the series is out of budget, the
functions are obtained from the Abel equation they satisfy (see
``_volterra``).  That route carries an a-posteriori error estimate and is only
taken when the requested tolerance allows it.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

import mpmath
import numpy as np
from scipy.special import gammaln

from . import _volterra
from .errors import DomainError, NonConvergent

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class EvalConfig:
    """Accuracy and resource limits for one evaluation.

    Parameters
    ----------
    target_rel_error : float
        Required bound on ``|true - value| / max(1, |value|)``.
    max_terms : int
        Largest number of series terms allowed.
    max_precision_bits : int
        Largest working precision of the certified pass.
    max_series_seconds : float
        Estimated-cost budget of the series route. When exceeded for a
        negative argument, the Abel-equation route is tried instead.
    allow_fallback : bool
        Permit the Abel-equation route (error estimate, not certificate).
    fast_series_seconds : float
        Series runs estimated to cost more than this try the Abel-equation
        route first (negative arguments only) and keep its value when it
        meets the target; otherwise the series still runs within budget.
    """

    target_rel_error: float = 1e-13
    max_terms: int = 10**6
    max_precision_bits: int = 65536
    max_series_seconds: float = 30.0
    allow_fallback: bool = True
    fast_series_seconds: float = 0.25

    def __post_init__(self):
        if not (0.0 < self.target_rel_error < 1.0):
            raise DomainError("target_rel_error must lie in (0, 1)")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.max_precision_bits < 53:
            raise DomainError("max_precision_bits must be >= 53")


@dataclass(frozen=True)
class EvalResult:
    """A function value with an absolute error bound.

    ``method`` is one of ``'exact'``, ``'closed_form'``, ``'series'`` or
    ``'volterra'``; only the last carries an estimated rather than certified
    bound.
    """

    value: float
    abs_error_bound: float
    terms_used: int
    precision_bits_used: int
    method: str = "series"


@dataclass(frozen=True)
class KSParams:
    """Kilbas-Saigo parameters with ``0 < alpha <= 1``, ``m > 0`` and
    ``l > -1/alpha``."""

    alpha: float
    m: float
    l: float

    def __post_init__(self):
        a, m, l = self.alpha, self.m, self.l
        if not all(math.isfinite(v) for v in (a, m, l)):
            raise DomainError("Kilbas-Saigo parameters must be finite")
        if not 0.0 < a <= 1.0:
            raise DomainError(f"alpha={a} outside (0, 1]")
        if m <= 0.0:
            raise DomainError(f"m={m} must be positive")
        if not l > -1.0 / a:
            raise DomainError(f"l={l} must exceed -1/alpha={-1.0 / a}")


@dataclass(frozen=True)
class AsymptoteSpec:
    """Leading term ``constant * x**(-power) * log(x)**(-log_power) * exp(-exp_rate*x)``."""

    constant: float
    power: float
    log_power: float = 0.0
    exp_rate: float = 0.0

    def evaluate(self, x: float) -> float:
        val = self.constant * x ** (-self.power) * math.exp(-self.exp_rate * x)
        if self.log_power:
            val *= math.log(x) ** (-self.log_power)
        return val


# ---------------------------------------------------------------------------
# coefficient sequences

def _ulp_up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _small_rational(x: float, maxden: int = 64, maxnum: int = 64) -> Optional[Fraction]:
    if x <= 0:
        return None
    f = Fraction(x).limit_denominator(maxden)
    if f.numerator == 0 or f.numerator > maxnum:
        return None
    if abs(float(f) - x) > 4 * math.ulp(x):
        return None
    return f


# rough per-operation timings (seconds) for the planner, calibrated on the
# certified loop; _T_LOOP is the bookkeeping per term (bounds, tests)
_T_LOOP = 2e-5


def _t_mul(prec: int) -> float:
    return 3e-6 + 5e-9 * prec


def _t_gamma(prec: int) -> float:
    return 1e-4 * max(1.0, prec / 200.0) ** 1.7


def _t_power(prec: int) -> float:
    return 3e-5 * max(1.0, prec / 200.0) ** 1.1


class _GammaSeq:
    """Gamma(x0 + k*step), k = 0, 1, ... in a given mpmath context.

    ``x0`` and ``step`` are exact rationals (the double parameters combined
    without rounding).  A step close to a small rational p/q is replaced by
    p/q so that the recurrence Gamma(a+p) = (a)_p Gamma(a) applies; the
    resulting argument shifts are reported by :meth:`arg_errors`.
    """

    def __init__(self, x0: Fraction, step: Fraction):
        self.x0 = Fraction(x0)
        self.step = Fraction(step)
        self.frac = _small_rational(float(self.step))
        used = self.frac if self.frac is not None else self.step
        d = abs(used - self.step)
        self.dstep = _ulp_up(float(d)) if d else 0.0

    def ops(self) -> int:
        return self.frac.numerator + 1 if self.frac is not None else 4

    def cost(self, prec: int) -> float:
        if self.frac is not None:
            return self.frac.numerator * _t_mul(prec)
        return _t_gamma(prec)

    def setup_cost(self, prec: int) -> float:
        return (self.frac.denominator if self.frac is not None else 0) * _t_gamma(prec)

    def unsnapped(self) -> "_GammaSeq":
        out = _GammaSeq(self.x0, self.step)
        out.frac, out.dstep = None, 0.0
        return out

    def arg_errors(self, prec: int) -> Iterator:
        """(argument, snapping error, rounding error) for k = 0, 1, ...: bounds
        on |used - exact argument| from the rational step and from converting
        the parameters at the working precision."""
        x0, step = float(self.x0), float(self.step)
        u = 2.0 ** (1 - prec)
        k = 0
        while True:
            yield x0 + k * step, k * self.dstep, (abs(x0) + k * step) * u
            k += 1

    def iterate(self, ctx) -> Iterator:
        x0 = ctx.mpf(self.x0.numerator) / self.x0.denominator
        if self.frac is None:
            st = ctx.mpf(self.step.numerator) / self.step.denominator
            k = 0
            while True:
                yield ctx.gamma(x0 + k * st)
                k += 1
        p, q = self.frac.numerator, self.frac.denominator
        st = ctx.mpf(p) / q
        args = [x0 + i * st for i in range(q)]
        vals = [ctx.gamma(a) for a in args]
        i = 0
        while True:
            yield vals[i]
            a, g = args[i], vals[i]
            for j in range(p):
                g = g * (a + j)
            args[i] = a + p
            vals[i] = g
            i = (i + 1) % q


def _psi_bound(x: float) -> float:
    # |digamma(x)| for x > 0
    return abs(math.log(x)) + 1.0 / x + 1.0


def _trigamma_bound(x: float) -> float:
    # trigamma(x) <= 1/x + 1/x^2 for x > 0
    return 1.0 / x + 1.0 / (x * x) if x > 0 else math.inf


class _Family:
    """Coefficient sequence c_0, c_1, ... of a series sum c_n z^n."""

    log_c0 = 0.0

    def log_ratio(self, n: np.ndarray) -> np.ndarray:     # log(c_n / c_{n-1})
        raise NotImplementedError

    def stream(self, ctx) -> Iterator:
        raise NotImplementedError

    def ops(self) -> int:
        raise NotImplementedError

    def term_cost(self, prec: int) -> float:
        raise NotImplementedError

    def setup_cost(self, prec: int) -> float:
        return 0.0

    def peak_index(self, az: float) -> float:
        raise NotImplementedError

    def log_perturbation(self, prec: int) -> Iterator:
        """Bounds on |log c_n(used parameters) - log c_n(exact parameters)|,
        as pairs (snapping part, working-precision part)."""
        raise NotImplementedError

    def unsnapped(self) -> Optional["_Family"]:
        """The same family without rational snapping of parameters, or None
        if no snapping is in use."""
        return None


class _KSFamily(_Family):
    def __init__(self, alpha: float, m: float, l: float):
        self.alpha, self.m, self.l = alpha, m, l
        fa, fm, fl = Fraction(alpha), Fraction(m), Fraction(l)
        self.num = _GammaSeq(1 + fa * fl, fa * fm)
        self.den = _GammaSeq(1 + fa * fl + fa, fa * fm)

    def log_ratio(self, n):
        a = self.alpha * ((n - 1) * self.m + self.l)
        return gammaln(1.0 + a) - gammaln(1.0 + a + self.alpha)

    def stream(self, ctx):
        c = ctx.mpf(1)
        yield c
        for gn, gd in zip(self.num.iterate(ctx), self.den.iterate(ctx)):
            c = c * gn / gd
            yield c

    def ops(self):
        return self.num.ops() + self.den.ops() + 2

    def term_cost(self, prec):
        return self.num.cost(prec) + self.den.cost(prec) + 4 * _t_mul(prec)

    def setup_cost(self, prec):
        return self.num.setup_cost(prec) + self.den.setup_cost(prec)

    def peak_index(self, az):
        return az ** (1.0 / self.alpha) / (self.alpha * self.m) + 1.0

    def unsnapped(self):
        if self.num.dstep == 0 and self.den.dstep == 0:
            return None
        out = copy.copy(self)
        out.num, out.den = self.num.unsnapped(), self.den.unsnapped()
        return out

    def log_perturbation(self, prec):
        yield 0.0, 0.0
        ps = pr = 0.0
        # both sequences share the snapped step, so their arguments move by the
        # same amount and stay alpha apart: the ratio changes by at most
        # shift * alpha * trigamma(lower argument)
        shared = self.num.frac == self.den.frac and self.num.dstep == self.den.dstep
        for (xn, sn, rn), (xd, sd, rd) in zip(self.num.arg_errors(prec), self.den.arg_errors(prec)):
            bn, bd = _psi_bound(xn - sn - rn), _psi_bound(xd - sd - rd)
            if shared:
                ps += sn * self.alpha * _trigamma_bound(xn - sn - rn)
            else:
                ps += sn * bn + sd * bd
            pr += rn * bn + rd * bd
            yield ps, pr


class _MLFamily(_Family):
    def __init__(self, alpha: float, beta: float):
        self.alpha, self.beta = alpha, beta
        self.seq = _GammaSeq(Fraction(beta), Fraction(alpha))
        self.log_c0 = -math.lgamma(beta)

    def log_ratio(self, n):
        return gammaln(self.beta + (n - 1) * self.alpha) - gammaln(self.beta + n * self.alpha)

    def stream(self, ctx):
        for g in self.seq.iterate(ctx):
            yield 1 / g

    def ops(self):
        return self.seq.ops() + 2

    def term_cost(self, prec):
        return self.seq.cost(prec) + 4 * _t_mul(prec)

    def setup_cost(self, prec):
        return self.seq.setup_cost(prec)

    def peak_index(self, az):
        return az ** (1.0 / self.alpha) / self.alpha + 1.0

    def unsnapped(self):
        if self.seq.dstep == 0:
            return None
        out = copy.copy(self)
        out.seq = self.seq.unsnapped()
        return out

    def log_perturbation(self, prec):
        for x, es, er in self.seq.arg_errors(prec):
            b = _psi_bound(x - es - er)
            yield es * b, er * b


class _LeRoyFamily(_Family):
    def __init__(self, alpha: float):
        self.alpha = alpha
        self.frac = _small_rational(alpha, maxden=64, maxnum=64 * 64)
        used = self.frac if self.frac is not None else Fraction(alpha)
        d = abs(used - Fraction(alpha))
        self.dalpha = _ulp_up(float(d)) if d else 0.0

    def log_ratio(self, n):
        return -self.alpha * np.log(n)

    def stream(self, ctx):
        c = ctx.mpf(1)
        yield c
        n = 1
        frac = self.frac
        while True:
            if frac is None:
                c = c * ctx.power(n, -ctx.mpf(self.alpha))
            elif frac.denominator == 1:
                c = c / ctx.mpf(n) ** frac.numerator
            elif frac.denominator == 2 and frac.numerator == 1:
                c = c / ctx.sqrt(n)
            else:
                c = c / ctx.root(ctx.mpf(n) ** frac.numerator, frac.denominator)
            yield c
            n += 1

    def ops(self):
        return 8

    def term_cost(self, prec):
        if self.frac is not None and self.frac.denominator <= 2:
            return 4 * _t_mul(prec)
        return _t_power(prec) + 3 * _t_mul(prec)

    def peak_index(self, az):
        return az ** (1.0 / self.alpha) + 1.0

    def unsnapped(self):
        if self.dalpha == 0:
            return None
        out = copy.copy(self)
        out.frac, out.dalpha = None, 0.0
        return out

    def log_perturbation(self, prec):
        # (n!)^-a with a snapped to a small rational
        yield 0.0, 0.0
        lf = 0.0
        n = 1
        while True:
            lf += math.log(n)
            yield self.dalpha * lf, 0.0
            n += 1


class _Derivative(_Family):
    """Coefficients (n+1) c_{n+1} of the derivative series."""

    def __init__(self, base: _Family):
        self.base = base
        self.log_c0 = base.log_c0 + float(base.log_ratio(np.array([1.0]))[0])

    def log_ratio(self, n):
        return np.log1p(1.0 / n) + self.base.log_ratio(n + 1)

    def stream(self, ctx):
        it = self.base.stream(ctx)
        next(it)
        for n, c in enumerate(it, start=1):
            yield c * n

    def ops(self):
        return self.base.ops() + 1

    def term_cost(self, prec):
        return self.base.term_cost(prec) + _t_mul(prec)

    def setup_cost(self, prec):
        return self.base.setup_cost(prec)

    def peak_index(self, az):
        return self.base.peak_index(az)

    def unsnapped(self):
        b = self.base.unsnapped()
        return None if b is None else _Derivative(b)

    def log_perturbation(self, prec):
        it = self.base.log_perturbation(prec)
        next(it)
        yield from it


# ---------------------------------------------------------------------------
# summation engine

@dataclass
class _Plan:
    n_terms: int
    prec: int
    cost: float


def _plan(fam: _Family, z: float, cfg: EvalConfig, start: int) -> _Plan | str:
    """First pass in doubles; returns a plan or a reason string."""
    tol = cfg.target_rel_error
    az = abs(z)
    try:
        peak = fam.peak_index(az)
    except OverflowError:
        peak = math.inf
    if peak > cfg.max_terms:
        return f"peak term index ~{peak:.3g} exceeds max_terms"
    lz = math.log(az)
    log_small = math.log(tol / 10.0)
    # scan log|t_n| in vectorised chunks; stop after three consecutive
    # terms that are past the peak, below threshold and shrinking by > 2x
    L0 = fam.log_c0
    lmax = L0 if start == 0 else -math.inf
    small = 0
    n0, size = 1, 256
    while True:
        if n0 > cfg.max_terms:
            return "max_terms exhausted in the first pass"
        n = np.arange(n0, n0 + size, dtype=float)
        dl = fam.log_ratio(n) + lz
        L = L0 + np.cumsum(dl)
        cand = np.where(n >= start, L, -np.inf)
        runmax = np.maximum(lmax, np.maximum.accumulate(cand))
        thr = log_small if z < 0 else runmax + log_small
        cond = (L < runmax) & (L < thr) & (dl < -LOG2)
        # length of the run of consecutive True values ending at each index
        idx = np.arange(size)
        last_false = np.maximum.accumulate(np.where(~cond, idx, -1))
        run = idx - last_false
        run = np.where(last_false < 0, run + small, run)
        hit = np.flatnonzero(run >= 3)
        if hit.size:
            k = int(hit[0])
            lmax = float(runmax[k])
            n = n0 + k
            break
        small = int(run[-1])
        lmax = float(runmax[-1])
        L0 = float(L[-1])
        n0 += size
        size = min(2 * size, 1 << 16)
    n_terms = n + 2
    guard = 32 + math.ceil(math.log2(n_terms + 1)) + 8
    if z < 0:
        prec = max(0, math.ceil(lmax / LOG2)) + 53 + guard
    else:
        prec = 53 + guard
    if prec > cfg.max_precision_bits:
        return f"needs {prec} bits > max_precision_bits={cfg.max_precision_bits}"
    if _snapping_too_coarse(fam, n_terms, lmax, tol):
        fam = fam.unsnapped()                 # the certified pass will switch too
    cost = n_terms * (fam.term_cost(prec) + _T_LOOP) + fam.setup_cost(prec)
    return _Plan(n_terms, prec, cost)


def _snapping_too_coarse(fam: _Family, n_terms: int, lmax: float, tol: float) -> bool:
    # the snapping perturbation grows with n; with the largest term e^lmax the
    # certified pass needs it below about tol/8 or it reverts to exact gammas
    if fam.unsnapped() is None:
        return False
    limit = math.log(tol / 8.0) - lmax
    for n, (ps, _pr) in enumerate(fam.log_perturbation(53)):
        if ps > 0 and math.log(ps) > limit:
            return True
        if n >= n_terms:
            return False
    return False


def _certified_sum(fam: _Family, z: float, cfg: EvalConfig, plan: _Plan, start: int) -> EvalResult:
    tol = cfg.target_rel_error
    prec = plan.prec
    for _attempt in range(4):
        ctx = mpmath.MPContext()
        ctx.prec = prec
        zz = ctx.mpf(z)
        s = ctx.mpf(0)
        abs_s = ctx.mpf(0)
        pw = ctx.mpf(1)
        prev = None
        small = 0
        stop_next = False
        n_used = 0
        bound_tail = None
        pert_s = ctx.mpf(0)
        pert_r = ctx.mpf(0)
        perts = fam.log_perturbation(prec)
        for n, c in enumerate(fam.stream(ctx)):
            ps, pr = next(perts)
            if n > cfg.max_terms:
                raise NonConvergent("max_terms exhausted in the certified pass")
            if n >= start:
                t = c * pw
                at = abs(t)
                if stop_next:
                    if at <= prev / 2:
                        bound_tail = 2 * at * math.exp(ps + pr)
                        break
                    stop_next = False
                s += t
                abs_s += at
                if ps:
                    pert_s += at * math.expm1(ps)
                if pr:
                    pert_r += at * (math.expm1(ps + pr) - math.expm1(ps))
                n_used = n + 1
                scale = max(1, abs(s))
                if prev is not None and at < prev and at < tol * scale / 10:
                    small += 1
                    if small >= 3:
                        stop_next = True
                else:
                    small = 0
                prev = at
            pw = pw * zz
        rnd = abs_s * ctx.ldexp(1, -prec) * (fam.ops() * n_used + n_used + 32) + pert_r
        scale = max(1, abs(s))
        if rnd <= tol * scale / 8 or prec >= cfg.max_precision_bits:
            break
        extra = int(ctx.ceil(ctx.log(8 * rnd / (tol * scale), 2))) + 8
        prec = min(cfg.max_precision_bits, prec + extra)
    value = float(s)
    if pert_s > tol * scale / 8:
        exact = fam.unsnapped()
        if exact is not None:
            return _certified_sum(exact, z, cfg, plan, start)
    total = bound_tail + rnd + pert_s + abs(s - ctx.mpf(value))
    bound = _ulp_up(float(total) * (1 + 1e-12))
    if bound > tol * max(1.0, abs(value)):
        raise NonConvergent(
            f"certified bound {bound:.3g} misses target at {prec} bits and {n_used} terms")
    return EvalResult(value, bound, n_used, prec, "series")


def _evaluate(fam: _Family, z: float, cfg: EvalConfig, start: int = 0,
              fallback: Optional[Callable[[], Optional[EvalResult]]] = None) -> EvalResult:
    plan = _plan(fam, z, cfg, start)
    can_fall = fallback is not None and cfg.allow_fallback and z < 0
    if isinstance(plan, _Plan) and plan.cost <= cfg.max_series_seconds:
        if can_fall and plan.cost > cfg.fast_series_seconds:
            res = fallback()
            if res is not None:
                return res
        return _certified_sum(fam, z, cfg, plan, start)
    reason = plan if isinstance(plan, str) else f"estimated series cost {plan.cost:.3g}s over budget"
    if can_fall:
        res = fallback()
        if res is not None:
            return res
        reason += "; Abel-equation route missed the target"
    raise NonConvergent(reason)


def _exact_mp(fn: Callable, *args) -> EvalResult:
    ctx = mpmath.MPContext()
    ctx.prec = 113
    v = fn(ctx, *args)
    value = float(v)
    err = abs(v - ctx.mpf(value)) + abs(v) * ctx.ldexp(1, -100)
    return EvalResult(value, _ulp_up(float(err)), 1, 113, "closed_form")


def _volterra_result(kind: str, params: tuple, w: float, cfg: EvalConfig,
                     post: Callable[[float], float] = lambda v: v, scale: float = 1.0):
    out = _volterra.solve(kind, params, w, cfg.target_rel_error / max(scale, 1e-300))
    if out is None:
        return None
    val, err, nodes, _h = out
    value = post(val)
    bound = _ulp_up(err * scale + 4 * math.ulp(value))
    if bound > cfg.target_rel_error * max(1.0, abs(value)):
        return None
    return EvalResult(value, bound, nodes, 53, "volterra")


def _check_real(z: float):
    if not math.isfinite(z):
        raise DomainError("argument must be finite")


# ---------------------------------------------------------------------------
# public evaluation API

def mittag_leffler(alpha: float, beta: float, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.

    Examples
    --------
    >>> round(mittag_leffler(0.5, 1.0, -1.0).value, 7)
    0.4275836
    """
    _check_real(z)
    if not (alpha > 0 and beta > 0) or not math.isfinite(alpha) or not math.isfinite(beta):
        raise DomainError("mittag_leffler needs alpha > 0 and beta > 0")
    if z == 0:
        if beta == 1.0:
            return EvalResult(1.0, 0.0, 1, 53, "exact")
        return _exact_mp(lambda c, b: 1 / c.gamma(b), beta)
    if alpha == 1.0 and beta == 1.0:
        return _exact_mp(lambda c, x: c.exp(x), z)
    fam = _MLFamily(alpha, beta)

    def fallback():
        if alpha >= 1.0:
            return None
        g = math.gamma(beta)
        return _volterra_result("ks", (alpha, 1.0, (beta - 1.0) / alpha), -z, cfg,
                                post=lambda v: v / g, scale=1.0 / g)

    return _evaluate(fam, z, cfg, fallback=fallback)


def _ks_fallback(p: KSParams, z: float, cfg: EvalConfig, start: int, deriv: bool):
    if p.alpha >= 1.0:
        return None
    params = (p.alpha, p.m, p.l)
    if deriv:
        out = _volterra.solve_derivative("ks", params, -z, cfg.target_rel_error)
        if out is None:
            return None
        val, err, nodes = out
        return EvalResult(val, _ulp_up(err + 4 * math.ulp(val)), nodes, 53, "volterra")
    if start == 1:
        return _volterra_result("ks", params, -z, cfg, post=lambda v: v - 1.0)
    return _volterra_result("ks", params, -z, cfg)


def kilbas_saigo(p: KSParams, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Kilbas-Saigo function E_{alpha,m,l}(z) for real z.

    Examples
    --------
    >>> round(kilbas_saigo(KSParams(1.0, 2.0, 1.0), -1.0).value, 7)
    0.6065307
    """
    _check_real(z)
    if z == 0:
        return EvalResult(1.0, 0.0, 1, 53, "exact")
    if p.alpha == 1.0 and p.l == p.m - 1.0:
        return _exact_mp(lambda c, x, m: c.exp(x / m), z, p.m)
    fam = _KSFamily(p.alpha, p.m, p.l)
    return _evaluate(fam, z, cfg, fallback=lambda: _ks_fallback(p, z, cfg, 0, False))


def kilbas_saigo_complement(p: KSParams, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """``E_{alpha,m,l}(z) - 1`` summed without the constant term, accurate for small |z|."""
    _check_real(z)
    if z == 0:
        return EvalResult(0.0, 0.0, 0, 53, "exact")
    if p.alpha == 1.0 and p.l == p.m - 1.0:
        return _exact_mp(lambda c, x, m: c.expm1(x / m), z, p.m)
    fam = _KSFamily(p.alpha, p.m, p.l)
    return _evaluate(fam, z, cfg, start=1, fallback=lambda: _ks_fallback(p, z, cfg, 1, False))


def kilbas_saigo_derivative(p: KSParams, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Derivative d/dz E_{alpha,m,l}(z)."""
    _check_real(z)
    if p.alpha == 1.0 and p.l == p.m - 1.0:
        return _exact_mp(lambda c, x, m: c.exp(x / m) / m, z, p.m)
    fam = _Derivative(_KSFamily(p.alpha, p.m, p.l))
    if z == 0:
        return _exact_mp(lambda c, a, l: c.gamma(1 + a * l) / c.gamma(1 + a * l + a), p.alpha, p.l)
    return _evaluate(fam, z, cfg, fallback=lambda: _ks_fallback(p, z, cfg, 0, True))


def le_roy(alpha: float, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Le Roy function L_alpha(z) = sum z^n/(n!)^alpha for real z.

    Examples
    --------
    >>> le_roy(0.0, -1.0).value
    0.5
    """
    _check_real(z)
    if not (alpha >= 0) or not math.isfinite(alpha):
        raise DomainError("le_roy needs alpha >= 0")
    if alpha == 0.0:
        if z >= 1.0:
            raise DomainError("L_0(z) = 1/(1-z) only for z < 1 (limit of L_a as a -> 0+)")
        return _exact_mp(lambda c, x: 1 / (1 - c.mpf(x)), z)
    if z == 0:
        return EvalResult(1.0, 0.0, 1, 53, "exact")
    if alpha == 1.0:
        return _exact_mp(lambda c, x: c.exp(x), z)
    fam = _LeRoyFamily(alpha)

    def fallback():
        if alpha >= 1.0:
            return None
        return _volterra_result("leroy", (alpha,), -z, cfg)

    return _evaluate(fam, z, cfg, fallback=fallback)


def le_roy_complement(alpha: float, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """``L_alpha(z) - 1`` without the constant term."""
    _check_real(z)
    if alpha == 0.0:
        if z >= 1.0:
            raise DomainError("L_0(z) = 1/(1-z) only for z < 1 (limit of L_a as a -> 0+)")
        return _exact_mp(lambda c, x: c.mpf(x) / (1 - c.mpf(x)), z)
    if z == 0:
        return EvalResult(0.0, 0.0, 0, 53, "exact")
    if alpha == 1.0:
        return _exact_mp(lambda c, x: c.expm1(x), z)
    fam = _LeRoyFamily(alpha)

    def fallback():
        if alpha >= 1.0:
            return None
        return _volterra_result("leroy", (alpha,), -z, cfg, post=lambda v: v - 1.0)

    return _evaluate(fam, z, cfg, start=1, fallback=fallback)


def le_roy_derivative(alpha: float, z: float, cfg: EvalConfig = EvalConfig()) -> EvalResult:
    """Derivative d/dz L_alpha(z)."""
    _check_real(z)
    if alpha == 0.0:
        if z >= 1.0:
            raise DomainError("L_0(z) = 1/(1-z) only for z < 1 (limit of L_a as a -> 0+)")
        return _exact_mp(lambda c, x: 1 / (1 - c.mpf(x)) ** 2, z)
    if alpha == 1.0:
        return _exact_mp(lambda c, x: c.exp(x), z)
    if z == 0:
        return EvalResult(1.0, 0.0, 1, 53, "exact")
    fam = _Derivative(_LeRoyFamily(alpha))

    def fallback():
        if alpha >= 1.0:
            return None
        out = _volterra.solve_derivative("leroy", (alpha,), -z, cfg.target_rel_error)
        if out is None:
            return None
        val, err, nodes = out
        return EvalResult(val, _ulp_up(err + 4 * math.ulp(val)), nodes, 53, "volterra")

    return _evaluate(fam, z, cfg, fallback=fallback)


# ---------------------------------------------------------------------------
# bounds and asymptotics

HYPERBOLIC_FAMILIES = ("weibull_ks", "frechet_ks_upper", "frechet_ks_lower_m1",
                       "ml_two_param", "leroy_sandwich")

_BOUND_CFG = EvalConfig(target_rel_error=1e-9)


def _gamma_ratio(a: float, b: float) -> float:
    return math.exp(math.lgamma(a) - math.lgamma(b))


def hyperbolic_bounds(family: str, alpha: float, aux: float, x: float,
                      cfg: EvalConfig = _BOUND_CFG) -> tuple[float, float]:
    """Closed-form two-sided bounds at ``-x``.

    ``weibull_ks``          bounds on E_{a,m,m-1}(-x), aux = m
    ``frechet_ks_upper``    upper bound on E_{a,m,m-1/a}(-x), lo = -inf, aux = m
    ``frechet_ks_lower_m1`` both bounds on E_{a,1,1-1/a}(-x), aux ignored
    ``ml_two_param``        bounds on Gamma(b) E_{a,b}(-x), aux = b > a
    ``leroy_sandwich``      Kilbas-Saigo values bracketing L_a(-x), aux = m;
                            each side is widened by its own error bound
    """
    if family not in HYPERBOLIC_FAMILIES:
        raise DomainError(f"unknown bound family {family!r}")
    if not (0.0 < alpha <= 1.0):
        raise DomainError("alpha must lie in (0, 1]")
    if not (x >= 0.0) or not math.isfinite(x):
        raise DomainError("x must be finite and >= 0")
    if family == "weibull_ks":
        m = aux
        if not m > 0:
            raise DomainError("m must be positive")
        lo = 0.0 if alpha == 1.0 else 1.0 / (1.0 + math.gamma(1.0 - alpha) * x)
        if x == 0.0:
            lo = 1.0
        hi = 1.0 / (1.0 + _gamma_ratio(1.0 + alpha * (m - 1.0), 1.0 + alpha * m) * x)
        return lo, hi
    if family == "frechet_ks_upper":
        m = aux
        if not m > 0:
            raise DomainError("m must be positive")
        c = _gamma_ratio(1.0 + alpha * m, 1.0 + alpha * (m + 1.0))
        return -math.inf, (1.0 + c * x) ** (-(1.0 + 1.0 / m))
    if family == "frechet_ks_lower_m1":
        if alpha == 1.0:
            lo = 1.0 if x == 0.0 else 0.0
        else:
            lo = (1.0 + math.sqrt(math.gamma(1.0 - alpha) / math.gamma(1.0 + alpha)) * x) ** -2
        hi = (1.0 + _gamma_ratio(1.0 + alpha, 1.0 + 2.0 * alpha) * x) ** -2
        return lo, hi
    if family == "ml_two_param":
        beta = aux
        if not beta > alpha:
            raise DomainError("ml_two_param needs beta > alpha")
        lo = 1.0 / (1.0 + _gamma_ratio(beta - alpha, beta) * x)
        hi = 1.0 / (1.0 + _gamma_ratio(beta, beta + alpha) * x)
        return lo, hi
    m = aux
    if not m > 0:
        raise DomainError("m must be positive")
    if x == 0.0:
        return 1.0, 1.0
    lo_r = kilbas_saigo(KSParams(alpha, m, m - 1.0 / alpha), -(alpha * (m + 1.0)) ** alpha * x, cfg)
    hi_r = kilbas_saigo(KSParams(alpha, m + 1.0, m), -(alpha * m) ** alpha * x, cfg)
    return lo_r.value - lo_r.abs_error_bound, hi_r.value + hi_r.abs_error_bound


def leading_asymptote(family: str, alpha: float, m: float = 1.0) -> AsymptoteSpec:
    """Leading behaviour at -infinity.

    ``weibull_ks``: E_{a,m,m-1}(-x) ~ x^{-1} / Gamma(1-a)
    ``frechet_ks``: E_{a,m,m-1/a}(-x) ~ (am)^{a/m} Gamma(1+a) G(1-a;am) G(1+a;am) x^{-1-1/m}
    ``leroy``:      L_a(-x) ~ 1 / (Gamma(1-a) x (log x)^a)
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError("alpha must lie in (0, 1)")
    if family == "weibull_ks":
        if not m > 0:
            raise DomainError("m must be positive")
        return AsymptoteSpec(1.0 / math.gamma(1.0 - alpha), 1.0, 0.0)
    if family == "leroy":
        return AsymptoteSpec(1.0 / math.gamma(1.0 - alpha), 1.0, alpha)
    if family == "frechet_ks":
        if not m > 0:
            raise DomainError("m must be positive")
        from .barnes import PochhammerContext, log_double_gamma
        ctx = PochhammerContext(alpha * m)
        logc = (alpha / m) * math.log(alpha * m) + math.lgamma(1.0 + alpha) \
            + log_double_gamma(1.0 - alpha, ctx) + log_double_gamma(1.0 + alpha, ctx)
        return AsymptoteSpec(math.exp(logc), 1.0 + 1.0 / m, 0.0)
    raise DomainError(f"unknown asymptote family {family!r}")
