"""Monte Carlo samplers for the stable-subordinator functionals behind the
fractional extreme laws, their exact moment oracles, and identity-in-law
checks.

Functionals of the alpha-stable subordinator sigma:

    weibull_int  int_0^inf ((1 - sigma_t)_+)^(rho - alpha) dt
    frechet_int  int_0^inf (1 + sigma_t)^(-rho - alpha) dt
    exp_int      int_0^inf exp(-sigma_t) dt

Two routes are offered.  ``beta_product`` uses the identifications in law with
the infinite Beta products T(a, b, c) (and, for exp_int, the product formula
of Gamma(1+s)^(1-alpha), which writes log exp_int as an infinite series of
centred Gamma variables).  ``path`` simulates sigma through exact stable
increments and sums the integrand with left endpoints.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy import special, stats

from . import barnes
from .dist import DistDescriptor, make_dist
from .errors import DomainError, RecursionCap

EULER_GAMMA = 0.5772156649015329

FUNCTIONALS = ("weibull_int", "frechet_int", "exp_int")
METHODS = ("beta_product", "path", "q_product")
IDENTITIES = ("shanbhag_sreehari", "exp_factorization", "cpy_product",
              "pareto_endpoints", "T_tail_loglaw")


# ---------------------------------------------------------------------------
# configuration and state

@dataclass(frozen=True)
class RngState:
    """Seed plus stream counter; each (seed, stream) is an independent
    PCG64 stream derived through ``SeedSequence`` spawn keys."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def spawn(self, k: int) -> "RngState":
        return RngState(self.seed, self.stream * 1_000_003 + k + 1)


@dataclass(frozen=True)
class PathConfig:
    """Path discretisation.

    Step k has length ``step * (1 + t_k)**growth``; ``growth = None`` picks
    a kind-dependent exponent for which the Riemann bracket stays O(step).
    ``max_recursion`` caps the self-similar restarts and ``tail_eps`` is the
    remaining weight below which the rest of the path is replaced by its mean.
    """

    step: float = 1e-3
    max_recursion: int = 30
    tail_eps: float = 1e-10
    growth: Optional[float] = None
    steps_per_level: int = 20000

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError("step must be positive")
        if self.max_recursion < 0:
            raise DomainError("max_recursion must be >= 0")
        if not 0 < self.tail_eps < 1:
            raise DomainError("tail_eps must lie in (0, 1)")


@dataclass(frozen=True)
class ProductConfig:
    """Number of exact factors of an infinite product; the remaining factors
    are replaced by one mean-one lognormal with the exact log-variance."""

    n_factors: int = 128
    q: float = 50.0           # scale of the experimental q_product method

    def __post_init__(self):
        if self.n_factors < 1:
            raise DomainError("n_factors must be >= 1")


@dataclass(frozen=True)
class SamplerConfig:
    product: ProductConfig = field(default_factory=ProductConfig)
    path: PathConfig = field(default_factory=PathConfig)


@dataclass
class SampleBatch:
    """Draws with the configuration and seed that produced them.

    ``bias_bound`` holds the per-draw Riemann bracket for path draws and
    ``flagged`` counts draws whose restarts hit ``max_recursion``.
    """

    values: np.ndarray
    method: str
    config: dict
    provenance: dict
    bias_bound: Optional[np.ndarray] = None
    flagged: int = 0

    def mean(self) -> float:
        return float(np.mean(self.values))

    def se(self, power: float = 1.0) -> float:
        v = self.values ** power
        return float(np.std(v, ddof=1) / math.sqrt(len(v)))


@dataclass
class CheckReport:
    name: str
    anchor: str
    statistic: float
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    return np.random.default_rng(rng)


# ---------------------------------------------------------------------------
# elementary variates

def sample_stable(alpha: float, rng, size=None):
    """Positive alpha-stable variates with E[exp(-s Z)] = exp(-s^alpha).

    Kanter's representation: Z = (A(U) / E)^((1-alpha)/alpha) with U uniform
    on (0, pi), E unit exponential and
    A(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha) u) / sin(u)^(1/(1-alpha)).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    g = _as_generator(rng)
    u = g.uniform(0.0, math.pi, size)
    e = g.standard_exponential(size)
    return _kanter(alpha, u, e)


def _kanter(alpha, u, e):
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        log_a = (alpha / (1 - alpha)) * np.log(np.sin(alpha * u)) + np.log(np.sin((1 - alpha) * u)) \
            - np.log(np.sin(u)) / (1 - alpha)
        log_z = (1 - alpha) / alpha * (log_a - np.log(e))
    # clamp to the normal range: draws beyond it have probability below 1e-300
    return np.exp(np.clip(log_z, -700.0, 700.0))


def _tail_log_variance(a: float, b: float, c: float, k0: int) -> float:
    """sum_{n >= k0} Var log B_{a+nb, c} = sum psi1(p) - psi1(p+c), p = a + n b."""
    m = 200_000
    p = a + b * np.arange(k0, k0 + m, dtype=float)
    head = float(np.sum(special.polygamma(1, p) - special.polygamma(1, p + c)))
    # remainder: psi1(p) - psi1(p+c) = c/p^2 + c(c-1)/p^3 + O(p^-4), summed by
    # the integral plus half the first term
    pe = a + b * (k0 + m)
    rem = (c / pe + c * (c - 1) / (2 * pe * pe)) / b + 0.5 * c / (pe * pe)
    return head + rem


def sample_beta_product(a: float, b: float, c: float, cfg: ProductConfig, rng, size=None):
    """Draws of T(a,b,c) = prod_{n>=0} ((a+nb+c)/(a+nb)) B_{a+nb,c}.

    Every factor has mean one.  The first ``cfg.n_factors`` factors are
    simulated (Beta variates as Gamma ratios); the product of the rest is
    replaced by exp(N(-v/2, v)) with v their exact total log-variance, which
    keeps the mean exactly one and the log-variance exact.
    """
    if not (a > 0 and b > 0 and c > 0):
        raise DomainError("T(a,b,c) needs a, b, c > 0")
    g = _as_generator(rng)
    shape = () if size is None else size
    logt = np.zeros(shape)
    gc = None
    for n in range(cfg.n_factors):
        p = a + n * b
        x = g.standard_gamma(p, shape)
        gc = g.standard_gamma(c, shape)
        logt += math.log1p(c / p) + np.log(x) - np.log(x + gc)
    v = _tail_log_variance(a, b, c, cfg.n_factors)
    logt += g.normal(-0.5 * v, math.sqrt(v), shape)
    out = np.exp(logt)
    return float(out) if size is None else out


def _sample_exp_int_gamma_series(alpha: float, cfg: ProductConfig, g, size):
    # log exp_int = -gamma t + sum_k (t - Gamma_t^(k)) / k, t = 1 - alpha,
    # which has E[exp(s .)] = Gamma(1+s)^t
    t = 1.0 - alpha
    shape = () if size is None else size
    acc = np.full(shape, -EULER_GAMMA * t)
    k_max = cfg.n_factors
    for k in range(1, k_max + 1):
        acc += (t - g.standard_gamma(t, shape)) / k
    acc += g.normal(0.0, math.sqrt(t * special.polygamma(1, k_max + 1)), shape)
    return np.exp(acc)


# ---------------------------------------------------------------------------
# paths

def _path_growth(kind: str, alpha: float, rho: float, cfg: PathConfig) -> float:
    if cfg.growth is not None:
        return cfg.growth
    if kind == "weibull_int":
        return 0.0
    if kind == "exp_int":
        return 1.5
    beta = (rho + alpha) / alpha        # integrand decays like t^-beta
    return min(2.0, 0.5 * (1.0 + beta))


def _sample_path(kind: str, alpha: float, rho: float, cfg: PathConfig, g, n: int):
    gam = _path_growth(kind, alpha, rho, cfg)
    inv_a = 1.0 / alpha
    acc = np.zeros(n)
    bias = np.zeros(n)
    weight = np.ones(n)
    sigma = np.zeros(n)
    t = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    levels = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    flagged = 0
    if kind == "frechet_int":
        tail_mean = math.exp(math.lgamma(rho + 1) - math.lgamma(rho + alpha)) / rho
    else:
        tail_mean = 1.0

    def integrand(s):
        if kind == "weibull_int":
            with np.errstate(divide="ignore"):
                return np.where(s < 1.0, np.maximum(1.0 - s, 0.0) ** (rho - alpha), 0.0)
        if kind == "frechet_int":
            return (1.0 + s) ** (-rho - alpha)
        return np.exp(-s)

    def remaining(s):
        if kind == "frechet_int":
            return (1.0 + s) ** (-rho)
        return np.exp(-s)

    while active.size:
        s = sigma[active]
        dt = cfg.step * (1.0 + t[active]) ** gam
        f0 = integrand(s)
        inc = dt ** inv_a * _kanter(alpha, g.uniform(0.0, math.pi, active.size),
                                    g.standard_exponential(active.size))
        s1 = s + inc
        f1 = integrand(s1)
        w = weight[active]
        acc[active] += w * dt * f0
        bias[active] += w * dt * np.abs(f0 - f1)
        sigma[active] = s1
        t[active] += dt
        steps[active] += 1
        if kind == "weibull_int":
            done = s1 >= 1.0
            active = active[~done]
            continue
        rem = remaining(s1)
        finished = w * rem < cfg.tail_eps
        restart = (~finished) & (steps[active] >= cfg.steps_per_level)
        if np.any(restart):
            idx = active[restart]
            capped = levels[idx] >= cfg.max_recursion
            # self-similarity: the rest of the path is rem * (fresh copy)
            weight[idx] *= rem[restart]
            sigma[idx] = 0.0
            t[idx] = 0.0
            steps[idx] = 0
            levels[idx] += 1
            if np.any(capped):
                cidx = idx[capped]
                acc[cidx] += weight[cidx] * tail_mean
                flagged += int(cidx.size)
                finished = finished.copy()
                finished[np.flatnonzero(restart)[capped]] = True
                weight[cidx] = 0.0
        if np.any(finished):
            idx = active[finished]
            acc[idx] += weight[idx] * remaining(sigma[idx]) * tail_mean
        active = active[~finished]
    if flagged:
        warnings.warn(RecursionCap(f"{flagged} path draws hit max_recursion and were mean-compensated"))
    return acc, bias, flagged


# ---------------------------------------------------------------------------
# functionals

def functional_product_params(kind: str, alpha: float, rho: float) -> tuple[float, tuple[float, float, float]]:
    """(constant, (a, b, c)) with functional = constant * T(a, b, c) in law."""
    if kind == "weibull_int":
        const = math.exp(math.lgamma(rho + 1 - alpha) - math.lgamma(rho + 1))
        return const, (1.0, 1.0 / rho, (1.0 - alpha) / rho)
    if kind == "frechet_int":
        const = math.exp(math.lgamma(rho) - math.lgamma(rho + alpha))
        return const, (1.0 + alpha / rho, 1.0 / rho, (1.0 - alpha) / rho)
    raise DomainError(f"{kind} has no Beta-product identification")


def _check_functional(kind, alpha, rho):
    if kind not in FUNCTIONALS:
        raise DomainError(f"unknown functional {kind!r}")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if kind != "exp_int" and not rho > 0:
        raise DomainError("rho must be positive")


def sample_functional(kind: str, alpha: float, rho: float = 1.0, method: str = "beta_product",
                      cfgs: SamplerConfig = SamplerConfig(), rng=None, size: Optional[int] = None,
                      return_batch: bool = False):
    """Draws of one of the three subordinator functionals.

    With ``method='beta_product'`` the Weibull and Frechet functionals are
    constant multiples of T(a,b,c) products and exp_int is generated from its
    Gamma-series representation; ``method='path'`` simulates sigma;
    ``method='q_product'`` (exp_int only, experimental) uses
    T(1 + alpha/q, 1/q, (1-alpha)/q) at finite q.

    Examples
    --------
    >>> x = sample_functional("exp_int", 0.5, rng=RngState(1), size=20000)
    >>> abs(x.mean() - 1.0) < 0.05
    True
    """
    _check_functional(kind, alpha, rho)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}")
    g = _as_generator(rng if rng is not None else RngState(0))
    n = 1 if size is None else int(size)
    bias = None
    flagged = 0
    if method == "path":
        vals, bias, flagged = _sample_path(kind, alpha, rho, cfgs.path, g, n)
    elif method == "q_product":
        if kind != "exp_int":
            raise DomainError("q_product applies to exp_int only")
        q = cfgs.product.q
        vals = sample_beta_product(1 + alpha / q, 1 / q, (1 - alpha) / q, cfgs.product, g, n)
    elif kind == "exp_int":
        vals = _sample_exp_int_gamma_series(alpha, cfgs.product, g, n)
    else:
        const, (a, b, c) = functional_product_params(kind, alpha, rho)
        vals = const * sample_beta_product(a, b, c, cfgs.product, g, n)
    if return_batch:
        cfg = asdict(cfgs.path) if method == "path" else asdict(cfgs.product)
        return SampleBatch(np.asarray(vals), method, {"kind": kind, "alpha": alpha, "rho": rho, **cfg},
                           {"rng": repr(rng)}, bias, flagged)
    if size is None:
        return float(vals[0])
    return vals


# ---------------------------------------------------------------------------
# distributions

def sample_dist(d: DistDescriptor, n: int, rng, method: str = "beta_product",
                cfgs: SamplerConfig = SamplerConfig()) -> SampleBatch:
    """``n`` independent draws of a fractional extreme law.

    W = L^(1/rho) (lam I_W)^(-1/rho),  F = L^(-1/rho) (lam I_F)^(1/rho),
    G = (log L - log I_exp) / lam, with L unit exponential independent of the
    functional I.  At alpha in {0, 1} the closed-form inverse cdf is used.
    """
    g = _as_generator(rng)
    a, lam, r = d.alpha, d.lam, d.rho
    prov = {"rng": repr(rng)}
    if a in (0.0, 1.0):
        u = g.uniform(size=n)
        if d.kind == "fgumbel":
            x = np.log(u / (1 - u)) / lam if a == 0 else np.log(-np.log1p(-u)) / lam
        elif d.kind == "fweibull":
            x = (u / (1 - u) / lam) ** (1 / r) if a == 0 else (-r * np.log1p(-u) / lam) ** (1 / r)
        else:
            x = (lam * u / (1 - u)) ** (1 / r) if a == 0 else (lam / (-r * np.log(u))) ** (1 / r)
        return SampleBatch(x, "inverse_cdf", {"kind": d.kind, "alpha": a, "lam": lam, "rho": r}, prov)
    el = g.standard_exponential(n)
    kind = {"fweibull": "weibull_int", "ffrechet": "frechet_int", "fgumbel": "exp_int"}[d.kind]
    batch = sample_functional(kind, a, r if r is not None else 1.0, method, cfgs, g, n, return_batch=True)
    i = batch.values
    if d.kind == "fweibull":
        x = (el / (lam * i)) ** (1 / r)
    elif d.kind == "ffrechet":
        x = (lam * i / el) ** (1 / r)
    else:
        x = (np.log(el) - np.log(i)) / lam
    cfg = dict(batch.config)
    cfg.update({"dist": d.kind, "lam": lam})
    return SampleBatch(x, method, cfg, prov, batch.bias_bound, batch.flagged)


def conditional_tail(d: DistDescriptor, x: float, n: int, rng, method: str = "beta_product",
                     cfgs: SamplerConfig = SamplerConfig()) -> tuple[float, float]:
    """Conditional Monte Carlo estimate (and SE) of the series-side probability
    at x: P[W > x] = E[exp(-lam x^rho I_W)], P[F <= x] = E[exp(-lam x^-rho I_F)],
    P[G > x] = E[exp(-e^(lam x) I_exp)]."""
    if not 0 < d.alpha < 1:
        raise DomainError("conditional_tail needs alpha in (0, 1)")
    kind = {"fweibull": "weibull_int", "ffrechet": "frechet_int", "fgumbel": "exp_int"}[d.kind]
    i = sample_functional(kind, d.alpha, d.rho if d.rho is not None else 1.0, method, cfgs, rng, n)
    if d.kind == "fweibull":
        h = d.lam * x ** d.rho
    elif d.kind == "ffrechet":
        h = d.lam * x ** (-d.rho)
    else:
        h = math.exp(d.lam * x)
    v = np.exp(-h * i)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(n))


# ---------------------------------------------------------------------------
# moment oracles

def log_moment_oracle(kind: str, params: tuple, n_or_s: float) -> float:
    """Logarithm of :func:`moment_oracle`."""
    if kind in ("a_n", "b_n"):
        alpha, rho = params
        n = n_or_s
        if n != int(n) or n < 0:
            raise DomainError("n must be a non-negative integer")
        k = np.arange(1, int(n) + 1, dtype=float)
        if kind == "a_n":
            terms = special.gammaln(k * rho + 1 - alpha) - special.gammaln(k * rho)
        else:
            terms = special.gammaln(k * rho + 1) - special.gammaln(k * rho + alpha)
        return float(np.sum(terms) - n * math.log(rho))
    if kind == "gumbel_exp_n":
        (alpha,) = params if isinstance(params, tuple) else (params,)
        n = n_or_s
        if n < 0:
            raise DomainError("n must be >= 0")
        return (1 - alpha) * math.lgamma(n + 1)
    if kind == "T_mellin":
        a, b, c = params
        return barnes.log_mellin_kernel(barnes.MellinKernelParams("T_abc", a, b, c), n_or_s)
    raise DomainError(f"unknown oracle {kind!r}")


def moment_oracle(kind: str, params, n_or_s: float) -> float:
    """Exact moments.

    ``a_n`` / ``b_n`` with params (alpha, rho): E[weibull_int^n], E[frechet_int^n].
    ``gumbel_exp_n`` with params (alpha,): E[exp_int^n] = (n!)^(1-alpha).
    ``T_mellin`` with params (a, b, c): E[T(a,b,c)^s].

    Examples
    --------
    >>> round(moment_oracle("a_n", (0.5, 1.0), 1), 7)
    0.8862269
    """
    return math.exp(log_moment_oracle(kind, params, n_or_s))


def functional_moment(kind: str, alpha: float, rho: float, n: int) -> float:
    """E[I^n] for the named functional."""
    if kind == "weibull_int":
        return moment_oracle("a_n", (alpha, rho), n)
    if kind == "frechet_int":
        return moment_oracle("b_n", (alpha, rho), n)
    return moment_oracle("gumbel_exp_n", (alpha,), n)


# ---------------------------------------------------------------------------
# identities in law

def _ks_report(name, anchor, x, y, level=0.01, **details) -> CheckReport:
    res = stats.ks_2samp(x, y)
    return CheckReport(name, anchor, float(res.pvalue), level, bool(res.pvalue > level),
                       {"ks_statistic": float(res.statistic), **details})


def check_identity(name: str, n_samples: int, rng, alpha: float = 0.5, rho: float = 1.0,
                   cfgs: SamplerConfig = SamplerConfig(), abc: tuple = (1.0, 1.0, 0.5)) -> CheckReport:
    """Monte Carlo check of one identity in law.

    Distributional identities report the two-sample Kolmogorov-Smirnov
    p-value against the 1% level; ``exp_factorization`` reports the
    standardised deviation of the mean from 1 against 3; ``T_tail_loglaw``
    reports the relative error of the fitted log-tail exponent against 25%.
    """
    g = _as_generator(rng)
    n = int(n_samples)
    if name == "shanbhag_sreehari":
        lhs = g.standard_exponential(n)
        rhs = g.standard_exponential(n) ** alpha * sample_stable(alpha, g, n) ** (-alpha)
        return _ks_report(name, "L = L^a * Z_a^-a", lhs, rhs, alpha=alpha)
    if name == "cpy_product":
        lhs = g.standard_exponential(n)
        rhs = sample_functional("exp_int", 1 - alpha, 1.0, "beta_product", cfgs, g, n) \
            * sample_functional("exp_int", alpha, 1.0, "beta_product", cfgs, g, n)
        return _ks_report(name, "L = int exp(-sigma^(1-a)) * int exp(-sigma^(a))", lhs, rhs, alpha=alpha)
    if name == "exp_factorization":
        prod = rho * sample_functional("frechet_int", 1 - alpha, rho, "beta_product", cfgs, g, n) \
            * sample_functional("weibull_int", alpha, rho, "beta_product", cfgs, g, n)
        mean = float(prod.mean())
        se = float(prod.std(ddof=1) / math.sqrt(n))
        z = abs(mean - 1.0) / se
        ks = stats.ks_2samp(prod, g.standard_exponential(n))
        return CheckReport(name, "L = rho int (1+sigma^(1-a))^(-rho-1+a) * int ((1-sigma^(a))_+)^(rho-a)",
                           z, 3.0, bool(z < 3.0), {"mean": mean, "se": se, "ks_pvalue": float(ks.pvalue),
                                                   "alpha": alpha, "rho": rho})
    if name == "pareto_endpoints":
        d = make_dist("fweibull", 0.0, 1.0, rho)
        lhs = sample_dist(d, n, g).values
        rhs = (g.standard_exponential(n) / g.standard_exponential(n)) ** (1.0 / rho)
        return _ks_report(name, "W_(0,1,rho) = W_rho / W_rho", lhs, rhs, rho=rho)
    if name == "T_tail_loglaw":
        a, b, c = abc
        x = sample_beta_product(a, b, c, cfgs.product, g, n)
        levels = (1e-2, 1e-3)
        qs = [float(np.quantile(x, 1 - p)) for p in levels]
        slope = (math.log(-math.log(levels[1])) - math.log(-math.log(levels[0]))) / \
            (math.log(qs[1]) - math.log(qs[0]))
        target = b / c
        rel = abs(slope / target - 1.0)
        return CheckReport(name, "log P[T(a,b,c) > x] ~ -c (Gamma((a+c)/b)/Gamma(a/b) x)^(b/c)",
                           rel, 0.25, bool(rel < 0.25),
                           {"fitted_exponent": slope, "target_exponent": target, "quantiles": qs,
                            "abc": list(abc)})
    raise DomainError(f"unknown identity {name!r}")


def self_validate_stable(alpha: float, rng, n: int = 200_000) -> CheckReport:
    """Laplace-transform check of the stable sampler at s in {0.5, 1, 2}."""
    z = sample_stable(alpha, rng, n)
    worst = 0.0
    details = {}
    for s in (0.5, 1.0, 2.0):
        v = np.exp(-s * z)
        dev = abs(v.mean() - math.exp(-s ** alpha)) / (v.std(ddof=1) / math.sqrt(n))
        details[str(s)] = float(dev)
        worst = max(worst, dev)
    return CheckReport("stable_laplace", "E[exp(-s Z_a)] = exp(-s^a)", worst, 4.0, bool(worst < 4.0), details)


__all__ = [
    "RngState", "PathConfig", "ProductConfig", "SamplerConfig", "SampleBatch", "CheckReport",
    "sample_stable", "sample_beta_product", "sample_functional", "sample_dist", "conditional_tail",
    "moment_oracle", "log_moment_oracle", "functional_moment", "functional_product_params",
    "check_identity", "self_validate_stable", "FUNCTIONALS", "METHODS", "IDENTITIES",
]
