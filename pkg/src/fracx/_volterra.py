"""Large-argument engine for E_{a,m,l}(-w) and L_a(-w).

Both functions solve a linear Abel equation of the second kind.  With
t = w^{1/(a m)} the Kilbas-Saigo function y(t) = E_{a,m,l}(-t^{am}) satisfies

    y(t) = 1 - t^q / Gamma(a) * int_0^t (t-u)^{a-1} u^p y(u) du,

p = a l, q = a (m - l - 1), and the Le Roy function y(x) = L_a(-e^x) satisfies

    y(x) = 1 - 1/Gamma(a) * int_{-inf}^x (x-u)^{a-1} e^u y(u) du.

The unknown is discretised on a geometric grid in w, interpolated linearly in
w on each cell, and the kernel moments of every cell are integrated exactly
(incomplete Beta resp. incomplete Gamma functions).  Cell weights depend only
on the index distance, so the whole solve costs O(N) special-function calls
and an O(N^2) convolution.  Below w0 the solution is replaced by its Taylor
polynomial.  Values from successive grid halvings are extrapolated, and the
reported error is an a-posteriori estimate, not a certificate.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import linalg, signal, special
from scipy.interpolate import CubicSpline

_W0 = 1e-7
_HEAD_TERMS = 5
_W_MAX = 1e30      # grid length grows like log(w); beyond this the route is not offered
_HALF_WINDOW = 4   # nodes either side of the argument used by the local cubic
_LEAF = 256        # rows per dense triangular block in the forward solve


def _beta_cells(a: float, alpha: float, d: np.ndarray, step: float) -> np.ndarray:
    # int_{v_lo}^{v_hi} (1-v)^{alpha-1} v^{a-1} dv / Gamma(alpha)
    # with v_hi = exp(-(d-1) step), v_lo = exp(-d step)
    scale = math.exp(special.gammaln(a) - special.gammaln(a + alpha))
    v_hi = np.exp(-(d - 1) * step)
    v_lo = np.exp(-d * step)
    c_hi = -np.expm1(-(d - 1) * step)
    c_lo = -np.expm1(-d * step)
    out = np.empty_like(v_lo)
    near = v_lo > 0.5
    out[near] = special.betainc(alpha, a, c_lo[near]) - special.betainc(alpha, a, c_hi[near])
    far = ~near
    out[far] = special.betainc(a, alpha, v_hi[far]) - special.betainc(a, alpha, v_lo[far])
    return scale * out


def _gamma_cells(alpha: float, d: np.ndarray, step: float) -> np.ndarray:
    # int_{(d-1) step}^{d step} tau^{alpha-1} e^{-tau} dtau / Gamma(alpha)
    lo = (d - 1) * step
    hi = d * step
    out = np.empty_like(hi)
    near = hi < 1.0
    out[near] = special.gammainc(alpha, hi[near]) - special.gammainc(alpha, lo[near])
    far = ~near
    out[far] = special.gammaincc(alpha, lo[far]) - special.gammaincc(alpha, hi[far])
    return out


def _march(w: np.ndarray, h: float, a0: np.ndarray, a1: np.ndarray,
           head: np.ndarray, y0: float) -> np.ndarray:
    """Forward solve of the discretised equation.

    Row j reads (1 + w_j wu_0) y_j + w_j sum_{i<j} K_{j-i} y_i = r_j with a
    Toeplitz history kernel K.  The rows are split recursively: leaf blocks
    are dense triangular solves, and the history of a left half is pushed to
    the right half by one convolution (FFT for long blocks).
    """
    n = len(w) - 1
    d = np.arange(1, n + 1, dtype=float)
    q = (np.exp(d * h) * a1 - a0) / math.expm1(h)
    wl = a0 - q
    wu = q
    # unknowns u_k = y_{k+1}, k = 0..n-1; kernel[d] couples u_k to u_{k-d}
    kernel = np.zeros(n)
    kernel[1:] = wl[:-1] + wu[1:]
    wr = w[1:]
    diag = 1.0 + wr * wu[0]
    rhs = 1.0 - head[1:] - wr * wl * y0
    acc = np.zeros(n)
    u = np.zeros(n)
    blk = min(n, _LEAF)
    dd = np.subtract.outer(np.arange(blk), np.arange(blk))
    toe = np.where(dd > 0, kernel[np.clip(dd, 0, blk - 1)], 0.0)

    def leaf(lo, hi):
        m = hi - lo
        a = wr[lo:hi, None] * toe[:m, :m]
        a[np.diag_indices(m)] = diag[lo:hi]
        u[lo:hi] = linalg.solve_triangular(a, rhs[lo:hi] - wr[lo:hi] * acc[lo:hi], lower=True,
                                           check_finite=False)

    def solve(lo, hi):
        if hi - lo <= blk:
            leaf(lo, hi)
            return
        mid = lo + (hi - lo) // 2
        solve(lo, mid)
        span = hi - lo
        conv = signal.fftconvolve(u[lo:mid], kernel[:span]) if span > 512 \
            else np.convolve(u[lo:mid], kernel[:span])
        acc[mid:hi] += conv[mid - lo:span]
        solve(mid, hi)

    solve(0, n)
    return np.r_[y0, u]


def _ks_curve(alpha: float, m: float, l: float, n: int, h: float):
    rho = alpha * m
    p = alpha * l
    j = np.arange(n + 1, dtype=float)
    w = _W0 * np.exp(j * h)
    d = np.arange(1, n + 1, dtype=float)
    a0 = _beta_cells(p + 1.0, alpha, d, h / rho)
    a1 = _beta_cells(p + 1.0 + rho, alpha, d, h / rho)
    # Taylor head on [0, w[0]]
    coef = [1.0]
    for k in range(1, _HEAD_TERMS):
        ak = alpha * ((k - 1) * m + l)
        coef.append(coef[-1] * math.exp(math.lgamma(1 + ak) - math.lgamma(1 + ak + alpha)))
    head = np.zeros(n + 1)
    v0 = np.exp(-j * h / rho)
    for k, c in enumerate(coef):
        a = p + 1.0 + k * rho
        scale = math.exp(special.gammaln(a) - special.gammaln(a + alpha))
        with np.errstate(divide="ignore"):
            logt = (k + 1) * np.log(w) + np.log(scale * special.betainc(a, alpha, v0))
        head += (-1) ** k * c * np.exp(logt)
    y0 = sum((-w[0]) ** k * c for k, c in enumerate(coef))
    y = _march(w, h, a0, a1, head, y0)
    return np.log(w), y


def _leroy_curve(alpha: float, n: int, h: float):
    j = np.arange(n + 1, dtype=float)
    w = _W0 * np.exp(j * h)
    d = np.arange(1, n + 1, dtype=float)
    a0 = _gamma_cells(alpha, d, h)
    a1 = 2.0 ** (-alpha) * _gamma_cells(alpha, d, 2 * h)
    coef = [1.0]
    for k in range(1, _HEAD_TERMS):
        coef.append(coef[-1] * k ** (-alpha))
    head = np.zeros(n + 1)
    for k, c in enumerate(coef):
        with np.errstate(divide="ignore", invalid="ignore"):
            logt = (k + 1) * np.log(w) + np.log(special.gammaincc(alpha, (k + 1) * j * h))
        head += (-1) ** k * c * (k + 1) ** (-alpha) * np.exp(logt)
    y0 = sum((-w[0]) ** k * c for k, c in enumerate(coef))
    y = _march(w, h, a0, a1, head, y0)
    return np.log(w), y


@lru_cache(maxsize=64)
def _curve(kind: str, params: tuple, size: int, h: float):
    """Solution on the grid W0 e^{jh}, j = 0..size."""
    if kind == "ks":
        return _ks_curve(*params, size, h)
    return _leroy_curve(*params, size, h)


def _grid_size(w: float, h: float) -> int:
    # nodes up to past w, rounded up to _LEAF * 2^k so that the result at w
    # depends only on this bucket and nearby arguments share one curve
    need = int(math.ceil(math.log(w / _W0) / h)) + _HALF_WINDOW + 1
    size = _LEAF
    while size < need:
        size *= 2
    return size


def _local_cubic(ls: np.ndarray, y: np.ndarray, s: float, nu: int) -> float:
    # cubic spline through the nodes around s; independent of the curve length
    i = int(np.searchsorted(ls, s))
    lo = max(0, i - _HALF_WINDOW)
    hi = lo + 2 * _HALF_WINDOW
    return float(CubicSpline(ls[lo:hi], y[lo:hi])(s, nu))


def solve(kind: str, params: tuple, w: float, rel_tol: float,
          h_start: float = 1.0 / 16, h_min: float = 1.0 / 1024):
    """Value of E(-w) or L(-w) and an error estimate; see ``_solve``."""
    return _solve(kind, params, w, rel_tol, h_start, h_min, 0)


def solve_derivative(kind: str, params: tuple, w: float, rel_tol: float,
                     h_start: float = 1.0 / 16, h_min: float = 1.0 / 1024):
    """Derivative of the function with respect to its argument at ``-w``.

    Obtained from the spline slope in log w, so one order less accurate than
    ``solve``; the grid-change estimate is inflated by a safety factor of 8
    because it under-reads the spline-slope error.  Returns ``(value, err_estimate, nodes)`` or ``None``.
    """
    out = _solve(kind, params, w, rel_tol, h_start, h_min, 1)
    if out is None:
        return None
    # dE/dz at z = -w is -dy/dw = -(dy/dlog w) / w
    val, err, nodes, _h = out
    return -val / w, 8.0 * err / w, nodes


def _solve(kind: str, params: tuple, w: float, rel_tol: float,
           h_start: float, h_min: float, nu: int):
    """Value of E(-w) (kind 'ks', params (alpha, m, l)) or L(-w) (kind
    'leroy', params (alpha,)) and an error estimate; ``nu = 1`` gives the
    slope in log w instead.

    The grid is halved repeatedly; the last three grids are combined by a
    Richardson step removing the h^2 and h^(2+alpha) error terms, and the
    change between two successive extrapolations is the error estimate.
    Returns ``(value, err_estimate, nodes, h)`` or ``None`` when the grid
    budget is exhausted before ``rel_tol`` is met.
    """
    if not (0 < w <= _W_MAX):
        return None
    alpha = params[0]
    s = math.log(w)
    hs, ys, ext = [], [], []
    h = h_start
    while h >= h_min:
        ls, y = _curve(kind, params, _grid_size(max(w, 1.0), h), h)
        if not np.all(np.isfinite(y)):
            return None          # e.g. subnormal alpha defeats the incomplete-Gamma head
        hs.append(h)
        ys.append(_local_cubic(ls, y, s, nu))
        if len(ys) >= 3:
            mat = np.array([[1.0, hh ** 2, hh ** (2 + alpha)] for hh in hs[-3:]])
            ext.append(float(np.linalg.solve(mat, ys[-3:])[0]))
        if len(ext) >= 2:
            val = ext[-1]
            err = abs(ext[-1] - ext[-2]) + 4e-15 * max(1.0, abs(val))
            if err <= rel_tol * max(1.0, abs(val)):
                return val, err, len(ls), h
        h /= 2
    return None
