"""Double Gamma function against mpmath's Barnes G (the case delta = 1) and
the functional equations; Mellin kernels against Gamma arithmetic."""

import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from fracx import barnes
from fracx.errors import DomainError, NotARandomVariable
from fracx.specfun import KSParams
from fracx.barnes import MellinKernelParams, PochhammerContext


def test_normalisation_and_examples():
    for d in (0.3, 1.0, 4.0):
        assert barnes.log_double_gamma(1.0, PochhammerContext(d)) == pytest.approx(0.0, abs=1e-12)
    assert barnes.log_double_gamma(2.0, PochhammerContext(1.0)) == pytest.approx(0.0, abs=1e-11)
    assert barnes.log_double_gamma(2.0, PochhammerContext(2.0)) == pytest.approx(math.log(math.sqrt(math.pi)),
                                                                                   abs=1e-10)


@pytest.mark.parametrize("z", [0.3, 1.7, 4.2, 11.5])
def test_delta_one_is_barnes_g(z):
    assert barnes.log_double_gamma(z, PochhammerContext(1.0)) == pytest.approx(float(mp.log(mp.barnesg(z))),
                                                                               abs=1e-10)


def test_pochhammer_examples():
    for d in (0.5, 2.0):
        assert barnes.log_pochhammer(d, 1.0, PochhammerContext(d)) == pytest.approx(0.0, abs=1e-10)
    c = PochhammerContext(1.0)
    assert barnes.log_pochhammer(1.0, 2.0, c) == pytest.approx(0.0, abs=1e-10)
    assert barnes.log_pochhammer(2.0, 2.0, c) == pytest.approx(math.log(2.0), abs=1e-10)
    with pytest.raises(DomainError):
        barnes.log_pochhammer(1.0, -1.0, c)


def test_mellin_kernel_examples():
    assert barnes.mellin_kernel(MellinKernelParams("T_abc", 1.0, 1.0, 1.0), 2.0) == pytest.approx(2.0, rel=1e-10)
    y = MellinKernelParams("Y_ksl", ks=KSParams(0.5, 1.0, 0.0))
    assert barnes.mellin_kernel(y, 1.0) == pytest.approx(1.1283792, abs=1e-7)
    with pytest.raises(NotARandomVariable):
        barnes.mellin_kernel(MellinKernelParams("Z_four", a=1.0, b=2.0, c=1.0, d=2.0), 0.5, PochhammerContext(1.0))


def test_t_kernel_integer_moments():
    # E[T(a,b,c)^n] = prod_{k<n} (a+kb)... via T(a,b,b) = Gamma_a / a: E[T^n] = (a)_n / a^n
    a, b = 1.7, 0.9
    for n in (1, 2, 3):
        exact = math.gamma(a + n) / math.gamma(a) / a ** n
        assert barnes.mellin_kernel(MellinKernelParams("T_abc", a, b, b), float(n)) == pytest.approx(exact, rel=1e-9)


def test_stirling_and_value_at_delta():
    d = 1.0
    c = PochhammerContext(d)
    lg = barnes.log_double_gamma
    sec = lg(62.0, c) - 2 * lg(61.0, c) + lg(60.0, c)
    assert sec == pytest.approx(barnes.stirling_second_difference(61.0, d), rel=0.02)
    for d in (0.5, 3.0):
        assert barnes.log_double_gamma_at_delta(d) == pytest.approx(0.5 * (d - 1) * math.log(2 * math.pi) - 0.5 * math.log(d))


@given(st.floats(0.1, 10.0), st.floats(0.2, 5.0))
def test_functional_equation_one(z, d):
    c = PochhammerContext(d)
    lhs = barnes.log_double_gamma(z + 1, c)
    rhs = math.lgamma(z / d) + barnes.log_double_gamma(z, c)
    assert lhs == pytest.approx(rhs, abs=1e-9 * max(1.0, abs(lhs)))


@given(st.floats(0.1, 10.0), st.floats(0.2, 5.0))
def test_functional_equation_delta(z, d):
    c = PochhammerContext(d)
    rhs = 0.5 * (d - 1) * math.log(2 * math.pi) + (0.5 - z) * math.log(d) + math.lgamma(z) \
        + barnes.log_double_gamma(z, c)
    assert barnes.log_double_gamma(z + d, c) == pytest.approx(rhs, abs=1e-9 * max(1.0, abs(rhs)))


@given(st.floats(0.2, 5.0), st.floats(0.2, 5.0), st.floats(0.2, 3.0))
def test_mellin_kernel_at_zero_is_one(a, b, c):
    assert barnes.mellin_kernel(MellinKernelParams("T_abc", a, b, c), 0.0) == 1.0


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(0.05, 2.0), st.floats(-0.5, 2.0))
def test_t_kernel_log_convex(a, b, c, s):
    # a Mellin transform is log-convex in s
    p = MellinKernelParams("T_abc", a, b, c)
    h = 0.05
    lo = barnes.log_mellin_kernel(p, s - h)
    mid = barnes.log_mellin_kernel(p, s)
    hi = barnes.log_mellin_kernel(p, s + h)
    assert lo + hi - 2 * mid >= -1e-9
