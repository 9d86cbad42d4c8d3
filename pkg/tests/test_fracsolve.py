"""Fractional integrals against analytic monomial rules and adaptive
quadrature; the series solver against special-function closed forms."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from fracx import fracsolve, specfun
from fracx.errors import DomainError, EnvelopeViolated, MissingTail
from fracx.fracsolve import Envelope, GridFunction, HazardSpec, TailDescriptor
from fracx.specfun import KSParams


def riemann_liouville_quad(f, alpha, x):
    """(I^a_{0+} f)(x) by adaptive quadrature with the algebraic weight."""
    val, _ = integrate.quad(f, 0.0, x, weight="alg", wvar=(0.0, alpha - 1.0), epsabs=1e-13, epsrel=1e-12)
    return val / math.gamma(alpha)


def test_left_constant():
    u = np.linspace(0.0, 1.0, 11)
    r = fracsolve.frac_integral("left_halfaxis", 0.5, GridFunction(u, np.ones_like(u)), [1.0])
    assert r.values[0] == pytest.approx(1 / math.gamma(1.5), rel=1e-13)


def test_right_power():
    u = np.geomspace(1.0, 1e3, 2000)
    f = GridFunction(u, u ** -2.0, tail=TailDescriptor("power", 1.0, 2.0))
    r = fracsolve.frac_integral("right_halfaxis", 0.5, f, [1.0])
    assert r.values[0] == pytest.approx(math.gamma(1.5) / math.gamma(2.0), rel=1e-5)


def test_zero_function():
    u = np.linspace(0.0, 2.0, 9)
    for side, tail in (("left_halfaxis", None), ("right_halfaxis", TailDescriptor("exp", 0.0 + 1e-300, 1.0)),
                       ("left_line", TailDescriptor("exp", 1e-300, 1.0))):
        r = fracsolve.frac_integral(side, 0.4, GridFunction(u, np.zeros_like(u), tail=tail), [0.5, 1.0])
        assert np.all(np.abs(r.values) < 1e-250)


def test_missing_tail_and_grid_checks():
    u = np.linspace(0.0, 1.0, 5)
    with pytest.raises(MissingTail):
        fracsolve.frac_integral("right_halfaxis", 0.5, GridFunction(u, u), [0.5])
    with pytest.raises(DomainError):
        GridFunction([0.0, 1.0, 0.5], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        fracsolve.frac_integral("left_halfaxis", 0.5, GridFunction(u, u), [0.7, 0.2])


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 2.0])
def test_monomial_rule(beta):
    # I^a x^b = Gamma(b+1)/Gamma(a+b+1) x^(a+b)
    alpha = 0.6
    u = np.linspace(0.0, 2.0, 801) ** 1.0
    u = 2.0 * (np.arange(801) / 800) ** 2
    r = fracsolve.frac_integral("left_halfaxis", alpha, GridFunction(u, u ** beta), [0.7, 2.0])
    exact = [math.gamma(beta + 1) / math.gamma(alpha + beta + 1) * x ** (alpha + beta) for x in (0.7, 2.0)]
    np.testing.assert_allclose(r.values, exact, rtol=2e-5)


def test_left_against_quadrature():
    alpha = 0.35
    u = 3.0 * (np.arange(1601) / 1600) ** 2
    f = lambda t: math.exp(-t) * math.cos(t)
    r = fracsolve.frac_integral("left_halfaxis", alpha, GridFunction(u, np.exp(-u) * np.cos(u)), [1.0, 3.0])
    for x, v in zip((1.0, 3.0), r.values):
        assert v == pytest.approx(riemann_liouville_quad(f, alpha, x), abs=2e-6)


def test_right_exponential_tail_exact():
    # (I^a_- e^{-t})(x) = e^{-x}
    alpha = 0.5
    u = np.linspace(0.0, 20.0, 2001)
    f = GridFunction(u, np.exp(-u), tail=TailDescriptor("exp", 1.0, 1.0))
    r = fracsolve.frac_integral("right_halfaxis", alpha, f, [0.5, 5.0])
    np.testing.assert_allclose(r.values, np.exp(-np.array([0.5, 5.0])), rtol=1e-5)


def test_left_line_exponential():
    # (I^a_+ e^{t})(x) = e^{x}
    u = np.linspace(-20.0, 1.0, 2101)
    f = GridFunction(u, np.exp(u), tail=TailDescriptor("exp", 1.0, 1.0))
    r = fracsolve.frac_integral("left_line", 0.3, f, [0.0, 1.0])
    np.testing.assert_allclose(r.values, [1.0, math.e], rtol=1e-5)


def test_derivative_inverts_integral():
    alpha = 0.5
    u = 2.0 * (np.arange(801) / 800) ** 2
    f = GridFunction(u, np.sin(u))
    i = fracsolve.frac_integral("left_halfaxis", alpha, f, u)
    d = fracsolve.frac_derivative(alpha, i)
    mask = u > 0.2
    np.testing.assert_allclose(d.values[mask], np.sin(u[mask]), atol=1e-4)


def test_remainder_bound_examples():
    env = Envelope(1.0, 0.5)
    assert fracsolve.remainder_bound("weibull_type", 0.5, env, 1.0, 1) == pytest.approx(math.gamma(1.5), rel=1e-12)
    for kind in fracsolve.KINDS:
        assert fracsolve.remainder_bound(kind, 0.5, Envelope(1.0, 0.5 if kind != "frechet_type" else -1.5),
                                         1.0, 0) == 1.0
    b = [fracsolve.remainder_bound("weibull_type", 0.5, env, 1.0, n) for n in range(1, 22)]
    assert all(y < x for x, y in zip(b, b[1:]))


def test_envelope_violation():
    x = fracsolve.solver_grid("weibull_type", 0.0, 2.0, 50)
    h = HazardSpec(lambda t: 5.0 * np.sqrt(t), Envelope(1.0, 0.5))
    with pytest.raises(EnvelopeViolated):
        fracsolve.series_solve("weibull_type", 0.5, h, x, 10)


def test_series_solve_weibull():
    x = fracsolve.solver_grid("weibull_type", 0.0, 2.0, 400)
    s, rem = fracsolve.series_solve("weibull_type", 0.5, fracsolve.power_hazard("weibull_type", 0.5, 1.0, 1.0), x, 40)
    i = int(np.argmin(np.abs(x - 1.0)))
    assert s.values[i] == pytest.approx(specfun.kilbas_saigo(KSParams(0.5, 2.0, 1.0), -x[i]).value, abs=1e-6)
    assert np.all(rem.values >= 0)


def test_series_solve_alpha_one():
    x = fracsolve.solver_grid("weibull_type", 0.0, 2.0, 400)
    s, _ = fracsolve.series_solve("weibull_type", 1.0, fracsolve.power_hazard("weibull_type", 1.0, 2.0, 2.0), x, 40)
    np.testing.assert_allclose(s.values, np.exp(-x ** 2), atol=1e-8)


def test_series_solve_frechet():
    x = fracsolve.solver_grid("frechet_type", 0.4, 200.0, 400)
    s, _ = fracsolve.series_solve("frechet_type", 0.5, fracsolve.power_hazard("frechet_type", 0.5, 1.0, 1.0), x, 40)
    i = int(np.argmin(np.abs(x - 2.0)))
    exact = specfun.kilbas_saigo(KSParams(0.5, 2.0, 0.0), -1.0 / x[i]).value
    assert s.values[i] == pytest.approx(exact, abs=1e-6)


def test_uncertified_points_are_nan():
    x = fracsolve.solver_grid("weibull_type", 0.0, 6.0, 200)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        s, rem = fracsolve.series_solve("weibull_type", 0.5, fracsolve.power_hazard("weibull_type", 0.5, 1.0, 1.0),
                                        x, 5)
    bad = rem.values >= 1.0
    assert bad.any() and np.all(np.isnan(s.values[bad])) and not np.isnan(s.values[~bad]).any()
    assert s.meta["certified_limit"] == pytest.approx(x[~bad][-1])


def test_power_hazard_fast_path():
    assert fracsolve.power_hazard_solve("weibull_type", 0.0, 2.0, 1.0, 1.0).value == pytest.approx(1 / 3)
    r = fracsolve.power_hazard_solve("gumbel_type", 0.5, 1.0, None, 0.0)
    assert abs(r.value - specfun.le_roy(0.5, -1.0).value) <= r.abs_error_bound + 1e-15


@given(st.floats(0.05, 0.95), st.floats(0.0, 3.0))
def test_power_rule_property(alpha, beta):
    u = 1.5 * (np.arange(401) / 400) ** 2
    r = fracsolve.frac_integral("left_halfaxis", alpha, GridFunction(u, u ** beta), [1.5])
    exact = math.gamma(beta + 1) / math.gamma(alpha + beta + 1) * 1.5 ** (alpha + beta)
    assert r.values[0] == pytest.approx(exact, rel=1e-3)


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_semigroup(a, b):
    # I^a I^b f = I^(a+b) f for f = 1 on a graded grid
    u = 2.0 * (np.arange(401) / 400) ** 2
    one = GridFunction(u, np.ones_like(u))
    ib = fracsolve.frac_integral("left_halfaxis", b, one, u)
    iab = fracsolve.frac_integral("left_halfaxis", a, ib, [2.0])
    assert iab.values[0] == pytest.approx(2.0 ** (a + b) / math.gamma(1 + a + b), rel=1e-3)
