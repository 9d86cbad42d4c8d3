"""Fractional extreme laws: closed forms at alpha in {0, 1}, special-function
identities, numerical differentiation and quadrature of the density, and the
contracts of quantile and Mellin transforms."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from fracx import dist, specfun
from fracx.errors import DomainError


def test_make_dist():
    d = dist.make_dist("fweibull", 0.5, 1.0, 1.0)
    assert (d.kind, d.alpha, d.lam, d.rho) == ("fweibull", 0.5, 1.0, 1.0)
    assert dist.make_dist("fgumbel", 0.5, 2.0).rho is None
    for bad in [("fweibull", 1.5, 1.0, 1.0), ("ffrechet", 0.5, -1.0, 1.0), ("fweibull", 0.5, 1.0, 0.0),
                ("nope", 0.5, 1.0, 1.0)]:
        with pytest.raises(DomainError):
            dist.make_dist(*bad)


def test_sf_examples():
    assert dist.sf(dist.make_dist("fweibull", 0.0, 1.0, 2.0), 3.0).value == pytest.approx(0.1, abs=1e-15)
    assert dist.sf(dist.make_dist("fweibull", 1.0, 2.0, 2.0), 1.0).value == pytest.approx(math.exp(-1), abs=1e-15)
    r = dist.sf(dist.make_dist("fgumbel", 0.5, 1.0), 0.0)
    assert abs(r.value - specfun.le_roy(0.5, -1.0).value) <= 2 * r.abs_error_bound + 1e-15
    assert r.value == pytest.approx(0.4385998967488438, abs=1e-12)


def test_cdf_examples():
    assert dist.cdf(dist.make_dist("ffrechet", 0.0, 1.0, 1.0), 1.0).value == pytest.approx(0.5, abs=1e-15)
    assert dist.cdf(dist.make_dist("ffrechet", 1.0, 2.0, 2.0), 1.0).value == pytest.approx(math.exp(-1), abs=1e-15)


def test_pdf_examples():
    assert dist.pdf(dist.make_dist("fweibull", 0.0, 1.0, 1.0), 1.0).value == pytest.approx(0.25, abs=1e-15)
    assert dist.pdf(dist.make_dist("fgumbel", 1.0, 1.0), 0.0).value == pytest.approx(math.exp(-1), abs=1e-15)
    x = 1e-6
    f = dist.pdf(dist.make_dist("fweibull", 0.5, 1.0, 1.0), x).value
    assert f / x ** 0 == pytest.approx(math.gamma(1.5), rel=1e-4)


def test_weibull_rho_alpha_is_mittag_leffler():
    for a in (0.3, 0.7):
        d = dist.make_dist("fweibull", a, 1.0, a)
        for x in (0.3, 2.0):
            r = dist.sf(d, x)
            assert r.value == pytest.approx(specfun.mittag_leffler(a, 1.0, -x ** a).value, abs=1e-12)


def test_half_weibull_is_erfcx():
    # fweibull(1/2, lam, 1/2): sf = E_{1/2}(-lam x^(1/2)) ... with lam = 1 this is erfcx(sqrt x)
    d = dist.make_dist("fweibull", 0.5, 1.0, 0.5)
    for x in (0.01, 1.0, 9.0):
        assert dist.sf(d, x).value == pytest.approx(special.erfcx(math.sqrt(x)), rel=1e-11)


def test_quantile_examples():
    assert dist.quantile(dist.make_dist("fweibull", 0.0, 1.0, 1.0), 0.5) == pytest.approx(1.0, abs=1e-12)
    assert dist.quantile(dist.make_dist("fgumbel", 0.0, 1.0), 0.5) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        dist.quantile(dist.make_dist("fgumbel", 0.5, 1.0), 1.0)


@pytest.mark.parametrize("d", [dist.make_dist("fweibull", 0.5, 1.0, 1.0), dist.make_dist("ffrechet", 0.3, 2.0, 1.5),
                               dist.make_dist("fgumbel", 0.7, 1.0)])
def test_quantile_round_trip(d):
    for p in np.linspace(0.01, 0.99, 21):
        assert abs(dist.cdf(d, dist.quantile(d, float(p))).value - p) <= 1e-9


@pytest.mark.parametrize("d,lo,hi", [(dist.make_dist("fweibull", 0.5, 1.0, 1.0), 0.05, 5.0),
                                      (dist.make_dist("ffrechet", 0.5, 1.0, 1.0), 0.2, 20.0),
                                      (dist.make_dist("fgumbel", 0.5, 1.0), -3.0, 1.0)])
def test_pdf_integrates_to_cdf_increment(d, lo, hi):
    mass, _ = integrate.quad(lambda x: dist.pdf(d, x).value, lo, hi, epsabs=1e-11, epsrel=1e-10)
    assert mass == pytest.approx(dist.cdf(d, hi).value - dist.cdf(d, lo).value, abs=1e-9)


def test_mellin_examples():
    assert dist.mellin(dist.make_dist("fweibull", 1.0, 1.0, 1.0), 1.0) == pytest.approx(1.0, rel=1e-10)
    g = dist.mellin(dist.make_dist("fgumbel", 0.5, 1.0), 0.5)
    assert g == pytest.approx(math.gamma(1.5) * math.gamma(0.5) ** 0.5, rel=1e-10)
    for d in (dist.make_dist("fweibull", 0.4, 2.0, 1.5), dist.make_dist("ffrechet", 0.4, 2.0, 1.5)):
        assert dist.mellin(d, 0.0) == 1.0


@pytest.mark.parametrize("d", [dist.make_dist("fweibull", 0.5, 1.0, 1.0), dist.make_dist("ffrechet", 0.5, 1.0, 2.0)])
def test_mellin_against_quadrature(d):
    s = 0.4
    val, _ = integrate.quad(lambda x: x ** s * dist.pdf(d, x).value, 0, np.inf, limit=400, epsrel=1e-8)
    assert dist.mellin(d, s) == pytest.approx(val, rel=1e-5)


def test_mellin_strip():
    lo, hi = dist.mellin_strip(dist.make_dist("fweibull", 0.5, 1.0, 1.0))
    assert lo < 0 < hi
    with pytest.raises(DomainError):
        dist.mellin(dist.make_dist("fweibull", 0.5, 1.0, 1.0), hi + 0.5)


def test_support_asymptotes():
    a = dist.support_asymptote(dist.make_dist("fweibull", 0.5, 1.0, 1.0), "upper")
    assert (a.constant, a.power) == pytest.approx((0.5641896, -2.0), abs=1e-7)
    a = dist.support_asymptote(dist.make_dist("ffrechet", 0.5, 1.0, 0.5), "lower")
    assert (a.constant, a.power) == pytest.approx((0.5, 0.0), abs=1e-12)
    a = dist.support_asymptote(dist.make_dist("fgumbel", 0.5, 1.0), "lower")
    assert a.constant == pytest.approx(1.0) and a.exp_rate == pytest.approx(1.0)
    # the gumbel lower tail carries mass ~ exp(-|x|)
    d = dist.make_dist("fgumbel", 0.5, 1.0)
    assert dist.cdf(d, -30.0).value / a.tail_mass(-30.0) == pytest.approx(1.0, rel=1e-3)


@given(st.sampled_from(dist.KINDS), st.floats(0.05, 0.95), st.floats(0.3, 3.0), st.floats(0.3, 3.0),
       st.floats(-4.0, 4.0))
def test_sf_plus_cdf_is_one(kind, alpha, lam, rho, x):
    d = dist.make_dist(kind, alpha, lam, None if kind == "fgumbel" else rho)
    if kind != "fgumbel":
        x = math.exp(x)
    s, c = dist.sf(d, x), dist.cdf(d, x)
    assert abs(s.value + c.value - 1.0) <= s.abs_error_bound + c.abs_error_bound + 2e-16
    assert 0.0 <= s.value <= 1.0


@given(st.sampled_from(("fweibull", "ffrechet")), st.floats(0.05, 0.95), st.floats(0.3, 3.0),
       st.floats(0.3, 3.0), st.floats(-3.0, 3.0))
def test_scaling_law(kind, alpha, lam, rho, lx):
    # W_(a,lam,rho) = lam^(-1/rho) W_(a,1,rho);  F_(a,lam,rho) = lam^(1/rho) F_(a,1,rho)
    x = math.exp(lx)
    d = dist.make_dist(kind, alpha, lam, rho)
    d1 = dist.make_dist(kind, alpha, 1.0, rho)
    y = x * lam ** (1 / rho) if kind == "fweibull" else x * lam ** (-1 / rho)
    assert dist.sf(d, x).value == pytest.approx(dist.sf(d1, y).value, abs=1e-9)


@given(st.floats(0.05, 0.95), st.floats(0.3, 3.0), st.floats(-4.0, 2.0), st.floats(0.01, 1.0))
def test_gumbel_cdf_increasing(alpha, lam, x, dx):
    d = dist.make_dist("fgumbel", alpha, lam)
    assert dist.cdf(d, x + dx).value >= dist.cdf(d, x).value - 1e-12
