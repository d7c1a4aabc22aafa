import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from basn.core import DomainError, basn2_pdf, scbasn2_pdf
from basn import moments as m
from conftest import fd, quad

ALPHAS = (-3.0, -1.0, -0.4, 0.0, 0.5, 1.0, 2.0, 6.0)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("n", range(1, 9))
def test_raw_moments_match_quadrature(n, alpha):
    num = quad(lambda z: z**n * basn2_pdf(z, alpha))
    got = m.raw_moment(n, alpha)
    if abs(num) < 1e-12:
        assert abs(got) < 1e-12
    else:
        assert got == pytest.approx(num, rel=1e-8)


@given(st.integers(0, 16), st.floats(-10, 10))
def test_factorial_and_gamma_forms_agree(n, a):
    assert m.raw_moment(n, a) == pytest.approx(m.raw_moment_gamma(n, a), rel=1e-12, abs=1e-300)


@given(st.floats(-10, 10))
def test_low_order_specializations(a):
    a2 = a * a
    assert m.raw_moment(1, a) == pytest.approx(-4 * a / (2 + a2), rel=1e-12, abs=1e-15)
    assert m.raw_moment(2, a) == pytest.approx(5 - 4 / (2 + a2) - 4 / (2 + 3 * a2), rel=1e-12)
    assert m.raw_moment(3, a) == pytest.approx(-12 * a * (2 + 5 * a2) / (4 + 8 * a2 + 3 * a2 * a2),
                                               rel=1e-12, abs=1e-15)
    assert m.raw_moment(4, a) == pytest.approx(35 - 48 / (2 + a2) - 16 / (2 + 3 * a2), rel=1e-12)
    assert m.variance(a) == pytest.approx(m.raw_moment(2, a) - m.raw_moment(1, a) ** 2, rel=1e-12)


@given(st.integers(0, 12), st.floats(-5, 5))
def test_moment_reflection(n, a):
    assert m.raw_moment(n, -a) == pytest.approx((-1) ** n * m.raw_moment(n, a), rel=1e-13, abs=1e-300)


def test_alpha_zero_gives_normal_moments():
    for n in range(0, 13):
        expected = 0.0 if n % 2 else float(math.prod(range(n - 1, 0, -2)))
        assert m.raw_moment(n, 0.0) == pytest.approx(expected, rel=1e-14)


def test_large_alpha_gives_bn4_moments():
    # E[Z^n] under BN(4) is (n+3)!! / 3 for even n
    for n in (2, 4, 6):
        assert m.raw_moment(n, 1e6) == pytest.approx(math.prod(range(n + 3, 0, -2)) / 3, rel=1e-5)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_shape_summary_consistent(alpha):
    s = m.shape_summary(alpha)
    assert s.variance > 0
    assert s.beta2 >= s.beta1 + 1 - 1e-12
    if alpha:
        assert math.copysign(1, s.skewness) == math.copysign(1, -alpha)
        assert s.skewness == pytest.approx(m.signed_skewness(alpha), rel=1e-12)


def test_shape_summary_reference_alpha_one():
    s = m.shape_summary(1.0)
    assert s.mean == pytest.approx(-4 / 3, rel=1e-14)
    assert s.variance == pytest.approx(49 / 45, rel=1e-14)
    mu2, mu3, mu4 = (quad(lambda z: (z + 4 / 3) ** k * basn2_pdf(z, 1.0)) for k in (2, 3, 4))
    assert s.beta1 == pytest.approx(mu3**2 / mu2**3, rel=1e-9)
    assert s.beta2 == pytest.approx(mu4 / mu2**2, rel=1e-9)


def test_extremal_bounds():
    mean = m.extremal_bounds("mean")
    assert mean.max == pytest.approx(math.sqrt(2), abs=1e-9)
    assert mean.argmax == pytest.approx(-math.sqrt(2), abs=1e-5)
    assert mean.min == pytest.approx(-math.sqrt(2), abs=1e-9)
    var = m.extremal_bounds("variance")
    assert var.min == pytest.approx(0.97207, abs=1e-5)
    assert var.max == pytest.approx(5.0, abs=1e-6)
    assert not var.max_attained
    b1 = m.extremal_bounds("beta1")
    assert b1.max == pytest.approx(2.535935, abs=1e-6)
    b2 = m.extremal_bounds("beta2")
    assert b2.max == pytest.approx(6.765384, abs=1e-6)
    assert b2.min == pytest.approx(1.4, abs=1e-6)


@pytest.mark.parametrize("alpha", (-2.0, -0.5, 0.0, 1.0, 3.0))
@pytest.mark.parametrize("t", (-1.5, -0.2, 0.0, 0.7, 2.0))
def test_mgf_matches_quadrature(alpha, t):
    num = quad(lambda z: math.exp(t * z) * basn2_pdf(z, alpha))
    assert m.basn2_mgf(t, alpha) == pytest.approx(num, rel=1e-10)
    sym = quad(lambda z: math.exp(t * z) * scbasn2_pdf(z, alpha))
    assert m.scbasn2_mgf(t, alpha) == pytest.approx(sym, rel=1e-10)


def test_mgf_reference_values():
    assert m.basn2_mgf(0.5, 1.0) == pytest.approx(0.609067294, abs=1e-9)
    assert m.scbasn2_mgf(0.5, 1.0) == pytest.approx(
        (0.0625 + 1.5 + 3 + 2 + 8 + 4) / 15 * math.exp(0.125), rel=1e-14)


@pytest.mark.parametrize("alpha", (-2.0, 0.5, 1.0, 4.0))
def test_mgf_derivatives_are_moments(alpha):
    d1 = fd(lambda t: m.basn2_mgf(t, alpha), 0.0, h=1e-3)
    d2 = fd(lambda t: fd(lambda s: m.basn2_mgf(s, alpha), t, h=1e-3), 0.0, h=1e-3)
    assert d1 == pytest.approx(m.raw_moment(1, alpha), rel=1e-5)
    assert d2 == pytest.approx(m.raw_moment(2, alpha), rel=1e-5)


def test_printed_mgf_coefficient_is_wrong():
    num = quad(lambda z: math.exp(0.5 * z) * basn2_pdf(z, 1.0))
    assert abs(m.basn2_mgf_printed(0.5, 1.0) - num) > 0.5
    d1 = fd(lambda t: m.basn2_mgf_printed(t, 1.0), 0.0, h=1e-3)
    assert abs(d1 - m.raw_moment(1, 1.0)) > 1.0


def test_mgf_at_zero_is_one():
    for a in ALPHAS:
        assert m.basn2_mgf(0.0, a) == pytest.approx(1.0, rel=1e-15)


def test_domain_errors():
    with pytest.raises(DomainError):
        m.raw_moment(3.5, 1.0)
    with pytest.raises(DomainError):
        m.raw_moment(-1, 1.0)
    with pytest.raises(DomainError):
        m.raw_moment(m.MAX_MOMENT_ORDER + 1, 1.0)
    with pytest.raises(DomainError):
        m.basn2_mgf(m.MAX_MGF_T + 1, 1.0)
    with pytest.raises(DomainError):
        m.extremal_bounds("median")


def test_mgf_vectorized():
    t = np.linspace(-1, 1, 5)
    assert m.basn2_mgf(t, 1.0).shape == (5,)
