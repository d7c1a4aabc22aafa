import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from basn import moments
from basn.core import LocScaleParams, basn2_cdf, locscale_cdf, scbasn2_cdf
from basn.sampling import (SampleConfig, density_ratio, envelope_bound, envelope_holds, make_rng,
                           mixture_weights, sample_basn2, sample_locscale, sample_scbasn2)

DELTA = (3 + 2 * math.sqrt(2)) / 3
# asymptotic one-sample KS critical value at the 1% level, divided by sqrt(n)
KS_1PCT = 1.6276


def ks_ok(x, cdf):
    res = stats.kstest(x, cdf)
    return res.statistic * math.sqrt(len(x)) < KS_1PCT


def test_same_seed_same_draws():
    cfg = SampleConfig(500, seed=7)
    assert np.array_equal(sample_basn2(1.0, cfg), sample_basn2(1.0, cfg))
    assert not np.array_equal(sample_basn2(1.0, cfg), sample_basn2(1.0, SampleConfig(500, seed=8)))


def test_streams_are_distinct_and_reproducible():
    a = make_rng(1, stream=0).random(5)
    b = make_rng(1, stream=1).random(5)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, make_rng(1, stream=0).random(5))


def test_alpha_zero_accepts_every_proposal():
    cfg = SampleConfig(1000, seed=3)
    x, rate = sample_basn2(0.0, cfg, return_rate=True)
    assert rate == 1.0
    assert np.array_equal(x, sample_scbasn2(0.0, cfg))


@given(st.floats(-20, 20))
def test_mixture_weights_sum_to_one(a):
    w = mixture_weights(a)
    assert w.sum() == pytest.approx(1.0, rel=1e-15)
    assert np.all(w >= 0)


@pytest.mark.parametrize("alpha", (0.0, 0.7, 2.0))
def test_scbasn2_draws_fit_their_cdf(alpha):
    x = sample_scbasn2(alpha, SampleConfig(20000, seed=11))
    assert ks_ok(x, lambda z: scbasn2_cdf(z, alpha))


@pytest.mark.parametrize("alpha", (-1.0, 0.5, 3.0))
def test_basn2_draws_fit_their_cdf(alpha):
    x = sample_basn2(alpha, SampleConfig(20000, seed=12))
    assert ks_ok(x, lambda z: basn2_cdf(z, alpha))


def test_sample_moments_agree_with_closed_forms():
    x = sample_basn2(1.0, SampleConfig(200000, seed=5))
    se = math.sqrt(moments.variance(1.0) / len(x))
    assert abs(x.mean() - moments.mean(1.0)) < 5 * se
    assert x.var() == pytest.approx(moments.variance(1.0), rel=0.02)


@pytest.mark.parametrize("alpha", (-3.0, -0.2, 0.5, 1.0, 10.0))
def test_envelope_constant_is_alpha_free(alpha):
    info = envelope_bound(alpha)
    assert info.delta == pytest.approx(DELTA, rel=1e-8)
    assert info.delta >= DELTA
    assert info.argmax_z * alpha == pytest.approx(-math.sqrt(2), abs=1e-6)
    assert envelope_holds(alpha, info.delta)


def test_printed_envelope_constant_fails():
    printed = (1 + 2 * math.sqrt(3)) / 3
    assert not envelope_holds(1.0, printed)
    assert density_ratio(-math.sqrt(2), 1.0) > printed


def test_acceptance_rate_matches_inverse_delta():
    _, rate = sample_basn2(2.0, SampleConfig(100000, seed=9), return_rate=True)
    assert rate == pytest.approx(1 / DELTA, abs=0.01)


def test_locscale_draws():
    p = LocScaleParams(1.5, 3.0, 2.0)
    x = sample_locscale(p, SampleConfig(20000, seed=4))
    assert ks_ok(x, lambda y: locscale_cdf(y, p))


@pytest.mark.parametrize("n, seed", [(0, 1), (-5, 1), (2.5, 1), (10, -1), (10, 2**64)])
def test_config_validation(n, seed):
    with pytest.raises(ValueError):
        SampleConfig(n, seed)
