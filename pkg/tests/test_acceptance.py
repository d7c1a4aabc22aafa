"""Acceptance criteria 1-12.  Each test records a status line printed in the terminal summary."""

import math
from contextlib import contextmanager

import numpy as np
import pytest
from scipy import integrate, stats

from basn import audit, extensions as ext, inference, moments
from basn.core import (LocScaleParams, basn2_cdf, basn2_mode_report, basn2_odd_part, basn2_pdf,
                       bn_pdf, scbasn2_pdf)
from basn.datasets import load_bundled
from basn.inference import Dataset, SampleMoments, compare_models, lr_test_normal_vs_basn2, mle_fit
from basn.lifetime import hazard_shape, hbasn2_hazard, hbasn2_pdf, hbasn2_survival
from basn.sampling import SampleConfig, envelope_bound, envelope_holds, mixture_weights, sample_basn2
from basn.sampling import sample_locscale
from conftest import ACCEPTANCE, fd, quad, require_bundled

NINE_ALPHAS = (-5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0)


@contextmanager
def criterion(n):
    """Record PASS, FAIL or SKIP for criterion ``n``; the yielded list collects detail notes."""
    notes = []
    try:
        yield notes
    except pytest.skip.Exception as exc:
        ACCEPTANCE[n] = ("SKIP", f"NOT VERIFIED: {exc.msg}")
        raise
    except BaseException as exc:
        ACCEPTANCE[n] = ("FAIL", "; ".join(notes + [f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"]))
        raise
    else:
        ACCEPTANCE[n] = ("PASS", "; ".join(notes))


def test_01_normalization():
    with criterion(1) as notes:
        err = max(abs(quad(lambda z: basn2_pdf(z, a)) - 1.0) for a in NINE_ALPHAS)
        assert err <= 1e-8
        notes.append(f"basn2 max err {err:.1e}")
        err = max(abs(quad(lambda t: hbasn2_pdf(t, a), 0.0) - 1.0) for a in NINE_ALPHAS)
        assert err <= 1e-8
        notes.append(f"half-basn2 {err:.1e}")
        check = audit.check_extension_normalization()
        assert check.passed, check
        notes.append(f"extensions {check.worst_error:.1e} over {check.cases} cases")


def test_02_moment_oracle():
    with criterion(2) as notes:
        worst = 0.0
        for a in NINE_ALPHAS:
            for n in range(1, 9):
                num = quad(lambda z: z**n * basn2_pdf(z, a))
                closed = moments.raw_moment(n, a)
                err = abs(closed - num) if abs(num) < 1e-12 else abs(closed - num) / abs(num)
                worst = max(worst, err)
        assert worst <= 1e-8
        notes.append(f"n<=8 max rel err {worst:.1e}")
        worst = 0.0
        for a in NINE_ALPHAS + (0.3, 1.7, 10.0):
            m1, m2, m3, m4 = (moments.raw_moment(k, a) for k in (1, 2, 3, 4))
            a2 = a * a
            d = (2 + a2) * (2 + 3 * a2)
            ez3 = -12 * a * (2 + 5 * a2) / d
            ez4 = 3 * (4 + 40 * a2 + 35 * a2**2) / d
            for closed, assembled in ((moments.mean(a), m1), (moments.variance(a), m2 - m1 * m1),
                                      (ez3, m3), (ez4, m4)):
                worst = max(worst, abs(closed - assembled) / max(1.0, abs(assembled)))
        assert worst <= 1e-12
        notes.append(f"specializations {worst:.1e}")


def test_03_cdf_and_mgf_consistency():
    with criterion(3) as notes:
        worst = 0.0
        for a in (-2.0, -0.5, 0.0, 1.0, 3.0):
            for z in np.linspace(-4, 4, 17):
                worst = max(worst, abs(fd(lambda x: basn2_cdf(x, a), z, 1e-3) - basn2_pdf(z, a)))
        assert worst <= 1e-6
        notes.append(f"cdf' vs pdf {worst:.1e}")
        worst = 0.0
        for a in (-2.0, -0.5, 1.0, 3.0):
            mgf = lambda t: moments.basn2_mgf(t, a)
            m1 = fd(mgf, 0.0, 1e-3)
            m2 = fd(lambda t: fd(mgf, t, 1e-3), 0.0, 1e-3)
            worst = max(worst, abs(m1 - moments.raw_moment(1, a)) / abs(moments.raw_moment(1, a)),
                        abs(m2 - moments.raw_moment(2, a)) / moments.raw_moment(2, a))
        assert worst <= 1e-5
        notes.append(f"mgf derivatives {worst:.1e}")
        a, t = 1.0, 0.5
        num = quad(lambda z: math.exp(t * z) * basn2_pdf(z, a))
        good = abs(moments.basn2_mgf(t, a) - num) / num
        bad = abs(moments.basn2_mgf_printed(t, a) - num) / num
        assert good <= 1e-10 and bad > 0.1
        notes.append(f"-12 coefficient rel err {good:.1e}, -34 rel err {bad:.2f}")


def test_04_bounds():
    with criterion(4) as notes:
        ext_mean = moments.extremal_bounds("mean")
        top = max(abs(ext_mean.min), abs(ext_mean.max))
        assert top == pytest.approx(1.41421, abs=1e-5)
        assert abs(top - math.sqrt(2)) <= 1e-6
        b1 = moments.extremal_bounds("beta1").max
        b2 = moments.extremal_bounds("beta2").max
        assert b1 == pytest.approx(2.536, abs=0.01)
        assert b2 == pytest.approx(6.768, abs=0.01)
        notes.append(f"max|E| {top:.8f}, beta1 max {b1:.6f}, beta2 max {b2:.6f}")


def grid_mode_count(a):
    z = np.linspace(-8, 8, 160001)
    f = basn2_pdf(z, a)
    return int(np.sum((f[1:-1] > f[:-2]) & (f[1:-1] > f[2:])))


def test_05_modality():
    with criterion(5) as notes:
        for a, want in ((0.0, 1), (0.5, 1), (1.5, 2), (2.0, 2)):
            assert basn2_mode_report(a).count == want
            assert grid_mode_count(a) == want
        notes.append("1 mode at 0, 0.5; 2 modes at 1.5, 2 (grid scan agrees)")


def test_06_sampler():
    with criterion(6) as notes:
        n = 200_000
        crit = stats.kstwo.ppf(0.99, n)
        for a in (0.0, 1.0, -2.0):
            y, rate = sample_basn2(a, SampleConfig(n, seed=606), return_rate=True)
            ks = stats.kstest(y, lambda x: basn2_cdf(x, a)).statistic
            info = envelope_bound(a)
            assert ks < crit
            assert abs(rate - info.acceptance_rate_expected) <= 0.01
            assert envelope_holds(a, info.delta, points=100_000)
            notes.append(f"a={a:g} KS {ks:.5f}<{crit:.5f} rate {rate:.4f} vs {1 / info.delta:.4f}")


def test_07_bmi_fit():
    with criterion(7) as notes:
        require_bundled("bmi")
        d = load_bundled("bmi")
        fit = mle_fit(d)
        p = fit.params
        notes.append(f"alpha {p['alpha']:.4f} mu {p['mu']:.4f} sigma {p['sigma']:.4f} "
                     f"loglik {fit.loglik:.4f} AIC {fit.aic:.4f}")
        assert p["alpha"] == pytest.approx(0.971, abs=0.05)
        assert p["mu"] == pytest.approx(26.482, abs=0.05)
        assert p["sigma"] == pytest.approx(2.706, abs=0.05)
        assert fit.loglik == pytest.approx(-484.773, abs=0.05)
        assert fit.aic == pytest.approx(975.546, abs=0.1)
        lr = lr_test_normal_vs_basn2(d)
        notes.append(f"normal loglik {lr.loglik_null:.4f} LR {lr.statistic:.4f}")
        assert lr.loglik_null == pytest.approx(-498.668, abs=0.01)
        assert lr.statistic == pytest.approx(27.79, abs=0.1)
        assert lr.statistic > 6.635


def test_08_lakes_fit():
    with criterion(8) as notes:
        require_bundled("lakes")
        d = load_bundled("lakes")
        rep = compare_models(d, ["normal", "laplace", "asn", "basn2"])
        fit = next(r.fit for r in rep.rows if r.model == "basn2")
        notes.append(f"loglik {fit.loglik:.4f} AIC {fit.aic:.4f} BIC {fit.bic:.4f}")
        assert fit.loglik == pytest.approx(-226.228, abs=0.05)
        assert fit.aic == pytest.approx(458.455, abs=0.1)
        assert fit.bic == pytest.approx(465.158, abs=0.1)
        lr = lr_test_normal_vs_basn2(d)
        notes.append(f"LR {lr.statistic:.4f} ranking {rep.ranking}")
        assert lr.statistic == pytest.approx(54.742, abs=0.1)
        assert rep.ranking == ["basn2", "asn", "laplace", "normal"]


def test_09_vcov():
    with criterion(9) as notes:
        require_bundled("bmi", "lakes")
        for name in ("lakes", "bmi"):
            fit = mle_fit(load_bundled(name))
            printed = audit.printed_vcov(name)
            ratio = np.abs(fit.vcov - printed) / np.abs(printed)
            notes.append(f"{name} worst rel diff {ratio.max():.3f}")
            assert np.all(ratio <= 0.25)


def test_10_method_of_moments():
    with criterion(10) as notes:
        worst = 0.0
        for a, mu, s in ((1.0, 0.0, 1.0), (-2.0, 3.0, 0.5), (0.4, -1.0, 2.0)):
            p = LocScaleParams(a, mu, s)
            ez = [moments.raw_moment(k, a) for k in (1, 2, 3)]
            m1 = mu + s * ez[0]
            m2 = mu**2 + 2 * mu * s * ez[0] + s**2 * ez[1]
            m3 = mu**3 + 3 * mu**2 * s * ez[0] + 3 * mu * s**2 * ez[1] + s**3 * ez[2]
            cands = inference.mom_candidates(SampleMoments(m1, m2, m3))
            best = min(cands, key=lambda c: abs(c.alpha - a))
            worst = max(worst, float(np.max(np.abs(np.array(best.as_tuple()) - np.array(p.as_tuple())))))
        assert worst <= 1e-8
        notes.append(f"exact round trip {worst:.1e}")
        truth = LocScaleParams(1.0, 0.0, 1.0)
        fit = inference.mom_fit(Dataset("mom", sample_locscale(truth, SampleConfig(100_000, seed=1010))))
        est = np.array([fit.params[k] for k in ("alpha", "mu", "sigma")])
        dev = float(np.max(np.abs(est - np.array(truth.as_tuple()))))
        assert dev <= 0.1
        notes.append(f"n=1e5 recovery max dev {dev:.4f}")


def test_11_hazard():
    with criterion(11) as notes:
        for a, want in ((-1.0, "increasing"), (0.0, "increasing"), (1.0, "bathtub")):
            assert hazard_shape(a, t_max=6.0).shape == want
        worst = 0.0
        for a in (-1.0, 0.0, 1.0, 2.5):
            for t in np.linspace(0, 8, 33):
                f = hbasn2_pdf(t, a)
                worst = max(worst, abs(hbasn2_hazard(t, a) * hbasn2_survival(t, a) - f) / max(f, 1e-300))
        assert worst <= 1e-10
        notes.append(f"shapes match; h*S=f rel err {worst:.1e}")


def test_12_property_suites():
    with criterion(12) as notes:
        z = np.linspace(-6, 6, 121)
        for a in NINE_ALPHAS:
            # reflection
            assert np.allclose(basn2_pdf(z, -a), basn2_pdf(-z, a), rtol=1e-13, atol=0)
            assert np.allclose(basn2_cdf(z, -a), 1 - basn2_cdf(-z, a), rtol=1e-12, atol=1e-15)
            # even/odd decomposition and mixture form of the even part
            assert np.allclose(basn2_pdf(z, a), scbasn2_pdf(z, a) + basn2_odd_part(z, a), rtol=1e-12, atol=1e-300)
            w = mixture_weights(a)
            mix = w[0] * stats.norm.pdf(z) + w[1] * bn_pdf(z, 2) + w[2] * bn_pdf(z, 4)
            assert np.allclose(scbasn2_pdf(z, a), mix, rtol=1e-12, atol=1e-300)
        notes.append("reflection, decomposition")
        assert np.allclose(basn2_pdf(z, 0.0), stats.norm.pdf(z), rtol=1e-14)
        assert np.allclose(basn2_pdf(z, 1e7), bn_pdf(z, 4), rtol=1e-5)
        assert np.allclose(basn2_pdf(z, -1e7), bn_pdf(z, 4), rtol=1e-5)
        notes.append("alpha limits")
        for a in (-1.5, 0.7, 2.0):
            assert np.allclose(ext.tpbasn2_pdf(z, ext.TwoAlphaParams(a, 0.0)), basn2_pdf(z, a), rtol=1e-12)
            assert np.allclose(ext.babsn2_pdf(z, ext.AlphaBetaParams(a, 0.0)), basn2_pdf(z, a), rtol=1e-12)
            assert np.allclose(ext.gbasn2_pdf(z, ext.GenParams(a, 0.0)), basn2_pdf(z, a), rtol=1e-12)
            assert np.allclose(ext.gbasn2_pdf(z, ext.GenParams(0.0, a)), stats.skewnorm.pdf(z, a), rtol=1e-9)
            marg = quad(lambda y: ext.bbasn2_pdf(0.8, y, ext.BivariateParams(a, 0.0, 0.4)))
            assert marg == pytest.approx(basn2_pdf(0.8, a), rel=1e-9)
            pos = z[z > 0]
            assert np.allclose(ext.lbasn2_pdf(np.exp(pos), a), basn2_pdf(pos, a) / np.exp(pos), rtol=1e-12)
        p = ext.BivariateParams(0.0, 0.0, 0.3)
        ref = stats.multivariate_normal([0, 0], [[1, 0.3], [0.3, 1]]).pdf([0.5, -0.2])
        assert ext.bbasn2_pdf(0.5, -0.2, p) == pytest.approx(ref, rel=1e-12)
        assert integrate.quad(lambda t: hbasn2_pdf(t, 0.0), 0, np.inf)[0] == pytest.approx(1.0, abs=1e-10)
        notes.append("extension special cases")
