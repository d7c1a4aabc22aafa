"""Moment and maximum-likelihood estimation for the location-scale BASN2 family,
baseline models, observed information and model comparison.

Parameter vectors are always ordered ``(alpha, mu, sigma)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize, special, stats

from . import moments as _mom
from .core import LOG_SQRT_2PI, LocScaleParams, locscale_logpdf

MIN_OBSERVATIONS = 8
LR_LEVEL = 0.99
MOM_ALPHA_RANGE = 50.0
MULTISTART_ALPHAS = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


class EstimationError(RuntimeError):
    """Estimation could not produce a valid fit."""


class NotPositiveDefinite(np.linalg.LinAlgError):
    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


# -- data ----------------------------------------------------------------------

@dataclass(frozen=True)
class Dataset:
    name: str
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(v)):
            raise ValueError(f"dataset {self.name!r} contains non-finite values")
        if v.size < MIN_OBSERVATIONS:
            raise ValueError(f"dataset {self.name!r} needs at least {MIN_OBSERVATIONS} values, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class SampleMoments:
    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        if not self.m2 - self.m1**2 > 0:
            raise EstimationError("sample variance is zero; moments are degenerate")

    @property
    def variance(self) -> float:
        return self.m2 - self.m1**2


def sample_moments(d: Dataset) -> SampleMoments:
    y = d.values
    n = d.n
    return SampleMoments(*(math.fsum(y**k) / n for k in (1, 2, 3)))


# -- fit records ----------------------------------------------------------------

@dataclass
class FitResult:
    model: str
    params: dict[str, float]
    loglik: float
    n: int
    k: int
    method: str
    converged: bool = True
    iterations: int = 0
    vcov: np.ndarray | None = None
    details: dict = field(default_factory=dict)

    @property
    def aic(self) -> float:
        return 2.0 * self.k - 2.0 * self.loglik

    @property
    def bic(self) -> float:
        return self.k * math.log(self.n) - 2.0 * self.loglik

    def locscale(self) -> LocScaleParams:
        return LocScaleParams(self.params["alpha"], self.params["mu"], self.params["sigma"])

    def to_dict(self) -> dict:
        out = {
            "model": self.model,
            "method": self.method,
            "params": dict(self.params),
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "n": self.n,
            "k": self.k,
            "converged": self.converged,
            "iterations": self.iterations,
            "vcov": None if self.vcov is None else self.vcov.tolist(),
        }
        if self.details:
            out["details"] = self.details
        return out


# -- BASN2 likelihood -----------------------------------------------------------

def basn2_loglik(d: Dataset, p: LocScaleParams) -> float:
    """Total log-likelihood written out term by term."""
    a, mu, s = p.as_tuple()
    z = (d.values - mu) / s
    n = d.n
    b = 1.0 - a * z
    return (2.0 * math.fsum(np.log(b * b + 1.0))
            - n * math.log(2.0 + a * a) - n * math.log(2.0 + 3.0 * a * a)
            - n * math.log(s) - n * LOG_SQRT_2PI - 0.5 * math.fsum(z * z))


def _basn2_negll(theta, y):
    a, mu, s = theta
    if not s > 0:
        return np.inf
    z = (y - mu) / s
    b = 1.0 - a * z
    n = y.size
    return -(2.0 * np.sum(np.log1p(b * b)) - n * (math.log(2.0 + a * a) + math.log(2.0 + 3.0 * a * a))
             - n * math.log(s) - n * LOG_SQRT_2PI - 0.5 * np.sum(z * z))


def basn2_scores(y, p: LocScaleParams) -> np.ndarray:
    """Per-observation score vectors, shape ``(n, 3)`` in order ``(alpha, mu, sigma)``."""
    a, mu, s = p.as_tuple()
    z = (np.asarray(y, dtype=float) - mu) / s
    b = 1.0 - a * z
    g = 1.0 + b * b
    dc = (16.0 * a + 12.0 * a**3) / (4.0 + 8.0 * a * a + 3.0 * a**4)
    s_alpha = -4.0 * b * z / g - dc
    s_mu = 4.0 * a * b / (s * g) + z / s
    s_sigma = 4.0 * a * b * z / (s * g) - 1.0 / s + z * z / s
    return np.column_stack([s_alpha, s_mu, s_sigma])


def basn2_hessian(y, p: LocScaleParams) -> np.ndarray:
    """Hessian of the total log-likelihood.

    With ``z = (y - mu)/sigma``, ``b = 1 - alpha z`` and ``h(b) = 2 log(1 + b^2)``,
    each term is ``h'' b_i b_j + h' b_ij`` plus the normal-kernel and
    constant parts.
    """
    a, mu, s = p.as_tuple()
    z = (np.asarray(y, dtype=float) - mu) / s
    b = 1.0 - a * z
    g = 1.0 + b * b
    h1 = 4.0 * b / g
    h2 = 4.0 * (1.0 - b * b) / g**2
    # first and second partials of b
    db = [-z, np.full_like(z, a / s), a * z / s]
    ddb = {
        (0, 0): np.zeros_like(z), (0, 1): np.full_like(z, 1.0 / s), (0, 2): z / s,
        (1, 1): np.zeros_like(z), (1, 2): np.full_like(z, -a / s**2), (2, 2): -2.0 * a * z / s**2,
    }
    # partials of z for the -z^2/2 term
    dz = [np.zeros_like(z), np.full_like(z, -1.0 / s), -z / s]
    ddz = {
        (0, 0): 0.0, (0, 1): 0.0, (0, 2): 0.0,
        (1, 1): 0.0, (1, 2): 1.0 / s**2, (2, 2): 2.0 * z / s**2,
    }
    D = 4.0 + 8.0 * a * a + 3.0 * a**4
    c2 = (16.0 + 36.0 * a * a) / D - ((16.0 * a + 12.0 * a**3) / D) ** 2
    n = z.size
    H = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            term = h2 * db[i] * db[j] + h1 * ddb[(i, j)] - (dz[i] * dz[j] + z * ddz[(i, j)])
            H[i, j] = H[j, i] = float(np.sum(term))
    H[0, 0] -= n * c2
    H[2, 2] += n / s**2
    return H


def observed_info(d: Dataset, p: LocScaleParams) -> np.ndarray:
    """Negative Hessian of the total log-likelihood, ``(alpha, mu, sigma)`` order."""
    return -basn2_hessian(d.values, p)


def observed_info_fd(d: Dataset, p: LocScaleParams, rel_step: float = 1e-5) -> np.ndarray:
    """Central finite differences of the analytic total score."""
    theta = np.array(p.as_tuple())
    H = np.empty((3, 3))
    for j in range(3):
        h = rel_step * max(1.0, abs(theta[j]))
        up, dn = theta.copy(), theta.copy()
        up[j] += h
        dn[j] -= h
        g_up = basn2_scores(d.values, LocScaleParams(*up)).sum(axis=0)
        g_dn = basn2_scores(d.values, LocScaleParams(*dn)).sum(axis=0)
        H[:, j] = (g_up - g_dn) / (2.0 * h)
    return -0.5 * (H + H.T)


def vcov(info: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive definite information matrix."""
    info = np.asarray(info, dtype=float)
    if info.shape[0] != info.shape[1] or not np.allclose(info, info.T, rtol=1e-10, atol=1e-12):
        raise NotPositiveDefinite("information matrix is not symmetric", float("nan"))
    sym = 0.5 * (info + info.T)
    eig = np.linalg.eigvalsh(sym)
    cond = float(eig.max() / eig.min()) if eig.min() > 0 else float("inf")
    try:
        factor = linalg.cho_factor(sym)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(f"information matrix is not positive definite (eigenvalues {eig})",
                                  cond) from None
    out = linalg.cho_solve(factor, np.eye(sym.shape[0]))
    return 0.5 * (out + out.T)


# -- method of moments ---------------------------------------------------------------

def _mom_parts(alpha: float, sm: SampleMoments):
    ez1, ez2, ez3 = (_mom.raw_moment(k, alpha) for k in (1, 2, 3))
    sigma2 = sm.variance / _mom.variance(alpha)
    sigma = math.sqrt(sigma2)
    mu = sm.m1 - sigma * ez1
    m3 = mu**3 + 3 * mu * mu * sigma * ez1 + 3 * mu * sigma2 * ez2 + sigma**3 * ez3
    return mu, sigma, m3


def mom_residual(alpha: float, sm: SampleMoments) -> float:
    """``m3 - E[Y^3]`` with ``mu`` and ``sigma`` eliminated through the first two moments."""
    return sm.m3 - _mom_parts(alpha, sm)[2]


def mom_candidates(sm: SampleMoments, alpha_range: float = MOM_ALPHA_RANGE,
                   grid_points: int = 20001) -> list[LocScaleParams]:
    """All moment solutions with ``|alpha| <= alpha_range``.

    The third-moment residual is scanned for sign changes on a grid that is
    dense near zero, and each bracket is polished by Brent's method.
    """
    half = np.concatenate([np.linspace(0.0, 5.0, grid_points // 2),
                           np.geomspace(5.0, alpha_range, grid_points // 4)[1:]])
    grid = np.concatenate([-half[::-1], half[1:]])
    res = np.array([mom_residual(a, sm) for a in grid])
    scale = max(abs(sm.m3), sm.variance**1.5, 1e-300)
    roots = []
    for i in range(len(grid) - 1):
        r0, r1 = res[i], res[i + 1]
        if r0 == 0.0:
            roots.append(float(grid[i]))
        elif r0 * r1 < 0:
            roots.append(optimize.brentq(mom_residual, grid[i], grid[i + 1], args=(sm,),
                                         xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    if res[-1] == 0.0:
        roots.append(float(grid[-1]))
    # near-tangent residual minima count as roots only if they actually vanish
    for i in range(1, len(grid) - 1):
        if abs(res[i]) < abs(res[i - 1]) and abs(res[i]) < abs(res[i + 1]) and abs(res[i]) < 1e-12 * scale:
            roots.append(float(grid[i]))
    out = []
    for a in sorted(set(roots)):
        mu, sigma, _ = _mom_parts(a, sm)
        if sigma > 0 and math.isfinite(sigma):
            out.append(LocScaleParams(a, mu, sigma))
    return out


def mom_fit(d: Dataset) -> FitResult:
    """Method-of-moments fit; among several moment solutions the most likely one wins."""
    sm = sample_moments(d)
    cands = mom_candidates(sm)
    if not cands:
        g1 = (sm.m3 - 3 * sm.m1 * sm.m2 + 2 * sm.m1**3) / sm.variance**1.5
        raise EstimationError(
            f"no moment solution with |alpha| <= {MOM_ALPHA_RANGE}; sample skewness {g1:.4f} "
            f"is outside the attainable range +/-{math.sqrt(_mom.extremal_bounds('beta1').max):.4f}")
    scored = [(basn2_loglik(d, p), p) for p in cands]
    ll, best = max(scored, key=lambda t: t[0])
    return FitResult("basn2", {"alpha": best.alpha, "mu": best.mu, "sigma": best.sigma}, ll,
                     d.n, 3, "mom", details={"candidates": [list(p.as_tuple()) for p in cands]})


# -- optimisation helpers ------------------------------------------------------------

def _nelder_mead(negll, starts, xatol=1e-9, rel_fatol=1e-14, maxiter=20000, keep=3):
    """Coarse Nelder-Mead from every start, then tight runs from the best ``keep``.

    The function tolerance is relative to the objective's magnitude; an
    absolute tolerance below the float spacing of a large log-likelihood
    could never be met.
    """
    opts = {"maxiter": maxiter, "maxfev": maxiter, "adaptive": True}
    coarse = []
    total_it = 0
    for x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        f0 = negll(x0)
        if not np.isfinite(f0):
            continue
        res = optimize.minimize(negll, x0, method="Nelder-Mead",
                                options={**opts, "xatol": 1e-4, "fatol": 1e-8 * max(1.0, abs(f0))})
        total_it += res.nit
        coarse.append(res)
    if not coarse:
        raise EstimationError("no finite starting point")
    coarse.sort(key=lambda r: r.fun)
    best = None
    for cand in coarse[:keep]:
        fatol = rel_fatol * max(1.0, abs(cand.fun))
        res = optimize.minimize(negll, cand.x, method="Nelder-Mead",
                                options={**opts, "xatol": xatol, "fatol": fatol})
        # one restart guards against a collapsed simplex
        res2 = optimize.minimize(negll, res.x, method="Nelder-Mead",
                                 options={**opts, "xatol": xatol, "fatol": fatol})
        total_it += res.nit + res2.nit
        if res2.fun <= res.fun:
            res = res2
        if best is None or res.fun < best.fun:
            best = res
    return best, total_it


def _newton_polish(y, theta, max_iter=50):
    """Damped Newton steps on the analytic score; never lowers the likelihood."""
    theta = np.asarray(theta, dtype=float)
    f = _basn2_negll(theta, y)
    for _ in range(max_iter):
        p = LocScaleParams(*theta)
        g = basn2_scores(y, p).sum(axis=0)
        if np.linalg.norm(g) < 1e-10 * y.size:
            break
        H = basn2_hessian(y, p)
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            break
        if g @ step <= 0:
            # not an ascent direction; the Hessian is not negative definite here
            break
        t = 1.0
        while t > 1e-8:
            cand = theta + t * step
            fc = _basn2_negll(cand, y)
            if fc <= f:
                theta, f = cand, fc
                break
            t *= 0.5
        else:
            break
    return theta


def _moment_start(alpha: float, sm: SampleMoments) -> tuple[float, float, float]:
    mu, sigma, _ = _mom_parts(alpha, sm)
    return (alpha, mu, sigma)


def mle_fit(d: Dataset, init: LocScaleParams | None = None, score_tol: float = 1e-6) -> FitResult:
    """Maximum-likelihood fit of ``BASN2(alpha, mu, sigma)``.

    Nelder-Mead from the moment solutions and a fixed set of alpha starts
    (each with either moment-matched or ``(m1, sd)`` location and scale),
    followed by Newton polishing on the analytic score.  ``converged``
    requires the score norm divided by ``n`` to fall below ``score_tol``.
    """
    y = d.values
    sm = sample_moments(d)
    sd = math.sqrt(sm.variance)
    starts = []
    if init is not None:
        starts.append(init.as_tuple())
    try:
        starts.extend(p.as_tuple() for p in mom_candidates(sm))
    except EstimationError:
        pass
    for a in MULTISTART_ALPHAS:
        starts.append((a, sm.m1, sd))
        starts.append(_moment_start(a, sm))
    starts.append((0.0, sm.m1, sd))
    best, nit = _nelder_mead(lambda th: _basn2_negll(th, y), starts)
    theta = _newton_polish(y, best.x)
    p = LocScaleParams(*map(float, theta))
    grad = basn2_scores(y, p).sum(axis=0)
    gnorm = float(np.linalg.norm(grad))
    info = observed_info(d, p)
    try:
        cov = vcov(info)
    except NotPositiveDefinite:
        cov = None
    return FitResult("basn2", {"alpha": p.alpha, "mu": p.mu, "sigma": p.sigma}, basn2_loglik(d, p),
                     d.n, 3, "mle", converged=bool(gnorm / d.n < score_tol), iterations=nit, vcov=cov,
                     details={"score_norm": gnorm})


# -- baseline models ------------------------------------------------------------------

def _sn_logpdf(y, lam, mu, sigma):
    z = (y - mu) / sigma
    return math.log(2.0) - LOG_SQRT_2PI - 0.5 * z * z + special.log_ndtr(lam * z) - math.log(sigma)


def _asn_logpdf(y, alpha, mu, sigma):
    z = (y - mu) / sigma
    b = 1.0 - alpha * z
    return np.log1p(b * b) - math.log(2.0 + alpha * alpha) - LOG_SQRT_2PI - 0.5 * z * z - math.log(sigma)


def _logistic_logpdf(y, mu, beta):
    return stats.logistic.logpdf(y, loc=mu, scale=beta)


def _fit_normal(d: Dataset) -> FitResult:
    y = d.values
    mu = math.fsum(y) / d.n
    sigma = math.sqrt(math.fsum((y - mu) ** 2) / d.n)
    ll = float(np.sum(stats.norm.logpdf(y, mu, sigma)))
    return FitResult("normal", {"mu": mu, "sigma": sigma}, ll, d.n, 2, "closed_form")


def _fit_laplace(d: Dataset) -> FitResult:
    y = d.values
    mu = float(np.median(y))
    beta = math.fsum(np.abs(y - mu)) / d.n
    ll = float(np.sum(stats.laplace.logpdf(y, mu, beta)))
    return FitResult("laplace", {"mu": mu, "beta": beta}, ll, d.n, 2, "closed_form")


def _positive_guard(func, scale_index):
    def wrapped(theta):
        if not theta[scale_index] > 0:
            return np.inf
        val = func(theta)
        return val if np.isfinite(val) else np.inf
    return wrapped


def _fit_logistic(d: Dataset) -> FitResult:
    y = d.values
    sm = sample_moments(d)
    negll = _positive_guard(lambda th: -np.sum(_logistic_logpdf(y, th[0], th[1])), 1)
    beta0 = math.sqrt(3.0 * sm.variance) / math.pi
    res, nit = _nelder_mead(negll, [(sm.m1, beta0), (float(np.median(y)), beta0)])
    return FitResult("logistic", {"mu": float(res.x[0]), "beta": float(res.x[1])}, -float(res.fun),
                     d.n, 2, "mle", converged=bool(res.success), iterations=nit)


def _fit_sn(d: Dataset) -> FitResult:
    y = d.values
    sm = sample_moments(d)
    sd = math.sqrt(sm.variance)
    negll = _positive_guard(lambda th: -np.sum(_sn_logpdf(y, *th)), 2)
    starts = []
    for lam in (-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0):
        dl = lam / math.sqrt(1 + lam * lam)
        omega = sd / math.sqrt(1 - 2 * dl * dl / math.pi)
        starts.append((lam, sm.m1 - omega * dl * math.sqrt(2 / math.pi), omega))
    res, nit = _nelder_mead(negll, starts)
    lam, mu, sigma = map(float, res.x)
    return FitResult("sn", {"lambda": lam, "mu": mu, "sigma": sigma}, -float(res.fun), d.n, 3, "mle",
                     converged=bool(res.success), iterations=nit)


def _fit_asn(d: Dataset) -> FitResult:
    y = d.values
    sm = sample_moments(d)
    sd = math.sqrt(sm.variance)
    negll = _positive_guard(lambda th: -np.sum(_asn_logpdf(y, *th)), 2)
    starts = [(0.0, sm.m1, sd)]
    for a in MULTISTART_ALPHAS:
        # ASN(alpha) has mean -2 alpha/(2 + alpha^2) and E[Z^2] = 1 + 4 alpha^2/(2 + alpha^2)
        ez = -2.0 * a / (2.0 + a * a)
        var = 1.0 + 4.0 * a * a / (2.0 + a * a) - ez * ez
        sigma = sd / math.sqrt(var)
        starts.append((a, sm.m1 - sigma * ez, sigma))
        starts.append((a, sm.m1, sd))
    res, nit = _nelder_mead(negll, starts)
    a, mu, sigma = map(float, res.x)
    return FitResult("asn", {"alpha": a, "mu": mu, "sigma": sigma}, -float(res.fun), d.n, 3, "mle",
                     converged=bool(res.success), iterations=nit)


BASELINES = {
    "normal": _fit_normal,
    "laplace": _fit_laplace,
    "logistic": _fit_logistic,
    "sn": _fit_sn,
    "asn": _fit_asn,
}
MODELS = ("basn2",) + tuple(BASELINES)


def baseline_fit(d: Dataset, model: str) -> FitResult:
    try:
        fitter = BASELINES[model]
    except KeyError:
        raise ValueError(f"unknown baseline model {model!r}; choose from {sorted(BASELINES)}") from None
    return fitter(d)


def fit_model(d: Dataset, model: str, method: str = "mle") -> FitResult:
    if model == "basn2":
        if method == "mle":
            return mle_fit(d)
        if method == "mom":
            return mom_fit(d)
        raise ValueError(f"unknown method {method!r}")
    if method == "mom":
        raise ValueError("method 'mom' is only available for basn2")
    return baseline_fit(d, model)


# -- likelihood ratio test and comparison ------------------------------------------------

@dataclass(frozen=True)
class LrTestResult:
    statistic: float
    loglik_null: float
    loglik_alt: float
    critical_1pct: float = float(stats.chi2.ppf(LR_LEVEL, 1))

    @property
    def reject_null(self) -> bool:
        return self.statistic > self.critical_1pct

    @property
    def p_value(self) -> float:
        return float(stats.chi2.sf(max(self.statistic, 0.0), 1))

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "critical_1pct": self.critical_1pct,
                "reject_null": self.reject_null, "p_value": self.p_value,
                "loglik_null": self.loglik_null, "loglik_alt": self.loglik_alt}


def lr_test_normal_vs_basn2(d: Dataset) -> LrTestResult:
    """LR test of ``alpha = 0`` (normal) against BASN2 with chi-square(1) reference."""
    null = _fit_normal(d)
    alt = mle_fit(d)
    if not alt.converged:
        raise EstimationError("BASN2 fit did not converge")
    return LrTestResult(2.0 * (alt.loglik - null.loglik), null.loglik, alt.loglik)


@dataclass
class ComparisonRow:
    model: str
    fit: FitResult | None
    error: str | None = None

    def to_dict(self) -> dict:
        if self.fit is None:
            return {"model": self.model, "error": self.error}
        return self.fit.to_dict()


@dataclass
class ComparisonReport:
    dataset: str
    rows: list[ComparisonRow]

    @property
    def ranking(self) -> list[str]:
        return [r.model for r in self.rows if r.fit is not None]

    def to_dict(self) -> dict:
        return {"dataset": self.dataset, "ranking": self.ranking, "rows": [r.to_dict() for r in self.rows]}


def compare_models(d: Dataset, models) -> ComparisonReport:
    """Fit each model and sort by AIC, then BIC, then name; failed fits go last."""
    models = list(models)
    if not models:
        raise ValueError("model list is empty")
    rows = []
    for m in models:
        try:
            rows.append(ComparisonRow(m, fit_model(d, m)))
        except (EstimationError, ValueError, np.linalg.LinAlgError) as exc:
            rows.append(ComparisonRow(m, None, str(exc)))
    rows.sort(key=lambda r: (0, r.fit.aic, r.fit.bic, r.model) if r.fit else (1, 0.0, 0.0, r.model))
    return ComparisonReport(d.name, rows)


def normal_loglik(d: Dataset, mu: float, sigma: float) -> float:
    return float(np.sum(stats.norm.logpdf(d.values, mu, sigma)))


def basn2_loglik_via_pdf(d: Dataset, p: LocScaleParams) -> float:
    return math.fsum(np.atleast_1d(locscale_logpdf(d.values, p)))
