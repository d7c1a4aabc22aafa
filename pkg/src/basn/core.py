"""Densities, cdfs, quantiles and modes of the BASN2(alpha) family.

BASN2(alpha) has density

    f(z; a) = ((1 - a z)^2 + 1)^2 phi(z) / d(a),    d(a) = (2 + a^2)(2 + 3 a^2)

so every quantity here is a quartic polynomial against the standard normal
kernel.  Functions accept scalars or arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
SQRT_HALF_PI = math.sqrt(0.5 * math.pi)
MAX_BN_ORDER = 32


class DomainError(ValueError):
    """Argument outside the domain of a distribution function."""


# -- standard normal helpers --------------------------------------------------

def norm_pdf(z):
    z = np.asarray(z, dtype=float)
    return np.exp(-0.5 * z * z - LOG_SQRT_2PI)


def norm_cdf(z):
    # ndtr switches to erfc for negative arguments, so the lower tail keeps
    # full relative precision.
    return special.ndtr(z)


def norm_logpdf(z):
    z = np.asarray(z, dtype=float)
    return -0.5 * z * z - LOG_SQRT_2PI


def mills_ratio(z):
    """Upper-tail Mills ratio ``(1 - Phi(z)) / phi(z)``, overflow free for z >= 0."""
    z = np.asarray(z, dtype=float)
    return SQRT_HALF_PI * special.erfcx(z / math.sqrt(2.0))


def _scalar_or_array(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    return alpha


# -- parameter records ---------------------------------------------------------

@dataclass(frozen=True)
class LocScaleParams:
    """Location-scale member ``Y = mu + sigma * Z`` with ``Z ~ BASN2(alpha)``."""

    alpha: float
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "mu", "sigma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.mu, self.sigma)


@dataclass(frozen=True)
class NormConstants:
    c2: float
    d: float


def norm_constants(alpha) -> NormConstants:
    """``C2(alpha) = 3 - 4/(2+alpha^2)`` and ``d = C2 (2+alpha^2)^2``.

    ``d`` is computed in the factored form ``(2+a^2)(2+3a^2)``, which stays
    accurate for large ``|alpha|``.
    """
    a2 = check_alpha(alpha) ** 2
    return NormConstants(c2=3.0 - 4.0 / (2.0 + a2), d=(2.0 + a2) * (2.0 + 3.0 * a2))


def _d(alpha):
    a2 = np.asarray(alpha, dtype=float) ** 2
    return (2.0 + a2) * (2.0 + 3.0 * a2)


# -- generalized bimodal normal BN(n) ----------------------------------------

def double_factorial_odd(n: int) -> int:
    """``(n-1)!!`` for even ``n``; equals ``E[Z^n]`` for standard normal Z."""
    out = 1
    for k in range(n - 1, 0, -2):
        out *= k
    return out


def _check_bn_order(n) -> int:
    if int(n) != n or n < 0 or n % 2:
        raise DomainError(f"BN order must be a non-negative even integer, got {n!r}")
    if n > MAX_BN_ORDER:
        raise DomainError(f"BN order {n} exceeds the supported maximum {MAX_BN_ORDER}")
    return int(n)


def bn_pdf(z, n: int):
    """Density ``z^n phi(z) / (n-1)!!`` of the generalized bimodal normal BN(n)."""
    n = _check_bn_order(n)
    z = np.asarray(z, dtype=float)
    return _scalar_or_array(z**n * norm_pdf(z) / double_factorial_odd(n))


def bn4_cdf(z):
    """Closed-form cdf of BN(4): ``Phi(z) - z (3 + z^2) phi(z) / 3``."""
    z = np.asarray(z, dtype=float)
    upper = 1.0 - (norm_cdf(-z) + z * (3.0 + z * z) * norm_pdf(z) / 3.0)
    lower = norm_pdf(z) * (mills_ratio(-np.minimum(z, 0.0)) - z * (3.0 + z * z) / 3.0)
    return _scalar_or_array(np.where(z >= 0, upper, lower))


# -- BASN2 ----------------------------------------------------------------------

def skew_factor(z, alpha):
    """``(1 - alpha z)^2 + 1``; always >= 1."""
    u = 1.0 - np.asarray(alpha, dtype=float) * np.asarray(z, dtype=float)
    return u * u + 1.0


def basn2_pdf(z, alpha):
    alpha = check_alpha(alpha)
    g = skew_factor(z, alpha)
    return _scalar_or_array(g * g * norm_pdf(z) / _d(alpha))


def basn2_logpdf(z, alpha):
    alpha = check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    out = 2.0 * np.log(skew_factor(z, alpha)) - math.log(_d(alpha)) + norm_logpdf(z)
    return _scalar_or_array(out)


def _cdf_correction_poly(z, alpha):
    # alpha {8 - 8 a z + 4 a^2 (2 + z^2) - a^3 z (3 + z^2)}
    a = alpha
    return a * (8.0 - 8.0 * a * z + 4.0 * a * a * (2.0 + z * z) - a**3 * z * (3.0 + z * z))


def basn2_cdf(z, alpha):
    """Closed-form cdf; the lower tail is evaluated through the Mills ratio."""
    alpha = check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    d = _d(alpha)
    q = _cdf_correction_poly(z, alpha)
    upper = 1.0 - (norm_cdf(-z) - q * norm_pdf(z) / d)
    lower = norm_pdf(z) * (d * mills_ratio(-np.minimum(z, 0.0)) + q) / d
    out = np.where(z >= 0, upper, lower)
    return _scalar_or_array(np.clip(out, 0.0, 1.0))


def basn2_sf(z, alpha):
    """Survival ``1 - F``, accurate in the upper tail."""
    alpha = check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    d = _d(alpha)
    q = _cdf_correction_poly(z, alpha)
    upper = norm_pdf(z) * (d * mills_ratio(np.maximum(z, 0.0)) - q) / d
    lower = 1.0 - (norm_cdf(z) + q * norm_pdf(z) / d)
    out = np.where(z >= 0, upper, lower)
    return _scalar_or_array(np.clip(out, 0.0, 1.0))


def _basn2_mean_sd(alpha: float) -> tuple[float, float]:
    a2 = alpha * alpha
    mean = -4.0 * alpha / (2.0 + a2)
    var = (2.0 + 5.0 * a2) * (4.0 + 3.0 * a2 * a2) / ((2.0 + a2) ** 2 * (2.0 + 3.0 * a2))
    return mean, math.sqrt(var)


def basn2_quantile(p, alpha):
    """Inverse cdf by bracketed Brent iteration.

    The initial bracket is the normal quantile widened by ``|mean| + 6 sd``
    and is doubled until it straddles the target.
    """
    alpha = check_alpha(alpha)
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0) & (p_arr < 1))):
        raise DomainError("quantile probabilities must lie strictly inside (0, 1)")
    mean, sd = _basn2_mean_sd(alpha)
    width = abs(mean) + 6.0 * sd

    def solve(target: float) -> float:
        z0 = float(special.ndtri(target))
        lo, hi = z0 - width, z0 + width
        while basn2_cdf(lo, alpha) > target:
            lo -= width
        while basn2_cdf(hi, alpha) < target:
            hi += width
        return optimize.brentq(lambda z: basn2_cdf(z, alpha) - target, lo, hi,
                               xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)

    out = np.vectorize(solve, otypes=[float])(p_arr)
    return _scalar_or_array(out)


# -- symmetric component SCBASN2 -------------------------------------------------

def scbasn2_pdf(z, alpha):
    """Even part of the BASN2 density: ``(a^4 z^4 + 8 a^2 z^2 + 4) phi(z) / d``."""
    alpha = check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    u2 = (alpha * z) ** 2
    return _scalar_or_array((u2 * u2 + 8.0 * u2 + 4.0) * norm_pdf(z) / _d(alpha))


def basn2_odd_part(z, alpha):
    """Odd part ``(-4 a^3 z^3 - 8 a z) phi(z) / d``; integrates to zero."""
    alpha = check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    return _scalar_or_array((-4.0 * alpha**3 * z**3 - 8.0 * alpha * z) * norm_pdf(z) / _d(alpha))


def scbasn2_cdf(z, alpha):
    alpha = check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    d = _d(alpha)
    a2 = alpha * alpha
    r = a2 * (a2 * z**3 + 3.0 * a2 * z + 8.0 * z)
    upper = 1.0 - (norm_cdf(-z) + r * norm_pdf(z) / d)
    lower = norm_pdf(z) * (d * mills_ratio(-np.minimum(z, 0.0)) - r) / d
    out = np.where(z >= 0, upper, lower)
    return _scalar_or_array(np.clip(out, 0.0, 1.0))


# -- modes ------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeReport:
    modes: list[float]
    antimode: float | None = None
    count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "count", len(self.modes))


def mode_cubic(z, alpha):
    """``a^2 z^3 - 4 a^2 z - 2 a z^2 + 4 a + 2 z``; the pdf slope is ``-cubic`` times a positive factor."""
    a = alpha
    return a * a * z**3 - 4.0 * a * a * z - 2.0 * a * z * z + 4.0 * a + 2.0 * z


def _pdf_slope_sign(z, alpha):
    return -np.sign(mode_cubic(z, alpha))


def basn2_mode_report(alpha) -> ModeReport:
    """Locate the local maxima (and the antimode, if any) of the BASN2 density."""
    alpha = check_alpha(alpha)
    if alpha == 0.0:
        return ModeReport(modes=[0.0])
    a = alpha
    roots = np.roots([a * a, -2.0 * a, 2.0 - 4.0 * a * a, 4.0 * a])
    real = sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r)))

    def polish(z0: float) -> float:
        z = z0
        for _ in range(50):
            f = mode_cubic(z, a)
            fp = 3.0 * a * a * z * z - 4.0 * a * a - 4.0 * a * z + 2.0
            if fp == 0.0:
                break
            step = f / fp
            z -= step
            if abs(step) <= 1e-15 * max(1.0, abs(z)):
                break
        return z

    real = [polish(z) for z in real]
    modes, antimodes = [], []
    for z in real:
        h = 1e-6 * max(1.0, abs(z))
        left, right = _pdf_slope_sign(z - h, a), _pdf_slope_sign(z + h, a)
        if left > 0 and right < 0:
            modes.append(z)
        elif left < 0 and right > 0:
            antimodes.append(z)
    return ModeReport(modes=modes, antimode=antimodes[0] if antimodes else None)


# -- location-scale family ---------------------------------------------------------

def _standardize(y, p: LocScaleParams):
    return (np.asarray(y, dtype=float) - p.mu) / p.sigma


def locscale_pdf(y, p: LocScaleParams):
    return _scalar_or_array(np.asarray(basn2_pdf(_standardize(y, p), p.alpha)) / p.sigma)


def locscale_logpdf(y, p: LocScaleParams):
    return _scalar_or_array(np.asarray(basn2_logpdf(_standardize(y, p), p.alpha)) - math.log(p.sigma))


def locscale_cdf(y, p: LocScaleParams):
    return basn2_cdf(_standardize(y, p), p.alpha)


def locscale_quantile(q, p: LocScaleParams):
    return _scalar_or_array(p.mu + p.sigma * np.asarray(basn2_quantile(q, p.alpha)))


def bimodality_threshold(tol: float = 1e-12) -> float:
    """Smallest ``|alpha|`` at which the density has two modes, by bisection on the mode count."""
    lo, hi = 0.0, 1.0
    if basn2_mode_report(hi).count != 2:
        raise ArithmeticError("expected two modes at alpha = 1")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if basn2_mode_report(mid).count == 2:
            hi = mid
        else:
            lo = mid
    return hi
