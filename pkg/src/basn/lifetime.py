"""Half-BASN2 lifetime model: BASN2(alpha) truncated to [0, inf).

Density ``((1 - a t)^2 + 1)^2 psi(t) / K(a)`` with the half-normal density
``psi(t) = 2 phi(t)`` and ``K = 3a^4 - 8a^3 b + 8a^2 - 8ab + 4``, ``b = sqrt(2/pi)``.

The survival function is obtained from the BASN2 upper tail,
``S(t) = 2 d(a) (1 - F(t; a)) / K(a)``, and the hazard is evaluated through
the Mills ratio so it stays finite where ``S`` underflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import (DomainError, _cdf_correction_poly, _d, _scalar_or_array, basn2_sf,
                   check_alpha, mills_ratio, norm_pdf, skew_factor)

B = math.sqrt(2.0 / math.pi)
ZERO_SLOPE_TOL = 1e-9


def half_constant(alpha) -> float:
    a = check_alpha(alpha)
    return 3.0 * a**4 - 8.0 * a**3 * B + 8.0 * a * a - 8.0 * a * B + 4.0


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise DomainError("lifetime arguments must be non-negative")
    return t


def hbasn2_pdf(t, alpha):
    a = check_alpha(alpha)
    t = _check_t(t)
    g = skew_factor(t, a)
    return _scalar_or_array(g * g * 2.0 * norm_pdf(t) / half_constant(a))


def hbasn2_survival(t, alpha):
    a = check_alpha(alpha)
    t = _check_t(t)
    s = 2.0 * float(_d(a)) * np.asarray(basn2_sf(t, a)) / half_constant(a)
    return _scalar_or_array(np.clip(s, 0.0, 1.0))


def hbasn2_cdf(t, alpha):
    return _scalar_or_array(1.0 - np.asarray(hbasn2_survival(t, alpha)))


def hbasn2_hazard(t, alpha):
    """Hazard ``f / S`` written as ``g(t)^2 / (d R(t) - q(t))``.

    ``R`` is the Mills ratio and ``q`` the polynomial of the BASN2 cdf
    correction, so the phi factors cancel analytically and no ratio of
    underflowed quantities is formed.
    """
    a = check_alpha(alpha)
    t = _check_t(t)
    g = skew_factor(t, a)
    den = float(_d(a)) * mills_ratio(t) - _cdf_correction_poly(t, a)
    return _scalar_or_array(g * g / den)


@dataclass(frozen=True)
class HazardShape:
    shape: Literal["increasing", "bathtub", "other"]
    grid_evidence: list[tuple[float, float]]


def classify_hazard(h: np.ndarray, tol: float = ZERO_SLOPE_TOL) -> str:
    """Classify a sampled hazard curve by the sign pattern of its increments."""
    dh = np.diff(np.asarray(h, dtype=float))
    signs = np.where(np.abs(dh) < tol, 0, np.sign(dh)).astype(int)
    signs = signs[signs != 0]
    if signs.size == 0 or np.all(signs > 0):
        return "increasing"
    # collapse runs: bathtub is exactly one decreasing run followed by one increasing run
    runs = signs[np.concatenate([[True], signs[1:] != signs[:-1]])]
    if runs.tolist() == [-1, 1]:
        return "bathtub"
    return "other"


def hazard_shape(alpha, t_max: float, points: int = 2000) -> HazardShape:
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max!r}")
    t = np.linspace(0.0, t_max, points)
    h = np.asarray(hbasn2_hazard(t, alpha))
    return HazardShape(shape=classify_hazard(h), grid_evidence=list(zip(t.tolist(), h.tolist())))
