"""Self-audit: normalization and closed-form checks plus printed-value findings.

Checks are invariants of this implementation; any failure means a bug.
Findings record places where a commonly printed formula or constant for
this family disagrees with an independent computation.  They are data,
not failures.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from . import extensions as ext
from . import lifetime, moments, sampling
from .core import LocScaleParams
from .inference import basn2_hessian
from .core import basn2_cdf, basn2_pdf, bimodality_threshold, basn2_mode_report, norm_cdf, norm_pdf

ALPHAS = (-5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0)
NORM_TOL = 1e-8
EXT_NORM_TOL = 1e-6
MOMENT_RTOL = 1e-8
PRINTED_DELTA = (1.0 + 2.0 * math.sqrt(3.0)) / 3.0


@dataclass
class Check:
    name: str
    passed: bool
    worst_error: float
    tolerance: float
    cases: int


@dataclass
class Finding:
    topic: str
    printed: str
    computed: str
    note: str


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"all_passed": self.all_passed,
                "checks": [asdict(c) for c in self.checks],
                "findings": [asdict(f) for f in self.findings]}


def _quad(f, lo=-np.inf, hi=np.inf, points=(-40.0, -8.0, 0.0, 8.0, 40.0)):
    cuts = [lo] + [p for p in points if lo < p < hi] + [hi]
    return math.fsum(integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
                     for a, b in zip(cuts[:-1], cuts[1:]))


def _check(name, errors, tol) -> Check:
    worst = float(max(errors))
    return Check(name, worst <= tol, worst, tol, len(errors))


# -- invariants ------------------------------------------------------------------

def check_basn2_normalization() -> Check:
    errs = [abs(_quad(lambda z: basn2_pdf(z, a)) - 1.0) for a in ALPHAS]
    return _check("basn2 density integrates to 1", errs, NORM_TOL)


def check_hbasn2_normalization() -> Check:
    errs = [abs(_quad(lambda t: lifetime.hbasn2_pdf(t, a), 0.0) - 1.0) for a in ALPHAS]
    return _check("half-basn2 density integrates to 1", errs, NORM_TOL)


def check_hbasn2_survival() -> Check:
    errs = []
    for a in ALPHAS:
        for t in (0.0, 0.5, 1.0, 2.5):
            tail = _quad(lambda s: lifetime.hbasn2_pdf(s, a), t)
            errs.append(abs(lifetime.hbasn2_survival(t, a) - tail))
    return _check("half-basn2 survival matches integrated tail", errs, NORM_TOL)


def check_cdf_quadrature() -> Check:
    errs = []
    for a in ALPHAS:
        for z in (-3.0, -1.0, 0.0, 0.7, 2.0):
            errs.append(abs(basn2_cdf(z, a) - _quad(lambda x: basn2_pdf(x, a), -np.inf, z)))
    return _check("basn2 cdf matches integrated density", errs, NORM_TOL)


def check_moment_quadrature() -> Check:
    errs = []
    for a in ALPHAS:
        for n in range(1, 9):
            num = _quad(lambda z: z**n * basn2_pdf(z, a))
            closed = moments.raw_moment(n, a)
            errs.append(abs(closed - num) / max(abs(num), 1e-300) if abs(num) > 1e-12 else abs(closed - num))
    return _check("raw moments match quadrature", errs, MOMENT_RTOL)


def check_mgf_quadrature() -> Check:
    errs = []
    for a in (-2.0, -1.0, 0.5, 1.0, 3.0):
        for t in (-1.0, -0.3, 0.4, 1.2):
            num = _quad(lambda z: math.exp(t * z) * basn2_pdf(z, a))
            errs.append(abs(moments.basn2_mgf(t, a) - num) / num)
    return _check("mgf matches quadrature", errs, MOMENT_RTOL)


def check_extension_normalization() -> Check:
    errs = []
    for a1, a2, r in ((0.0, 0.0, 0.5), (1.0, -0.5, 0.3), (-2.0, 1.0, -0.6), (0.5, 2.0, 0.8)):
        p = ext.BivariateParams(a1, a2, r)
        val, _ = integrate.dblquad(lambda y, x: ext.bbasn2_pdf(x, y, p), -14, 14, -14, 14,
                                   epsabs=1e-11, epsrel=1e-10)
        errs.append(abs(val - 1.0))
    for a1, a2 in ((1.0, 1.0), (-1.0, 2.0), (0.5, -0.5)):
        p = ext.TwoAlphaParams(a1, a2)
        errs.append(abs(_quad(lambda z: ext.tpbasn2_pdf(z, p)) - 1.0))
    for a, b in ((1.0, 1.0), (-1.0, 0.5), (0.0, 2.0)):
        p = ext.AlphaBetaParams(a, b)
        errs.append(abs(_quad(lambda z: ext.babsn2_pdf(z, p)) - 1.0))
    for a, lam in ((1.0, 1.0), (-2.0, 3.0), (0.5, -1.0)):
        p = ext.GenParams(a, lam)
        errs.append(abs(_quad(lambda z: ext.gbasn2_pdf(z, p)) - 1.0))
    for a in (-1.0, 0.0, 1.0):
        # substitute z = exp(y) so quad sees a Gaussian-tailed integrand
        errs.append(abs(_quad(lambda y: ext.lbasn2_pdf(math.exp(y), a) * math.exp(y)) - 1.0))
    return _check("extension densities integrate to 1", errs, EXT_NORM_TOL)


def check_extension_constants() -> Check:
    recs = [r for fam in ext.FAMILIES for r in ext.audit_constants(fam)]
    return _check("extension closed-form constants match numeric", [r.rel_error for r in recs],
                  ext.CONSTANT_RTOL)


def check_envelope() -> Check:
    errs = []
    for a in (-2.0, 0.5, 1.0, 3.0):
        info = sampling.envelope_bound(a)
        errs.append(0.0 if sampling.envelope_holds(a, info.delta) else 1.0)
        errs.append(abs(info.delta - (3.0 + 2.0 * math.sqrt(2.0)) / 3.0))
    return _check("sampler envelope constant bounds the density ratio", errs, 1e-6)


CHECKS = (check_basn2_normalization, check_hbasn2_normalization, check_hbasn2_survival,
          check_cdf_quadrature, check_moment_quadrature, check_mgf_quadrature,
          check_extension_normalization, check_extension_constants, check_envelope)


# -- findings --------------------------------------------------------------------

def _g(x: float) -> str:
    return f"{x:.6g}"


def finding_mgf() -> Finding:
    a, t = 1.0, 0.5
    num = _quad(lambda z: math.exp(t * z) * basn2_pdf(z, a))
    return Finding("mgf linear coefficient",
                   f"-34 a^3 t gives M({t};{a:g}) = {_g(moments.basn2_mgf_printed(t, a))}",
                   f"-12 a^3 t gives {_g(moments.basn2_mgf(t, a))}; quadrature {_g(num)}",
                   "only -12 a^3 t reproduces the integral and M'(0) = E[Z]")


def finding_envelope() -> Finding:
    info = sampling.envelope_bound(1.0)
    ratio_max = float(sampling.density_ratio(info.argmax_z, 1.0))
    return Finding("rejection envelope constant",
                   f"(1 + 2 sqrt 3)/3 = {_g(PRINTED_DELTA)}",
                   f"sup f/f1 = {_g(ratio_max)} at z = {_g(info.argmax_z)} for alpha = 1",
                   "the printed constant does not bound the ratio; (3 + 2 sqrt 2)/3 does for every alpha != 0")


def finding_constants() -> Finding:
    worst = {fam: max(r.rel_error for r in ext.audit_constants(fam)) for fam in ext.FAMILIES}
    c11 = ext.babsn2_constant(ext.AlphaBetaParams(1.0, 1.0))
    return Finding("extension normalizing constants",
                   "closed forms for bbasn2, tpbasn2, babsn2, gbasn2",
                   "worst relative error " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()),
                   f"all closed forms hold; babsn2 C(1, 1) = {c11:g}")


def finding_gbasn2_limit() -> Finding:
    a = 1.0
    b = math.sqrt(2.0 / math.pi)
    printed = (2 + 4 * a * a + 1.5 * a**4) - b * (2 * a**3 + 4 * a + 4 * a**3)
    upper = ext.gbasn2_constant(ext.GenParams(a, 1e8))
    lower = ext.gbasn2_constant(ext.GenParams(a, -1e8))
    return Finding("gbasn2 large-|lambda| limit",
                   f"one constant (2 + 4a^2 + 1.5a^4) - b(2a^3 + 4a + 4a^3) = {_g(printed)} at alpha = 1",
                   f"lambda -> +inf gives {_g(upper)} = K/2; lambda -> -inf gives {_g(lower)}",
                   "the 2a^3 term vanishes with 1 - delta^2, and the b term changes sign for lambda -> -inf")


def finding_survival() -> Finding:
    a, t = 1.0, 1.0
    num = _quad(lambda s: lifetime.hbasn2_pdf(s, a), t)
    return Finding("half-basn2 survival",
                   "closed form uses an undefined constant c",
                   f"with c = sqrt(2/pi): S(1;1) = {_g(lifetime.hbasn2_survival(t, a))}, quadrature {_g(num)}",
                   "formula is correct once c is read as sqrt(2/pi)")


def _printed_hazard(t: float, a: float) -> float:
    # f / S evaluated with phi * Phibar in place of Phibar / phi
    z = t
    g = (1.0 - a * z) ** 2 + 1.0
    sbar = 1.0 - norm_cdf(z)
    q = (3 * a**4 * z + a**4 * z**3 - 8 * a**3 - 4 * a**3 * z * z + 8 * a * a * z - 8 * a)
    return g * g / ((4 + 8 * a * a + 3 * a**4) * norm_pdf(z) * sbar + q)


def finding_hazard() -> Finding:
    a, t = 1.0, 1.0
    h = lifetime.hbasn2_hazard(t, a)
    f_over_s = lifetime.hbasn2_pdf(t, a) / lifetime.hbasn2_survival(t, a)
    return Finding("half-basn2 hazard",
                   f"closed form gives h(1;1) = {_g(_printed_hazard(t, a))}",
                   f"f/S = {_g(f_over_s)}; implementation {_g(h)}",
                   "printed hazard multiplies by phi * Phibar where Phibar / phi is needed; f/S is used")


def finding_mode_equation() -> Finding:
    thr = bimodality_threshold()
    rep = basn2_mode_report(1.0)
    return Finding("modality",
                   "bimodal when |alpha| >= 1; stationary-point cubic with opposite overall sign",
                   f"bimodal exactly when |alpha| > {thr:.6f}; alpha = 1 modes {[round(m, 6) for m in rep.modes]}",
                   "the cubic's roots are unchanged by the sign; the bimodality threshold is below 1")


def finding_bounds() -> list[Finding]:
    var = moments.extremal_bounds("variance")
    b2 = moments.extremal_bounds("beta2")
    return [
        Finding("variance upper bound", "4.7966",
                f"supremum {_g(var.max)} (not attained; approached as |alpha| grows)",
                "4.7966 is not a bound; the variance tends to 5"),
        Finding("beta2 maximum", "6.7684", f"{_g(b2.max)} at |alpha| = {_g(abs(b2.argmax))}",
                "agrees to about 3e-3"),
    ]


# fitted (alpha, mu, sigma), sample size and printed variance-covariance matrix
PRINTED_VCOV = {
    "lakes": ((1.994, 54.265, 6.559), 69,
              ((0.6995, 0.1615, 0.1395), (0.1615, 0.1350, -0.00455), (0.1395, -0.00455, 0.1349))),
    "bmi": ((0.971, 26.482, 2.706), 202,
            ((0.1371, 0.0327, 0.0337), (0.0327, 0.0199, 0.00192), (0.0337, 0.00192, 0.0175))),
}
# the printed matrices list mu first: swapping rows/columns 0 and 1 gives (alpha, mu, sigma)
PRINTED_ORDER = (1, 0, 2)


def printed_vcov(name: str) -> np.ndarray:
    m = np.array(PRINTED_VCOV[name][2])
    return m[np.ix_(PRINTED_ORDER, PRINTED_ORDER)]


def expected_info(p: LocScaleParams) -> np.ndarray:
    """Per-observation Fisher information ``-E[Hessian]`` by quadrature."""
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            def f(z):
                return -basn2_hessian(np.array([p.mu + p.sigma * z]), p)[i, j] * basn2_pdf(z, p.alpha)
            out[i, j] = out[j, i] = _quad(f, points=(-8.0, 0.0, 8.0))
    return out


def finding_vcov_order() -> Finding:
    parts = []
    for name, (theta, n, _) in PRINTED_VCOV.items():
        v = np.linalg.inv(n * expected_info(LocScaleParams(*theta)))
        ratio = np.diag(v) / np.diag(printed_vcov(name))
        parts.append(f"{name} diagonal ratio {np.round(ratio, 3).tolist()}")
    return Finding("variance-covariance parameter order",
                   "matrices labelled (alpha, mu, sigma)",
                   "inverse expected information at the fitted values: " + "; ".join(parts),
                   "diagonals agree only when the printed order is read as (mu, alpha, sigma)")


def run_audit(include_findings: bool = True) -> AuditReport:
    report = AuditReport(checks=[c() for c in CHECKS])
    if include_findings:
        report.findings = [finding_mgf(), finding_envelope(), finding_constants(), finding_gbasn2_limit(),
                           finding_survival(), finding_hazard(), finding_mode_equation(),
                           *finding_bounds(), finding_vcov_order()]
    return report
