import math

import numpy as np
import pytest
from scipy import integrate

from basn.datasets import has_bundled

# criterion number -> (status, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def quad(f, lo=-np.inf, hi=np.inf, points=(-40.0, -8.0, 0.0, 8.0, 40.0)):
    """Split adaptive quadrature used as the independent oracle throughout the suite."""
    cuts = [lo] + [p for p in points if lo < p < hi] + [hi]
    return math.fsum(integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
                     for a, b in zip(cuts[:-1], cuts[1:]))


def fd(f, x, h=1e-5):
    """Five-point central difference."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def require_bundled(*names):
    missing = [n for n in names if not has_bundled(n)]
    if missing:
        pytest.skip(f"bundled dataset(s) {missing} not installed; run scripts/fetch_datasets.py")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status:4s}  {detail}")
