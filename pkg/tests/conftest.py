import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rtstab import FluidParams

UNIT = dict(rho1=1.0, rho2=3.0, mu1=1.0, mu2=1.0, sigma=1.0, gamma_a=1.0)


@pytest.fixture
def unit():
    return FluidParams(**UNIT)


def random_params(rng, unstable=True):
    """Positive parameter set with rho2 > rho1 (or rho2 <= rho1 when unstable=False)."""
    r = 10.0 ** rng.uniform(-1, 1, size=6)
    rho1, rho2 = sorted(r[:2])
    if rho2 == rho1:
        rho2 *= 1.5
    if not unstable:
        rho1, rho2 = rho2, rho1
    return FluidParams(rho1, rho2, r[2], r[3], r[4], r[5])


ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    """Store a criterion outcome for the end-of-run summary and return ok."""
    ACCEPTANCE[number] = (title, bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")
