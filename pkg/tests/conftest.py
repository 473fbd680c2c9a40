import numpy as np
import pytest

from lmgstieltjes.model import SpectralParams

# k = 2, alpha = beta = gamma = 1/2, rounded to four decimals:
# (zeros, zero sum, (b0, b1), f), one row per state in order of decreasing f
TABLE_K2_HALF = [
    ((-7.2904, -1.7379), -9.0283, (12.6700, 9.0283), 0.5141),
    ((-5.7052, 0.5612), -5.1440, (-3.2020, 5.1440), -1.4280),
    ((-0.6036, 0.7759), 0.1723, (-0.4684, -0.1723), -4.0861),
]


def random_params(rng, n):
    """alpha, beta ~ U(0.2, 3), gamma log-uniform on (0.05, 20)."""
    out = []
    for _ in range(n):
        a, b = rng.uniform(0.2, 3.0, 2)
        g = float(np.exp(rng.uniform(np.log(0.05), np.log(20.0))))
        out.append(SpectralParams(float(a), float(b), g))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def half():
    return SpectralParams(0.5, 0.5, 0.5)


# --- one PASS/FAIL line per acceptance criterion ---------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    _CRITERIA[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: int(s.split("_")[2])):
        status = {"passed": "PASS", "failed": "FAIL"}.get(_CRITERIA[name], _CRITERIA[name].upper())
        terminalreporter.write_line(f"{status}  {name}")
