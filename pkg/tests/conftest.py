import numpy as np
import pytest

from agingmeans import ErlangLike, Exponential, Pareto, Rayleigh, TruncatedLogWeibull, Uniform, Weibull


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Catalog members used by several modules, with a 64-point grid inside each support.
CATALOG = {
    "exponential": (Exponential(1.7), np.geomspace(0.01, 10.0, 64)),
    "weibull": (Weibull(0.5, 1.5), np.geomspace(0.01, 10.0, 64)),
    "erlang": (ErlangLike(1.0), np.geomspace(0.01, 10.0, 64)),
    "uniform": (Uniform(0.0, 2.0), np.linspace(0.02, 1.98, 64)),
    "rayleigh": (Rayleigh(1.0, 1.0), np.geomspace(0.01, 10.0, 64)),
    "pareto": (Pareto(2.0, 1.0), np.linspace(1.05, 10.0, 64)),
    "tlw": (TruncatedLogWeibull(0.0, 1.0), np.geomspace(0.01, 5.0, 64)),
}


# -- acceptance summary --------------------------------------------------------------

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    """Store a PASS/FAIL line for the acceptance summary and echo it."""
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def key(name):
        num = "".join(ch for ch in name if ch.isdigit())
        return (int(num or 0), name)

    for name in sorted(ACCEPTANCE, key=key):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"criterion {name}: {'PASS' if ok else 'FAIL'}  {detail}")
