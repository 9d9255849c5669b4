import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bcprabhakar import Bicomplex

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

# one line per acceptance criterion, filled by test_acceptance.py
SUMMARY: dict = {}


def sup_rel(a: Bicomplex, b: Bicomplex, mask=slice(None)) -> float:
    out = 0.0
    for x, y in zip(a.components, b.components):
        x, y = (np.asarray(v)[mask] for v in np.broadcast_arrays(x, y))
        out = max(out, float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the whole identity suite")


def pytest_terminal_summary(terminalreporter):
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for key in sorted(SUMMARY):
            terminalreporter.write_line(SUMMARY[key])
