import cmath

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_sl2(rng, scale=1.0):
    """Random determinant-one matrix entries (a, b, c, d)."""
    while True:
        a, b, c = (complex(*rng.normal(0, scale, 2)) for _ in range(3))
        if abs(a) > 0.1:
            d = (1 + b * c) / a
            return a, b, c, d


def gamma_roots(a, b):
    d = cmath.sqrt(a * a * b * b - 4 * (a * a + b * b))
    return (a * b + d) / 2, (a * b - d) / 2


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
