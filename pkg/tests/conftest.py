import contextlib

import numpy as np
import pytest

from nullosserman.catalog import canonical_structure
from nullosserman.curvature import AlmostComplexJ

ACCEPTANCE_LINES: list[str] = []


def two_eigenvalue_trials(count=20, seed=2024, n=2):
    """Seeded (S, J0, c1, c2) with |c1 - c2| > 0.1 on the canonical n, s=2 structure."""
    rng = np.random.default_rng(seed)
    S = canonical_structure(n, 2)
    out = []
    while len(out) < count:
        c1, c2 = rng.uniform(-4.0, 6.0, size=2)
        if abs(c1 - c2) <= 0.1:
            continue
        out.append((S, AlmostComplexJ.random(n, rng), float(c1), float(c2)))
    return out


@contextlib.contextmanager
def criterion(number, title):
    """Record one PASS/FAIL line for an acceptance criterion, re-raising failures."""
    try:
        yield
    except BaseException:
        line = f"acceptance criterion {number}: FAIL  {title}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"acceptance criterion {number}: PASS  {title}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
