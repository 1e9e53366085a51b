import numpy as np
import pytest

from ungd import core


@pytest.fixture
def spec18():
    return core.make_coefficients(18)


@pytest.fixture
def rng():
    # test-only randomness; library code uses its own generator
    return np.random.default_rng(12345)


_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion and assert it."""

    def record(number, name, ok, detail=""):
        # ok=None marks a criterion skipped for missing input data
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        line = f"{status} criterion {number:2d} {name}: {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        if ok is None:
            pytest.skip(detail)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
